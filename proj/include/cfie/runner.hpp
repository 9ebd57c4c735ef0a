#ifndef CFIE_RUNNER_HPP
#define CFIE_RUNNER_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "cfie/perturb.hpp"
#include "cfie/types.hpp"

namespace cfie {

// "all" or a comma-separated subset of typearmor,ifcc,mcfi,tcfi.
// Duplicates collapse; order is preserved. Throws InputError.
std::vector<PolicyId> parse_policy_list(const std::string& names);

struct AnalyzeOptions {
    std::string view_path;
    std::string out_dir;
    std::vector<PolicyId> policies;
    bool csv = false;
    bool lenient = false;
};

struct CompareOptions {
    std::string source_path;
    std::string binary_path;
    std::string out_dir;
    std::vector<PolicyId> policies;
    bool csv = false; // the comparison tables are always written; kept for flag symmetry
    bool lenient = false;
};

struct AccuracyOptions {
    std::string source_path;
    std::string binary_path;
    std::string out_dir;
    bool lenient = false;
};

struct PerturbOptions {
    std::string view_path;
    std::string out_path;
    PerturbConfig config;
    bool lenient = false;
};

struct CdfOptions {
    std::string report_path;
    std::string metric; // "rt" or "rf"
    std::string out_path;
};

// Each command throws InputError (and subclasses) on bad input and
// InvariantError on internal inconsistencies; warnings go to `err`.
void cmd_analyze(const AnalyzeOptions& opt, std::ostream& err);
void cmd_compare(const CompareOptions& opt, std::ostream& err);
void cmd_accuracy(const AccuracyOptions& opt, std::ostream& err);
void cmd_perturb(const PerturbOptions& opt, std::ostream& err);
void cmd_cdf(const CdfOptions& opt, std::ostream& err);

} // namespace cfie

#endif
