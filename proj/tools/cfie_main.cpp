// cfie: type-signature CFI evaluation tool.
//
// Subcommands:
//   analyze   per-call-site target sets and CTR stats for one view
//   compare   relative target-set preservation between two linked views
//   accuracy  signature-recovery accuracy tables between two linked views
//   perturb   derive a seeded synthetic degraded view from a ground-truth view
//   cdf       cumulative distribution of a comparison report metric
//
// Exit codes: 0 success, 2 input error, 3 internal invariant violation.

#include <fstream>
#include <iostream>
#include <iterator>
#include <string>

#include <CLI11.hpp>

#include "cfie/errors.hpp"
#include "cfie/runner.hpp"
#include "cfie/version.hpp"

namespace {

struct CliState {
    std::string policies = "all";
    cfie::AnalyzeOptions analyze;
    cfie::CompareOptions compare;
    cfie::AccuracyOptions accuracy;
    cfie::PerturbOptions perturb;
    cfie::CdfOptions cdf;
    std::string perturb_config_path;
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Type-signature CFI policy evaluation over program views"};
    app.set_version_flag("--version", cfie::kToolVersion);
    app.require_subcommand(1);

    CliState st;

    CLI::App* analyze = app.add_subcommand(
        "analyze", "Compute per-call-site target sets and CTR stats for one view");
    analyze->add_option("--view", st.analyze.view_path, "View file (JSON)")->required();
    analyze->add_option("--policies", st.policies,
                        "Comma-separated policies (typearmor,ifcc,mcfi,tcfi) or \"all\"");
    analyze->add_option("--out", st.analyze.out_dir, "Output directory")->required();
    analyze->add_flag("--csv", st.analyze.csv, "Also write CSV tables");
    analyze->add_flag("--lenient", st.analyze.lenient, "Warn on unknown view fields instead of failing");

    CLI::App* compare = app.add_subcommand(
        "compare", "Relate target sets between a ground-truth view and a recovered view");
    compare->add_option("--source", st.compare.source_path, "Ground-truth view file")->required();
    compare->add_option("--binary", st.compare.binary_path, "Recovered view file")->required();
    compare->add_option("--policies", st.policies,
                        "Comma-separated policies (typearmor,ifcc,mcfi,tcfi) or \"all\"");
    compare->add_option("--out", st.compare.out_dir, "Output directory")->required();
    compare->add_flag("--csv", st.compare.csv, "Accepted for symmetry; comparison CSVs are always written");
    compare->add_flag("--lenient", st.compare.lenient, "Warn on unknown view fields instead of failing");

    CLI::App* accuracy = app.add_subcommand(
        "accuracy", "Signature-recovery accuracy tables between two linked views");
    accuracy->add_option("--source", st.accuracy.source_path, "Ground-truth view file")->required();
    accuracy->add_option("--binary", st.accuracy.binary_path, "Recovered view file")->required();
    accuracy->add_option("--out", st.accuracy.out_dir, "Output directory")->required();
    accuracy->add_flag("--lenient", st.accuracy.lenient,
                       "Warn on unknown view fields instead of failing");

    CLI::App* perturb = app.add_subcommand(
        "perturb", "Derive a synthetic degraded view with seeded error rates");
    perturb->add_option("--view", st.perturb.view_path, "Ground-truth view file")->required();
    perturb->add_option("--out", st.perturb.out_path, "Output view file")->required();
    perturb->add_option("--config", st.perturb_config_path,
                        "JSON config file with rates; explicit flags override it");
    perturb->add_option("--seed", st.perturb.config.seed, "RNG seed (64-bit)");
    perturb->add_option("--arity-err", st.perturb.config.arity_err,
                        "Probability of adding/removing one trailing position");
    perturb->add_option("--type-err", st.perturb.config.type_err,
                        "Per-position probability of a wrong type");
    perturb->add_option("--return-voidness-err", st.perturb.config.return_voidness_err,
                        "Probability of flipping return voidness");
    perturb->add_option("--drop-fn", st.perturb.config.drop_fn, "Probability of dropping a function");
    perturb->add_option("--drop-cs", st.perturb.config.drop_cs, "Probability of dropping a call-site");
    perturb->add_option("--split-cs", st.perturb.config.split_cs,
                        "Probability of duplicating a call-site");
    perturb->add_flag("--lenient", st.perturb.lenient,
                      "Warn on unknown view fields instead of failing");

    CLI::App* cdf = app.add_subcommand(
        "cdf", "Cumulative distribution of a comparison report metric");
    cdf->add_option("--report", st.cdf.report_path, "Comparison report file (relative_<policy>.json)")
        ->required();
    cdf->add_option("--metric", st.cdf.metric, "Metric to plot: rt or rf")->required();
    cdf->add_option("--out", st.cdf.out_path, "Output CSV file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (analyze->parsed()) {
            st.analyze.policies = cfie::parse_policy_list(st.policies);
            cfie::cmd_analyze(st.analyze, std::cerr);
        } else if (compare->parsed()) {
            st.compare.policies = cfie::parse_policy_list(st.policies);
            cfie::cmd_compare(st.compare, std::cerr);
        } else if (accuracy->parsed()) {
            cfie::cmd_accuracy(st.accuracy, std::cerr);
        } else if (perturb->parsed()) {
            if (!st.perturb_config_path.empty()) {
                // File config forms the base; any flag given explicitly wins.
                cfie::PerturbConfig flag_values = st.perturb.config;
                std::ifstream in(st.perturb_config_path, std::ios::binary);
                if (!in) {
                    throw cfie::InputError(st.perturb_config_path + ": cannot open file");
                }
                std::string bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
                cfie::PerturbConfig base = cfie::parse_perturb_config(bytes);
                if (perturb->count("--seed") != 0) base.seed = flag_values.seed;
                if (perturb->count("--arity-err") != 0) base.arity_err = flag_values.arity_err;
                if (perturb->count("--type-err") != 0) base.type_err = flag_values.type_err;
                if (perturb->count("--return-voidness-err") != 0) {
                    base.return_voidness_err = flag_values.return_voidness_err;
                }
                if (perturb->count("--drop-fn") != 0) base.drop_fn = flag_values.drop_fn;
                if (perturb->count("--drop-cs") != 0) base.drop_cs = flag_values.drop_cs;
                if (perturb->count("--split-cs") != 0) base.split_cs = flag_values.split_cs;
                st.perturb.config = base;
            }
            cfie::validate_config(st.perturb.config);
            cfie::cmd_perturb(st.perturb, std::cerr);
        } else if (cdf->parsed()) {
            cfie::cmd_cdf(st.cdf, std::cerr);
        }
    } catch (const cfie::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
