#ifndef CFIE_METRICS_HPP
#define CFIE_METRICS_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cfie/link.hpp"
#include "cfie/policies.hpp"

namespace cfie {

// Summary of an empirical distribution. Percentiles use the nearest-rank
// convention (rank = ceil(p/100 * n)); stddev is the population form.
// n == 0 leaves the remaining fields meaningless (serialized as null).
struct DistributionStats {
    std::size_t n = 0;
    double mean = 0.0;
    double stddev = 0.0;
    double min = 0.0;
    double median = 0.0;
    double p90 = 0.0;
    double max = 0.0;
};

DistributionStats compute_stats(std::vector<double> values);

// Distribution of per-call-site target-set sizes.
DistributionStats ctr_stats(const TargetMap& tm);

// Sum of target-set sizes over all call-sites.
std::size_t ctr_total(const TargetMap& tm);

// Number of call-sites whose target set is empty.
std::size_t zero_target_counts(const TargetMap& tm);

// Mean target-set size divided by the number of address-taken functions.
// Throws DivisionByZeroError when address_taken_count is zero; a map with
// no call-sites yields 0.0.
double normalized_ctr(const TargetMap& tm, std::size_t address_taken_count);

// Per matched source call-site: how much of its source-level target set
// survives in the binary view (r_t) and how much of the binary-level set
// is spurious (r_f). A ratio is absent when its denominator set is empty.
struct SiteRatios {
    std::string cs_id;
    std::size_t ct_size = 0;   // source targets with a binary counterpart
    std::size_t ctp_size = 0;  // binary targets translated to source ids
    std::optional<double> r_t;
    std::optional<double> r_f;
};

struct RelativeReport {
    PolicyId policy = PolicyId::TypeArmor;
    std::vector<SiteRatios> per_site;  // ordered by source cs_id
    DistributionStats rt_stats;        // over defined r_t values
    DistributionStats rf_stats;        // over defined r_f values
    std::size_t skipped_rt = 0;        // sites with empty reference set
    std::size_t skipped_rf = 0;        // sites with empty translated set
};

// Compares target sets across the two linked views of one program. Both
// maps must carry the same policy and must match the linked views' labels;
// every matched call-site must have an entry in its map.
RelativeReport relative_ctr(const MatchedProgram& mp, const TargetMap& source_tm,
                            const TargetMap& binary_tm);

// Empirical CDF: one point per distinct value, ascending, paired with the
// fraction of samples less than or equal to it. Empty input, empty output.
std::vector<std::pair<double, double>> cdf_series(std::vector<double> values);

} // namespace cfie

#endif
