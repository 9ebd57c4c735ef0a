#include "cfie/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "cfie/errors.hpp"

namespace cfie {

namespace {

double nearest_rank(const std::vector<double>& sorted, double percentile) {
    std::size_t n = sorted.size();
    auto rank = static_cast<std::size_t>(std::ceil(percentile / 100.0 * static_cast<double>(n)));
    if (rank == 0) rank = 1;
    if (rank > n) rank = n;
    return sorted[rank - 1];
}

} // namespace

DistributionStats compute_stats(std::vector<double> values) {
    DistributionStats s;
    s.n = values.size();
    if (s.n == 0) return s;
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(s.n);
    double sq = 0.0;
    for (double v : values) {
        double d = v - s.mean;
        sq += d * d;
    }
    s.stddev = std::sqrt(sq / static_cast<double>(s.n));
    s.min = values.front();
    s.max = values.back();
    s.median = nearest_rank(values, 50.0);
    s.p90 = nearest_rank(values, 90.0);
    return s;
}

DistributionStats ctr_stats(const TargetMap& tm) {
    std::vector<double> sizes;
    sizes.reserve(tm.entries.size());
    for (const auto& [cs_id, fns] : tm.entries) {
        sizes.push_back(static_cast<double>(fns.size()));
    }
    return compute_stats(std::move(sizes));
}

std::size_t ctr_total(const TargetMap& tm) {
    std::size_t total = 0;
    for (const auto& [cs_id, fns] : tm.entries) total += fns.size();
    return total;
}

std::size_t zero_target_counts(const TargetMap& tm) {
    std::size_t zeros = 0;
    for (const auto& [cs_id, fns] : tm.entries) {
        if (fns.empty()) ++zeros;
    }
    return zeros;
}

double normalized_ctr(const TargetMap& tm, std::size_t address_taken_count) {
    if (address_taken_count == 0) {
        throw DivisionByZeroError("normalized CTR is undefined: the view has no address-taken functions");
    }
    if (tm.entries.empty()) return 0.0;
    return ctr_stats(tm).mean / static_cast<double>(address_taken_count);
}

RelativeReport relative_ctr(const MatchedProgram& mp, const TargetMap& source_tm,
                            const TargetMap& binary_tm) {
    if (source_tm.policy != binary_tm.policy) {
        throw PolicyMismatchError("cannot relate target maps computed under different policies (" +
                                  std::string(policy_name(source_tm.policy)) + " vs " +
                                  std::string(policy_name(binary_tm.policy)) + ")");
    }
    if (source_tm.view_label != mp.source.label || binary_tm.view_label != mp.binary.label) {
        throw ViewMismatchError("target maps labeled \"" + source_tm.view_label + "\"/\"" +
                                binary_tm.view_label + "\" do not belong to the linked views \"" +
                                mp.source.label + "\"/\"" + mp.binary.label + "\"");
    }

    std::unordered_map<std::string, std::string> bin_to_src;
    std::unordered_set<std::string> paired_src;
    bin_to_src.reserve(mp.fn_pairs.size());
    paired_src.reserve(mp.fn_pairs.size());
    for (const auto& [src_fn, bin_fn] : mp.fn_pairs) {
        paired_src.insert(src_fn);
        bin_to_src.emplace(bin_fn, src_fn);
    }

    RelativeReport report;
    report.policy = source_tm.policy;
    std::vector<double> rt_values;
    std::vector<double> rf_values;

    for (const auto& [src_cs, bin_css] : mp.cs_map) {
        auto src_it = source_tm.entries.find(src_cs);
        if (src_it == source_tm.entries.end()) {
            throw ViewMismatchError("source target map has no entry for matched call-site \"" +
                                    src_cs + "\"");
        }

        std::unordered_set<std::string> ct;
        for (const auto& fn : src_it->second) {
            if (paired_src.count(fn) != 0) ct.insert(fn);
        }

        std::unordered_set<std::string> ct_prime;
        for (const auto& bin_cs : bin_css) {
            auto bin_it = binary_tm.entries.find(bin_cs);
            if (bin_it == binary_tm.entries.end()) {
                throw ViewMismatchError("binary target map has no entry for matched call-site \"" +
                                        bin_cs + "\"");
            }
            for (const auto& fn : bin_it->second) {
                auto tr = bin_to_src.find(fn);
                if (tr != bin_to_src.end()) ct_prime.insert(tr->second);
            }
        }

        SiteRatios site;
        site.cs_id = src_cs;
        site.ct_size = ct.size();
        site.ctp_size = ct_prime.size();

        if (ct.empty()) {
            ++report.skipped_rt;
        } else {
            std::size_t preserved = 0;
            for (const auto& fn : ct) {
                if (ct_prime.count(fn) != 0) ++preserved;
            }
            site.r_t = static_cast<double>(preserved) / static_cast<double>(ct.size());
            rt_values.push_back(*site.r_t);
        }

        if (ct_prime.empty()) {
            ++report.skipped_rf;
        } else {
            std::size_t spurious = 0;
            for (const auto& fn : ct_prime) {
                if (ct.count(fn) == 0) ++spurious;
            }
            site.r_f = static_cast<double>(spurious) / static_cast<double>(ct_prime.size());
            rf_values.push_back(*site.r_f);
        }

        report.per_site.push_back(std::move(site));
    }

    report.rt_stats = compute_stats(std::move(rt_values));
    report.rf_stats = compute_stats(std::move(rf_values));
    return report;
}

std::vector<std::pair<double, double>> cdf_series(std::vector<double> values) {
    std::vector<std::pair<double, double>> series;
    if (values.empty()) return series;
    std::sort(values.begin(), values.end());
    auto n = static_cast<double>(values.size());
    std::size_t i = 0;
    while (i < values.size()) {
        std::size_t j = i;
        while (j + 1 < values.size() && values[j + 1] == values[i]) ++j;
        series.emplace_back(values[i], static_cast<double>(j + 1) / n);
        i = j + 1;
    }
    return series;
}

} // namespace cfie
