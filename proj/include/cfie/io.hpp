#ifndef CFIE_IO_HPP
#define CFIE_IO_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cfie/accuracy.hpp"
#include "cfie/metrics.hpp"
#include "cfie/policies.hpp"

namespace cfie {

// FNV-1a over raw bytes; used to fingerprint inputs in run manifests.
std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);

// Fixed four-decimal rendering used by every CSV emitter.
std::string format_double4(double v);

nlohmann::ordered_json stats_json(const DistributionStats& s);
nlohmann::ordered_json target_map_json(const TargetMap& tm);
nlohmann::ordered_json relative_report_json(const RelativeReport& report);
nlohmann::ordered_json bucket_table_json(const BucketTable& table);
nlohmann::ordered_json cdf_json(const std::vector<std::pair<double, double>>& series);

struct CtrCsvRow {
    std::string policy;
    std::string view;
    DistributionStats stats;
};

struct RatioCsvRow {
    std::string policy;
    std::string view;
    double ratio = 0.0;
};

struct CountCsvRow {
    std::string policy;
    std::string view;
    std::size_t count = 0;
};

std::string ctr_csv(const std::vector<CtrCsvRow>& rows);
std::string relative_csv(const std::vector<RelativeReport>& reports);
std::string normalized_csv(const std::vector<RatioCsvRow>& rows);
std::string zero_targets_csv(const std::vector<CountCsvRow>& rows);
std::string accuracy_csv(const BucketTable& table);
std::string cdf_csv(const std::vector<std::pair<double, double>>& series);

} // namespace cfie

#endif
