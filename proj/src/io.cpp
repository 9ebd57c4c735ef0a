#include "cfie/io.hpp"

#include <cstdio>

namespace cfie {

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string fnv1a64_hex(std::string_view bytes) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

std::string format_double4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

nlohmann::ordered_json stats_json(const DistributionStats& s) {
    nlohmann::ordered_json j;
    j["n"] = s.n;
    if (s.n == 0) {
        for (const char* key : {"mean", "std", "min", "med", "p90", "max"}) {
            j[key] = nullptr;
        }
        return j;
    }
    j["mean"] = s.mean;
    j["std"] = s.stddev;
    j["min"] = s.min;
    j["med"] = s.median;
    j["p90"] = s.p90;
    j["max"] = s.max;
    return j;
}

nlohmann::ordered_json target_map_json(const TargetMap& tm) {
    nlohmann::ordered_json j;
    j["policy"] = std::string(policy_name(tm.policy));
    j["view_label"] = tm.view_label;
    nlohmann::ordered_json entries = nlohmann::ordered_json::object();
    for (const auto& [cs_id, fn_ids] : tm.entries) {
        entries[cs_id] = fn_ids;
    }
    j["entries"] = std::move(entries);
    return j;
}

nlohmann::ordered_json relative_report_json(const RelativeReport& report) {
    nlohmann::ordered_json j;
    j["policy"] = std::string(policy_name(report.policy));
    j["rt_stats"] = stats_json(report.rt_stats);
    j["rf_stats"] = stats_json(report.rf_stats);
    j["rt_sum"] = report.rt_stats.mean * static_cast<double>(report.rt_stats.n);
    j["rf_sum"] = report.rf_stats.mean * static_cast<double>(report.rf_stats.n);
    j["skipped_rt"] = report.skipped_rt;
    j["skipped_rf"] = report.skipped_rf;
    nlohmann::ordered_json sites = nlohmann::ordered_json::array();
    for (const SiteRatios& s : report.per_site) {
        nlohmann::ordered_json row;
        row["cs_id"] = s.cs_id;
        row["ct_size"] = s.ct_size;
        row["ct_prime_size"] = s.ctp_size;
        row["r_t"] = s.r_t ? nlohmann::ordered_json(*s.r_t) : nlohmann::ordered_json(nullptr);
        row["r_f"] = s.r_f ? nlohmann::ordered_json(*s.r_f) : nlohmann::ordered_json(nullptr);
        sites.push_back(std::move(row));
    }
    j["sites"] = std::move(sites);
    return j;
}

nlohmann::ordered_json bucket_table_json(const BucketTable& table) {
    nlohmann::ordered_json j;
    j["dimension"] = std::string(dimension_name(table.dimension));
    j["side"] = std::string(side_name(table.side));
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& [label, counts] : table.rows) {
        nlohmann::ordered_json row;
        row["bucket"] = label;
        row["true"] = counts.correct;
        row["false"] = counts.wrong;
        rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    auto overall = table.overall_accuracy();
    j["overall"] = overall ? nlohmann::ordered_json(*overall) : nlohmann::ordered_json(nullptr);
    return j;
}

nlohmann::ordered_json cdf_json(const std::vector<std::pair<double, double>>& series) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json points = nlohmann::ordered_json::array();
    for (const auto& [value, fraction] : series) {
        nlohmann::ordered_json row;
        row["value"] = value;
        row["cumulative_fraction"] = fraction;
        points.push_back(std::move(row));
    }
    j["series"] = std::move(points);
    return j;
}

namespace {

// Appends the six stat columns; undefined stats render as empty cells.
void append_stats_cells(std::string& out, const DistributionStats& s) {
    if (s.n == 0) {
        out += ",,,,,,"; // six empty cells
        return;
    }
    out += ',';
    out += format_double4(s.mean);
    out += ',';
    out += format_double4(s.stddev);
    out += ',';
    out += format_double4(s.min);
    out += ',';
    out += format_double4(s.median);
    out += ',';
    out += format_double4(s.p90);
    out += ',';
    out += format_double4(s.max);
}

} // namespace

std::string ctr_csv(const std::vector<CtrCsvRow>& rows) {
    std::string out = "policy,view,mean,std,min,med,90thp,max\n";
    for (const CtrCsvRow& row : rows) {
        out += row.policy;
        out += ',';
        out += row.view;
        append_stats_cells(out, row.stats);
        out += '\n';
    }
    return out;
}

std::string relative_csv(const std::vector<RelativeReport>& reports) {
    std::string out = "policy,metric,mean,std,min,med,90thp,max\n";
    for (const RelativeReport& report : reports) {
        out += policy_name(report.policy);
        out += ",r_t";
        append_stats_cells(out, report.rt_stats);
        out += '\n';
        out += policy_name(report.policy);
        out += ",r_f";
        append_stats_cells(out, report.rf_stats);
        out += '\n';
    }
    return out;
}

std::string normalized_csv(const std::vector<RatioCsvRow>& rows) {
    std::string out = "policy,view,ratio\n";
    for (const RatioCsvRow& row : rows) {
        out += row.policy;
        out += ',';
        out += row.view;
        out += ',';
        out += format_double4(row.ratio);
        out += '\n';
    }
    return out;
}

std::string zero_targets_csv(const std::vector<CountCsvRow>& rows) {
    std::string out = "policy,view,zero_target_call_sites\n";
    for (const CountCsvRow& row : rows) {
        out += row.policy;
        out += ',';
        out += row.view;
        out += ',';
        out += std::to_string(row.count);
        out += '\n';
    }
    return out;
}

std::string accuracy_csv(const BucketTable& table) {
    std::string out = "bucket,true,false\n";
    for (const auto& [label, counts] : table.rows) {
        out += label;
        out += ',';
        out += std::to_string(counts.correct);
        out += ',';
        out += std::to_string(counts.wrong);
        out += '\n';
    }
    return out;
}

std::string cdf_csv(const std::vector<std::pair<double, double>>& series) {
    std::string out = "value,cumulative_fraction\n";
    for (const auto& [value, fraction] : series) {
        out += format_double4(value);
        out += ',';
        out += format_double4(fraction);
        out += '\n';
    }
    return out;
}

} // namespace cfie
