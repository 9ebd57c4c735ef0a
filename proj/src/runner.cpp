#include "cfie/runner.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "cfie/accuracy.hpp"
#include "cfie/errors.hpp"
#include "cfie/io.hpp"
#include "cfie/link.hpp"
#include "cfie/metrics.hpp"
#include "cfie/policies.hpp"
#include "cfie/version.hpp"
#include "cfie/view.hpp"

namespace fs = std::filesystem;

namespace cfie {

std::vector<PolicyId> parse_policy_list(const std::string& names) {
    if (names.empty()) {
        throw InputError("policy list must not be empty");
    }
    std::vector<PolicyId> policies;
    auto push_unique = [&](PolicyId p) {
        for (PolicyId seen : policies) {
            if (seen == p) return;
        }
        policies.push_back(p);
    };
    std::stringstream ss(names);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "all") {
            for (PolicyId p : kAllPolicies) push_unique(p);
            continue;
        }
        auto p = policy_from_name(item);
        if (!p) {
            throw InputError("unknown policy \"" + item +
                             "\" (expected typearmor, ifcc, mcfi, tcfi, or all)");
        }
        push_unique(*p);
    }
    if (policies.empty()) {
        throw InputError("policy list must not be empty");
    }
    return policies;
}

namespace {

std::string read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError(path + ": cannot open file");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (!in.good() && !in.eof()) {
        throw InputError(path + ": read failed");
    }
    return std::move(buf).str();
}

void write_file(const fs::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw InputError(path.string() + ": cannot open for writing");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out.good()) {
        throw InputError(path.string() + ": write failed");
    }
}

fs::path prepare_out_dir(const std::string& dir) {
    if (dir.empty()) {
        throw InputError("output directory must not be empty");
    }
    fs::path p(dir);
    std::error_code ec;
    if (fs::exists(p, ec) && !fs::is_directory(p, ec)) {
        throw InputError(dir + ": exists and is not a directory");
    }
    fs::create_directories(p, ec);
    if (ec) {
        throw InputError(dir + ": cannot create directory (" + ec.message() + ")");
    }
    return p;
}

std::string dump(const nlohmann::ordered_json& j) {
    return j.dump(2) + "\n";
}

struct LoadedView {
    ProgramView view;
    std::string digest; // fnv1a64 over the raw file bytes
};

LoadedView load_input_view(const std::string& path, bool lenient, std::ostream& err) {
    std::string bytes = read_file_bytes(path);
    ParseOptions options;
    options.lenient = lenient;
    std::vector<std::string> warnings;
    LoadedView loaded;
    try {
        loaded.view = parse_view(bytes, options, &warnings);
    } catch (const TypeGrammarError& e) {
        throw TypeGrammarError(path + ": " + e.what(), e.offset());
    } catch (const SchemaError& e) {
        throw SchemaError(path + ": " + e.what());
    } catch (const DuplicateIdError& e) {
        throw DuplicateIdError(path + ": " + e.what());
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
    for (const std::string& w : warnings) {
        err << "warning: " << path << ": " << w << "\n";
    }
    loaded.digest = fnv1a64_hex(bytes);
    return loaded;
}

// A manifest makes a run auditable: which tool version consumed which
// input bytes under which configuration, and what it wrote. Deliberately
// carries no timestamps so reruns are byte-identical.
class ManifestBuilder {
public:
    ManifestBuilder(const char* command) {
        doc_["tool"] = "cfie";
        doc_["version"] = kToolVersion;
        doc_["command"] = command;
        doc_["inputs"] = nlohmann::ordered_json::object();
        doc_["config"] = nlohmann::ordered_json::object();
        doc_["outputs"] = nlohmann::ordered_json::array();
    }

    void add_input(const std::string& role, const std::string& path, const std::string& digest) {
        nlohmann::ordered_json entry;
        entry["path"] = path;
        entry["fnv1a64"] = digest;
        doc_["inputs"][role] = std::move(entry);
    }

    void set_config(nlohmann::ordered_json config) { doc_["config"] = std::move(config); }

    void add_output(const std::string& name) { doc_["outputs"].push_back(name); }

    void write(const fs::path& out_dir) const {
        write_file(out_dir / "manifest.json", dump(doc_));
    }

private:
    nlohmann::ordered_json doc_;
};

nlohmann::ordered_json policy_names_json(const std::vector<PolicyId>& policies) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (PolicyId p : policies) arr.push_back(std::string(policy_name(p)));
    return arr;
}

nlohmann::ordered_json optional_ratio(const std::optional<double>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

std::optional<double> normalized_or_null(const TargetMap& tm, std::size_t address_taken) {
    if (address_taken == 0) return std::nullopt;
    return normalized_ctr(tm, address_taken);
}

void warn_heavy_unmatching(const MatchedProgram& mp, std::ostream& err) {
    auto warn_side = [&](const char* what, std::size_t total, std::size_t unmatched,
                         const char* side) {
        if (total == 0) return;
        std::size_t matched = total - unmatched;
        if (matched * 2 < total) {
            err << "warning: heavy unmatching: only " << matched << " of " << total << " "
                << side << " " << what << " have a counterpart\n";
        }
    };
    warn_side("functions", mp.source.functions.size(), mp.unmatched_fns.source, "source");
    warn_side("functions", mp.binary.functions.size(), mp.unmatched_fns.binary, "binary");
    warn_side("call-sites", mp.source.call_sites.size(), mp.unmatched_css.source, "source");
    warn_side("call-sites", mp.binary.call_sites.size(), mp.unmatched_css.binary, "binary");
}

std::string targets_file_name(PolicyId policy) {
    return "targets_" + std::string(policy_name(policy)) + ".json";
}

std::string relative_file_name(PolicyId policy) {
    return "relative_" + std::string(policy_name(policy)) + ".json";
}

} // namespace

void cmd_analyze(const AnalyzeOptions& opt, std::ostream& err) {
    if (opt.policies.empty()) {
        throw InputError("policy list must not be empty");
    }
    LoadedView input = load_input_view(opt.view_path, opt.lenient, err);
    fs::path out_dir = prepare_out_dir(opt.out_dir);

    ManifestBuilder manifest("analyze");
    manifest.add_input("view", opt.view_path, input.digest);
    {
        nlohmann::ordered_json config;
        config["policies"] = policy_names_json(opt.policies);
        config["csv"] = opt.csv;
        config["lenient"] = opt.lenient;
        manifest.set_config(config);
    }

    std::size_t address_taken = input.view.address_taken_count();

    nlohmann::ordered_json stats_doc;
    stats_doc["view_label"] = input.view.label;
    stats_doc["functions"] = input.view.functions.size();
    stats_doc["address_taken_functions"] = address_taken;
    stats_doc["call_sites"] = input.view.call_sites.size();
    nlohmann::ordered_json per_policy = nlohmann::ordered_json::object();

    std::vector<CtrCsvRow> csv_rows;
    for (PolicyId policy : opt.policies) {
        TargetMap tm = target_sets(input.view, policy);
        std::string file = targets_file_name(policy);
        write_file(out_dir / file, dump(target_map_json(tm)));
        manifest.add_output(file);

        DistributionStats stats = ctr_stats(tm);
        nlohmann::ordered_json entry;
        entry["stats"] = stats_json(stats);
        entry["ctr_sum"] = ctr_total(tm);
        entry["zero_target_call_sites"] = zero_target_counts(tm);
        entry["normalized_ctr"] = optional_ratio(normalized_or_null(tm, address_taken));
        per_policy[std::string(policy_name(policy))] = std::move(entry);

        csv_rows.push_back({std::string(policy_name(policy)), input.view.label, stats});
    }
    stats_doc["policies"] = std::move(per_policy);
    write_file(out_dir / "ctr_stats.json", dump(stats_doc));
    manifest.add_output("ctr_stats.json");

    if (opt.csv) {
        write_file(out_dir / "ctr_stats.csv", ctr_csv(csv_rows));
        manifest.add_output("ctr_stats.csv");
    }

    manifest.write(out_dir);
}

void cmd_compare(const CompareOptions& opt, std::ostream& err) {
    if (opt.policies.empty()) {
        throw InputError("policy list must not be empty");
    }
    LoadedView source = load_input_view(opt.source_path, opt.lenient, err);
    LoadedView binary = load_input_view(opt.binary_path, opt.lenient, err);
    fs::path out_dir = prepare_out_dir(opt.out_dir);

    ManifestBuilder manifest("compare");
    manifest.add_input("source", opt.source_path, source.digest);
    manifest.add_input("binary", opt.binary_path, binary.digest);
    {
        nlohmann::ordered_json config;
        config["policies"] = policy_names_json(opt.policies);
        config["csv"] = opt.csv;
        config["lenient"] = opt.lenient;
        manifest.set_config(config);
    }

    MatchedProgram mp = link_views(std::move(source.view), std::move(binary.view));
    warn_heavy_unmatching(mp, err);

    std::size_t src_at = mp.source.address_taken_count();
    std::size_t bin_at = mp.binary.address_taken_count();
    std::size_t matched_binary_sites = 0;
    for (const auto& [src_cs, bin_css] : mp.cs_map) matched_binary_sites += bin_css.size();

    nlohmann::ordered_json summary;
    summary["source_label"] = mp.source.label;
    summary["binary_label"] = mp.binary.label;
    summary["matched_functions"] = mp.fn_pairs.size();
    summary["matched_source_call_sites"] = mp.cs_map.size();
    summary["matched_binary_call_sites"] = matched_binary_sites;
    {
        nlohmann::ordered_json unmatched;
        unmatched["source_functions"] = mp.unmatched_fns.source;
        unmatched["binary_functions"] = mp.unmatched_fns.binary;
        unmatched["source_call_sites"] = mp.unmatched_css.source;
        unmatched["binary_call_sites"] = mp.unmatched_css.binary;
        summary["unmatched"] = std::move(unmatched);
    }

    std::vector<RelativeReport> reports;
    std::vector<CtrCsvRow> ctr_rows;
    std::vector<RatioCsvRow> ratio_rows;
    std::vector<CountCsvRow> zero_rows;
    nlohmann::ordered_json per_policy = nlohmann::ordered_json::object();

    for (PolicyId policy : opt.policies) {
        TargetMap src_tm = target_sets(mp.source, policy);
        TargetMap bin_tm = target_sets(mp.binary, policy);
        RelativeReport report = relative_ctr(mp, src_tm, bin_tm);

        std::string file = relative_file_name(policy);
        write_file(out_dir / file, dump(relative_report_json(report)));
        manifest.add_output(file);

        std::string pname(policy_name(policy));
        DistributionStats src_stats = ctr_stats(src_tm);
        DistributionStats bin_stats = ctr_stats(bin_tm);

        nlohmann::ordered_json entry;
        entry["rt_stats"] = stats_json(report.rt_stats);
        entry["rf_stats"] = stats_json(report.rf_stats);
        entry["rt_sum"] = report.rt_stats.mean * static_cast<double>(report.rt_stats.n);
        entry["rf_sum"] = report.rf_stats.mean * static_cast<double>(report.rf_stats.n);
        entry["skipped_rt"] = report.skipped_rt;
        entry["skipped_rf"] = report.skipped_rf;
        {
            nlohmann::ordered_json ctr;
            ctr["source"] = stats_json(src_stats);
            ctr["binary"] = stats_json(bin_stats);
            entry["ctr"] = std::move(ctr);
        }
        {
            nlohmann::ordered_json ratio;
            ratio["source"] = optional_ratio(normalized_or_null(src_tm, src_at));
            ratio["binary"] = optional_ratio(normalized_or_null(bin_tm, bin_at));
            entry["normalized_ctr"] = std::move(ratio);
        }
        {
            nlohmann::ordered_json zero;
            zero["source"] = zero_target_counts(src_tm);
            zero["binary"] = zero_target_counts(bin_tm);
            entry["zero_target_call_sites"] = std::move(zero);
        }
        per_policy[pname] = std::move(entry);

        ctr_rows.push_back({pname, mp.source.label, src_stats});
        ctr_rows.push_back({pname, mp.binary.label, bin_stats});
        if (src_at != 0) ratio_rows.push_back({pname, mp.source.label, normalized_ctr(src_tm, src_at)});
        if (bin_at != 0) ratio_rows.push_back({pname, mp.binary.label, normalized_ctr(bin_tm, bin_at)});
        zero_rows.push_back({pname, mp.source.label, zero_target_counts(src_tm)});
        zero_rows.push_back({pname, mp.binary.label, zero_target_counts(bin_tm)});
        reports.push_back(std::move(report));
    }
    summary["policies"] = std::move(per_policy);

    write_file(out_dir / "summary.json", dump(summary));
    manifest.add_output("summary.json");
    write_file(out_dir / "relative_ctr.csv", relative_csv(reports));
    manifest.add_output("relative_ctr.csv");
    write_file(out_dir / "ctr_stats.csv", ctr_csv(ctr_rows));
    manifest.add_output("ctr_stats.csv");
    write_file(out_dir / "normalized_ctr.csv", normalized_csv(ratio_rows));
    manifest.add_output("normalized_ctr.csv");
    write_file(out_dir / "zero_targets.csv", zero_targets_csv(zero_rows));
    manifest.add_output("zero_targets.csv");

    manifest.write(out_dir);
}

void cmd_accuracy(const AccuracyOptions& opt, std::ostream& err) {
    LoadedView source = load_input_view(opt.source_path, opt.lenient, err);
    LoadedView binary = load_input_view(opt.binary_path, opt.lenient, err);
    fs::path out_dir = prepare_out_dir(opt.out_dir);

    ManifestBuilder manifest("accuracy");
    manifest.add_input("source", opt.source_path, source.digest);
    manifest.add_input("binary", opt.binary_path, binary.digest);
    {
        nlohmann::ordered_json config;
        config["lenient"] = opt.lenient;
        manifest.set_config(config);
    }

    MatchedProgram mp = link_views(std::move(source.view), std::move(binary.view));
    warn_heavy_unmatching(mp, err);

    std::size_t matched_cs_pairs = 0;
    for (const auto& [src_cs, bin_css] : mp.cs_map) matched_cs_pairs += bin_css.size();

    nlohmann::ordered_json summary;
    summary["source_label"] = mp.source.label;
    summary["binary_label"] = mp.binary.label;
    summary["matched_functions"] = mp.fn_pairs.size();
    summary["matched_call_site_pairs"] = matched_cs_pairs;
    nlohmann::ordered_json overall = nlohmann::ordered_json::object();

    for (const BucketTable& table : accuracy_report(mp)) {
        std::string stem = "accuracy_" + std::string(dimension_name(table.dimension)) + "_" +
                           std::string(side_name(table.side));
        write_file(out_dir / (stem + ".json"), dump(bucket_table_json(table)));
        manifest.add_output(stem + ".json");
        write_file(out_dir / (stem + ".csv"), accuracy_csv(table));
        manifest.add_output(stem + ".csv");
        auto acc = table.overall_accuracy();
        overall[stem.substr(std::char_traits<char>::length("accuracy_"))] = optional_ratio(acc);
    }
    summary["overall"] = std::move(overall);
    write_file(out_dir / "summary.json", dump(summary));
    manifest.add_output("summary.json");

    manifest.write(out_dir);
}

void cmd_perturb(const PerturbOptions& opt, std::ostream& err) {
    LoadedView input = load_input_view(opt.view_path, opt.lenient, err);
    ProgramView synthetic = perturb_view(input.view, opt.config);
    if (opt.out_path.empty()) {
        throw InputError("output path must not be empty");
    }
    fs::path out(opt.out_path);
    if (out.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(out.parent_path(), ec);
        if (ec) {
            throw InputError(out.parent_path().string() + ": cannot create directory (" +
                             ec.message() + ")");
        }
    }
    write_file(out, serialize_view(synthetic));
}

void cmd_cdf(const CdfOptions& opt, std::ostream&) {
    std::string key;
    if (opt.metric == "rt" || opt.metric == "r_t") {
        key = "r_t";
    } else if (opt.metric == "rf" || opt.metric == "r_f") {
        key = "r_f";
    } else {
        throw InputError("unknown metric \"" + opt.metric + "\" (expected rt or rf)");
    }

    std::string bytes = read_file_bytes(opt.report_path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(opt.report_path + ": not valid JSON: " + e.what());
    }
    if (!doc.is_object() || !doc.contains("sites") || !doc["sites"].is_array()) {
        throw InputError(opt.report_path + ": not a comparison report (missing \"sites\" array)");
    }
    std::vector<double> values;
    for (const auto& site : doc["sites"]) {
        if (!site.is_object() || !site.contains(key)) {
            throw InputError(opt.report_path + ": report sites lack the \"" + key + "\" metric");
        }
        const auto& v = site[key];
        if (v.is_null()) continue; // skipped site: ratio undefined there
        if (!v.is_number()) {
            throw InputError(opt.report_path + ": metric \"" + key + "\" has a non-numeric value");
        }
        values.push_back(v.get<double>());
    }

    if (opt.out_path.empty()) {
        throw InputError("output path must not be empty");
    }
    fs::path out(opt.out_path);
    if (out.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(out.parent_path(), ec);
        if (ec) {
            throw InputError(out.parent_path().string() + ": cannot create directory (" +
                             ec.message() + ")");
        }
    }
    write_file(out, cdf_csv(cdf_series(std::move(values))));
}

} // namespace cfie
