#include "cfie/link.hpp"

#include <algorithm>
#include <unordered_map>

#include "cfie/errors.hpp"

namespace cfie {

namespace {

template <typename T>
const T* find_by_id(const std::vector<T>& items, const std::string& id,
                    std::string T::*id_field) {
    for (const auto& item : items)
        if (item.*id_field == id)
            return &item;
    return nullptr;
}

} // namespace

const FunctionSignature* MatchedProgram::find_source_fn(const std::string& fn_id) const {
    return find_by_id(source.functions, fn_id, &FunctionSignature::fn_id);
}

const FunctionSignature* MatchedProgram::find_binary_fn(const std::string& fn_id) const {
    return find_by_id(binary.functions, fn_id, &FunctionSignature::fn_id);
}

const CallSiteSignature* MatchedProgram::find_source_cs(const std::string& cs_id) const {
    return find_by_id(source.call_sites, cs_id, &CallSiteSignature::cs_id);
}

const CallSiteSignature* MatchedProgram::find_binary_cs(const std::string& cs_id) const {
    return find_by_id(binary.call_sites, cs_id, &CallSiteSignature::cs_id);
}

MatchedProgram link_views(ProgramView source, ProgramView binary) {
    MatchedProgram mp;
    mp.source = std::move(source);
    mp.binary = std::move(binary);

    // Functions: link keys are unique per view, so key equality yields a
    // partial bijection directly.
    std::unordered_map<std::string_view, const FunctionSignature*> binary_fns;
    binary_fns.reserve(mp.binary.functions.size());
    for (const auto& fn : mp.binary.functions)
        binary_fns.emplace(fn.link_key, &fn);

    std::size_t paired_fns = 0;
    for (const auto& fn : mp.source.functions) {
        auto it = binary_fns.find(fn.link_key);
        if (it == binary_fns.end()) {
            ++mp.unmatched_fns.source;
        } else {
            mp.fn_pairs.emplace_back(fn.fn_id, it->second->fn_id);
            ++paired_fns;
        }
    }
    mp.unmatched_fns.binary = mp.binary.functions.size() - paired_fns;

    // Call-sites: one source key may collect many binary sites.
    std::unordered_map<std::string_view, std::vector<std::string>> binary_css;
    for (const auto& cs : mp.binary.call_sites)
        binary_css[cs.link_key].push_back(cs.cs_id);

    std::unordered_map<std::string_view, bool> seen_source_keys;
    std::size_t covered_binary = 0;
    for (const auto& cs : mp.source.call_sites) {
        if (!seen_source_keys.emplace(cs.link_key, true).second)
            throw DuplicateIdError("source-side call-site link_key \"" + cs.link_key +
                                   "\" is not unique; the site mapping would be ambiguous");
        auto it = binary_css.find(cs.link_key);
        if (it == binary_css.end()) {
            ++mp.unmatched_css.source;
            continue;
        }
        std::vector<std::string> sites = it->second;
        std::sort(sites.begin(), sites.end());
        covered_binary += sites.size();
        mp.cs_map.emplace(cs.cs_id, std::move(sites));
    }
    mp.unmatched_css.binary = mp.binary.call_sites.size() - covered_binary;
    return mp;
}

} // namespace cfie
