#include "cfie/policies.hpp"

#include <algorithm>
#include <unordered_map>

#include "cfie/errors.hpp"
#include "parallel.hpp"

namespace cfie {

namespace {

std::size_t clamp6(std::size_t n) noexcept {
    return n < kRegisterArgLimit ? n : kRegisterArgLimit;
}

bool prefix_match(const CallSiteSignature& cs, const FunctionSignature& fn,
                  bool (*eq)(const TypeDescriptor&, const TypeDescriptor&)) noexcept {
    if (fn.variadic) {
        if (cs.args.size() < fn.params.size()) return false;
    } else {
        if (cs.args.size() != fn.params.size()) return false;
    }
    for (std::size_t i = 0; i < fn.params.size(); ++i) {
        if (!eq(cs.args[i], fn.params[i])) return false;
    }
    return true;
}

} // namespace

bool allows_typearmor(const CallSiteSignature& cs, const FunctionSignature& fn) noexcept {
    if (clamp6(fn.params.size()) > clamp6(cs.args.size())) return false;
    if (!cs.expects_return.is_void() && fn.return_type.is_void()) return false;
    return true;
}

bool allows_ifcc(const CallSiteSignature& cs, const FunctionSignature& fn) noexcept {
    return prefix_match(cs, fn, &type_equal_ifcc);
}

bool allows_mcfi(const CallSiteSignature& cs, const FunctionSignature& fn) noexcept {
    return prefix_match(cs, fn, &type_equal_mcfi);
}

bool allows_tcfi(const CallSiteSignature& cs, const FunctionSignature& fn) noexcept {
    if (clamp6(cs.args.size()) < clamp6(fn.params.size())) return false;
    int want = relaxed_width(cs.expects_return);
    if (want != 0) {
        int have = relaxed_width(fn.return_type);
        if (have == 0 || want < have) return false;
    }
    std::size_t checked = clamp6(fn.params.size());
    for (std::size_t i = 0; i < checked; ++i) {
        if (relaxed_width(cs.args[i]) < relaxed_width(fn.params[i])) return false;
    }
    return true;
}

bool allows(PolicyId policy, const CallSiteSignature& cs, const FunctionSignature& fn) noexcept {
    switch (policy) {
        case PolicyId::TypeArmor: return allows_typearmor(cs, fn);
        case PolicyId::Ifcc: return allows_ifcc(cs, fn);
        case PolicyId::Mcfi: return allows_mcfi(cs, fn);
        case PolicyId::Tcfi: return allows_tcfi(cs, fn);
    }
    return false;
}

namespace {

// Tokens are length-prefixed so that no concatenation of distinct token
// sequences can collide (tags may contain arbitrary printable characters).
void append_token(std::string& key, const std::string& tok) {
    key += std::to_string(tok.size());
    key += ':';
    key += tok;
}

// Token equal under IFCC's comparison: pointers collapse, scalars keep
// kind and width, aggregates keep their tag.
std::string ifcc_token(const TypeDescriptor& t) {
    switch (t.kind()) {
        case TypeDescriptor::Kind::Void: return "v";
        case TypeDescriptor::Kind::Scalar:
            return std::string(1, scalar_kind_char(t.scalar_kind())) + std::to_string(t.width_bits());
        case TypeDescriptor::Kind::Pointer: return "p";
        case TypeDescriptor::Kind::Aggregate: return "s:" + t.tag();
        case TypeDescriptor::Kind::Function: return "f";
        case TypeDescriptor::Kind::Unknown: return "u";
    }
    return "?";
}

} // namespace

std::string signature_key(PolicyId policy, const FunctionSignature& fn) {
    std::string key;
    switch (policy) {
        case PolicyId::TypeArmor:
            append_token(key, std::to_string(clamp6(fn.params.size())));
            append_token(key, fn.return_type.is_void() ? "v" : "r");
            break;
        case PolicyId::Ifcc:
            append_token(key, fn.variadic ? "var" : "fix");
            append_token(key, std::to_string(fn.params.size()));
            for (const auto& p : fn.params) append_token(key, ifcc_token(p));
            break;
        case PolicyId::Mcfi:
            append_token(key, fn.variadic ? "var" : "fix");
            append_token(key, std::to_string(fn.params.size()));
            for (const auto& p : fn.params) append_token(key, format_type(p));
            break;
        case PolicyId::Tcfi: {
            std::size_t checked = clamp6(fn.params.size());
            append_token(key, std::to_string(checked));
            for (std::size_t i = 0; i < checked; ++i) {
                append_token(key, std::to_string(relaxed_width(fn.params[i])));
            }
            append_token(key, std::to_string(relaxed_width(fn.return_type)));
            break;
        }
    }
    return key;
}

namespace {

struct Bucket {
    const FunctionSignature* representative = nullptr;
    std::vector<std::string> fn_ids;
};

} // namespace

TargetMap target_sets(const ProgramView& view, PolicyId policy) {
    std::unordered_map<std::string, Bucket> buckets;
    buckets.reserve(view.functions.size());
    for (const auto& fn : view.functions) {
        if (!fn.address_taken) continue;
        Bucket& b = buckets[signature_key(policy, fn)];
        if (b.representative == nullptr) b.representative = &fn;
        b.fn_ids.push_back(fn.fn_id);
    }
    std::vector<const Bucket*> bucket_list;
    bucket_list.reserve(buckets.size());
    for (const auto& [key, b] : buckets) bucket_list.push_back(&b);

    std::vector<std::vector<std::string>> rows(view.call_sites.size());
    detail::parallel_for(view.call_sites.size(), [&](std::size_t i) {
        const CallSiteSignature& cs = view.call_sites[i];
        std::vector<std::string>& out = rows[i];
        for (const Bucket* b : bucket_list) {
            if (allows(policy, cs, *b->representative)) {
                out.insert(out.end(), b->fn_ids.begin(), b->fn_ids.end());
            }
        }
        std::sort(out.begin(), out.end());
    });

    TargetMap tm;
    tm.policy = policy;
    tm.view_label = view.label;
    for (std::size_t i = 0; i < view.call_sites.size(); ++i) {
        auto [it, inserted] = tm.entries.emplace(view.call_sites[i].cs_id, std::move(rows[i]));
        if (!inserted) {
            throw InvariantError("duplicate call-site id \"" + view.call_sites[i].cs_id +
                                 "\" while assembling target sets");
        }
    }
    return tm;
}

TargetMap target_sets_naive(const ProgramView& view, PolicyId policy) {
    TargetMap tm;
    tm.policy = policy;
    tm.view_label = view.label;
    for (const auto& cs : view.call_sites) {
        std::vector<std::string> ids;
        for (const auto& fn : view.functions) {
            if (!fn.address_taken) continue;
            if (allows(policy, cs, fn)) ids.push_back(fn.fn_id);
        }
        std::sort(ids.begin(), ids.end());
        auto [it, inserted] = tm.entries.emplace(cs.cs_id, std::move(ids));
        if (!inserted) {
            throw InvariantError("duplicate call-site id \"" + cs.cs_id +
                                 "\" while assembling target sets");
        }
    }
    return tm;
}

} // namespace cfie
