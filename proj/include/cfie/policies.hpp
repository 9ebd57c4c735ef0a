#ifndef CFIE_POLICIES_HPP
#define CFIE_POLICIES_HPP

#include <map>
#include <string>
#include <vector>

#include "cfie/types.hpp"
#include "cfie/view.hpp"

namespace cfie {

// Count rules clamp at six because the modeled recovery only observes the
// six registers of the x86-64 System V calling convention.
inline constexpr std::size_t kRegisterArgLimit = 6;

// Arity with voidness: target parameter count (clamped to six) must not
// exceed the site's argument count (clamped to six); a site that consumes
// a return value only reaches non-void targets. Argument types ignored.
bool allows_typearmor(const CallSiteSignature& cs, const FunctionSignature& fn) noexcept;

// Exact argument count and per-position type match with pointers collapsed;
// return type ignored. Variadic targets match as a typed prefix.
bool allows_ifcc(const CallSiteSignature& cs, const FunctionSignature& fn) noexcept;

// As allows_ifcc but with fully structural pointer comparison.
bool allows_mcfi(const CallSiteSignature& cs, const FunctionSignature& fn) noexcept;

// Register-width rules: site prepares at least as many (clamped) arguments
// as the target consumes, each prepared width covers the consumed width,
// and a value-consuming site needs a non-void target of covered width.
bool allows_tcfi(const CallSiteSignature& cs, const FunctionSignature& fn) noexcept;

bool allows(PolicyId policy, const CallSiteSignature& cs, const FunctionSignature& fn) noexcept;

// Per-call-site sets of reachable targets under one policy. Only
// address-taken functions belong to the target universe.
struct TargetMap {
    PolicyId policy = PolicyId::TypeArmor;
    std::string view_label;
    // cs_id -> sorted, unique fn_ids
    std::map<std::string, std::vector<std::string>> entries;
};

// Projection of a function signature onto the fields one policy inspects.
// Functions sharing a key are reachable from exactly the same call-sites.
std::string signature_key(PolicyId policy, const FunctionSignature& fn);

// Fast path: functions are bucketed by signature_key and each bucket is
// tested once per call-site. Set-identical to target_sets_naive.
// Call-sites may be evaluated in parallel (capped by CFIE_THREADS);
// entries are always ordered by cs_id.
TargetMap target_sets(const ProgramView& view, PolicyId policy);

// Reference path: the plain pairwise double loop.
TargetMap target_sets_naive(const ProgramView& view, PolicyId policy);

} // namespace cfie

#endif
