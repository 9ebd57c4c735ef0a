#ifndef CFIE_LINK_HPP
#define CFIE_LINK_HPP

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cfie/view.hpp"

namespace cfie {

struct UnmatchedCounts {
    std::size_t source = 0;
    std::size_t binary = 0;
};

// The linkage of a ground-truth view with a degraded view. Function pairing
// is a partial bijection; one source call-site may collect several binary
// sites (address-to-key mapping is one-to-many on the binary side).
// Entities without a counterpart are counted but excluded from comparisons.
struct MatchedProgram {
    ProgramView source;
    ProgramView binary;
    std::vector<std::pair<std::string, std::string>> fn_pairs; // (source fn_id, binary fn_id)
    std::map<std::string, std::vector<std::string>> cs_map;    // source cs_id -> binary cs_ids
    UnmatchedCounts unmatched_fns;
    UnmatchedCounts unmatched_css;

    const FunctionSignature* find_source_fn(const std::string& fn_id) const;
    const FunctionSignature* find_binary_fn(const std::string& fn_id) const;
    const CallSiteSignature* find_source_cs(const std::string& cs_id) const;
    const CallSiteSignature* find_binary_cs(const std::string& cs_id) const;
};

// Pairs functions and call-sites by exact link_key equality. Unmatched is
// data, not failure. Throws DuplicateIdError if the source side carries
// duplicate call-site link keys (the mapping would be ill-defined).
MatchedProgram link_views(ProgramView source, ProgramView binary);

} // namespace cfie

#endif
