#ifndef CFIE_VIEW_HPP
#define CFIE_VIEW_HPP

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "cfie/types.hpp"

namespace cfie {

// Signature of one potential call target as one producer sees it.
struct FunctionSignature {
    std::string fn_id;    // unique within the view
    std::string link_key; // producer-stable cross-view matching key
    TypeDescriptor return_type;
    std::vector<TypeDescriptor> params;
    bool variadic = false;
    bool address_taken = true;

    friend bool operator==(const FunctionSignature&, const FunctionSignature&) = default;
};

// Signature of one indirect call-site. expects_return == Void means the
// site does not consume a return value.
struct CallSiteSignature {
    std::string cs_id;
    std::string link_key;
    TypeDescriptor expects_return;
    std::vector<TypeDescriptor> args;

    friend bool operator==(const CallSiteSignature&, const CallSiteSignature&) = default;
};

// One producer's complete picture of a program.
struct ProgramView {
    std::string label; // "source" | "binary-I" | "binary-II" | "synthetic"
    std::vector<FunctionSignature> functions;
    std::vector<CallSiteSignature> call_sites;

    std::size_t address_taken_count() const;

    friend bool operator==(const ProgramView&, const ProgramView&) = default;
};

bool valid_view_label(std::string_view label) noexcept;

// Enforces the uniqueness invariants on a programmatically built view:
// unique fn_ids, cs_ids and function link_keys; unique call-site link_keys
// when the label is "source". Throws DuplicateIdError / SchemaError.
void validate_view(const ProgramView& view);

struct ParseOptions {
    // When set, unknown fields produce warnings instead of SchemaError.
    bool lenient = false;
};

// Parses and validates a UTF-8 JSON view payload.
// Throws SchemaError, TypeGrammarError, DuplicateIdError.
ProgramView parse_view(std::string_view payload, const ParseOptions& options = {},
                       std::vector<std::string>* warnings = nullptr);

// Canonical JSON rendering; parse_view(serialize_view(v)) == v.
std::string serialize_view(const ProgramView& view);

// parse_view over a file's contents, with the path prefixed to diagnostics.
ProgramView load_view_file(const std::filesystem::path& path, const ParseOptions& options = {},
                           std::vector<std::string>* warnings = nullptr);

} // namespace cfie

#endif
