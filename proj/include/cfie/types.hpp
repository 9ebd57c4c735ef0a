#ifndef CFIE_TYPES_HPP
#define CFIE_TYPES_HPP

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace cfie {

enum class ScalarKind : std::uint8_t { Int, Float, Bool, Enum };

// Structural description of a C-level type as producers report it.
// Immutable value type; copies share pointee storage.
class TypeDescriptor {
public:
    enum class Kind : std::uint8_t { Void, Scalar, Pointer, Aggregate, Function, Unknown };

    TypeDescriptor() = default; // Unknown

    static TypeDescriptor make_void();
    static TypeDescriptor scalar(ScalarKind kind, int width_bits);
    static TypeDescriptor pointer(TypeDescriptor pointee);
    static TypeDescriptor aggregate(std::string tag);
    static TypeDescriptor function();
    static TypeDescriptor unknown();

    Kind kind() const noexcept { return kind_; }
    bool is_void() const noexcept { return kind_ == Kind::Void; }

    ScalarKind scalar_kind() const;        // requires kind() == Scalar
    int width_bits() const;                // requires kind() == Scalar
    const TypeDescriptor& pointee() const; // requires kind() == Pointer
    const std::string& tag() const;        // requires kind() == Aggregate

    // Structural equality (pointees compared recursively).
    friend bool operator==(const TypeDescriptor& a, const TypeDescriptor& b);
    friend bool operator!=(const TypeDescriptor& a, const TypeDescriptor& b) { return !(a == b); }

private:
    Kind kind_ = Kind::Unknown;
    ScalarKind scalar_kind_ = ScalarKind::Int;
    std::uint8_t width_bits_ = 0;
    std::shared_ptr<const TypeDescriptor> pointee_;
    std::string tag_;
};

// Register-width abstraction: 0 for void, the scalar width for scalars,
// 64 for everything passed as a register-sized handle on the modeled
// 64-bit ABI (pointers, aggregates, function values, unknowns).
int relaxed_width(const TypeDescriptor& t) noexcept;

// Equality with every pointer collapsed to one opaque pointer token.
bool type_equal_ifcc(const TypeDescriptor& a, const TypeDescriptor& b) noexcept;

// Fully structural equality; pointer comparison recurses into pointees.
bool type_equal_mcfi(const TypeDescriptor& a, const TypeDescriptor& b) noexcept;

// Textual grammar used by view files:
//   "void" | "<kind><bits>" | "ptr(<type>)" | "struct(<tag>)" | "func" | "unknown"
// where <kind> is one of i/f/b/e and <bits> one of 8/16/32/64.
// Case sensitive, no whitespace. Throws TypeGrammarError.
TypeDescriptor parse_type(std::string_view text);
std::string format_type(const TypeDescriptor& t);

char scalar_kind_char(ScalarKind kind) noexcept;

enum class PolicyId : std::uint8_t { TypeArmor, Ifcc, Mcfi, Tcfi };

inline constexpr std::array<PolicyId, 4> kAllPolicies = {
    PolicyId::TypeArmor, PolicyId::Ifcc, PolicyId::Mcfi, PolicyId::Tcfi};

std::string_view policy_name(PolicyId policy) noexcept;
std::optional<PolicyId> policy_from_name(std::string_view name) noexcept;

} // namespace cfie

#endif
