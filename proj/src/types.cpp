#include "cfie/types.hpp"

#include <cctype>
#include <stdexcept>

#include "cfie/errors.hpp"

namespace cfie {

namespace {

bool valid_width(int bits) {
    return bits == 8 || bits == 16 || bits == 32 || bits == 64;
}

bool valid_tag_char(char c) {
    // Tags must survive the textual grammar unescaped.
    return c != '(' && c != ')' && !std::isspace(static_cast<unsigned char>(c)) &&
           !std::iscntrl(static_cast<unsigned char>(c));
}

} // namespace

TypeDescriptor TypeDescriptor::make_void() {
    TypeDescriptor t;
    t.kind_ = Kind::Void;
    return t;
}

TypeDescriptor TypeDescriptor::scalar(ScalarKind kind, int width_bits) {
    if (!valid_width(width_bits))
        throw std::invalid_argument("scalar width must be one of 8/16/32/64");
    TypeDescriptor t;
    t.kind_ = Kind::Scalar;
    t.scalar_kind_ = kind;
    t.width_bits_ = static_cast<std::uint8_t>(width_bits);
    return t;
}

TypeDescriptor TypeDescriptor::pointer(TypeDescriptor pointee) {
    TypeDescriptor t;
    t.kind_ = Kind::Pointer;
    t.pointee_ = std::make_shared<const TypeDescriptor>(std::move(pointee));
    return t;
}

TypeDescriptor TypeDescriptor::aggregate(std::string tag) {
    if (tag.empty())
        throw std::invalid_argument("aggregate tag must be non-empty");
    for (char c : tag)
        if (!valid_tag_char(c))
            throw std::invalid_argument("aggregate tag contains characters outside the grammar");
    TypeDescriptor t;
    t.kind_ = Kind::Aggregate;
    t.tag_ = std::move(tag);
    return t;
}

TypeDescriptor TypeDescriptor::function() {
    TypeDescriptor t;
    t.kind_ = Kind::Function;
    return t;
}

TypeDescriptor TypeDescriptor::unknown() {
    return TypeDescriptor{};
}

ScalarKind TypeDescriptor::scalar_kind() const {
    if (kind_ != Kind::Scalar)
        throw std::logic_error("scalar_kind() on non-scalar descriptor");
    return scalar_kind_;
}

int TypeDescriptor::width_bits() const {
    if (kind_ != Kind::Scalar)
        throw std::logic_error("width_bits() on non-scalar descriptor");
    return width_bits_;
}

const TypeDescriptor& TypeDescriptor::pointee() const {
    if (kind_ != Kind::Pointer)
        throw std::logic_error("pointee() on non-pointer descriptor");
    return *pointee_;
}

const std::string& TypeDescriptor::tag() const {
    if (kind_ != Kind::Aggregate)
        throw std::logic_error("tag() on non-aggregate descriptor");
    return tag_;
}

bool operator==(const TypeDescriptor& a, const TypeDescriptor& b) {
    return type_equal_mcfi(a, b);
}

int relaxed_width(const TypeDescriptor& t) noexcept {
    switch (t.kind()) {
    case TypeDescriptor::Kind::Void:
        return 0;
    case TypeDescriptor::Kind::Scalar:
        return t.width_bits();
    default:
        return 64;
    }
}

bool type_equal_ifcc(const TypeDescriptor& a, const TypeDescriptor& b) noexcept {
    using Kind = TypeDescriptor::Kind;
    if (a.kind() != b.kind())
        return false;
    switch (a.kind()) {
    case Kind::Scalar:
        return a.scalar_kind() == b.scalar_kind() && a.width_bits() == b.width_bits();
    case Kind::Pointer:
        return true; // every pointer collapses to one token
    case Kind::Aggregate:
        return a.tag() == b.tag();
    default: // Void, Function, Unknown: kind equality is enough
        return true;
    }
}

bool type_equal_mcfi(const TypeDescriptor& a, const TypeDescriptor& b) noexcept {
    using Kind = TypeDescriptor::Kind;
    if (a.kind() != b.kind())
        return false;
    switch (a.kind()) {
    case Kind::Scalar:
        return a.scalar_kind() == b.scalar_kind() && a.width_bits() == b.width_bits();
    case Kind::Pointer:
        return type_equal_mcfi(a.pointee(), b.pointee());
    case Kind::Aggregate:
        return a.tag() == b.tag();
    default:
        return true;
    }
}

char scalar_kind_char(ScalarKind kind) noexcept {
    switch (kind) {
    case ScalarKind::Int:
        return 'i';
    case ScalarKind::Float:
        return 'f';
    case ScalarKind::Bool:
        return 'b';
    case ScalarKind::Enum:
        return 'e';
    }
    return '?';
}

namespace {

struct TypeParser {
    std::string_view text;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& reason, std::size_t at) const {
        throw TypeGrammarError("invalid type string \"" + std::string(text) + "\": " + reason +
                                   " at offset " + std::to_string(at),
                               at);
    }

    bool consume(std::string_view token) {
        if (text.substr(pos, token.size()) == token) {
            pos += token.size();
            return true;
        }
        return false;
    }

    TypeDescriptor parse() {
        if (pos >= text.size())
            fail("unexpected end of input", pos);
        if (consume("void"))
            return TypeDescriptor::make_void();
        if (consume("ptr(")) {
            TypeDescriptor inner = parse();
            if (!consume(")"))
                fail("expected ')'", pos);
            return TypeDescriptor::pointer(std::move(inner));
        }
        if (text.substr(pos, 3) == "ptr")
            fail("expected '(' after \"ptr\"", pos + 3);
        if (consume("struct(")) {
            std::size_t start = pos;
            while (pos < text.size() && text[pos] != ')')
                ++pos;
            if (pos >= text.size())
                fail("unterminated struct tag", start);
            std::string tag(text.substr(start, pos - start));
            ++pos; // ')'
            if (tag.empty())
                fail("empty struct tag", start);
            for (std::size_t i = 0; i < tag.size(); ++i)
                if (!valid_tag_char(tag[i]))
                    fail("illegal character in struct tag", start + i);
            return TypeDescriptor::aggregate(std::move(tag));
        }
        if (text.substr(pos, 6) == "struct")
            fail("expected '(' after \"struct\"", pos + 6);
        if (consume("func"))
            return TypeDescriptor::function();
        if (consume("unknown"))
            return TypeDescriptor::unknown();
        return parse_scalar();
    }

    TypeDescriptor parse_scalar() {
        char k = text[pos];
        ScalarKind kind;
        switch (k) {
        case 'i': kind = ScalarKind::Int; break;
        case 'f': kind = ScalarKind::Float; break;
        case 'b': kind = ScalarKind::Bool; break;
        case 'e': kind = ScalarKind::Enum; break;
        default:
            fail("unrecognized token", pos);
        }
        ++pos;
        std::size_t digits = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
            ++pos;
        std::string_view width_str = text.substr(digits, pos - digits);
        int width = 0;
        if (width_str == "8") width = 8;
        else if (width_str == "16") width = 16;
        else if (width_str == "32") width = 32;
        else if (width_str == "64") width = 64;
        else
            fail("scalar width must be 8, 16, 32 or 64", digits);
        return TypeDescriptor::scalar(kind, width);
    }
};

} // namespace

TypeDescriptor parse_type(std::string_view text) {
    TypeParser p{text};
    TypeDescriptor t = p.parse();
    if (p.pos != text.size())
        p.fail("trailing characters", p.pos);
    return t;
}

std::string format_type(const TypeDescriptor& t) {
    using Kind = TypeDescriptor::Kind;
    switch (t.kind()) {
    case Kind::Void:
        return "void";
    case Kind::Scalar:
        return std::string(1, scalar_kind_char(t.scalar_kind())) + std::to_string(t.width_bits());
    case Kind::Pointer:
        return "ptr(" + format_type(t.pointee()) + ")";
    case Kind::Aggregate:
        return "struct(" + t.tag() + ")";
    case Kind::Function:
        return "func";
    case Kind::Unknown:
        return "unknown";
    }
    return "unknown";
}

std::string_view policy_name(PolicyId policy) noexcept {
    switch (policy) {
    case PolicyId::TypeArmor:
        return "typearmor";
    case PolicyId::Ifcc:
        return "ifcc";
    case PolicyId::Mcfi:
        return "mcfi";
    case PolicyId::Tcfi:
        return "tcfi";
    }
    return "typearmor";
}

std::optional<PolicyId> policy_from_name(std::string_view name) noexcept {
    if (name == "typearmor")
        return PolicyId::TypeArmor;
    if (name == "ifcc")
        return PolicyId::Ifcc;
    if (name == "mcfi")
        return PolicyId::Mcfi;
    if (name == "tcfi" || name == "taucfi")
        return PolicyId::Tcfi;
    return std::nullopt;
}

} // namespace cfie
