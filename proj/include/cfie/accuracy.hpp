#ifndef CFIE_ACCURACY_HPP
#define CFIE_ACCURACY_HPP

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cfie/link.hpp"
#include "cfie/types.hpp"

namespace cfie {

// What aspect of the recovered signatures is being scored.
enum class AccuracyDimension {
    Arity,             // parameter/argument count, bucketed 0..5 and 6+
    ReturnVoidness,    // void vs non-void return
    PreliminaryType,   // per-position type, pointers collapsed
    PointerBaseType,   // per-position pointee type where the truth is a pointer
    RelaxedWidth,      // per-position register width in {0,8,16,32,64}
    RelaxedReturnWidth // return register width
};

// Which half of a signature the samples come from.
enum class SignatureSide { CallSite, Function };

std::string_view dimension_name(AccuracyDimension d) noexcept;
std::string_view side_name(SignatureSide s) noexcept;

struct BucketCounts {
    std::size_t correct = 0;
    std::size_t wrong = 0;
};

// Recovery accuracy bucketed by the ground-truth (source) value. Buckets
// with a fixed label universe (arity, voidness, widths) always list every
// label; type-category buckets list only the observed ones.
struct BucketTable {
    AccuracyDimension dimension = AccuracyDimension::Arity;
    SignatureSide side = SignatureSide::CallSite;
    std::vector<std::pair<std::string, BucketCounts>> rows;

    std::optional<double> overall_accuracy() const;
};

struct TablePair {
    BucketTable call_site;
    BucketTable function;
};

// Bucket label helpers shared with the table builders.
std::string arity_bucket(std::size_t count);
std::string head_category(const TypeDescriptor& t);

TablePair arity_accuracy(const MatchedProgram& mp);
TablePair return_voidness_accuracy(const MatchedProgram& mp);
TablePair preliminary_type_accuracy(const MatchedProgram& mp);
TablePair pointer_type_accuracy(const MatchedProgram& mp);

// RelaxedWidth and RelaxedReturnWidth for both sides (four tables).
std::vector<BucketTable> relaxed_type_accuracy(const MatchedProgram& mp);

// Every table: six dimensions by two sides, in a fixed order.
std::vector<BucketTable> accuracy_report(const MatchedProgram& mp);

} // namespace cfie

#endif
