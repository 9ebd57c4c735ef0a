#include "cfie/accuracy.hpp"

#include <algorithm>
#include <map>

#include "cfie/errors.hpp"
#include "cfie/policies.hpp"

namespace cfie {

std::string_view dimension_name(AccuracyDimension d) noexcept {
    switch (d) {
        case AccuracyDimension::Arity: return "arity";
        case AccuracyDimension::ReturnVoidness: return "return_voidness";
        case AccuracyDimension::PreliminaryType: return "preliminary_type";
        case AccuracyDimension::PointerBaseType: return "pointer_base_type";
        case AccuracyDimension::RelaxedWidth: return "relaxed_width";
        case AccuracyDimension::RelaxedReturnWidth: return "relaxed_return_width";
    }
    return "?";
}

std::string_view side_name(SignatureSide s) noexcept {
    return s == SignatureSide::CallSite ? "call_site" : "function";
}

std::optional<double> BucketTable::overall_accuracy() const {
    std::size_t correct = 0;
    std::size_t total = 0;
    for (const auto& [label, counts] : rows) {
        correct += counts.correct;
        total += counts.correct + counts.wrong;
    }
    if (total == 0) return std::nullopt;
    return static_cast<double>(correct) / static_cast<double>(total);
}

std::string arity_bucket(std::size_t count) {
    if (count >= kRegisterArgLimit) return "6+";
    return std::to_string(count);
}

std::string head_category(const TypeDescriptor& t) {
    switch (t.kind()) {
        case TypeDescriptor::Kind::Void: return "void";
        case TypeDescriptor::Kind::Scalar: return format_type(t);
        case TypeDescriptor::Kind::Pointer: return "pointer";
        case TypeDescriptor::Kind::Aggregate: return "aggregate";
        case TypeDescriptor::Kind::Function: return "function";
        case TypeDescriptor::Kind::Unknown: return "unknown";
    }
    return "?";
}

namespace {

int category_rank(const std::string& label) {
    if (label == "void") return 0;
    if (label == "pointer") return 2;
    if (label == "aggregate") return 3;
    if (label == "function") return 4;
    if (label == "unknown") return 5;
    return 1; // scalar token such as "i32"
}

class TableBuilder {
public:
    TableBuilder(AccuracyDimension dim, SignatureSide side) : dim_(dim), side_(side) {}

    void add(std::string label, bool correct) {
        BucketCounts& c = acc_[std::move(label)];
        if (correct) {
            ++c.correct;
        } else {
            ++c.wrong;
        }
    }

    BucketTable finish() && {
        BucketTable table;
        table.dimension = dim_;
        table.side = side_;
        switch (dim_) {
            case AccuracyDimension::Arity:
                for (const char* l : {"0", "1", "2", "3", "4", "5", "6+"}) {
                    table.rows.emplace_back(l, acc_[l]);
                }
                break;
            case AccuracyDimension::ReturnVoidness:
                for (const char* l : {"void", "non-void"}) {
                    table.rows.emplace_back(l, acc_[l]);
                }
                break;
            case AccuracyDimension::RelaxedWidth:
            case AccuracyDimension::RelaxedReturnWidth:
                for (const char* l : {"0", "8", "16", "32", "64"}) {
                    table.rows.emplace_back(l, acc_[l]);
                }
                break;
            case AccuracyDimension::PreliminaryType:
            case AccuracyDimension::PointerBaseType:
                for (const auto& [label, counts] : acc_) {
                    table.rows.emplace_back(label, counts);
                }
                std::sort(table.rows.begin(), table.rows.end(),
                          [](const auto& a, const auto& b) {
                              int ra = category_rank(a.first);
                              int rb = category_rank(b.first);
                              if (ra != rb) return ra < rb;
                              return a.first < b.first;
                          });
                break;
        }
        return table;
    }

private:
    AccuracyDimension dim_;
    SignatureSide side_;
    std::map<std::string, BucketCounts> acc_;
};

// One truth/recovered signature correspondence, seen as a type-list plus
// a return type so both sides share the walkers below.
struct SigPair {
    const std::vector<TypeDescriptor>* truth_list;
    const std::vector<TypeDescriptor>* found_list;
    const TypeDescriptor* truth_ret;
    const TypeDescriptor* found_ret;
};

std::vector<SigPair> collect_pairs(const MatchedProgram& mp, SignatureSide side) {
    std::vector<SigPair> pairs;
    if (side == SignatureSide::Function) {
        pairs.reserve(mp.fn_pairs.size());
        for (const auto& [src_id, bin_id] : mp.fn_pairs) {
            const FunctionSignature* src = mp.find_source_fn(src_id);
            const FunctionSignature* bin = mp.find_binary_fn(bin_id);
            if (src == nullptr || bin == nullptr) {
                throw InvariantError("function pair (" + src_id + ", " + bin_id +
                                     ") references a signature missing from its view");
            }
            pairs.push_back({&src->params, &bin->params, &src->return_type, &bin->return_type});
        }
        return pairs;
    }
    for (const auto& [src_id, bin_ids] : mp.cs_map) {
        const CallSiteSignature* src = mp.find_source_cs(src_id);
        if (src == nullptr) {
            throw InvariantError("matched call-site \"" + src_id + "\" is missing from the source view");
        }
        for (const auto& bin_id : bin_ids) {
            const CallSiteSignature* bin = mp.find_binary_cs(bin_id);
            if (bin == nullptr) {
                throw InvariantError("matched call-site \"" + bin_id + "\" is missing from the binary view");
            }
            pairs.push_back({&src->args, &bin->args, &src->expects_return, &bin->expects_return});
        }
    }
    return pairs;
}

BucketTable build_table(const MatchedProgram& mp, AccuracyDimension dim, SignatureSide side) {
    TableBuilder builder(dim, side);
    for (const SigPair& p : collect_pairs(mp, side)) {
        switch (dim) {
            case AccuracyDimension::Arity:
                builder.add(arity_bucket(p.truth_list->size()),
                            p.truth_list->size() == p.found_list->size());
                break;
            case AccuracyDimension::ReturnVoidness:
                builder.add(p.truth_ret->is_void() ? "void" : "non-void",
                            p.truth_ret->is_void() == p.found_ret->is_void());
                break;
            case AccuracyDimension::PreliminaryType:
                for (std::size_t i = 0; i < p.truth_list->size(); ++i) {
                    bool ok = i < p.found_list->size() &&
                              type_equal_ifcc((*p.truth_list)[i], (*p.found_list)[i]);
                    builder.add(head_category((*p.truth_list)[i]), ok);
                }
                break;
            case AccuracyDimension::PointerBaseType:
                for (std::size_t i = 0; i < p.truth_list->size(); ++i) {
                    const TypeDescriptor& truth = (*p.truth_list)[i];
                    if (truth.kind() != TypeDescriptor::Kind::Pointer) continue;
                    bool ok = i < p.found_list->size() &&
                              type_equal_mcfi(truth, (*p.found_list)[i]);
                    builder.add(head_category(truth.pointee()), ok);
                }
                break;
            case AccuracyDimension::RelaxedWidth:
                for (std::size_t i = 0; i < p.truth_list->size(); ++i) {
                    int want = relaxed_width((*p.truth_list)[i]);
                    bool ok = i < p.found_list->size() &&
                              relaxed_width((*p.found_list)[i]) == want;
                    builder.add(std::to_string(want), ok);
                }
                break;
            case AccuracyDimension::RelaxedReturnWidth:
                builder.add(std::to_string(relaxed_width(*p.truth_ret)),
                            relaxed_width(*p.found_ret) == relaxed_width(*p.truth_ret));
                break;
        }
    }
    return std::move(builder).finish();
}

TablePair build_pair(const MatchedProgram& mp, AccuracyDimension dim) {
    return {build_table(mp, dim, SignatureSide::CallSite),
            build_table(mp, dim, SignatureSide::Function)};
}

} // namespace

TablePair arity_accuracy(const MatchedProgram& mp) {
    return build_pair(mp, AccuracyDimension::Arity);
}

TablePair return_voidness_accuracy(const MatchedProgram& mp) {
    return build_pair(mp, AccuracyDimension::ReturnVoidness);
}

TablePair preliminary_type_accuracy(const MatchedProgram& mp) {
    return build_pair(mp, AccuracyDimension::PreliminaryType);
}

TablePair pointer_type_accuracy(const MatchedProgram& mp) {
    return build_pair(mp, AccuracyDimension::PointerBaseType);
}

std::vector<BucketTable> relaxed_type_accuracy(const MatchedProgram& mp) {
    std::vector<BucketTable> tables;
    for (AccuracyDimension dim : {AccuracyDimension::RelaxedWidth, AccuracyDimension::RelaxedReturnWidth}) {
        TablePair pair = build_pair(mp, dim);
        tables.push_back(std::move(pair.call_site));
        tables.push_back(std::move(pair.function));
    }
    return tables;
}

std::vector<BucketTable> accuracy_report(const MatchedProgram& mp) {
    std::vector<BucketTable> tables;
    for (AccuracyDimension dim :
         {AccuracyDimension::Arity, AccuracyDimension::ReturnVoidness,
          AccuracyDimension::PreliminaryType, AccuracyDimension::PointerBaseType,
          AccuracyDimension::RelaxedWidth, AccuracyDimension::RelaxedReturnWidth}) {
        TablePair pair = build_pair(mp, dim);
        tables.push_back(std::move(pair.call_site));
        tables.push_back(std::move(pair.function));
    }
    return tables;
}

} // namespace cfie
