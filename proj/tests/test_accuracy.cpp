#include <doctest.h>

#include "cfie/accuracy.hpp"
#include "cfie/link.hpp"
#include "test_helpers.hpp"

using namespace cfie;

namespace {

const BucketCounts& row(const BucketTable& table, const std::string& label) {
    for (const auto& [l, counts] : table.rows)
        if (l == label) return counts;
    static BucketCounts missing;
    FAIL("no bucket labelled \"", label, "\"");
    return missing;
}

std::vector<std::string> labels(const BucketTable& table) {
    std::vector<std::string> out;
    for (const auto& [l, counts] : table.rows) out.push_back(l);
    return out;
}

std::size_t total_wrong(const BucketTable& table) {
    std::size_t n = 0;
    for (const auto& [l, counts] : table.rows) n += counts.wrong;
    return n;
}

std::size_t total_samples(const BucketTable& table) {
    std::size_t n = 0;
    for (const auto& [l, counts] : table.rows) n += counts.correct + counts.wrong;
    return n;
}

} // namespace

TEST_CASE("a view compared against itself recovers everything") {
    ProgramView v = testing::random_view(77, 60, 40);
    MatchedProgram mp = link_views(v, v);
    auto tables = accuracy_report(mp);
    REQUIRE(tables.size() == 12);
    for (const BucketTable& t : tables) {
        CHECK(total_wrong(t) == 0);
        auto overall = t.overall_accuracy();
        if (total_samples(t) > 0) {
            REQUIRE(overall.has_value());
            CHECK(*overall == 1.0);
        }
    }
}

TEST_CASE("report lists both sides of every dimension in a fixed order") {
    ProgramView v = testing::random_view(12, 10, 10);
    MatchedProgram mp = link_views(v, v);
    auto tables = accuracy_report(mp);
    REQUIRE(tables.size() == 12);
    const char* dims[] = {"arity",          "return_voidness", "preliminary_type",
                          "pointer_base_type", "relaxed_width", "relaxed_return_width"};
    for (int d = 0; d < 6; ++d) {
        CHECK(dimension_name(tables[2 * d].dimension) == dims[d]);
        CHECK(side_name(tables[2 * d].side) == "call_site");
        CHECK(dimension_name(tables[2 * d + 1].dimension) == dims[d]);
        CHECK(side_name(tables[2 * d + 1].side) == "function");
    }
}

TEST_CASE("arity buckets by the true count and demands the exact count back") {
    ProgramView src;
    src.label = "source";
    src.functions.push_back(testing::fn("a0", "void", {}));
    src.functions.push_back(testing::fn("b2", "void", {"i32", "i32"}));
    src.functions.push_back(testing::fn("c7", "void", std::vector<std::string>(7, "i64")));
    src.functions.push_back(testing::fn("d6", "void", std::vector<std::string>(6, "i64")));
    src.functions.push_back(testing::fn("e6", "void", std::vector<std::string>(6, "i64")));
    src.call_sites.push_back(testing::cs("s1", "void", {"i32"}));
    src.call_sites.push_back(testing::cs("s4", "void", {"i32", "i32", "i32", "i32"}));

    ProgramView bin;
    bin.label = "binary-I";
    bin.functions.push_back(testing::fn("a0", "void", {}));
    bin.functions.push_back(testing::fn("b2", "void", {"i32", "i32", "i32"}));
    bin.functions.push_back(testing::fn("c7", "void", std::vector<std::string>(7, "i64")));
    bin.functions.push_back(testing::fn("d6", "void", std::vector<std::string>(6, "i64")));
    // Both clamp to six registers, but recovery still missed a parameter.
    bin.functions.push_back(testing::fn("e6", "void", std::vector<std::string>(7, "i64")));
    bin.call_sites.push_back(testing::cs("s1", "void", {"i32"}));
    bin.call_sites.push_back(testing::cs("s4", "void", {"i32", "i32"}));

    MatchedProgram mp = link_views(src, bin);
    TablePair tp = arity_accuracy(mp);

    CHECK(labels(tp.function) ==
          std::vector<std::string>{"0", "1", "2", "3", "4", "5", "6+"});
    CHECK(row(tp.function, "0").correct == 1);
    CHECK(row(tp.function, "2").wrong == 1);
    CHECK(row(tp.function, "6+").correct == 2); // c7 and d6
    CHECK(row(tp.function, "6+").wrong == 1);   // e6
    CHECK(row(tp.function, "1").correct == 0);
    CHECK(row(tp.function, "1").wrong == 0);

    CHECK(row(tp.call_site, "1").correct == 1);
    CHECK(row(tp.call_site, "4").wrong == 1);
    REQUIRE(tp.function.overall_accuracy().has_value());
    CHECK(*tp.function.overall_accuracy() == doctest::Approx(3.0 / 5.0));
    CHECK(*tp.call_site.overall_accuracy() == doctest::Approx(0.5));
}

TEST_CASE("return voidness flips land in the truth's bucket") {
    ProgramView src;
    src.label = "source";
    src.functions.push_back(testing::fn("keep_void", "void", {}));
    src.functions.push_back(testing::fn("lost_value", "i32", {}));
    src.functions.push_back(testing::fn("grew_value", "void", {}));
    ProgramView bin;
    bin.label = "binary-I";
    bin.functions.push_back(testing::fn("keep_void", "void", {}));
    bin.functions.push_back(testing::fn("lost_value", "void", {}));
    bin.functions.push_back(testing::fn("grew_value", "i64", {}));

    TablePair tp = return_voidness_accuracy(link_views(src, bin));
    CHECK(labels(tp.function) == std::vector<std::string>{"void", "non-void"});
    CHECK(row(tp.function, "void").correct == 1);  // keep_void
    CHECK(row(tp.function, "void").wrong == 1);    // grew_value
    CHECK(row(tp.function, "non-void").wrong == 1); // lost_value
    CHECK(row(tp.function, "non-void").correct == 0);
    CHECK(total_samples(tp.call_site) == 0);
    CHECK_FALSE(tp.call_site.overall_accuracy().has_value());
}

TEST_CASE("positionwise type recovery collapses pointers and penalizes missing slots") {
    ProgramView src;
    src.label = "source";
    src.functions.push_back(testing::fn("p", "void", {"i32", "ptr(i8)", "struct(s)"}));
    src.functions.push_back(testing::fn("q", "void", {"i64"}));
    src.functions.push_back(testing::fn("r", "void", {}));
    ProgramView bin;
    bin.label = "binary-I";
    bin.functions.push_back(testing::fn("p", "void", {"i32", "ptr(void)"}));
    bin.functions.push_back(testing::fn("q", "void", {"i32"}));
    bin.functions.push_back(testing::fn("r", "void", {"i32", "i64"}));

    TablePair tp = preliminary_type_accuracy(link_views(src, bin));
    const BucketTable& t = tp.function;
    // Observed truth buckets only, scalars first, then by category.
    CHECK(labels(t) == std::vector<std::string>{"i32", "i64", "pointer", "aggregate"});
    CHECK(row(t, "i32").correct == 1);
    CHECK(row(t, "pointer").correct == 1);   // any pointee matches at this stage
    CHECK(row(t, "aggregate").wrong == 1);   // truth slot with no recovered slot
    CHECK(row(t, "i64").wrong == 1);
    CHECK(total_samples(t) == 4); // r's invented parameters contribute nothing
}

TEST_CASE("pointer base types are scored only where the truth is a pointer") {
    ProgramView src;
    src.label = "source";
    src.functions.push_back(
        testing::fn("f", "void", {"ptr(i8)", "ptr(struct(t))", "i32", "ptr(void)"}));
    ProgramView bin;
    bin.label = "binary-I";
    bin.functions.push_back(testing::fn("f", "void", {"ptr(i8)", "ptr(i64)", "i32"}));

    TablePair tp = pointer_type_accuracy(link_views(src, bin));
    const BucketTable& t = tp.function;
    CHECK(labels(t) == std::vector<std::string>{"void", "i8", "aggregate"});
    CHECK(row(t, "i8").correct == 1);
    CHECK(row(t, "aggregate").wrong == 1); // ptr(struct(t)) recovered as ptr(i64)
    CHECK(row(t, "void").wrong == 1);      // truth slot past the recovered arity
    CHECK(total_samples(t) == 3);          // the i32 position is not a sample
}

TEST_CASE("relaxed widths compare register footprints") {
    ProgramView src;
    src.label = "source";
    src.functions.push_back(testing::fn("f", "void", {"i8", "b32", "ptr(i8)", "struct(x)"}));
    src.functions.push_back(testing::fn("g", "e16", {}));
    ProgramView bin;
    bin.label = "binary-I";
    bin.functions.push_back(testing::fn("f", "i32", {"i64", "b32", "ptr(void)", "i64"}));
    bin.functions.push_back(testing::fn("g", "b16", {}));

    auto tables = relaxed_type_accuracy(link_views(src, bin));
    REQUIRE(tables.size() == 4);
    const BucketTable& widths = tables[1];      // function-side RelaxedWidth
    const BucketTable& ret_widths = tables[3];  // function-side RelaxedReturnWidth
    CHECK(dimension_name(widths.dimension) == "relaxed_width");
    CHECK(side_name(widths.side) == "function");
    CHECK(dimension_name(ret_widths.dimension) == "relaxed_return_width");

    CHECK(labels(widths) == std::vector<std::string>{"0", "8", "16", "32", "64"});
    CHECK(row(widths, "8").wrong == 1);    // i8 widened to i64
    CHECK(row(widths, "32").correct == 1); // b32 kept
    CHECK(row(widths, "64").correct == 2); // pointer and aggregate both span a register
    CHECK(row(widths, "16").correct == 0);
    CHECK(row(widths, "16").wrong == 0);

    CHECK(row(ret_widths, "0").wrong == 1);    // void return recovered as i32
    CHECK(row(ret_widths, "16").correct == 1); // e16 vs b16 share a width
}

TEST_CASE("one recovered site per duplicate of the original") {
    ProgramView src;
    src.label = "source";
    src.call_sites.push_back(testing::cs("c", "void", {"i32"}));
    ProgramView bin;
    bin.label = "binary-I";
    bin.call_sites.push_back(testing::cs("c_a", "void", {"i32"}));
    bin.call_sites.push_back(testing::cs("c_b", "void", {"i64"}));
    bin.call_sites[0].link_key = "lk_c";
    bin.call_sites[1].link_key = "lk_c";

    TablePair tp = preliminary_type_accuracy(link_views(src, bin));
    CHECK(row(tp.call_site, "i32").correct == 1);
    CHECK(row(tp.call_site, "i32").wrong == 1);
    CHECK(total_samples(tp.call_site) == 2);
}

TEST_CASE("overall accuracy arithmetic") {
    BucketTable t;
    t.rows = {{"a", {3, 1}}, {"b", {1, 3}}, {"c", {0, 0}}};
    REQUIRE(t.overall_accuracy().has_value());
    CHECK(*t.overall_accuracy() == doctest::Approx(0.5));

    BucketTable empty;
    CHECK_FALSE(empty.overall_accuracy().has_value());

    BucketTable seeded_only;
    seeded_only.rows = {{"0", {0, 0}}, {"1", {0, 0}}};
    CHECK_FALSE(seeded_only.overall_accuracy().has_value());
}

TEST_CASE("no matches means empty tables, not errors") {
    ProgramView src;
    src.label = "source";
    src.functions.push_back(testing::fn("only_here", "void", {}));
    ProgramView bin;
    bin.label = "binary-I";
    bin.functions.push_back(testing::fn("only_there", "void", {}));

    auto tables = accuracy_report(link_views(src, bin));
    for (const BucketTable& t : tables) {
        CHECK(total_samples(t) == 0);
        CHECK_FALSE(t.overall_accuracy().has_value());
    }
}
