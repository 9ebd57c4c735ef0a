#include <doctest.h>

#include <limits>

#include "cfie/errors.hpp"
#include "cfie/perturb.hpp"
#include "test_helpers.hpp"

using namespace cfie;

TEST_CASE("zero rates copy the view and only relabel it") {
    ProgramView truth = testing::random_view(150, 40, 30);
    PerturbConfig cfg;
    cfg.seed = 99;
    ProgramView out = perturb_view(truth, cfg);
    CHECK(out.label == "synthetic");
    CHECK(out.functions == truth.functions);
    CHECK(out.call_sites == truth.call_sites);

    // With nothing to decide, the stream is never consulted.
    cfg.seed = 100;
    CHECK(perturb_view(truth, cfg).functions == out.functions);
    CHECK(perturb_view(truth, cfg).call_sites == out.call_sites);
}

TEST_CASE("the same seed reproduces the same view") {
    ProgramView truth = testing::random_view(151, 60, 40);
    PerturbConfig cfg;
    cfg.seed = 7;
    cfg.arity_err = 0.3;
    cfg.type_err = 0.3;
    cfg.return_voidness_err = 0.2;
    cfg.drop_fn = 0.1;
    cfg.drop_cs = 0.1;
    cfg.split_cs = 0.2;
    ProgramView a = perturb_view(truth, cfg);
    ProgramView b = perturb_view(truth, cfg);
    CHECK(a == b);
    CHECK(serialize_view(a) == serialize_view(b));

    cfg.seed = 8;
    CHECK(perturb_view(truth, cfg) != a);
}

TEST_CASE("drop rates of one empty the respective list") {
    ProgramView truth = testing::random_view(152, 25, 25);
    PerturbConfig cfg;
    cfg.drop_fn = 1.0;
    ProgramView no_fns = perturb_view(truth, cfg);
    CHECK(no_fns.functions.empty());
    CHECK(no_fns.call_sites.size() == truth.call_sites.size());

    cfg = PerturbConfig{};
    cfg.drop_cs = 1.0;
    ProgramView no_css = perturb_view(truth, cfg);
    CHECK(no_css.call_sites.empty());
    CHECK(no_css.functions.size() == truth.functions.size());
}

TEST_CASE("certain type error rewrites every position with a different type") {
    ProgramView truth = testing::random_view(153, 30, 20);
    PerturbConfig cfg;
    cfg.seed = 3;
    cfg.type_err = 1.0;
    ProgramView out = perturb_view(truth, cfg);
    REQUIRE(out.functions.size() == truth.functions.size());
    for (std::size_t f = 0; f < truth.functions.size(); ++f) {
        const auto& want = truth.functions[f].params;
        const auto& got = out.functions[f].params;
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < want.size(); ++i) {
            CHECK_FALSE(type_equal_mcfi(want[i], got[i]));
        }
        CHECK(out.functions[f].return_type == truth.functions[f].return_type);
    }
    for (std::size_t c = 0; c < truth.call_sites.size(); ++c) {
        const auto& want = truth.call_sites[c].args;
        const auto& got = out.call_sites[c].args;
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < want.size(); ++i) {
            CHECK_FALSE(type_equal_mcfi(want[i], got[i]));
        }
    }
}

TEST_CASE("certain split duplicates every site right after its original") {
    ProgramView truth = testing::random_view(154, 5, 12);
    PerturbConfig cfg;
    cfg.split_cs = 1.0;
    ProgramView out = perturb_view(truth, cfg);
    REQUIRE(out.call_sites.size() == truth.call_sites.size() * 2);
    for (std::size_t i = 0; i < truth.call_sites.size(); ++i) {
        const CallSiteSignature& original = out.call_sites[2 * i];
        const CallSiteSignature& dup = out.call_sites[2 * i + 1];
        CHECK(original == truth.call_sites[i]);
        CHECK(dup.cs_id == truth.call_sites[i].cs_id + "__dup" + std::to_string(i + 1));
        CHECK(dup.link_key == original.link_key);
        CHECK(dup.args == original.args);
        CHECK(dup.expects_return == original.expects_return);
    }
}

TEST_CASE("duplicate ids skip names the input already uses") {
    ProgramView truth;
    truth.label = "source";
    truth.call_sites.push_back(testing::cs("c", "void", {}));
    truth.call_sites.push_back(testing::cs("c__dup1", "void", {}));
    truth.call_sites[1].link_key = "lk_other";
    PerturbConfig cfg;
    cfg.split_cs = 1.0;
    ProgramView out = perturb_view(truth, cfg);
    REQUIRE(out.call_sites.size() == 4);
    CHECK(out.call_sites[0].cs_id == "c");
    CHECK(out.call_sites[1].cs_id == "c__dup2"); // "c__dup1" was taken
    CHECK(out.call_sites[2].cs_id == "c__dup1");
    CHECK(out.call_sites[3].cs_id == "c__dup1__dup3");
    CHECK_NOTHROW(validate_view(out)); // ids stayed unique
}

TEST_CASE("certain voidness error flips every return") {
    ProgramView truth;
    truth.label = "source";
    truth.functions.push_back(testing::fn("v", "void", {"i32"}));
    truth.functions.push_back(testing::fn("n", "ptr(i8)", {}));
    truth.call_sites.push_back(testing::cs("cv", "void", {}));
    truth.call_sites.push_back(testing::cs("cn", "f32", {}));
    PerturbConfig cfg;
    cfg.return_voidness_err = 1.0;
    ProgramView out = perturb_view(truth, cfg);
    CHECK(out.functions[0].return_type == testing::t("i64"));
    CHECK(out.functions[1].return_type.is_void());
    CHECK(out.call_sites[0].expects_return == testing::t("i64"));
    CHECK(out.call_sites[1].expects_return.is_void());
}

TEST_CASE("arity error rate lands near its target frequency") {
    ProgramView truth;
    truth.label = "source";
    for (int i = 0; i < 4000; ++i) {
        truth.functions.push_back(testing::fn("f" + std::to_string(i), "void", {"i64"}));
    }
    PerturbConfig cfg;
    cfg.seed = 42;
    cfg.arity_err = 0.2;
    ProgramView out = perturb_view(truth, cfg);
    REQUIRE(out.functions.size() == truth.functions.size());
    std::size_t changed = 0;
    for (const auto& fn : out.functions) {
        if (fn.params.size() != 1) ++changed;
    }
    double fraction = double(changed) / double(out.functions.size());
    CHECK(fraction > 0.17);
    CHECK(fraction < 0.23);
}

TEST_CASE("config parsing") {
    PerturbConfig cfg = parse_perturb_config("{}");
    CHECK(cfg.seed == 0);
    CHECK(cfg.arity_err == 0.0);
    CHECK(cfg.split_cs == 0.0);

    cfg = parse_perturb_config(R"({"seed": 9, "arity_err": 0.25, "type_err": 0.5,
        "return_voidness_err": 0.1, "drop_fn": 0.0, "drop_cs": 1, "split_cs": 0.75})");
    CHECK(cfg.seed == 9);
    CHECK(cfg.arity_err == 0.25);
    CHECK(cfg.type_err == 0.5);
    CHECK(cfg.return_voidness_err == 0.1);
    CHECK(cfg.drop_fn == 0.0);
    CHECK(cfg.drop_cs == 1.0);
    CHECK(cfg.split_cs == 0.75);

    CHECK_THROWS_AS(parse_perturb_config(R"({"typo_err": 0.5})"), InputError);
    CHECK_THROWS_AS(parse_perturb_config(R"({"arity_err": 1.5})"), InputError);
    CHECK_THROWS_AS(parse_perturb_config(R"({"arity_err": -0.1})"), InputError);
    CHECK_THROWS_AS(parse_perturb_config(R"({"arity_err": "high"})"), InputError);
    CHECK_THROWS_AS(parse_perturb_config(R"({"seed": 1.5})"), InputError);
    CHECK_THROWS_AS(parse_perturb_config(R"({"seed": -3})"), InputError);
    CHECK_THROWS_AS(parse_perturb_config("[]"), InputError);
    CHECK_THROWS_AS(parse_perturb_config("{nope"), InputError);
}

TEST_CASE("out-of-range rates are rejected before any work") {
    ProgramView truth = testing::random_view(155, 3, 3);
    PerturbConfig cfg;
    cfg.type_err = 2.0;
    CHECK_THROWS_AS(perturb_view(truth, cfg), InputError);
    cfg.type_err = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(validate_config(cfg), InputError);
}
