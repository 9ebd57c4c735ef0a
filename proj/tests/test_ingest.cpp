#include <doctest.h>

#include <algorithm>
#include <fstream>

#include "cfie/errors.hpp"
#include "cfie/link.hpp"
#include "cfie/view.hpp"
#include "test_helpers.hpp"

using namespace cfie;

namespace {

const char* kTypicalView = R"json({
  "label": "source",
  "functions": [
    {"id": "f1", "link_key": "main", "return": "i32",
     "params": ["ptr(void)"], "variadic": false, "address_taken": true},
    {"id": "f2", "link_key": "handler", "return": "void",
     "params": ["i32", "ptr(struct(evt))"], "variadic": false, "address_taken": false}
  ],
  "call_sites": [
    {"id": "c1", "link_key": "a.c:10:3", "expects_return": "void", "args": ["i32"]}
  ]
})json";

} // namespace

TEST_CASE("parse_view handles the minimal and the typical payload") {
    ProgramView empty = parse_view(R"({"label":"source","functions":[],"call_sites":[]})");
    CHECK(empty.label == "source");
    CHECK(empty.functions.empty());
    CHECK(empty.call_sites.empty());

    ProgramView v = parse_view(kTypicalView);
    REQUIRE(v.functions.size() == 2);
    REQUIRE(v.call_sites.size() == 1);
    CHECK(v.functions[0].fn_id == "f1");
    CHECK(v.functions[0].params[0].kind() == TypeDescriptor::Kind::Pointer);
    CHECK(v.functions[0].params[0].pointee().is_void());
    CHECK(v.functions[1].params[1].pointee().tag() == "evt");
    CHECK_FALSE(v.functions[1].address_taken);
    CHECK(v.address_taken_count() == 1);
    CHECK(v.call_sites[0].link_key == "a.c:10:3");
}

TEST_CASE("schema violations name the offending path") {
    auto message_of = [](const char* payload) {
        try {
            parse_view(payload);
        } catch (const InputError& e) {
            return std::string(e.what());
        }
        return std::string();
    };

    CHECK(message_of(R"({"functions":[],"call_sites":[]})").find("label") != std::string::npos);
    CHECK(message_of(R"({"label":"elf","functions":[],"call_sites":[]})").find("elf") !=
          std::string::npos);
    CHECK(message_of(R"({"label":"source","functions":[{}],"call_sites":[]})")
              .find("functions[0]") != std::string::npos);
    std::string msg = message_of(
        R"({"label":"source","functions":[],"call_sites":[
            {"id":"c1","link_key":"k","expects_return":"void","args":["i32",7]}]})");
    CHECK(msg.find("call_sites[0].args[1]") != std::string::npos);

    CHECK_THROWS_AS(parse_view("not json"), SchemaError);
    CHECK_THROWS_AS(parse_view(R"({"label":"source","functions":{},"call_sites":[]})"),
                    SchemaError);
    CHECK_THROWS_AS(parse_view(R"({"label":"source","functions":[],"call_sites":[],"x":1})"),
                    SchemaError);
}

TEST_CASE("json syntax errors carry line and column") {
    try {
        parse_view("{\n  \"label\": \"source\",\n  broken\n}");
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(std::string(e.what()).find("3:") != std::string::npos);
    }
}

TEST_CASE("type grammar errors surface with their location") {
    try {
        parse_view(R"({"label":"source","functions":[
            {"id":"f1","link_key":"k","return":"i31","params":[],
             "variadic":false,"address_taken":true}],"call_sites":[]})");
        FAIL("expected TypeGrammarError");
    } catch (const TypeGrammarError& e) {
        CHECK(std::string(e.what()).find("i31") != std::string::npos);
        CHECK(e.offset() == 1);
    }
}

TEST_CASE("duplicate identifiers are rejected") {
    CHECK_THROWS_AS(parse_view(R"({"label":"source","functions":[
        {"id":"f1","link_key":"a","return":"void","params":[],"variadic":false,"address_taken":true},
        {"id":"f1","link_key":"b","return":"void","params":[],"variadic":false,"address_taken":true}],
        "call_sites":[]})"),
                    DuplicateIdError);
    CHECK_THROWS_AS(parse_view(R"({"label":"source","functions":[
        {"id":"f1","link_key":"a","return":"void","params":[],"variadic":false,"address_taken":true},
        {"id":"f2","link_key":"a","return":"void","params":[],"variadic":false,"address_taken":true}],
        "call_sites":[]})"),
                    DuplicateIdError);
    // Duplicate call-site link keys are the one-to-many shape: fine off-source.
    const char* dup_cs = R"({"label":"%s","functions":[],"call_sites":[
        {"id":"c1","link_key":"k","expects_return":"void","args":[]},
        {"id":"c2","link_key":"k","expects_return":"void","args":[]}]})";
    std::string binary_payload(dup_cs);
    binary_payload.replace(binary_payload.find("%s"), 2, "binary-I");
    CHECK_NOTHROW(parse_view(binary_payload));
    std::string source_payload(dup_cs);
    source_payload.replace(source_payload.find("%s"), 2, "source");
    CHECK_THROWS_AS(parse_view(source_payload), DuplicateIdError);
}

TEST_CASE("lenient mode downgrades unknown fields to warnings") {
    const char* payload = R"({"label":"source","functions":[
        {"id":"f1","link_key":"a","return":"void","params":[],
         "variadic":false,"address_taken":true,"dwarf_offset":71}],
        "call_sites":[],"producer":"toolchain 3.1"})";
    CHECK_THROWS_AS(parse_view(payload), SchemaError);

    ParseOptions lenient;
    lenient.lenient = true;
    std::vector<std::string> warnings;
    ProgramView v = parse_view(payload, lenient, &warnings);
    CHECK(v.functions.size() == 1);
    REQUIRE(warnings.size() == 2);
    std::string joined = warnings[0] + "|" + warnings[1];
    CHECK(joined.find("producer") != std::string::npos);
    CHECK(joined.find("dwarf_offset") != std::string::npos);
}

TEST_CASE("serialize then parse is the identity on random views") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
        ProgramView v = testing::random_view(seed, 40, 25);
        ProgramView back = parse_view(serialize_view(v));
        CHECK(back == v);
        // And serialization itself is canonical.
        CHECK(serialize_view(back) == serialize_view(v));
    }
}

TEST_CASE("load_view_file prefixes the path to diagnostics") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "cfie_ingest_test";
    fs::create_directories(dir);
    fs::path good = dir / "good.json";
    fs::path bad = dir / "bad.json";
    {
        std::ofstream(good) << kTypicalView;
        std::ofstream(bad) << R"({"label":"source")";
    }
    CHECK(load_view_file(good).functions.size() == 2);
    try {
        load_view_file(bad);
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(std::string(e.what()).find("bad.json") != std::string::npos);
    }
    CHECK_THROWS_AS(load_view_file(dir / "missing.json"), InputError);
    fs::remove_all(dir);
}

TEST_CASE("link_views pairs by link key") {
    SUBCASE("identical views form a total bijection") {
        ProgramView v = testing::random_view(42, 60, 30);
        MatchedProgram mp = link_views(v, v);
        CHECK(mp.fn_pairs.size() == v.functions.size());
        CHECK(mp.cs_map.size() == v.call_sites.size());
        CHECK(mp.unmatched_fns.source == 0);
        CHECK(mp.unmatched_fns.binary == 0);
        CHECK(mp.unmatched_css.source == 0);
        CHECK(mp.unmatched_css.binary == 0);
        for (const auto& [src, bin] : mp.fn_pairs) CHECK(src == bin);
    }

    SUBCASE("missing counterparts are counted, not fatal") {
        ProgramView src = testing::worked_example_source();
        ProgramView bin = testing::worked_example_binary();
        bin.functions.erase(bin.functions.begin()); // drop A
        bin.functions.push_back(testing::fn("X", "void", {"i64"}));
        MatchedProgram mp = link_views(src, bin);
        CHECK(mp.fn_pairs.size() == 7);
        CHECK(mp.unmatched_fns.source == 1); // A
        CHECK(mp.unmatched_fns.binary == 1); // X
    }

    SUBCASE("one source call-site collects many binary sites") {
        ProgramView src = testing::worked_example_source();
        ProgramView bin = testing::worked_example_binary();
        CallSiteSignature dup = bin.call_sites[0];
        dup.cs_id = "site2";
        bin.call_sites.push_back(dup);
        MatchedProgram mp = link_views(src, bin);
        REQUIRE(mp.cs_map.count("site") == 1);
        CHECK(mp.cs_map.at("site").size() == 2);
        CHECK(mp.unmatched_css.binary == 0);
    }

    SUBCASE("fn_pairs is a partial bijection") {
        ProgramView src = testing::random_view(7, 50, 10, "source");
        ProgramView bin = testing::random_view(8, 50, 10, "binary-I");
        MatchedProgram mp = link_views(src, bin);
        CHECK(mp.fn_pairs.size() <= std::min(src.functions.size(), bin.functions.size()));
        std::vector<std::string> seen_src, seen_bin;
        for (const auto& [s, b] : mp.fn_pairs) {
            seen_src.push_back(s);
            seen_bin.push_back(b);
        }
        std::sort(seen_src.begin(), seen_src.end());
        std::sort(seen_bin.begin(), seen_bin.end());
        CHECK(std::adjacent_find(seen_src.begin(), seen_src.end()) == seen_src.end());
        CHECK(std::adjacent_find(seen_bin.begin(), seen_bin.end()) == seen_bin.end());
        CHECK(mp.fn_pairs.size() + mp.unmatched_fns.source == src.functions.size());
        CHECK(mp.fn_pairs.size() + mp.unmatched_fns.binary == bin.functions.size());
    }
}
