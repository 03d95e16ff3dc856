#include "doctest.h"

#include "rdeg/table.hpp"

#include <sstream>

using namespace rdeg;

namespace {

const std::string kDataDir = std::string(RDEG_SOURCE_DIR) + "/data";

}  // namespace

TEST_CASE("record parsing") {
    std::istringstream in(
        "ell,h,factors,source\n"
        "631,11,,book\n"
        "163,4,2x2,book\n");
    auto recs = load_records(in);
    REQUIRE(recs.size() == 2);
    CHECK(recs[0].ell == 631);
    CHECK(recs[0].h == 11);
    CHECK_FALSE(recs[0].factors.has_value());
    CHECK(recs[1].factors == std::vector<std::int64_t>{2, 2});
    CHECK(recs[1].source == "book");
}

TEST_CASE("record validation names the line") {
    std::istringstream nonprime("ell,h\n10,3\n");
    try {
        load_records(nonprime);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        CHECK(std::string(e.what()).find("not prime") != std::string::npos);
    }

    std::istringstream dup("ell,h\n631,11\n631,11\n");
    CHECK_THROWS_AS(load_records(dup), ParseError);

    std::istringstream badfac("ell,h,factors\n631,11,2x3\n");
    CHECK_THROWS_AS(load_records(badfac), ParseError);

    std::istringstream zero("ell,h\n631,0\n");
    CHECK_THROWS_AS(load_records(zero), ParseError);
}

TEST_CASE("table rows reproduce the published degree sets") {
    std::istringstream in(
        "ell,h\n"
        "1093,5\n"
        "1373,3\n"
        "2381,11\n");
    auto rows = reproduce_table(load_records(in));
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].ell == 1093);
    CHECK(rows[0].phi_h == 4);
    CHECK(rows[0].r_set == std::vector<std::uint64_t>{3, 7, 13, 21, 39, 91, 273});
    CHECK(rows[1].r_set == std::vector<std::uint64_t>{7, 49, 343});
    CHECK(rows[2].r_set == std::vector<std::uint64_t>{7, 17, 119});
    for (const auto& row : rows) CHECK_FALSE(row.certificates.empty());
}

TEST_CASE("tsv rendering round-trips") {
    auto recs = load_records(kDataDir + "/plus_class_numbers.csv");
    auto rows = reproduce_table(recs);
    std::string tsv = render_table_tsv(rows);
    auto parsed = parse_table_tsv(tsv);
    REQUIRE(parsed.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(parsed[i].ell == rows[i].ell);
        CHECK(parsed[i].h == rows[i].h);
        CHECK(parsed[i].phi_h == rows[i].phi_h);
        CHECK(parsed[i].r_set == rows[i].r_set);
    }
}

TEST_CASE("reproduction is deterministic") {
    auto recs = load_records(kDataDir + "/plus_class_numbers.csv");
    CHECK(render_table_tsv(reproduce_table(recs)) == render_table_tsv(reproduce_table(recs)));
}

TEST_CASE("worked examples") {
    auto examples = load_example_records(kDataDir + "/examples.csv");
    REQUIRE(examples.size() == 11);
    auto report = run_examples(examples);
    CHECK(report.all_pass);

    std::size_t duplicates = 0;
    for (const auto& o : report.outcomes) {
        if (o.duplicate) ++duplicates;
        CHECK(o.asserted_certified);
    }
    CHECK(duplicates == 1);  // the repeated conductor is noted, not failed

    // Spot-check two outcomes that must be exact.
    for (const auto& o : report.outcomes) {
        if (o.modulus == 163) {
            CHECK(o.exact);
            CHECK(o.certified == std::vector<std::uint64_t>{3, 9, 27});
        }
        if (o.modulus == 96) {
            CHECK(o.exact);
            CHECK(o.certified == std::vector<std::uint64_t>{2});
        }
    }
}

TEST_CASE("composite modulus requires a shape") {
    std::istringstream in(
        "modulus,h,factors,shape,expected,route\n"
        "96,9,,,2,two-power\n");
    CHECK_THROWS_AS(load_example_records(in), ParseError);
}

TEST_CASE("jsonl rendering is valid json per line") {
    std::istringstream in("ell,h\n761,3\n");
    auto rows = reproduce_table(load_records(in));
    std::istringstream lines(render_table_jsonl(rows));
    std::string line;
    std::size_t count = 0;
    while (std::getline(lines, line)) {
        auto j = nlohmann::json::parse(line);
        CHECK(j["ell"] == 761);
        CHECK(j["r_set"] == nlohmann::json::array({5, 19, 95}));
        ++count;
    }
    CHECK(count == 1);
}
