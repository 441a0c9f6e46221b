#include "cantorq/commands.hpp"

#include <catch_amalgamated.hpp>

using namespace cantorq;
using namespace cantorq::cli;

namespace {

Options opts(Format f = Format::text) {
    Options o;
    o.format = f;
    return o;
}

std::string sample(const char* name) { return std::string(CANTORQ_SAMPLES_DIR) + "/" + name; }

}  // namespace

TEST_CASE("parse_range and parse_ifs") {
    CHECK(parse_range("9..13") == std::pair<std::uint64_t, std::uint64_t>{9, 13});
    CHECK(parse_range("4..4") == std::pair<std::uint64_t, std::uint64_t>{4, 4});
    for (const char* bad : {"13..9", "0..3", "3", "a..b", "1..", "..4", "-1..3"}) {
        INFO(bad);
        CHECK_THROWS_AS(parse_range(bad), std::invalid_argument);
    }
    const Ifs ifs = parse_ifs("1/2,1/3,1/3");
    CHECK(ifs.p1 == Rational(1, 2));
    CHECK_FALSE(ifs.is_standard());
    CHECK(parse_ifs("1/4,1/4,1/2").is_standard());
    CHECK_THROWS_AS(parse_ifs("1/2,1/3"), std::invalid_argument);
    CHECK_THROWS_AS(parse_ifs("1/2,2/3,1/2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_format("xml"), std::invalid_argument);
}

TEST_CASE("moments in every format") {
    const Output text = run("moments", opts());
    CHECK(text.exit_code == kOk);
    CHECK(text.out.find("16/153") != std::string::npos);
    CHECK(text.out.find("28/51") != std::string::npos);

    const Json j = Json::parse(run("moments", opts(Format::json)).out);
    CHECK(j["command"] == "moments");
    CHECK(j["exact"] == true);
    CHECK(rational_from_json(j["results"]["variance"]) == Rational(16, 153));
    CHECK(rational_from_json(j["results"]["mean"]) == Rational(2, 3));

    CHECK(run("moments", opts(Format::csv)).out.find("2/3") != std::string::npos);
    CHECK(run("moments", opts(Format::dot)).exit_code == kInputError);
}

TEST_CASE("vn and count") {
    Options o = opts(Format::csv);
    o.range = std::pair<std::uint64_t, std::uint64_t>{9, 13};
    const Output vn = run("vn", o);
    CHECK(vn.exit_code == kOk);
    CHECK(vn.out.find("9,9805/40108032,") != std::string::npos);
    CHECK(vn.out.find("13,3481/40108032,") != std::string::npos);

    o.format = Format::json;
    const Json j = Json::parse(run("vn", o).out);
    REQUIRE(j["results"]["values"].size() == 5);
    CHECK(rational_from_json(j["results"]["values"][1]["error"]) == Rational(7969, 40108032));

    Options c = opts();
    c.n = 70;
    CHECK(run("count", c).out == "card(C_70) = 6435\n");
    c.n.reset();
    c.range = std::pair<std::uint64_t, std::uint64_t>{1, 82};
    c.format = Format::json;
    const Json counts = Json::parse(run("count", c).out)["results"]["counts"];
    CHECK(counts.size() == 82);
    CHECK(counts[69]["count"] == 6435);

    Options none = opts();
    CHECK(run("vn", none).exit_code == kInputError);
    Options both = opts();
    both.n = 3;
    both.range = std::pair<std::uint64_t, std::uint64_t>{1, 2};
    CHECK(run("count", both).exit_code == kInputError);
}

TEST_CASE("sets prints the labelled family") {
    Options o = opts();
    o.n = 10;
    const Output r = run("sets", o);
    CHECK(r.exit_code == kOk);
    CHECK(r.out.find("number of optimal sets = 3") != std::string::npos);
    CHECK(r.out.find("α_{10,3} = {11, 121, 1221, 1222, 211, 212, 221, 2221, 22221, 22222}") != std::string::npos);

    o.n = 9;
    CHECK(run("sets", o).out.find("α_{9} = {") != std::string::npos);

    o.n = 70;
    o.enumerate_limit = 10;
    const Output skipped = run("sets", o);
    CHECK(skipped.exit_code == kOk);
    CHECK(skipped.out.find("enumeration skipped") != std::string::npos);
}

TEST_CASE("sets json round-trips through evaluate for n <= 13") {
    for (std::uint64_t n = 1; n <= 13; ++n) {
        Options o = opts(Format::json);
        o.n = n;
        const Output sets = run("sets", o);
        REQUIRE(sets.exit_code == kOk);
        const Json j = Json::parse(sets.out);
        CHECK(rational_from_json(j["results"]["error"]) == optimal_error(n));

        const Output ev = cmd_evaluate(o, sets.out);
        REQUIRE(ev.exit_code == kOk);
        const Json e = Json::parse(ev.out);
        const Rational lo = rational_from_json(e["results"]["lower"]);
        const Rational hi = rational_from_json(e["results"]["upper"]);
        INFO("n = " << n);
        CHECK(lo <= optimal_error(n));
        CHECK(optimal_error(n) <= hi);
        CHECK(hi - lo <= o.gap);
    }
}

TEST_CASE("evaluate reads sample files") {
    Options o = opts();
    o.codebook_file = sample("mean.json");
    CHECK(run("evaluate", o).out.find("distortion = 16/153") != std::string::npos);

    o.codebook_file = sample("midpoint.json");
    CHECK(run("evaluate", o).out.find("9/68") != std::string::npos);

    o.codebook_file = sample("perturbed.json");
    o.format = Format::json;
    const Json j = Json::parse(run("evaluate", o).out);
    CHECK(rational_from_json(j["results"]["lower"]) > Rational(13, 612));

    o.codebook_file = sample("missing.json");
    CHECK(run("evaluate", o).exit_code == kInputError);
    o.codebook_file.clear();
    CHECK(run("evaluate", o).exit_code == kInputError);
}

TEST_CASE("genealogy formats") {
    Options o = opts(Format::dot);
    o.from = 9;
    o.to = 12;
    const Output dot = run("genealogy", o);
    CHECK(dot.exit_code == kOk);
    CHECK(dot.out.rfind("digraph genealogy {", 0) == 0);
    std::size_t arrows = 0;
    for (std::size_t p = dot.out.find(" -> "); p != std::string::npos; p = dot.out.find(" -> ", p + 1)) ++arrows;
    CHECK(arrows == 12);
    CHECK(dot.out.find("a9_1 -> a10_3") != std::string::npos);
    CHECK(dot.out.find("a10_2 -> a11_3") != std::string::npos);

    o.format = Format::json;
    const Json j = Json::parse(run("genealogy", o).out);
    CHECK(j["results"]["edges"].size() == 12);
    CHECK(j["results"]["stages"].size() == 4);

    o.format = Format::csv;
    CHECK(run("genealogy", o).out.find("α_{11,2},α_{12},") != std::string::npos);

    o.from = 60;
    o.to = 72;
    o.enumerate_limit = 10;
    CHECK(run("genealogy", o).exit_code == kResourceLimit);

    o.from = 5;
    o.to = 3;
    CHECK(run("genealogy", o).exit_code == kInputError);
}

TEST_CASE("oracle command") {
    Options o = opts();
    o.n = 4;
    o.depth = 8;
    const Output r = run("oracle", o);
    CHECK(r.exit_code == kOk);
    CHECK(r.out.rfind("PASS", 0) == 0);

    o.format = Format::json;
    const Json j = Json::parse(run("oracle", o).out);
    CHECK(j["results"]["status"] == "PASS");
    CHECK(rational_from_json(j["results"]["engine_error"]) == optimal_error(4));

    o.mode = OracleMode::fast;
    const Json f = Json::parse(run("oracle", o).out);
    CHECK(f["exact"] == false);
    CHECK(f["results"]["status"] == "PASS");

    o.mode = OracleMode::exact;
    o.format = Format::text;
    o.ifs = parse_ifs("1/2,1/3,1/3");
    o.n = 2;
    CHECK(run("oracle", o).out.rfind("HEURISTIC", 0) == 0);

    Options bad = opts();
    bad.n = 300;
    bad.depth = 8;
    CHECK(run("oracle", bad).exit_code == kInputError);
    bad.n = 3;
    bad.depth = 13;
    CHECK(run("oracle", bad).exit_code == kInputError);
}

TEST_CASE("unknown commands are input errors") { CHECK(run("frobnicate", opts()).exit_code == kInputError); }

TEST_CASE("output is deterministic", "[property]") {
    Options o = opts(Format::json);
    o.n = 16;
    CHECK(run("sets", o).out == run("sets", o).out);
    Options g = opts(Format::dot);
    g.from = 14;
    g.to = 18;
    CHECK(run("genealogy", g).out == run("genealogy", g).out);
}
