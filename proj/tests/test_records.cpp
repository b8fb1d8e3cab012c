#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <vector>

#include "qes/records.hpp"

using namespace qes;

namespace {

ResultRecord sample_ok() {
    ResultRecord r;
    r.grid_index = 0;
    r.status = "ok";
    r.model = "isotonic";
    r.ell = 0;
    r.n = 1;
    r.free_name = "g";
    r.free_value = 20.0;
    r.params = {{"a", 1.0}, {"omega", 1.0}};
    r.energy = -6.5;
    r.roots = {1.25};
    r.c0 = 0.5;
    r.bae_residual_norm = 0.0009765625;  // 2^-10, exact in decimal
    r.oracle_c0_dev = 0.0;
    r.node_count = 1;
    return r;
}

ResultRecord sample_unsolved() {
    ResultRecord r;
    r.grid_index = 3;
    r.status = "unsolved";
    r.reason = "no real level in the searched region";
    r.model = "anharmonic";
    r.ell = 2;
    r.n = 0;
    r.free_name = "omega";
    return r;
}

}  // namespace

TEST_CASE("double formatting") {
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(-6.5) == "-6.5");
    CHECK(format_double(0.0009765625) == "0.0009765625");
    CHECK(format_double(std::nan("")) == "null");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "null");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "null");

    // 17 significant digits reproduce any double bit-for-bit
    for (double x : {1.0 / 3.0, 1e-9, 6.02214076e23, 3.141592653589793,
                     std::numeric_limits<double>::max(),
                     std::numeric_limits<double>::min(),
                     std::numeric_limits<double>::denorm_min(), -0.0}) {
        const std::string s = format_double(x);
        char* end = nullptr;
        const double back = std::strtod(s.c_str(), &end);
        CHECK(*end == '\0');
        CHECK(std::memcmp(&back, &x, sizeof x) == 0);
    }
}

TEST_CASE("JSON byte golden") {
    const std::string expected =
        "[\n"
        "{\"grid_index\":0,\"status\":\"ok\",\"reason\":\"\",\"model\":\"isotonic\","
        "\"ell\":0,\"n\":1,\"free_name\":\"g\",\"free_value\":20,"
        "\"params\":{\"a\":1,\"omega\":1},\"energy\":-6.5,\"roots\":[1.25],"
        "\"c0\":0.5,\"bae_residual_norm\":0.0009765625,\"oracle_c0_dev\":0,"
        "\"fd_energy_dev\":null,\"node_count\":1,\"wall_time_ms\":null},\n"
        "{\"grid_index\":3,\"status\":\"unsolved\","
        "\"reason\":\"no real level in the searched region\","
        "\"model\":\"anharmonic\",\"ell\":2,\"n\":0,\"free_name\":\"omega\","
        "\"free_value\":null,\"params\":{},\"energy\":null,\"roots\":[],"
        "\"c0\":null,\"bae_residual_norm\":null,\"oracle_c0_dev\":null,"
        "\"fd_energy_dev\":null,\"node_count\":null,\"wall_time_ms\":null}\n"
        "]\n";
    CHECK(to_json({sample_ok(), sample_unsolved()}) == expected);
}

TEST_CASE("CSV byte golden") {
    const std::string expected =
        "grid_index,status,reason,model,ell,n,free_name,free_value,params,"
        "energy,roots,c0,bae_residual_norm,oracle_c0_dev,fd_energy_dev,"
        "node_count,wall_time_ms\n"
        "0,ok,,isotonic,0,1,g,20,a=1;omega=1,-6.5,1.25,0.5,0.0009765625,0,,1,\n"
        "3,unsolved,no real level in the searched region,anharmonic,2,0,omega,"
        ",,,,,,,,,\n";
    CHECK(to_csv({sample_ok(), sample_unsolved()}) == expected);
}

TEST_CASE("empty record sets") {
    CHECK(to_json({}) == "[]\n");
    const std::string csv = to_csv({});
    CHECK(csv ==
          "grid_index,status,reason,model,ell,n,free_name,free_value,params,"
          "energy,roots,c0,bae_residual_norm,oracle_c0_dev,fd_energy_dev,"
          "node_count,wall_time_ms\n");
    CHECK(records_from_json("[]\n").empty());
    CHECK(records_from_json("[]").empty());
    CHECK(records_from_csv(csv).empty());
}

TEST_CASE("JSON roundtrip is lossless") {
    ResultRecord awkward = sample_ok();
    awkward.free_value = 1.0 / 3.0;
    awkward.energy = -1e-9;
    awkward.roots = {-2.718281828459045, 0.1, 6.02214076e23};
    awkward.c0 = std::numeric_limits<double>::denorm_min();
    awkward.wall_time_ms = 17.25;
    const std::vector<ResultRecord> rs{awkward, sample_unsolved(), sample_ok()};
    CHECK(records_from_json(to_json(rs)) == rs);
}

TEST_CASE("CSV roundtrip is lossless, including quoting") {
    ResultRecord nasty = sample_unsolved();
    nasty.reason = "solver said \"no\", twice\nand gave up";
    ResultRecord awkward = sample_ok();
    awkward.free_value = 1.0 / 3.0;
    awkward.roots = {-0.1, 1e-17};
    const std::vector<ResultRecord> rs{awkward, nasty};
    const std::string csv = to_csv(rs);
    CHECK(records_from_csv(csv) == rs);

    // quoted cells contain the raw comma/quote/newline bytes
    CHECK(csv.find("\"solver said \"\"no\"\", twice\nand gave up\"") !=
          std::string::npos);

    // windows row separators parse to the same records (no embedded
    // newlines here, so a blanket conversion only touches row ends)
    const std::vector<ResultRecord> plain{sample_ok(), sample_unsolved()};
    std::string crlf;
    for (char ch : to_csv(plain)) {
        if (ch == '\n') crlf += '\r';
        crlf += ch;
    }
    CHECK(records_from_csv(crlf) == plain);
}

TEST_CASE("JSON parse applies defaults and accepts nulls") {
    const auto rs = records_from_json(
        R"([{"model":"softcore","energy":null,"free_value":2.5}])");
    REQUIRE(rs.size() == 1);
    CHECK(rs[0].grid_index == 0);
    CHECK(rs[0].status == "ok");
    CHECK(rs[0].reason.empty());
    CHECK(rs[0].model == "softcore");
    CHECK(rs[0].ell == 0);
    CHECK(rs[0].n == 0);
    CHECK(!rs[0].energy);
    CHECK(rs[0].free_value == 2.5);
    CHECK(rs[0].params.empty());
    CHECK(rs[0].roots.empty());
    CHECK(!rs[0].node_count);
}

TEST_CASE("JSON parse rejects malformed input") {
    CHECK_THROWS_AS(records_from_json("{"), std::invalid_argument);
    CHECK_THROWS_AS(records_from_json("{}"), std::invalid_argument);
    CHECK_THROWS_AS(records_from_json("[1,2]"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(records_from_json("nope"),
                         doctest::Contains("bad JSON"), std::invalid_argument);
}

TEST_CASE("CSV parse rejects malformed input") {
    const std::string header = to_csv({});
    CHECK_THROWS_WITH_AS(records_from_csv(""), "missing CSV header",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(records_from_csv("a,b,c\n"),
                         "unexpected CSV column count", std::invalid_argument);
    std::string wrong = header;
    wrong.replace(0, 10, "grid_INDEX");
    CHECK_THROWS_WITH_AS(records_from_csv(wrong),
                         "unexpected CSV header 'grid_INDEX'",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(records_from_csv(header + "1,ok,,m\n"),
                         "CSV row 1 has wrong cell count",
                         std::invalid_argument);
    CHECK_THROWS_AS(records_from_csv(header + "\"1,ok"), std::invalid_argument);

    std::string bad_num = to_csv({sample_ok()});
    const auto pos = bad_num.find("-6.5");
    bad_num.replace(pos, 4, "zzzz");
    CHECK_THROWS_WITH_AS(records_from_csv(bad_num),
                         "bad numeric field 'zzzz'", std::invalid_argument);

    std::string bad_params = to_csv({sample_ok()});
    const auto ppos = bad_params.find("a=1;omega=1");
    bad_params.replace(ppos, 11, "a-1;omega-1");
    CHECK_THROWS_AS(records_from_csv(bad_params), std::invalid_argument);

    // blank trailing line is fine
    CHECK(records_from_csv(to_csv({sample_ok()}) + "\n").size() == 1);
}
