#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "qkdrates/capacity.hpp"
#include "qkdrates/core_math.hpp"
#include "qkdrates/keyrates.hpp"

using namespace qkdrates;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    Run r;
    r.code = cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace

TEST_CASE("rate rows") {
    const Run r = run({"rate", "--protocol", "bb84", "--m", "1", "--q", "0", "--p", "0.05"});
    REQUIRE(r.code == 0);
    const auto t = csv(r.out);
    REQUIRE(t.size() == 2);
    CHECK(t[0] == std::vector<std::string>{"p", "q", "Q", "rate", "i_xy", "i_xe"});
    CHECK(std::abs(std::stod(t[1][3]) - (1 - 2 * binary_entropy(0.05))) < 1e-7);
    CHECK(t[1][3] == "0.4272061");

    const Run six = run({"rate", "--protocol", "six-state", "--m", "1", "--q", "0", "--p", "0"});
    REQUIRE(six.code == 0);
    CHECK(csv(six.out)[1][3] == "1.0000000");
}

TEST_CASE("optimized iterated rate is positive near p = 0.12") {
    const Run r = run({"rate", "--protocol", "bb84", "--iterated", "--m1", "3", "--m2", "3", "--optimize-q", "--p", "0.12"});
    REQUIRE(r.code == 0);
    CHECK(std::stod(csv(r.out)[1][3]) > 0.0);
}

TEST_CASE("p ranges") {
    const Run r = run({"rate", "--m", "2", "--q", "0.1", "--p-range", "0.02:0.1:0.02"});
    REQUIRE(r.code == 0);
    const auto t = csv(r.out);
    REQUIRE(t.size() == 6);
    CHECK(t[1][0] == "0.0200000");
    CHECK(t[5][0] == "0.1000000");
    CHECK(run({"rate", "--p-range", "0.1:0.05:0.01"}).code == 2);
    CHECK(run({"rate", "--p-range", "0.1:x:0.01"}).code == 2);
}

TEST_CASE("thresholds") {
    auto pmax_of = [](std::vector<std::string> args) {
        const Run r = run(args);
        REQUIRE(r.code == 0);
        const auto t = csv(r.out);
        REQUIRE(t.size() == 2);
        CHECK(t[0].back() == "pmax");
        return std::stod(t[1].back());
    };
    CHECK(std::abs(pmax_of({"pmax", "--protocol", "bb84", "--m", "1", "--q", "0"}) - 0.1100280) < 1e-5);
    CHECK(std::abs(pmax_of({"pmax", "--protocol", "six-state", "--m", "5", "--q", "0"}) - 0.1269040) < 1e-5);
    CHECK(std::abs(pmax_of({"pmax", "--capacity", "--m1", "3", "--m2", "19"}) - 0.1908570) < 1e-5);
}

TEST_CASE("capacity rows") {
    const Run h = run({"capacity", "--m1", "1", "--m2", "1", "--p", "0.1"});
    REQUIRE(h.code == 0);
    CHECK(std::abs(std::stod(csv(h.out)[1][1]) - hashing_rate(depolarizing(0.1))) < 1e-7);
    const Run cat = run({"capacity", "--m1", "5", "--m2", "1", "--p", "0.19"});
    REQUIRE(cat.code == 0);
    CHECK(std::stod(csv(cat.out)[1][1]) > 0.0);
}

TEST_CASE("two-qubit Schur basis export") {
    const Run r = run({"schur", "--n", "2", "--q", "2"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    const auto& vs = doc.at("vectors");
    REQUIRE(vs.size() == 4);
    bool singlet = false;
    for (const auto& v : vs) {
        if (v.at("nu") != nlohmann::json::array({1, 1})) continue;
        const auto& c = v.at("coeffs");
        REQUIRE(c.size() == 2);
        CHECK(c[0][0] == "01");
        CHECK(std::abs(c[0][1].get<double>() - 1 / std::sqrt(2.0)) < 1e-12);
        CHECK(c[1][0] == "10");
        CHECK(std::abs(c[1][1].get<double>() + 1 / std::sqrt(2.0)) < 1e-12);
        singlet = true;
    }
    CHECK(singlet);
}

TEST_CASE("JSON output round-trips inputs and values") {
    const Run r = run({"rate", "--protocol", "six-state", "--m", "4", "--q", "0.23", "--p-range", "0.05:0.09:0.02",
                       "--format", "json"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    const auto& cfg = doc.at("config");
    CHECK(cfg.at("command") == "rate");
    CHECK(cfg.at("protocol") == "six-state");
    CHECK(cfg.at("m") == 4);
    CHECK(cfg.at("q").get<double>() == 0.23);
    CHECK(cfg.at("p_range") == "0.05:0.09:0.02");
    const auto& rows = doc.at("rows");
    REQUIRE(rows.size() == 3);
    for (const auto& row : rows) {
        const double p = row.at("p").get<double>();
        const RateResult direct = sixstate_rate(4, p, 0.23);
        CHECK(row.at("rate").get<double>() == direct.rate);
        CHECK(row.at("i_xy").get<double>() == direct.i_xy);
        CHECK(row.at("i_xe").get<double>() == direct.i_xe);
    }
    const Run again = run({"rate", "--protocol", "six-state", "--m", "4", "--q", "0.23", "--p-range", "0.05:0.09:0.02",
                           "--format", "json"});
    CHECK(again.out == r.out);

    const Run pm = run({"pmax", "--m", "3", "--q", "0.2", "--format", "json"});
    REQUIRE(pm.code == 0);
    const auto pdoc = nlohmann::json::parse(pm.out);
    CHECK(pdoc.at("config").at("q").get<double>() == 0.2);
    CHECK(pdoc.at("config").at("tol_p").get<double>() == 1e-7);
}

TEST_CASE("output does not depend on the thread count") {
    const std::vector<std::string> base = {"rate", "--protocol", "six-state", "--m", "40", "--optimize-q", "--p", "0.13"};
    auto with = [&](const char* k) {
        auto a = base;
        a.push_back("--threads");
        a.push_back(k);
        return run(a);
    };
    const Run one = with("1"), three = with("3");
    REQUIRE(one.code == 0);
    CHECK(one.out == three.out);
}

TEST_CASE("exit codes") {
    CHECK(run({}).code == 2);
    CHECK(run({"rate", "--protocol", "bb85", "--p", "0.1"}).code == 2);
    CHECK(run({"rate", "--p", "0.1", "--p-range", "0:0.1:0.05"}).code == 2);
    CHECK(run({"rate", "--q", "0.1"}).code == 2);
    CHECK(run({"rate", "--optimize-q", "--q", "0.1", "--p", "0.1"}).code == 2);
    CHECK(run({"rate", "--protocol", "six-state", "--iterated", "--p", "0.1"}).code == 2);
    CHECK(run({"rate", "--m", "3", "--Q", "0.1", "--p", "0.1"}).code == 2);
    CHECK(run({"pmax", "--m", "1", "--q", "0", "--hi", "0.05"}).code == 3);
    CHECK(run({"capacity", "--m1", "5", "--m2", "22", "--class-budget", "1000", "--p", "0.19"}).code == 4);
    CHECK(run({"schur", "--n", "3", "--q", "17"}).code == 4);
    const Run help = run({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("pmax") != std::string::npos);
}
