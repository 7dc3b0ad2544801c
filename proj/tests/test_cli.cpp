#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"

namespace {

struct Run {
    int code = 0;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "rgfp");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    Run r;
    r.code = rgfp::cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> v;
    std::istringstream is(s);
    for (std::string l; std::getline(is, l);) v.push_back(l);
    return v;
}

const std::string kData = RGFP_TEST_DATA_DIR;

}  // namespace

TEST_CASE("configuration errors exit with 1") {
    auto r = run({"--N", "8", "exponents"});
    CHECK(r.code == 1);
    CHECK(r.err.find("N=8 excluded") != std::string::npos);
    CHECK(run({"--config", kData + "/bad_key.ini", "exponents"}).code == 1);
    CHECK(run({"--config", kData + "/missing.ini", "exponents"}).code == 1);
    CHECK(run({"--eps", "0.3", "exponents"}).code == 1);
    CHECK(run({"--band", "sideways:1", "propagator"}).code == 1);
    CHECK(run({"--format", "csv", "exponents"}).code == 1);
    CHECK(run({"--bogus", "1", "exponents"}).code == 1);
    CHECK(run({}).code == 1);
}

TEST_CASE("numerical failures exit with 2") {
    auto r = run({"--band", "full", "decay-fit"});
    CHECK(r.code == 2);
    CHECK(r.err.find("numerical failure") != std::string::npos);
    CHECK(run({"--response", "G", "--h-min", "-1", "--h-max", "1", "--x-min", "1", "--x-max", "2", "response"}).code == 2);
}

TEST_CASE("exponents at the Gaussian point") {
    auto r = run({"--eps", "0", "exponents"});
    REQUIRE(r.code == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 2);
    CHECK(ls[0].rfind("# rgfp version=", 0) == 0);
    CHECK(ls[0].find("config_hash=") != std::string::npos);
    const auto j = nlohmann::json::parse(ls[1]);
    CHECK(j["eta2"].get<double>() == 0.0);
    CHECK(j["delta2"].get<double>() == doctest::Approx(0.5));
}

TEST_CASE("reruns are byte-identical and the hash follows the config") {
    const auto a = run({"--eps", "0.001", "exponents"});
    const auto b = run({"--eps", "0.001", "exponents"});
    CHECK(a.out == b.out);
    const auto c = run({"--eps", "0.002", "exponents"});
    CHECK(lines(a.out)[0] != lines(c.out)[0]);
    // Same effective configuration written differently hashes the same.
    const auto d = run({"--eps", "1e-3", "exponents"});
    CHECK(lines(a.out)[0] == lines(d.out)[0]);
}

TEST_CASE("config files and dump") {
    auto r = run({"--config", kData + "/sample.ini", "--dump-config"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("d = 2") != std::string::npos);
    CHECK(r.out.find("gamma = 3") != std::string::npos);
    auto o = run({"--config", kData + "/sample.ini", "--d", "1", "--dump-config"});
    CHECK(o.out.find("d = 1") != std::string::npos);
    auto e = run({"--config", kData + "/sample.ini", "exponents"});
    REQUIRE(e.code == 0);
    const auto j = nlohmann::json::parse(lines(e.out)[1]);
    CHECK(j["d"] == 2);
    CHECK(j["N"] == 6);
    CHECK(j["eta2"].get<double>() / 0.002 == doctest::Approx(-4.0).epsilon(0.01));
}

TEST_CASE("propagator CSV") {
    auto r = run({"--band", "single:0", "--x-min", "1", "--x-max", "10", "--grid-density", "4", "propagator"});
    REQUIRE(r.code == 0);
    const auto ls = lines(r.out);
    CHECK(ls[0].rfind("# rgfp", 0) == 0);
    bool header = false;
    size_t rows = 0;
    for (const auto& l : ls) {
        if (l == "r,value") header = true;
        else if (header) ++rows;
    }
    CHECK(header);
    CHECK(rows == 5);
    CHECK(r.out.find("# scale=single:0") != std::string::npos);
}

TEST_CASE("response CSV columns") {
    auto r = run({"--response", "freeG", "--x-min", "1", "--x-max", "10", "--grid-density", "2", "response"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("x,value,fit_powerlaw,residual") != std::string::npos);
}

TEST_CASE("output file") {
    const std::string path = "rgfp_cli_test_output.json";
    auto r = run({"--eps", "0.001", "--output", path, "exponents"});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(ss.str() == run({"--eps", "0.001", "exponents"}).out);
    std::remove(path.c_str());
}

TEST_CASE("tree counts") {
    auto r = run({"--max-endpoints", "4", "trees"});
    REQUIRE(r.code == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 6);
    const auto k2 = nlohmann::json::parse(ls[2]);
    CHECK(k2["shapes"] == 1);
    CHECK(k2["typed"] == 16);
    const auto k4 = nlohmann::json::parse(ls[4]);
    CHECK(k4["shapes"] == 11);
    const auto consts = nlohmann::json::parse(ls[5]);
    CHECK(consts["eps0"].get<double>() > 0.0);
    auto s = run({"--max-endpoints", "3", "--root-label", "0,0,2,1,1", "--endpoint-type", "Lambda", "--stream", "trees"});
    REQUIRE(s.code == 0);
    CHECK(lines(s.out).size() == 1 + 3 + 1 + 3);
    CHECK(run({"--max-endpoints", "2", "--root-label", "0,2,0", "--stream", "trees"}).code == 1);
}

TEST_CASE("zeta1 check") {
    auto r = run({"--h-min", "0", "--h-max", "1", "zeta1-check"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(lines(r.out)[1]);
    CHECK(j["residual"].get<double>() < 1e-10);
}
