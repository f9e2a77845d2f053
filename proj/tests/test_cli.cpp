#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace cansys;
using namespace cansys::test;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("cansys_cli_" + std::to_string(std::random_device{}()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string write(const std::string& name, const std::string& text) const {
        const auto p = path / name;
        std::ofstream(p) << text;
        return p.string();
    }
};

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::size_t lines(const std::string& s) {
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_CASE("complex literals") {
    CHECK(cli::parse_complex("1+0i") == cplx(1.0, 0.0));
    CHECK(cli::parse_complex(" 2.5 - 3i ") == cplx(2.5, -3.0));
    CHECK(cli::parse_complex("-1e3+2.5e-1i") == cplx(-1000.0, 0.25));
    CHECK(cli::parse_complex("4") == cplx(4.0, 0.0));
    CHECK(cli::parse_complex("-2i") == cplx(0.0, -2.0));
    CHECK(cli::parse_complex("i") == cplx(0.0, 1.0));
    CHECK(cli::parse_complex("1-i") == cplx(1.0, -1.0));
    CHECK_THROWS_AS((void)cli::parse_complex("1+2j"), InputError);
    CHECK_THROWS_AS((void)cli::parse_complex(""), InputError);
    CHECK_THROWS_AS((void)cli::parse_complex("1+2i+3"), InputError);
}

TEST_CASE("regvar expressions") {
    const RegVarFn f = cli::parse_regvar("r*log(r)*loglog(r)^2");
    CHECK(f.kind == RegVarFn::Kind::PowerLog);
    CHECK(f.rho == 1.0);
    CHECK(f.kappa1 == 1.0);
    CHECK(f.kappa2 == 2.0);
    const RegVarFn g = cli::parse_regvar("3 * r^0.5");
    CHECK(g.rho == 0.5);
    CHECK(g.scale == 3.0);
    const RegVarFn h = cli::parse_regvar("r^1.5*log(log(r))^-1");
    CHECK(h.kappa2 == -1.0);
    CHECK(h.kappa1 == 0.0);
    CHECK_THROWS_AS((void)cli::parse_regvar("exp(r)"), InputError);
    CHECK_THROWS_AS((void)cli::parse_regvar(""), InputError);
}

TEST_CASE("radius grid") {
    const auto g = cli::radius_grid(1e2, 1e6, 5);
    REQUIRE(g.size() == 5);
    CHECK(g.front() == 1e2);
    CHECK(g.back() == 1e6);
    CHECK(g[2] == doctest::Approx(1e4).epsilon(1e-14));
    CHECK_THROWS_AS((void)cli::radius_grid(10.0, 1.0, 5), InputError);
    CHECK_THROWS_AS((void)cli::radius_grid(1.0, 10.0, 1), InputError);
}

TEST_CASE("monodromy command") {
    const TempDir dir;
    const std::string spec = dir.write("h.json", R"({"kind": "hamburger", "lengths": [1], "angles": [0]})");
    const Run r = run({"monodromy", "--system", spec, "--z", "1+0i"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
    CHECK(j["logNorm"].get<double>() == doctest::Approx(std::log(golden)).epsilon(1e-14));
    const double s = std::exp(j["logScale"].get<double>());
    CHECK(j["W_unit"][0][0][0].get<double>() * s == doctest::Approx(1.0));
    CHECK(j["W_unit"][0][1][0].get<double>() * s == doctest::Approx(1.0));
    CHECK(std::abs(j["W_unit"][1][0][0].get<double>()) < 1e-15);
    CHECK(j["W_unit"][1][1][0].get<double>() * s == doctest::Approx(1.0));
    CHECK(j["det_check"].get<double>() < 1e-14);

    const Run zero = run({"monodromy", "--system", spec, "--z", "0+0i"});
    REQUIRE(zero.code == 0);
    CHECK(nlohmann::json::parse(zero.out)["logNorm"].get<double>() == doctest::Approx(0.0));
}

TEST_CASE("exit codes") {
    const TempDir dir;
    const std::string bad = dir.write("bad.json", R"({"kind": "hamburger", "lengths": [1], "angles": [0], "colour": 2})");
    const Run r = run({"monodromy", "--system", bad, "--z", "1"});
    CHECK(r.code == 2);
    CHECK(r.err.find("colour") != std::string::npos);
    CHECK(run({"monodromy", "--system", (dir.path / "missing.json").string(), "--z", "1"}).code == 2);
    CHECK(run({"monodromy", "--system", dir.write("t.json", "{"), "--z", "1"}).code == 2);
    CHECK(run({"example", "foo"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"--help"}).code == 0);
    const std::string ok = dir.write("h.json", R"({"kind": "hamburger", "lengths": [1], "angles": [0]})");
    CHECK(run({"monodromy", "--system", ok, "--z", "1+2k"}).code == 2);
}

TEST_CASE("curves command") {
    const TempDir dir;
    const std::string spec =
        dir.write("h.json", R"({"kind": "hamburger", "lengths": [1, 0.5, 0.25], "angles": [0, 1, 2]})");
    const Run r = run({"curves", "--system", spec, "--rmin", "1", "--rmax", "100", "--points", "2", "--which",
                       "maxmod,lower,upper:opt"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("r,tag,value\n", 0) == 0);
    CHECK(lines(r.out) == 1 + 2 * 3);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    std::vector<std::string> tags;
    std::vector<double> values;
    while (std::getline(in, line)) {
        const auto a = line.find(',');
        const auto b = line.find(',', a + 1);
        tags.push_back(line.substr(a + 1, b - a - 1));
        values.push_back(std::stod(line.substr(b + 1)));
    }
    CHECK(tags == std::vector<std::string>{"lower", "maxmod", "upper:opt", "lower", "maxmod", "upper:opt"});
    for (std::size_t k = 0; k < 6; k += 3) {
        CHECK(values[k + 1] <= values[k + 2] + 1e-9);
    }
    const Run again = run({"curves", "--system", spec, "--rmin", "1", "--rmax", "100", "--points", "2",
                           "--which", "maxmod,lower,upper:opt"});
    CHECK(again.out == r.out);
}

TEST_CASE("curves refuse inapplicable requests") {
    const TempDir dir;
    const std::string c =
        dir.write("c.json",
                  R"({"kind": "profile", "domain": [0, 1], "phi": {"name": "constant", "value": 0.3}, "density": {"name": "const", "value": 1}})");
    const Run r = run({"curves", "--system", c, "--which", "maxmod,upper:recipe", "--points", "2"});
    CHECK(r.code == 2);
    CHECK(r.err.find("degenerate modulus") != std::string::npos);
    const Run l = run({"curves", "--system", c, "--which", "lower", "--points", "2"});
    CHECK(l.code == 2);
}

TEST_CASE("curves to a directory") {
    const TempDir dir;
    const std::string spec = dir.write("h.json", R"({"kind": "hamburger", "lengths": [1, 1], "angles": [0, 1]})");
    const std::string out = (dir.path / "out").string();
    const Run r = run({"curves", "--system", spec, "--points", "3", "--out", out});
    REQUIRE(r.code == 0);
    std::ifstream f(std::filesystem::path(out) / "curves.csv");
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(lines(ss.str()) == 4);
}

TEST_CASE("example spec emission") {
    const Run r = run({"example", "cantor", "--p", "0.8", "--depth", "2", "--emit", "spec"});
    REQUIRE(r.code == 0);
    const HamiltonianSpec s = parse_spec(r.out);
    REQUIRE(std::holds_alternative<DiagonalSpec>(s));
    CHECK(std::get<DiagonalSpec>(s).h1_intervals.size() == 3);
    CHECK(run({"example", "chirp", "--gamma", "2", "--beta", "1", "--emit", "spec"}).code == 2);
}

TEST_CASE("cut and kdb commands") {
    const TempDir dir;
    const std::string spec =
        dir.write("h.json", R"({"kind": "hamburger", "lengths": [1, 1, 1, 1], "angles": [0.2, 1.1, 2.0, 2.9]})");
    const Run c = run({"cut-check", "--system", spec, "--keep", "0,2", "--R", "20", "--points", "16"});
    REQUIRE(c.code == 0);
    const auto j = nlohmann::json::parse(c.out);
    CHECK(j["ok"].get<bool>());
    CHECK(run({"cut-check", "--system", spec, "--keep", "7"}).code == 2);
    const std::string k = dir.write("k.json", R"({"kind": "constant", "matrix": [[1, 0], [0, 1]], "length": 1})");
    const Run kd = run({"kdb", "--system", k, "--R", "100"});
    REQUIRE(kd.code == 0);
    CHECK(nlohmann::json::parse(kd.out)["count"].get<int>() == 64);
}

TEST_CASE("family reports") {
    const Run c = run({"example", "chirp", "--gamma", "1", "--beta", "1", "--kappa", "8", "--emit", "report"});
    REQUIRE(c.code == 0);
    const auto cj = nlohmann::json::parse(c.out);
    CHECK(std::abs(cj["slopes"]["upper"].get<double>() - 0.5) < 0.03);
    const Run s = run({"example", "sharpness", "--rho", "0.667", "--m", "r*log(r)*loglog(r)^2", "--emit", "report"});
    REQUIRE(s.code == 0);
    const auto sj = nlohmann::json::parse(s.out);
    CHECK(sj["predicted"]["upper"].get<double>() == doctest::Approx(0.667));
    const double lo = sj["slopes"]["lower"].get<double>();
    const double mm = sj["slopes"]["maxmod"].get<double>();
    const double up = sj["slopes"]["upper"].get<double>();
    CHECK(lo <= mm);
    CHECK(mm <= up);
}

TEST_CASE("negative infinity is written as -inf") {
    CHECK(cli::format_double(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(cli::format_double(0.5) == "0.5");
}
