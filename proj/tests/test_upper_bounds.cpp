#include <doctest.h>

#include "support.hpp"

using namespace cansys;
using namespace cansys::test;

namespace {

AngleProfile holder(double alpha) {
    AngleProfile p;
    p.phi = PhiForm::holder(1.0, alpha);
    return p;
}

BoundData sample_data(std::mt19937_64& rng, double lo, double hi, std::size_t n) {
    BoundData d;
    std::vector<double> cuts;
    for (std::size_t j = 0; j + 1 < n; ++j) {
        cuts.push_back(uniform(rng, lo, hi));
    }
    std::sort(cuts.begin(), cuts.end());
    d.partition.push_back(lo);
    for (double c : cuts) {
        if (c > d.partition.back() + 1e-9 * (hi - lo)) {
            d.partition.push_back(c);
        }
    }
    if (hi - d.partition.back() < 1e-9 * (hi - lo)) {
        d.partition.pop_back();
    }
    d.partition.push_back(hi);
    for (std::size_t j = 0; j + 1 < d.partition.size(); ++j) {
        d.psi.push_back(uniform(rng, -kPi, kPi));
        d.a.push_back(std::exp(uniform(rng, std::log(1e-3), 0.0)));
    }
    return d;
}

}  // namespace

TEST_CASE("bound terms for a two segment hamburger") {
    const HamburgerSpec s{{1.0, 1.0}, {0.0, kPi / 2.0}};
    BoundData d;
    d.partition = {0.0, 1.0, 2.0};
    d.psi = {0.0, kPi / 2.0};
    d.a = {1.0, 1.0};
    const BoundValue v = evaluate_bound(s, d);
    CHECK(v.A1 == doctest::Approx(2.0));
    CHECK(std::abs(v.A2) < 1e-15);
    CHECK(std::abs(v.A3) < 1e-15);
    CHECK(std::abs(v.A4) < 1e-15);
}

TEST_CASE("bound data validation") {
    const HamburgerSpec s{{1.0, 1.0}, {0.0, kPi / 2.0}};
    BoundData d;
    d.partition = {0.0, 1.0, 2.0};
    d.psi = {0.0, 0.0};
    d.a = {1.0, 1.5};
    CHECK_THROWS_AS((void)evaluate_bound(s, d), InputError);
    d.a = {1.0, 1.0};
    d.partition = {0.0, 1.0, 1.5};
    CHECK_THROWS_AS((void)evaluate_bound(s, d), InputError);
    d.partition = {0.0, 2.0};
    CHECK_THROWS_AS((void)evaluate_bound(s, d), InputError);
}

TEST_CASE("general constant matrices are rejected") {
    ConstantMatrixSpec c;
    BoundData d{{0.0, 1.0}, {0.0}, {1.0}};
    CHECK_THROWS_AS((void)evaluate_bound(c, d), InputError);
    c.matrix = RMat2{1.0, 1.0, 1.0, 1.0};
    CHECK_NOTHROW((void)evaluate_bound(c, d));
}

TEST_CASE("recipe for a square root modulus") {
    const AngleProfile p = holder(0.5);
    for (double r : {1e3, 1e6}) {
        const RecipeResult res = thm14_recipe(p, r, Modulus::power(0.5));
        CHECK(res.delta == doctest::Approx(std::pow(r, -2.0 / 3.0)).epsilon(1e-9));
        CHECK(res.a == doctest::Approx(std::pow(r, -1.0 / 6.0)).epsilon(1e-9));
        CHECK(r * (res.B1 + res.B2) + res.B3 == doctest::Approx(3.0 * std::pow(r, 2.0 / 3.0)).epsilon(1e-9));
        CHECK(res.value.A4 == doctest::Approx(std::log(r) / 3.0).epsilon(1e-9));
        CHECK(res.value.A1 <= res.B1 * (1.0 + 1e-9));
        CHECK(res.value.A2 <= res.B2 * (1.0 + 1e-9));
        CHECK(res.value.A3 <= res.B3 * (1.0 + 1e-9));
        CHECK(res.data.size() == static_cast<std::size_t>(std::ceil(1.0 / res.delta - 1e-12)));
    }
}

TEST_CASE("recipe rejects small radii and constant angles") {
    CHECK_THROWS_AS((void)thm14_recipe(holder(0.5), 0.5, Modulus::power(0.5)), InputError);
    AngleProfile c;
    c.phi = PhiForm::constant(0.2);
    CHECK_THROWS_AS((void)profile_modulus(c), InputError);
    CHECK_THROWS_AS((void)optimize_bound(c, 10.0, Strategy::Recipe), InputError);
}

TEST_CASE("the bound dominates the monodromy norm") {
    std::mt19937_64 rng(51);
    for (int i = 0; i < 300; ++i) {
        const HamburgerSpec s = random_hamburger(rng, 8);
        const BoundData d = sample_data(rng, 0.0, s.total_length(), uniform_size(rng, 1, 6));
        const cplx z = random_z(rng, 20.0);
        const BoundValue v = evaluate_bound(s, d);
        CHECK(monodromy_at(s, z).log_norm <= v.total_at(std::abs(z)) + 1e-10);
    }
}

TEST_CASE("the bound dominates for profiles") {
    std::mt19937_64 rng(52);
    const AngleProfile p = chirp_profile(1.0, 1.0);
    for (int i = 0; i < 30; ++i) {
        const BoundData d = sample_data(rng, 0.0, 1.0, uniform_size(rng, 1, 20));
        const cplx z = random_z(rng, 200.0);
        CHECK(monodromy_at(p, z).log_norm <= evaluate_bound(p, d).total_at(std::abs(z)) + 1e-8);
    }
}

TEST_CASE("A3 summands are nonnegative and sandwiched") {
    std::mt19937_64 rng(53);
    const HamburgerSpec s{{1.0, 1.0, 1.0}, {0.1, 0.9, 2.0}};
    BoundOptions exact;
    exact.exact_a3 = true;
    for (int i = 0; i < 500; ++i) {
        BoundData two = sample_data(rng, 0.0, 3.0, 2);
        if (two.size() != 2) {
            continue;
        }
        const double plain = evaluate_bound(s, two).A3;
        const double tight = evaluate_bound(s, two, exact).A3;
        CHECK(plain >= 0.0);
        CHECK(tight >= -1e-14);
        CHECK(tight <= plain + 1e-12);
        CHECK(plain <= tight + 0.5 * std::log(2.0) + 1e-12);
    }
    for (int i = 0; i < 100; ++i) {
        const BoundData d = sample_data(rng, 0.0, 3.0, 12);
        const double plain = evaluate_bound(s, d).A3;
        const double tight = evaluate_bound(s, d, exact).A3;
        CHECK(tight <= plain + 1e-12);
        CHECK(plain <= tight + static_cast<double>(d.size() - 1) * 0.5 * std::log(2.0) + 1e-12);
    }
}

TEST_CASE("optimizer strategies are ordered") {
    for (double r : {1e2, 1e4}) {
        const AngleProfile p = holder(0.5);
        const double rec = optimize_bound(p, r, Strategy::Recipe).value.total_at(r);
        const double cd = optimize_bound(p, r, Strategy::CoordinateDescent).value.total_at(r);
        const double dy = optimize_bound(p, r, Strategy::DyadicScan).value.total_at(r);
        CHECK(cd <= rec * (1.0 + 1e-12));
        CHECK(dy <= cd * (1.0 + 1e-12));
    }
    const HamburgerSpec s{{1.0, 0.5, 2.0, 1.0}, {0.0, 1.0, 0.3, 2.0}};
    const double cd = optimize_bound(s, 100.0, Strategy::CoordinateDescent).value.total_at(100.0);
    const double dy = optimize_bound(s, 100.0, Strategy::DyadicScan).value.total_at(100.0);
    CHECK(dy <= cd * (1.0 + 1e-12));
    CHECK(monodromy_at(s, cplx(0.0, 100.0)).log_norm <= dy);
}

TEST_CASE("constant angle optimum") {
    // Single cell with psi = phi: r a^2 L - 2 log a, minimised at a^2 = 1 / (r L).
    AngleProfile p;
    p.beta = 2.0;
    p.phi = PhiForm::constant(0.4);
    for (double r : {10.0, 1e3}) {
        const OptimizeResult o = optimize_bound(p, r, Strategy::CoordinateDescent);
        REQUIRE(o.data.size() >= 1);
        CHECK(o.value.total_at(r) == doctest::Approx(1.0 + std::log(2.0 * r)).epsilon(1e-6));
        if (o.data.size() == 1) {
            CHECK(o.data.a[0] * o.data.a[0] == doctest::Approx(1.0 / (2.0 * r)).epsilon(1e-4));
        }
    }
}

TEST_CASE("romanov conditions for a holder angle") {
    const AngleProfile p = holder(0.5);
    const Modulus w = Modulus::power(0.5);
    const BoundFamily fam = [&](double r) { return thm14_recipe(p, r, w).data; };
    const std::vector<double> grid{1e2, 1e3, 1e4, 1e5};
    const RomanovReport rep = romanov_check(p, 2.0 / 3.0, fam, 4.0, grid);
    CHECK(rep.K == doctest::Approx(16.0));
    CHECK(rep.rows.size() == grid.size());
    CHECK(rep.all_ok);
    for (const auto& c : rep.max_required_C) {
        CHECK(c <= 4.0);
    }
    const RomanovReport tight = romanov_check(p, 0.5, fam, 4.0, grid);
    CHECK_FALSE(tight.all_ok);
    CHECK_THROWS_AS((void)romanov_check(p, 1.5, fam, 4.0, grid), InputError);
}

TEST_CASE("profile modulus") {
    const Modulus h = profile_modulus(holder(0.25));
    CHECK(h.kind == Modulus::Kind::Power);
    CHECK(h.alpha == doctest::Approx(0.25));
    const Modulus c = profile_modulus(chirp_profile(1.0, 1.0));
    CHECK(c.kind == Modulus::Kind::Table);
    CHECK(c(1e-3) > 0.0);
    CHECK(c(1e-3) <= 2.0);
}
