#include <doctest.h>

#include "support.hpp"

using namespace cansys;
using namespace cansys::test;

TEST_CASE("hamburger validation") {
    HamburgerSpec s{{1.0, 2.0}, {0.0, 1.0}};
    CHECK_NOTHROW(s.validate());
    CHECK_THROWS_AS(HamburgerSpec({1.0, 0.0}, {0.0, 1.0}).validate(), InputError);
    CHECK_THROWS_AS(HamburgerSpec({1.0}, {0.0, 1.0}).validate(), InputError);
    CHECK_THROWS_AS(HamburgerSpec({}, {}).validate(), InputError);
}

TEST_CASE("constant matrix validation") {
    ConstantMatrixSpec c;
    c.matrix = RMat2{1.0, 0.5, 0.5, 1.0};
    CHECK_NOTHROW(c.validate());
    c.matrix = RMat2{1.0, 2.0, 2.0, 1.0};
    CHECK_THROWS_AS(c.validate(), InputError);
    c.matrix = RMat2{1.0, 0.5, 0.0, 1.0};
    CHECK_THROWS_AS(c.validate(), InputError);
    c.matrix = RMat2::zero();
    CHECK_THROWS_AS(c.validate(), InputError);
}

TEST_CASE("diagonal validation needs a partition of the domain") {
    DiagonalSpec d;
    d.h1_intervals = {{0.2, 0.4}, {0.6, 0.7}};
    CHECK_NOTHROW(d.validate());
    d.h1_intervals = {{0.2, 0.4}, {0.3, 0.7}};
    CHECK_THROWS_AS(d.validate(), InputError);
    d.h1_intervals = {{-0.1, 0.4}};
    CHECK_THROWS_AS(d.validate(), InputError);
}

TEST_CASE("total trace mass") {
    const auto h = total_trace_mass(HamburgerSpec{{1.0, 2.0, 3.0}, {0.0, 0.1, 0.2}});
    CHECK(h.l == 6.0);
    CHECK(h.L == 6.0);
    AngleProfile p;
    p.phi = PhiForm::constant(0.3);
    p.density = DensityForm::constant(2.0);
    const auto m = total_trace_mass(p);
    CHECK(m.l == 1.0);
    CHECK(m.L == doctest::Approx(2.0).epsilon(1e-14));
    p.density = DensityForm::power_law(2.0, 1.0);
    CHECK(total_trace_mass(p).L == doctest::Approx(1.0).epsilon(1e-12));
    ConstantMatrixSpec c;
    c.matrix = RMat2{2.0, 0.0, 0.0, 1.0};
    c.length = 2.0;
    CHECK(total_trace_mass(c).L == doctest::Approx(6.0));
    DiagonalSpec d;
    d.alpha = 0.0;
    d.beta = 2.0;
    d.h1_intervals = {{0.5, 1.0}};
    CHECK(total_trace_mass(d).L == doctest::Approx(2.0));
}

TEST_CASE("total trace mass is positive for random specs") {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 200; ++i) {
        CHECK(total_trace_mass(random_hamburger(rng, 20)).L > 0.0);
    }
}

TEST_CASE("cut keeps segments in order") {
    const HamburgerSpec s{{1.0, 2.0, 3.0}, {0.0, kPi / 4.0, kPi / 2.0}};
    const HamburgerSpec all = cut(s, {0, 1, 2});
    CHECK(all.lengths == s.lengths);
    CHECK(all.angles == s.angles);
    const HamburgerSpec two = cut(s, {0, 2});
    CHECK(two.lengths == std::vector<double>{1.0, 3.0});
    CHECK(two.angles == std::vector<double>{0.0, kPi / 2.0});
    CHECK_THROWS_AS((void)cut(s, {}), InputError);
    CHECK_THROWS_AS((void)cut(s, {3}), InputError);
}

TEST_CASE("cut of one segment is a single factor") {
    std::mt19937_64 rng(22);
    for (int i = 0; i < 50; ++i) {
        const HamburgerSpec s = random_hamburger(rng, 10);
        const std::size_t j = uniform_size(rng, 0, s.size() - 1);
        const cplx z = random_z(rng, 10.0);
        const HamburgerSpec one = cut(s, {j});
        const Mat2 w = monodromy_at(one, z).W.value();
        const RMat2 n = xi_outer_j(s.angles[j]);
        const cplx zl = z * s.lengths[j];
        CHECK(rel_err(w.m11, 1.0 - zl * n.m11) < 1e-13);
        CHECK(std::abs(w.m12 + zl * n.m12) < 1e-13 * (1.0 + std::abs(zl)));
        CHECK(std::abs(w.m21 + zl * n.m21) < 1e-13 * (1.0 + std::abs(zl)));
    }
}

TEST_CASE("cut composes") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 100; ++i) {
        const HamburgerSpec s = random_hamburger(rng, 20);
        std::set<std::size_t> a;
        for (std::size_t j = 0; j < s.size(); ++j) {
            if (rng() % 3 != 0) {
                a.insert(j);
            }
        }
        if (a.empty()) {
            a.insert(0);
        }
        const std::vector<std::size_t> image(a.begin(), a.end());
        std::set<std::size_t> b_local;
        std::set<std::size_t> b_global;
        for (std::size_t k = 0; k < image.size(); ++k) {
            if (rng() % 2 == 0) {
                b_local.insert(k);
                b_global.insert(image[k]);
            }
        }
        if (b_local.empty()) {
            b_local.insert(0);
            b_global.insert(image[0]);
        }
        const HamburgerSpec twice = cut(cut(s, a), b_local);
        const HamburgerSpec once = cut(s, b_global);
        CHECK(twice.lengths == once.lengths);
        CHECK(twice.angles == once.angles);
    }
}

TEST_CASE("reparameterize chirp") {
    const AngleProfile base = chirp_profile(1.0, 1.0);
    const AngleProfile k2 = reparameterize(base, 2.0);
    for (double t : {0.05, 0.3, 0.77, 1.0}) {
        CHECK(k2.phi_at(t) == doctest::Approx(t * t * std::sin(1.0 / (t * t))).epsilon(1e-13));
        CHECK(k2.density_at(t) == doctest::Approx(2.0 * t).epsilon(1e-13));
    }
    CHECK_THROWS_AS((void)reparameterize(base, 1.0), InputError);
    AngleProfile off = base;
    off.beta = 2.0;
    off.phi = PhiForm::constant(0.1);
    CHECK_THROWS_AS((void)reparameterize(off, 2.0), InputError);
}

TEST_CASE("reparameterize constant and table angles") {
    AngleProfile c;
    c.phi = PhiForm::constant(0.4);
    const AngleProfile c3 = reparameterize(c, 3.0);
    CHECK(c3.phi_at(0.5) == doctest::Approx(0.4));
    CHECK(c3.density_at(0.5) == doctest::Approx(0.75));

    AngleProfile t;
    t.phi = PhiForm::table({0.0, 0.5, 1.0}, {0.0, 1.0, 0.25});
    const AngleProfile t2 = reparameterize(t, 2.0);
    CHECK(t2.phi_at(std::sqrt(0.5)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(t2.phi_at(1.0) == doctest::Approx(0.25));
    CHECK(t2.phi_at(0.0) == doctest::Approx(0.0));
}

TEST_CASE("reparameterize preserves mass and monodromy") {
    AngleProfile p = chirp_profile(1.0, 2.0);
    p.density = DensityForm::power_law(1.5, 0.5);
    for (double kappa : {1.5, 2.0, 4.0}) {
        const AngleProfile q = reparameterize(p, kappa);
        CHECK(rel_err(total_trace_mass(q).L, total_trace_mass(p).L) < 1e-8);
        const cplx z(3.0, 2.0);
        CHECK(rel_err(monodromy_at(q, z).log_norm, monodromy_at(p, z).log_norm) < 1e-7);
    }
}

TEST_CASE("diagonal to profile examples") {
    DiagonalSpec all;
    all.h1_intervals = {{0.0, 1.0}};
    const AngleProfile p0 = diagonal_to_profile(all);
    CHECK(p0.beta == doctest::Approx(1.0));
    CHECK(p0.phi_at(0.5) == doctest::Approx(0.0));
    CHECK(p0.density_at(0.5) == doctest::Approx(1.0));

    DiagonalSpec first;
    first.h1_intervals = {{0.0, 0.5}};
    const AngleProfile p1 = diagonal_to_profile(first);
    CHECK(p1.beta == doctest::Approx(0.5));
    CHECK(p1.phi_at(0.25) == doctest::Approx(0.0));

    DiagonalSpec second;
    second.h1_intervals = {{0.5, 1.0}};
    const AngleProfile p2 = diagonal_to_profile(second);
    CHECK(p2.beta == doctest::Approx(0.5));
    CHECK(p2.phi_at(0.25) == doctest::Approx(-std::atan(0.5)).epsilon(1e-14));
    CHECK(p2.density_at(0.25) == doctest::Approx(1.25));

    DiagonalSpec none;
    none.h1_intervals = {};
    CHECK_THROWS_AS((void)diagonal_to_profile(none), InputError);
}

TEST_CASE("diagonal to profile: angle nonincreasing in (-pi/2, 0], density at least 1") {
    std::mt19937_64 rng(24);
    for (int i = 0; i < 50; ++i) {
        DiagonalSpec d;
        double x = 0.0;
        while (true) {
            const double a = x + uniform(rng, 0.0, 0.2);
            const double b = a + uniform(rng, 0.01, 0.2);
            if (b >= 1.0) {
                break;
            }
            d.h1_intervals.emplace_back(a, b);
            x = b;
        }
        if (d.h1_intervals.empty()) {
            continue;
        }
        const AngleProfile p = diagonal_to_profile(d);
        double prev = 0.0;
        for (int k = 0; k <= 200; ++k) {
            const double t = p.alpha + (p.beta - p.alpha) * k / 200.0;
            const double phi = p.phi_at(t);
            CHECK(phi <= prev + 1e-15);
            CHECK(phi > -kPi / 2.0);
            CHECK(phi <= 0.0);
            CHECK(p.density_at(t) >= 1.0);
            prev = phi;
        }
    }
}

TEST_CASE("diagonal as hamburger") {
    DiagonalSpec d;
    d.h1_intervals = {{0.25, 0.5}};
    const HamburgerSpec h = to_hamburger(d);
    REQUIRE(h.size() == 3);
    CHECK(h.lengths == std::vector<double>{0.25, 0.25, 0.5});
    CHECK(h.angles[0] == doctest::Approx(kPi / 2.0));
    CHECK(h.angles[1] == 0.0);
}

TEST_CASE("spec json round trip") {
    const std::vector<HamiltonianSpec> specs{
        HamburgerSpec{{1.0, 0.25}, {0.1, -2.0}},
        chirp_profile(0.5, 2.0),
        reparameterize(chirp_profile(1.0, 1.0), 4.0),
        DiagonalSpec{0.0, 2.0, {{0.5, 0.75}, {1.0, 1.5}}},
        ConstantMatrixSpec{RMat2{2.0, 0.5, 0.5, 1.0}, 3.0},
    };
    for (const auto& s : specs) {
        const std::string text = spec_to_json(s);
        const HamiltonianSpec back = parse_spec(text);
        CHECK(back.index() == s.index());
        CHECK(spec_to_json(back) == text);
        if (const auto* p = std::get_if<AngleProfile>(&s)) {
            const auto& q = std::get<AngleProfile>(back);
            for (double t : {0.1, 0.5, 0.9}) {
                CHECK(q.phi_at(t) == p->phi_at(t));
                CHECK(q.density_at(t) == p->density_at(t));
            }
        } else {
            const cplx z(2.0, 1.0);
            CHECK(rel_err(monodromy_at(back, z).log_norm, monodromy_at(s, z).log_norm) < 1e-12);
        }
    }
}

TEST_CASE("spec json errors") {
    CHECK_THROWS_AS((void)parse_spec(R"({"kind": "hamburger", "lengths": [1], "angles": [0], "extra": 1})"),
                    InputError);
    CHECK_THROWS_AS((void)parse_spec(R"({"kind": "spiral"})"), InputError);
    CHECK_THROWS_AS((void)parse_spec(R"({"kind": "hamburger", "lengths": [1]})"), InputError);
    CHECK_THROWS_AS((void)parse_spec(R"({"kind": "hamburger", "lengths": [-1], "angles": [0]})"), InputError);
    CHECK_THROWS_AS((void)parse_spec("not json"), InputError);
    try {
        (void)parse_spec(R"({"kind": "hamburger", "lengths": [1], "angles": [0], "colour": 1})");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("colour") != std::string::npos);
    }
}
