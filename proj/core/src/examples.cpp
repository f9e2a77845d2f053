#include "cansys/examples.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cansys/errors.hpp"

namespace cansys {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSlack = 1e-12;

bool summable_index(const RegVarFn& m) {
    if (m.rho > 1.0) {
        return true;
    }
    if (m.rho < 1.0 || m.kind != RegVarFn::Kind::PowerLog) {
        return false;
    }
    return m.kappa1 > 1.0 || (m.kappa1 == 1.0 && m.kappa2 > 1.0);
}

}  // namespace

AngleProfile chirp_profile(double gamma, double beta) {
    if (!(gamma > 0.0) || !(beta > 0.0)) {
        throw InputError("chirp_profile: gamma and beta must be positive");
    }
    if (gamma > beta) {
        throw InputError("chirp_profile: gamma must not exceed beta");
    }
    if (beta > 4.0) {
        throw InputError("chirp_profile: beta above the cap 4");
    }
    AngleProfile p;
    p.alpha = 0.0;
    p.beta = 1.0;
    p.phi = PhiForm::chirp(gamma, beta);
    p.density = DensityForm::constant(1.0);
    return p;
}

void PolygonParams::validate() const {
    pi.validate();
    const std::size_t n = l.size();
    if (n == 0 || m.size() != n) {
        throw InputError("polygon: l and m must be nonempty and of equal length");
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (!(l[j] > 0.0) || !(m[j] > 0.0) || !std::isfinite(l[j])) {
            throw InputError("polygon: lengths must be positive and finite");
        }
        if (m[j] > l[j]) {
            throw InputError("polygon: m_j exceeds l_j at j = " + std::to_string(j + 1));
        }
    }
    if (!(pi(m[0]) < kPi / 2.0)) {
        throw InputError("polygon: pi(m_1) must be below pi/2");
    }
    for (std::size_t j = 0; j + 1 < n; ++j) {
        if (m[j + 1] > m[j]) {
            throw InputError("polygon: m must be nonincreasing");
        }
        const double p0 = pi(m[j]);
        const double p1 = pi(m[j + 1]);
        if (!(p1 > 0.0) || !std::isfinite(p0 / p1)) {
            throw InputError("polygon: pi(m_j) / pi(m_j+1) is not finite");
        }
        if (p1 > p0 * (1.0 + kSlack)) {
            throw InputError("polygon: pi(m_j) must be nonincreasing");
        }
        if (p1 / m[j + 1] < (p0 / m[j]) * (1.0 - kSlack)) {
            throw InputError("polygon: pi(x) / x must be nonincreasing");
        }
    }
}

PolygonResult polygon_profile(const PolygonParams& params) {
    params.validate();
    const std::size_t n = params.l.size();
    std::vector<double> heights(n, 0.0);
    for (std::size_t j = 1; j < n; ++j) {
        const double sign = (j % 2 == 1) ? 1.0 : -1.0;
        heights[j] = heights[j - 1] + sign * params.pi(params.m[j - 1]);
    }
    PolygonResult out;
    std::vector<double> knots;
    std::vector<double> values;
    double t = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        knots.push_back(t);
        values.push_back(heights[j]);
        t += params.l[j];
        knots.push_back(t);
        values.push_back(heights[j]);
        out.plateau_indices.push_back(out.full.size());
        out.full.lengths.push_back(params.l[j]);
        out.full.angles.push_back(heights[j]);
        out.hamburger.lengths.push_back(params.l[j]);
        out.hamburger.angles.push_back(heights[j]);
        if (j + 1 < n) {
            out.full.lengths.push_back(params.m[j]);
            out.full.angles.push_back(0.5 * (heights[j] + heights[j + 1]));
            t += params.m[j];
        }
    }
    out.profile.alpha = 0.0;
    out.profile.beta = t;
    out.profile.phi = PhiForm::table(std::move(knots), std::move(values));
    out.profile.density = DensityForm::constant(1.0);
    out.profile.validate();
    return out;
}

SharpnessResult sharpness_family(const SharpnessParams& params) {
    params.g.validate();
    params.m.validate();
    if (!(params.g.rho > 0.5) || !(params.g.rho < 1.0)) {
        throw InputError("sharpness_family: index of g must lie in (1/2, 1)");
    }
    if (!summable_index(params.m)) {
        throw InputError("sharpness_family: 1/m must be integrable at infinity");
    }
    if (params.N < 2) {
        throw InputError("sharpness_family: N must be at least 2");
    }
    if (!(params.shift >= 0.0)) {
        throw InputError("sharpness_family: shift must be nonnegative");
    }
    SharpnessResult out;
    out.pi = Modulus::inverse_regvar(params.g);
    std::vector<double> base(params.N);
    for (std::size_t j = 0; j < params.N; ++j) {
        base[j] = 1.0 / params.m(static_cast<double>(j + 1) + params.shift);
    }
    int k = 0;
    while (!(out.pi(base[0] * std::ldexp(1.0, -k)) < kPi / 2.0)) {
        if (++k > 60) {
            throw InputError("sharpness_family: pi(m_1) stays above pi/2 after 60 doublings of m");
        }
    }
    out.rescale = k;
    PolygonParams pp;
    pp.pi = out.pi;
    pp.m.resize(params.N);
    for (std::size_t j = 0; j < params.N; ++j) {
        pp.m[j] = std::ldexp(base[j], -k);
    }
    pp.l = pp.m;
    out.polygon = polygon_profile(pp);

    std::vector<double> x(params.N);
    std::vector<double> y(params.N);
    for (std::size_t j = 0; j < params.N; ++j) {
        x[j] = static_cast<double>(j + 1);
        const double q = 1.0 / (pp.m[j] * out.pi(pp.m[j]));
        y[j] = q * q;
    }
    out.hypothesis = RegVarFn::table(std::move(x), std::move(y), 2.0 * params.m.rho / params.g.rho);
    out.upper = params.g;
    out.lower = compose(asymptotic_inverse(params.m).g, params.g);
    return out;
}

CantorResult cantor_diagonal(double p_target, int depth) {
    if (!(p_target > 0.0) || !(p_target < 1.0)) {
        throw InputError("cantor_diagonal: p must lie in (0, 1)");
    }
    if (depth < 1 || depth > 20) {
        throw InputError("cantor_diagonal: depth must lie in [1, 20]");
    }
    CantorResult out;
    // Level k contributes 2^(k-1) gaps of length (1 - 2r) r^(k-1); the
    // p-sums form a geometric series with ratio 2 r^p <= 0.95.
    out.ratio = (2.0 * std::pow(3.0, -p_target) <= 0.95) ? 1.0 / 3.0 : std::pow(0.475, 1.0 / p_target);
    const double r = out.ratio;
    if (!(r > 0.0) || !(std::pow(r, depth) > 1e-300)) {
        throw InputError("cantor_diagonal: no usable ratio at this depth (pieces underflow)");
    }
    struct Piece {
        double a;
        double b;
    };
    std::vector<Piece> pieces{{0.0, 1.0}};
    std::vector<std::pair<double, double>> gaps;
    for (int level = 1; level <= depth; ++level) {
        std::vector<Piece> next;
        next.reserve(2 * pieces.size());
        for (const Piece& p : pieces) {
            const double len = r * (p.b - p.a);
            const double g0 = p.a + len;
            const double g1 = p.b - len;
            if (!(g1 > g0) || !(len > 0.0)) {
                throw InputError("cantor_diagonal: degenerate interval at level " + std::to_string(level));
            }
            gaps.emplace_back(g0, g1);
            next.push_back({p.a, g0});
            next.push_back({g1, p.b});
        }
        pieces = std::move(next);
    }
    std::sort(gaps.begin(), gaps.end());
    const double unit = std::ldexp(1.0, -depth);
    std::size_t left = 0;
    out.diagonal.alpha = 0.0;
    out.diagonal.beta = 2.0;
    for (const auto& gap : gaps) {
        while (left < pieces.size() && pieces[left].b <= gap.first) {
            ++left;
        }
        const double mu = static_cast<double>(left) * unit;
        out.mu_left.push_back(mu);
        out.diagonal.h1_intervals.emplace_back(mu + gap.first, mu + gap.second);
    }
    out.gaps = std::move(gaps);
    out.diagonal.validate();
    return out;
}

}  // namespace cansys
