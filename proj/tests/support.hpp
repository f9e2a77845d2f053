#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "cansys/cansys.hpp"

namespace cansys::test {

inline constexpr double kPi = std::numbers::pi;

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::size_t uniform_size(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline HamburgerSpec random_hamburger(std::mt19937_64& rng, std::size_t n_max, double len_lo = 0.05,
                                      double len_hi = 1.0) {
    HamburgerSpec s;
    const std::size_t n = uniform_size(rng, 1, n_max);
    for (std::size_t j = 0; j < n; ++j) {
        s.lengths.push_back(uniform(rng, len_lo, len_hi));
        s.angles.push_back(uniform(rng, -kPi, kPi));
    }
    return s;
}

inline cplx random_z(std::mt19937_64& rng, double r_max) {
    return std::polar(r_max * std::sqrt(uniform(rng, 0.0, 1.0)), uniform(rng, -kPi, kPi));
}

/// Largest singular value from the eigenvalues of m^* m.
inline double brute_norm(const Mat2& m) {
    const double a = std::norm(m.m11) + std::norm(m.m21);
    const double d = std::norm(m.m12) + std::norm(m.m22);
    const cplx b = std::conj(m.m11) * m.m12 + std::conj(m.m21) * m.m22;
    const double h = 0.5 * (a - d);
    return std::sqrt(0.5 * (a + d) + std::sqrt(h * h + std::norm(b)));
}

inline double brute_norm(const RMat2& m) { return brute_norm(to_complex(m)); }

/// Long double reference for the three closed-form norms of (a, psi, phi, b).
struct Lemma5Reference {
    long double omega_norm;
    long double conj_norm;
    long double cross_norm;
};

inline Lemma5Reference lemma5_reference(double a_, double psi_, double phi_, double b_) {
    using ld = long double;
    struct M {
        ld a, b, c, d;
    };
    auto mul = [](const M& x, const M& y) {
        return M{x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    };
    // Largest singular value of a real 2x2 matrix.
    auto norm = [](const M& m) {
        return 0.5L * (std::hypot(m.a + m.d, m.b - m.c) + std::hypot(m.a - m.d, m.b + m.c));
    };
    auto omega = [](ld a, ld psi) {
        const ld c = std::cos(psi);
        const ld s = std::sin(psi);
        return M{a * c, a * s, -s / a, c / a};
    };
    auto inverse = [](const M& m) { return M{m.d, -m.b, -m.c, m.a}; };
    const ld a = a_;
    const ld b = b_;
    const M om = omega(a, psi_);
    const M ob = omega(b, phi_);
    const ld c = std::cos(static_cast<ld>(phi_));
    const ld s = std::sin(static_cast<ld>(phi_));
    const M n{c * s, -c * c, s * s, -c * s};
    return {norm(om), norm(mul(mul(om, n), inverse(om))), norm(mul(om, inverse(ob)))};
}

/// Plain left-to-right product of the factors I - z l xi xi^T J.
inline Mat2 dense_product(const HamburgerSpec& s, cplx z) {
    Mat2 w = Mat2::identity();
    for (std::size_t j = 0; j < s.size(); ++j) {
        const RMat2 n = xi_outer_j(s.angles[j]);
        const Mat2 f{1.0 - z * s.lengths[j] * n.m11, -z * s.lengths[j] * n.m12, -z * s.lengths[j] * n.m21,
                     1.0 - z * s.lengths[j] * n.m22};
        w = w * f;
    }
    return w;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline double rel_err(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace cansys::test
