#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "cansys/hamiltonian.hpp"

namespace cansys {

struct QuadOptions {
    double abs_tol = 1e-10;
    double rel_tol = 0.0;
    int max_depth = 60;
};

namespace detail {

template <std::size_t K>
using Vec = std::array<double, K>;

template <std::size_t K>
Vec<K> simpson(const Vec<K>& fa, const Vec<K>& fm, const Vec<K>& fb, double h) {
    Vec<K> out{};
    for (std::size_t k = 0; k < K; ++k) {
        out[k] = h / 6.0 * (fa[k] + 4.0 * fm[k] + fb[k]);
    }
    return out;
}

template <std::size_t K, class F, class Accept>
Vec<K> simpson_rec(F& f, Accept& accept, double a, double b, const Vec<K>& fa, const Vec<K>& fm,
                   const Vec<K>& fb, const Vec<K>& whole, double tol, double rel, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const Vec<K> flm = f(lm);
    const Vec<K> frm = f(rm);
    const Vec<K> left = simpson<K>(fa, flm, fm, m - a);
    const Vec<K> right = simpson<K>(fm, frm, fb, b - m);
    bool ok = depth <= 0 || accept(a, b);
    if (!ok) {
        ok = true;
        for (std::size_t k = 0; k < K; ++k) {
            const double two = left[k] + right[k];
            const double bound = std::max(tol, rel * std::abs(two));
            if (std::abs(two - whole[k]) > 15.0 * bound) {
                ok = false;
                break;
            }
        }
    }
    if (ok) {
        Vec<K> out{};
        for (std::size_t k = 0; k < K; ++k) {
            const double two = left[k] + right[k];
            out[k] = two + (two - whole[k]) / 15.0;
        }
        return out;
    }
    const Vec<K> l = simpson_rec<K>(f, accept, a, m, fa, flm, fm, left, 0.5 * tol, rel, depth - 1);
    const Vec<K> r = simpson_rec<K>(f, accept, m, b, fm, frm, fb, right, 0.5 * tol, rel, depth - 1);
    Vec<K> out{};
    for (std::size_t k = 0; k < K; ++k) {
        out[k] = l[k] + r[k];
    }
    return out;
}

inline constexpr std::array<double, 10> kGl10Nodes{
    -0.9739065285171717, -0.8650633666889845, -0.6794095682990244, -0.4333953941292472,
    -0.1488743389816312, 0.1488743389816312,  0.4333953941292472,  0.6794095682990244,
    0.8650633666889845,  0.9739065285171717};
inline constexpr std::array<double, 10> kGl10Weights{
    0.0666713443086881, 0.1494513491505806, 0.2190863625159820, 0.2692667193099963,
    0.2955242247147529, 0.2955242247147529, 0.2692667193099963, 0.2190863625159820,
    0.1494513491505806, 0.0666713443086881};

}  // namespace detail

/// Adaptive Simpson for a vector-valued integrand. `accept(a, b)` may end the
/// subdivision of [a, b] early (used for regions where the integrand is known
/// to be negligible but cannot be resolved).
template <std::size_t K, class F, class Accept>
std::array<double, K> adaptive_simpson(F f, double a, double b, const QuadOptions& opt,
                                       Accept accept) {
    if (!(b > a)) {
        return {};
    }
    const auto fa = f(a);
    const auto fb = f(b);
    const auto fm = f(0.5 * (a + b));
    const auto whole = detail::simpson<K>(fa, fm, fb, b - a);
    return detail::simpson_rec<K>(f, accept, a, b, fa, fm, fb, whole, opt.abs_tol, opt.rel_tol,
                                  opt.max_depth);
}

template <std::size_t K, class F>
std::array<double, K> adaptive_simpson(F f, double a, double b, const QuadOptions& opt) {
    return adaptive_simpson<K>(f, a, b, opt, [](double, double) { return false; });
}

/// Scalar convenience wrapper.
template <class F>
double adaptive_simpson_scalar(F f, double a, double b, const QuadOptions& opt = {}) {
    auto g = [&f](double x) { return std::array<double, 1>{f(x)}; };
    return adaptive_simpson<1>(g, a, b, opt)[0];
}

/// 10-point Gauss-Legendre on [a, b].
template <std::size_t K, class F>
std::array<double, K> gauss_legendre10(F f, double a, double b) {
    std::array<double, K> out{};
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    for (std::size_t i = 0; i < 10; ++i) {
        const auto v = f(c + h * detail::kGl10Nodes[i]);
        for (std::size_t k = 0; k < K; ++k) {
            out[k] += h * detail::kGl10Weights[i] * v[k];
        }
    }
    return out;
}

/// Integral of g(phi(t)) * trH(t) over [t0, t1], with g returning K values.
///
/// Runs in the base variable. Pieces with tabulated angle and density use
/// Gauss-Legendre on sub-pieces whose angle change is at most 0.5, constant
/// pieces are exact, and analytic forms go through adaptive Simpson with
/// absolute tolerance `abs_tol` spread over the piece.
template <std::size_t K, class G>
std::array<double, K> integrate_profile(const AngleProfile& p, double t0, double t1, G g,
                                        double abs_tol) {
    std::array<double, K> total{};
    const double u0 = p.to_base(std::max(t0, p.alpha));
    const double u1 = p.to_base(std::min(t1, p.beta));
    if (!(u1 > u0)) {
        return total;
    }
    std::vector<double> cuts{u0};
    {
        auto a = p.phi.breakpoints(u0, u1);
        auto b = p.density.breakpoints(u0, u1);
        cuts.insert(cuts.end(), a.begin(), a.end());
        cuts.insert(cuts.end(), b.begin(), b.end());
        cuts.push_back(u1);
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    }
    const bool phi_const =
        p.phi.kind == PhiForm::Kind::Constant || p.phi.kind == PhiForm::Kind::Steps;
    const bool phi_linear = p.phi.kind == PhiForm::Kind::Table;
    const bool dens_smooth = p.density.kind != DensityForm::Kind::Power;
    const double span = u1 - u0;

    auto add = [&total](const std::array<double, K>& v) {
        for (std::size_t k = 0; k < K; ++k) {
            total[k] += v[k];
        }
    };
    auto integrand = [&p, &g](double u) {
        auto v = g(p.phi(u));
        const double rho = p.density(u);
        for (auto& x : v) {
            x *= rho;
        }
        return v;
    };

    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i];
        const double b = cuts[i + 1];
        if (!(b > a)) {
            continue;
        }
        const double mid = 0.5 * (a + b);
        if (phi_const && p.density.is_piecewise_constant()) {
            auto v = g(p.phi(mid));
            const double m = p.density.mass(a, b);
            for (auto& x : v) {
                x *= m;
            }
            add(v);
            continue;
        }
        if ((phi_const || phi_linear) && dens_smooth) {
            const double dphi = std::abs(p.phi(b) - p.phi(a));
            const int n = std::max(1, static_cast<int>(std::ceil(dphi / 0.5)));
            const double h = (b - a) / n;
            for (int j = 0; j < n; ++j) {
                const double x0 = a + j * h;
                const double x1 = (j + 1 == n) ? b : x0 + h;
                add(gauss_legendre10<K>(integrand, x0, x1));
            }
            continue;
        }
        QuadOptions opt;
        opt.abs_tol = abs_tol * (b - a) / span;
        const double budget = abs_tol;
        const double rho_scale = std::max({p.density(a), p.density(mid), p.density(b)});
        // A chirp below the sampling limit is accepted once its whole left
        // part can move the integral by less than the budget.
        auto accept = [&p, budget, rho_scale](double x0, double x1) {
            const double env = p.phi.unresolved_envelope(x0, x1);
            return env >= 0.0 && 4.0 * env * rho_scale * x1 <= budget;
        };
        add(adaptive_simpson<K>(integrand, a, b, opt, accept));
    }
    return total;
}

/// Integral of trH over [t0, t1] and of sin^2(phi - psi) trH.
struct CellIntegrals {
    double mass = 0.0;
    double sin2 = 0.0;
};

[[nodiscard]] CellIntegrals cell_integrals(const AngleProfile& p, double t0, double t1, double psi,
                                           double abs_tol);

/// Half the argument of the integral of exp(2 i phi) trH over the cell; the
/// angle minimising the sine-square integral.
[[nodiscard]] double circular_mean(const AngleProfile& p, double t0, double t1, double abs_tol);

}  // namespace cansys
