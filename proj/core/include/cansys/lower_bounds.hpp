#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "cansys/hamiltonian.hpp"
#include "cansys/regvar.hpp"

namespace cansys {

/// log of the coefficients of F(z) = sum_n [prod_{j<=n} l_{j+1} l_j sin^2(phi_{j+1} - phi_j)] z^n;
/// -inf marks a zero coefficient.
struct LogSeries {
    std::vector<double> log_coeffs;
};

/// Coefficients up to n_max, truncated to the available segment count.
[[nodiscard]] LogSeries f_series(const HamburgerSpec& spec, std::size_t n_max);

struct LowerBound {
    double value = 0.0;
    /// Last index whose term contributes at least 1e-16 of the sum.
    std::size_t truncation = 0;
};

/// (1/2) log F(r^2) by log-sum-exp.
[[nodiscard]] LowerBound lower_bound_at(const LogSeries& series, double r);

/// min over n in [n_lo, n_hi] of log g^{-1}(n) + log_coeffs[n] / n.
[[nodiscard]] double liminf_coefficient_bound(const LogSeries& series,
                                              const std::function<double(double)>& g_inverse,
                                              std::size_t n_lo, std::size_t n_hi);

struct Cor48Report {
    /// f(j) l_{j+1} l_j sin^2(phi_{j+1} - phi_j) for j = 1..n (index j-1).
    std::vector<double> ratios;
    double min_ratio = 0.0;
    std::size_t argmin = 0;  ///< 1-based j
    /// Asymptotic inverse g of f; the predicted lower rate is r -> g(r^2).
    AsymptoticInverse g;

    [[nodiscard]] double predicted_rate(double r) const { return g.g(r * r); }
};

[[nodiscard]] Cor48Report cor48_rate(const HamburgerSpec& spec, const RegVarFn& f, std::size_t n_check);

/// Adds pi/4 to every angle when |cos phi_1| < 1e-8; F is unchanged.
[[nodiscard]] HamburgerSpec normalize_first_angle(const HamburgerSpec& spec);

struct SlackFit {
    double slope = 0.0;      ///< least-squares slope of max(0, lower - maxmod) against log r
    double intercept = 0.0;  ///< smallest C >= 0 with lower <= maxmod + C + slope log r
};

/// Fits the logarithmic slack by which a lower bound exceeds the maximum modulus.
[[nodiscard]] SlackFit fit_log_slack(const std::vector<double>& r, const std::vector<double>& lower,
                                     const std::vector<double>& maxmod);

}  // namespace cansys
