#pragma once

#include <limits>
#include <memory>
#include <vector>

#include "cansys/hamiltonian.hpp"

namespace cansys {

/// Regularly varying function on a ray [r0, inf).
///
/// Power:    scale * r^rho
/// PowerLog: scale * r^rho * log(r)^kappa1 * loglog(r)^kappa2
/// Table:    log-log linear interpolation of samples, power extrapolation
///
/// PowerLog is continued below r0 by f(r0) (r/r0)^rho so that it stays
/// positive and nondecreasing on (0, inf).
struct RegVarFn {
    enum class Kind { Power, PowerLog, Table };
    Kind kind = Kind::Power;
    double rho = 1.0;
    double kappa1 = 0.0;
    double kappa2 = 0.0;
    double scale = 1.0;
    std::vector<double> x;  ///< Table abscissae, strictly increasing, positive
    std::vector<double> y;  ///< Table values, positive, nondecreasing
    /// Cached log of the PowerLog ray start; NaN means not computed.
    double ray_log = std::numeric_limits<double>::quiet_NaN();

    static RegVarFn power(double rho, double scale = 1.0);
    static RegVarFn power_log(double rho, double kappa1, double kappa2, double scale = 1.0);
    /// Index defaults to the log-log slope over the upper half of the table.
    static RegVarFn table(std::vector<double> x, std::vector<double> y);
    static RegVarFn table(std::vector<double> x, std::vector<double> y, double index);

    void validate() const;
    [[nodiscard]] double operator()(double r) const;
    [[nodiscard]] double log_eval(double r) const;
    /// log f as a function of log r; safe far outside the double range of r.
    [[nodiscard]] double log_eval_log(double log_r) const;
    [[nodiscard]] double index() const { return rho; }
    /// Start of the ray on which the closed form is positive and nondecreasing.
    [[nodiscard]] double ray_start() const;
    /// Exact inverse: closed form for Power, bisection in log space otherwise.
    [[nodiscard]] double inverse(double y) const;
    [[nodiscard]] double log_inverse_log(double log_y) const;
};

struct AsymptoticInverse {
    RegVarFn g;
    /// f(g(x)) / x lies in [0.9, 1.1] for x >= threshold on the scanned range.
    double threshold = 0.0;
};

/// Power and PowerLog are inverted symbolically with first order log
/// corrections; tables by swapping the axes.
[[nodiscard]] AsymptoticInverse asymptotic_inverse(const RegVarFn& f);

/// outer(inner(r)) to first order in the log factors (Power and PowerLog).
[[nodiscard]] RegVarFn compose(const RegVarFn& outer, const RegVarFn& inner);

/// Modulus of continuity near 0.
///
/// Power:         scale * d^alpha
/// Table:         log-log interpolation, power extrapolation below the first
///                sample, constant above the last one
/// InverseRegVar: the modulus whose Gamma is g, 1 / (d * g^{-1}(1/d))
struct Modulus {
    enum class Kind { Power, Table, InverseRegVar };
    Kind kind = Kind::Power;
    double scale = 1.0;
    double alpha = 1.0;
    std::vector<double> delta;
    std::vector<double> omega;
    std::shared_ptr<const RegVarFn> g;

    static Modulus power(double alpha, double scale = 1.0);
    static Modulus table(std::vector<double> delta, std::vector<double> omega);
    static Modulus inverse_regvar(RegVarFn g);

    void validate() const;
    [[nodiscard]] double operator()(double d) const;
};

/// Gamma_omega(r) = 1 / x with x omega(x) = 1 / r.
[[nodiscard]] double gamma_of(const Modulus& omega, double r);

/// Inverse of Gamma_omega: omega(d) = 1 / (d Gamma^{-1}(1/d)) recovers the
/// modulus from its Gamma.
[[nodiscard]] double omega_from_gamma(const Modulus& omega, double d);

struct ModulusOptions {
    std::size_t min_points = std::size_t{1} << 16;
    std::size_t max_points = std::size_t{1} << 23;
    double points_per_delta = 1000.0;
    /// Chirp angles are sampled from this base-variable value upwards.
    double chirp_floor = 1e-4;
};

/// Sliding-window estimate of sup |phi(t) - phi(s)| over |t - s| <= delta on a
/// uniform grid in t; the result is made nondecreasing.
[[nodiscard]] Modulus estimate_modulus(const AngleProfile& profile, const std::vector<double>& delta_grid,
                                       const ModulusOptions& opt = {});

/// e^rho (prod_{j<=n} f(j))^{1/n} / f(n), in log space.
[[nodiscard]] double geometric_mean_ratio(const RegVarFn& f, long long n);

}  // namespace cansys
