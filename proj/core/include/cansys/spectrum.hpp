#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "cansys/hamiltonian.hpp"
#include "cansys/monodromy.hpp"

namespace cansys {

/// Real zeros of w22 in [-R, R].
struct ZeroSet {
    std::vector<double> zeros;
    double R = 0.0;
    /// "polynomial" (completeness checked against the degree), "prufer" or "scan".
    std::string method;
    /// Degree of w22 after exact degree drops (polynomial mode).
    std::size_t degree = 0;
    /// Segments removed because they cannot reach w22 (merged equal angles,
    /// a leading sin phi = 0 or a trailing cos phi = 0).
    std::size_t degree_drop = 0;
    /// Two zeros closer than 1e-10 R.
    bool close_pair = false;
};

struct ZeroOptions {
    PolyOptions poly{};
    /// Cells for profile scans: per-cell residual bound.
    double eta = 1e-8;
    double rel_tol = 1e-12;
};

[[nodiscard]] ZeroSet zeros_w22(const HamiltonianSpec& spec, double R, const ZeroOptions& opt = {});

/// #{zeros with |x| <= r}.
[[nodiscard]] std::size_t counting_function(const ZeroSet& zeros, double r);

/// Number of zeros of w22 in [-r, r] from the Prufer angle, without locating them.
[[nodiscard]] std::size_t zero_count(const HamiltonianSpec& spec, double r, const ZeroOptions& opt = {});

struct KdbDensity {
    double empirical = 0.0;  ///< n(R) / (2R)
    double predicted = 0.0;  ///< (1/pi) int sqrt(det H)
    std::size_t count = 0;
};

[[nodiscard]] KdbDensity kdb_density(const HamiltonianSpec& spec, double R, const ZeroOptions& opt = {});

struct CutReport {
    std::vector<double> r;
    std::vector<std::size_t> n_original;
    std::vector<std::size_t> n_cut;
    /// max over the grid of n_cut - n_original - 2; at most 0 when the inequality holds.
    long long max_violation = 0;
    bool ok = true;
};

/// Checks n_cut(r) <= n(r) + 2 on a grid through [0, R] that contains every zero of either spec.
[[nodiscard]] CutReport cut_zero_inequality(const HamburgerSpec& spec, const std::set<std::size_t>& keep,
                                            double R, std::size_t grid_points = 256,
                                            const ZeroOptions& opt = {});

/// Rows (r, value) of one curve; value is a log-norm or a bound on it.
struct GrowthCurve {
    std::string tag;
    std::vector<double> r;
    std::vector<double> value;
};

struct OrderFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  ///< root mean square of the fit residuals
    double r_min = 0.0;
    double r_max = 0.0;
    std::size_t points = 0;
};

/// Least-squares line of log(value) against log(r) over the points with value > 1.
[[nodiscard]] OrderFit fit_order(const GrowthCurve& curve);

}  // namespace cansys
