#pragma once

#include <cstddef>
#include <set>
#include <utility>
#include <variant>
#include <vector>

#include "cansys/mat2.hpp"

namespace cansys {

/// Piecewise constant angle: segment j has length l_j and angle phi_j.
struct HamburgerSpec {
    std::vector<double> lengths;
    std::vector<double> angles;

    void validate() const;
    [[nodiscard]] std::size_t size() const { return lengths.size(); }
    [[nodiscard]] double total_length() const;
};

/// Rotation angle of an angle profile, as a function of the base variable.
struct PhiForm {
    enum class Kind { Constant, Chirp, Holder, Table, Steps };

    Kind kind = Kind::Constant;
    double value = 0.0;     // Constant
    double gamma = 1.0;     // Chirp: t^gamma sin(t^-beta), 0 at t = 0
    double beta = 1.0;
    double scale = 1.0;     // Holder: scale * t^exponent
    double exponent = 1.0;
    // Table: values at nodes t, linear in between.
    // Steps: t holds n+1 breakpoints, v holds n piece values.
    std::vector<double> t;
    std::vector<double> v;

    static PhiForm constant(double value);
    static PhiForm chirp(double gamma, double beta);
    static PhiForm holder(double scale, double exponent);
    static PhiForm table(std::vector<double> t, std::vector<double> v);
    static PhiForm steps(std::vector<double> breaks, std::vector<double> v);

    [[nodiscard]] double operator()(double u) const;
    /// Points where the form is not smooth, restricted to (lo, hi).
    [[nodiscard]] std::vector<double> breakpoints(double lo, double hi) const;
    /// For forms that oscillate without bound, an envelope for |phi| on
    /// [u0, u1] once the oscillation there is too fast to sample, or a
    /// negative value when the interval is resolved.
    [[nodiscard]] double unresolved_envelope(double u0, double u1) const;
};

/// Trace density of an angle profile in the base variable.
struct DensityForm {
    enum class Kind { Const, Power, Table, Steps };

    Kind kind = Kind::Const;
    double value = 1.0;   // Const
    double coeff = 1.0;   // Power: coeff * t^power, power >= 0
    double power = 0.0;
    std::vector<double> t;
    std::vector<double> v;

    static DensityForm constant(double value);
    static DensityForm power_law(double coeff, double power);
    static DensityForm table(std::vector<double> t, std::vector<double> v);
    static DensityForm steps(std::vector<double> breaks, std::vector<double> v);

    [[nodiscard]] double operator()(double u) const;
    /// Exact integral over [u0, u1].
    [[nodiscard]] double mass(double u0, double u1) const;
    /// The point u with mass(u0, u) = m; m must not exceed the mass available.
    [[nodiscard]] double inverse_mass(double u0, double m) const;
    [[nodiscard]] std::vector<double> breakpoints(double lo, double hi) const;
    [[nodiscard]] bool is_piecewise_constant() const {
        return kind == Kind::Const || kind == Kind::Steps;
    }
};

/// H(t) = density(t) xi_phi(t) xi_phi(t)^T on [alpha, beta].
///
/// With warp k != 1 (only on [0, 1]) the profile is the base profile composed
/// with t -> t^k: phi(t) = base(t^k) and density(t) = k t^(k-1) d(t^k). The
/// monodromy matrix and all integrals against the density are the same in the
/// base variable u = t^k, which is where the numerics run.
struct AngleProfile {
    double alpha = 0.0;
    double beta = 1.0;
    PhiForm phi;
    DensityForm density;
    double warp = 1.0;

    void validate() const;
    [[nodiscard]] double length() const { return beta - alpha; }
    [[nodiscard]] double to_base(double t) const;
    [[nodiscard]] double phi_at(double t) const;
    [[nodiscard]] double density_at(double t) const;
    [[nodiscard]] double total_mass() const;
};

/// H = diag(h1, h2) with h1 the indicator of a finite union of intervals.
struct DiagonalSpec {
    double alpha = 0.0;
    double beta = 1.0;
    std::vector<std::pair<double, double>> h1_intervals;

    void validate() const;
};

/// Constant H = M on an interval of the given length.
struct ConstantMatrixSpec {
    RMat2 matrix = RMat2::identity();
    double length = 1.0;

    void validate() const;
};

using HamiltonianSpec = std::variant<HamburgerSpec, AngleProfile, DiagonalSpec, ConstantMatrixSpec>;

void validate(const HamiltonianSpec& spec);

/// Composition with t -> t^kappa on [0, 1].
[[nodiscard]] AngleProfile reparameterize(const AngleProfile& spec, double kappa);

/// Keeps the listed segments (0-based) in their original order.
[[nodiscard]] HamburgerSpec cut(const HamburgerSpec& spec, const std::set<std::size_t>& keep);

/// H~ = [[1, -m], [-m, m^2]] in angle form, m = m2 o m1^{-1}.
[[nodiscard]] AngleProfile diagonal_to_profile(const DiagonalSpec& spec);

/// The diagonal Hamiltonian as segments of angle 0 (h1) and pi/2 (h2).
[[nodiscard]] HamburgerSpec to_hamburger(const DiagonalSpec& spec);

struct TraceMass {
    double l;  ///< domain length
    double L;  ///< integral of tr H
};

[[nodiscard]] TraceMass total_trace_mass(const HamiltonianSpec& spec);

}  // namespace cansys
