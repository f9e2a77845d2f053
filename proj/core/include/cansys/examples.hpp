#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "cansys/hamiltonian.hpp"
#include "cansys/regvar.hpp"

namespace cansys {

/// phi(t) = t^gamma sin(t^-beta) on [0, 1], density 1. Requires gamma <= beta <= 4.
[[nodiscard]] AngleProfile chirp_profile(double gamma, double beta);

/// Plateaus of length l_j joined by ramps of length m_j; the plateau
/// heights alternate with jumps pi(m_j).
struct PolygonParams {
    std::vector<double> l;
    std::vector<double> m;
    Modulus pi;

    void validate() const;
};

struct PolygonResult {
    /// Piecewise linear angle on [0, L].
    AngleProfile profile;
    /// Plateaus only: lengths l_j, angles phi_j.
    HamburgerSpec hamburger;
    /// Plateaus and ramps in order, each ramp at its mid angle.
    HamburgerSpec full;
    /// Positions of the plateaus in full (0-based).
    std::vector<std::size_t> plateau_indices;
};

[[nodiscard]] PolygonResult polygon_profile(const PolygonParams& params);

struct SharpnessParams {
    RegVarFn g;
    RegVarFn m;
    std::size_t N = 5000;
    /// Segment j uses m(j + shift).
    double shift = 0.0;
};

struct SharpnessResult {
    PolygonResult polygon;
    Modulus pi;
    /// Predicted envelopes for log ||W||.
    RegVarFn upper;
    RegVarFn lower;
    /// Weight f(j) = (m_j^-1 / pi(m_j))^2 for the lower bound hypothesis.
    RegVarFn hypothesis;
    /// m was multiplied by 2^rescale to get pi(m_1) < pi/2.
    int rescale = 0;
};

[[nodiscard]] SharpnessResult sharpness_family(const SharpnessParams& params);

struct CantorResult {
    DiagonalSpec diagonal;
    /// Scale factor of the two surviving pieces at each level.
    double ratio = 0.0;
    /// Removed intervals of [0, 1], left to right.
    std::vector<std::pair<double, double>> gaps;
    /// mu([0, alpha_j]) for each gap.
    std::vector<double> mu_left;
};

/// Cantor set on [0, 1] at the given depth with sum (gap length)^p
/// converging geometrically; h1 is the indicator of the union of
/// mu([0, alpha_j]) + gap_j inside [0, 2].
[[nodiscard]] CantorResult cantor_diagonal(double p_target, int depth);

}  // namespace cansys
