#pragma once

#include <cstddef>
#include <vector>

#include "cansys/hamiltonian.hpp"
#include "cansys/mat2.hpp"

namespace cansys {

/// One step of a piecewise description of H: trace mass `mass`, with the angle
/// moving linearly in the mass coordinate from phi0 to phi1. phi0 == phi1 is a
/// Hamburger segment. Angle jumps between cells carry no mass and cost nothing.
struct Cell {
    double mass = 0.0;
    double phi0 = 0.0;
    double phi1 = 0.0;
};

/// exp-scaled transfer matrix of one cell: the true factor is
/// exp(log_scale) * unit and has determinant 1.
struct CellFactor {
    Mat2 unit;
    double log_scale = 0.0;
};

[[nodiscard]] CellFactor cell_factor(const Cell& c, cplx z);

/// exp(-z * length * M J) for constant symmetric M, scaled like cell_factor.
[[nodiscard]] CellFactor constant_factor(const RMat2& m, double length, cplx z);

struct GridOptions {
    double z_abs = 1.0;      ///< radius the grid must serve
    double eta = 1e-6;       ///< per-cell bound on |z| * mass * (angle residual)
    bool prufer_safe = false;  ///< also force |z| * mass <= 2 on non-shear cells
    std::size_t max_cells = 50'000'000;
};

/// Hamburger segments as cells.
[[nodiscard]] std::vector<Cell> hamburger_cells(const HamburgerSpec& spec);

/// Adaptive cells for a profile. Linear or constant angle pieces with
/// piecewise constant density are reproduced exactly; everything else is
/// projected onto angles linear in the mass coordinate (3-point Gauss
/// projection) and bisected until the residual bound holds.
[[nodiscard]] std::vector<Cell> profile_cells(const AngleProfile& p, const GridOptions& opt);

/// Frozen-midpoint cells: 2^level equal pieces per smooth piece, each a
/// Hamburger segment at the midpoint angle with exact mass.
[[nodiscard]] std::vector<Cell> frozen_midpoint_cells(const AngleProfile& p, int level);

/// Unwrapped angle theta of the row (0,1) W(t, x) at the right endpoint, for
/// real x, starting from pi/2. Zeros of w22 are the x with theta in pi Z, and
/// theta is increasing in x. Non-shear cells must satisfy |x| mass <= 2.
[[nodiscard]] double prufer_angle(const std::vector<Cell>& cells, double x);

/// Same for a constant matrix Hamiltonian.
[[nodiscard]] double prufer_angle_constant(const RMat2& m, double length, double x);

}  // namespace cansys
