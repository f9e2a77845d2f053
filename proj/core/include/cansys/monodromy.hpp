#pragma once

#include <cstddef>
#include <vector>

#include "cansys/hamiltonian.hpp"
#include "cansys/mat2.hpp"
#include "cansys/propagation.hpp"

namespace cansys {

/// W(z) = sum_k C_k z^k with real 2x2 coefficients.
struct MatrixPolynomial {
    std::vector<double> c11, c12, c21, c22;

    [[nodiscard]] std::size_t degree() const { return c11.empty() ? 0 : c11.size() - 1; }
    [[nodiscard]] Mat2 eval(cplx z) const;
    /// Coefficients of det W, which should be the constant polynomial 1.
    [[nodiscard]] std::vector<double> det_coefficients() const;
};

struct PolyOptions {
    std::size_t cap = 2000;
    /// Coefficient arithmetic in double-double above this segment count.
    std::size_t compensated_above = 200;
};

/// Exact coefficient product of the Hamburger factors I - z l_j xi xi^T J.
[[nodiscard]] MatrixPolynomial monodromy_poly(const HamburgerSpec& spec, const PolyOptions& opt = {});

enum class Scheme { Adaptive, FrozenMidpoint };
enum class Accumulation { Stable, Fast };

struct MonodromyOptions {
    double tol = 1e-8;          ///< relative change of log-norm between refinements
    int max_refinements = 24;
    double eta0 = 1e-3;         ///< initial per-cell residual bound (adaptive scheme)
    Scheme scheme = Scheme::Adaptive;
    Accumulation accumulation = Accumulation::Stable;
};

struct MonodromyResult {
    ScaledMat2 W;
    double log_norm = 0.0;
    /// log det W; its real part is 0 up to rounding (Stable accumulation).
    cplx log_det{0.0, 0.0};
    int refinements = 0;
    std::size_t cells = 0;
};

/// Product of cell factors, left to right.
[[nodiscard]] MonodromyResult propagate(const std::vector<Cell>& cells, cplx z,
                                        Accumulation acc = Accumulation::Stable);

[[nodiscard]] MonodromyResult monodromy_at(const HamiltonianSpec& spec, cplx z,
                                           const MonodromyOptions& opt = {});

struct MaxModulusOptions {
    int samples = 64;
    bool refine = true;
    int golden_iterations = 40;
    MonodromyOptions monodromy{};
};

/// max over |z| = r of log ||W(z)||, sampled on theta in [0, pi].
[[nodiscard]] double max_modulus(const HamiltonianSpec& spec, double r,
                                 const MaxModulusOptions& opt = {});

struct PnPolynomials {
    /// p[n-1] holds the coefficients of p_n (degree n - 1).
    std::vector<std::vector<double>> p;
    /// (prod_{j<n} l_j) cos phi_1 prod_{j<n} sin(phi_{j+1} - phi_j)
    std::vector<double> expected_leading;
    /// False where a jump had |sin| < 1e-13 and the check was skipped.
    std::vector<bool> checked;
};

/// p_n(z) = (1, 0) W(t_{n-1}, z) xi_{phi_n}, with the leading coefficient
/// verified against the closed form (relative 1e-9).
[[nodiscard]] PnPolynomials pn_polynomials(const HamburgerSpec& spec, const PolyOptions& opt = {});

/// sum_n |p_n(z)|^2 l_n, computed from running products.
[[nodiscard]] double pn_kernel_sum(const HamburgerSpec& spec, cplx z);

/// (w12 conj(w11) - w11 conj(w12)) / (z - conj z) for W = W_H(z); real for real H.
[[nodiscard]] double herglotz_kernel(const Mat2& w, cplx z);

}  // namespace cansys
