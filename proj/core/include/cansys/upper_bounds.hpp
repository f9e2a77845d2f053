#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cansys/hamiltonian.hpp"
#include "cansys/regvar.hpp"

namespace cansys {

/// Partition y_0 < ... < y_N of the domain, rotations psi_j and distortions
/// a_j in (0, 1] for the sine-square bound.
struct BoundData {
    std::vector<double> partition;
    std::vector<double> psi;
    std::vector<double> a;

    [[nodiscard]] std::size_t size() const { return psi.size(); }
    void validate(double lo, double hi) const;
};

struct BoundValue {
    double A1 = 0.0;
    double A2 = 0.0;
    double A3 = 0.0;
    double A4 = 0.0;

    [[nodiscard]] double total_at(double z_abs) const { return z_abs * (A1 + A2) + A3 + A4; }
};

struct BoundOptions {
    /// Use the exact norm of Omega_j Omega_{j+1}^{-1} in the A3 summands.
    bool exact_a3 = false;
    /// Quadrature tolerance per cell, relative to the total trace mass.
    double rel_tol = 1e-10;
};

/// A1..A4 for a det-zero spec. Hamburger and Diagonal specs are summed
/// exactly, profiles by quadrature; rank-one constant matrices are accepted
/// as constant-angle profiles, all others are rejected.
[[nodiscard]] BoundValue evaluate_bound(const HamiltonianSpec& spec, const BoundData& data,
                                        const BoundOptions& opt = {});

struct RecipeResult {
    BoundData data;
    BoundValue value;
    double delta = 0.0;
    double a = 0.0;
    /// Upper estimates of A1, A2, A3 used to choose delta and a.
    double B1 = 0.0;
    double B2 = 0.0;
    double B3 = 0.0;
};

/// Equidistant data from a modulus: delta = 1 / Gamma(L r / l), a = omega(delta)^{1/2},
/// psi_j = phi(y_j).
[[nodiscard]] RecipeResult thm14_recipe(const AngleProfile& spec, double z_abs, const Modulus& modulus,
                                        const BoundOptions& opt = {});

/// Power modulus for Holder angles starting at the left end, otherwise an
/// estimate on a logarithmic grid of deltas.
[[nodiscard]] Modulus profile_modulus(const AngleProfile& spec);

struct RomanovRow {
    double r = 0.0;
    std::array<double, 4> lhs{};
    std::array<double, 4> rhs{};
    /// lhs / r^{d-1} for conditions 1, 2 and lhs / r^d for 3, 4.
    std::array<double, 4> required_C{};
    std::array<bool, 4> ok{};
};

struct RomanovReport {
    double d = 0.0;
    double C = 0.0;
    std::vector<RomanovRow> rows;
    std::array<double, 4> max_required_C{};
    std::array<bool, 4> holds{};
    bool all_ok = true;
    /// Constant in log ||W(z)|| <= K |z|^d implied when all conditions hold.
    double K = 0.0;
};

using BoundFamily = std::function<BoundData(double r)>;

/// Evaluates the four hypotheses of Romanov's growth theorem for each radius.
[[nodiscard]] RomanovReport romanov_check(const HamiltonianSpec& spec, double d, const BoundFamily& family,
                                          double C, const std::vector<double>& r_grid,
                                          const BoundOptions& opt = {});

enum class Strategy { Recipe, CoordinateDescent, DyadicScan };

struct OptimizeOptions {
    double a_floor = 1e-8;
    double rel_improvement = 1e-6;
    int max_sweeps = 200;
    int golden_iterations = 60;
    /// Largest dyadic level scanned; negative picks one above the recipe level.
    int max_dyadic_level = -1;
    /// Modulus for the recipe; estimated from the profile when absent.
    std::optional<Modulus> modulus;
    BoundOptions bound{};
};

struct OptimizeResult {
    BoundData data;
    BoundValue value;
    /// Which candidate won, e.g. "recipe", "recipe-partition", "dyadic-8".
    std::string origin;
};

[[nodiscard]] OptimizeResult optimize_bound(const HamiltonianSpec& spec, double z_abs, Strategy strategy,
                                            const OptimizeOptions& opt = {});

}  // namespace cansys
