#include "cansys/upper_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <variant>

#include "cansys/errors.hpp"
#include "cansys/mat2.hpp"
#include "cansys/quadrature.hpp"

namespace cansys {

namespace {

struct CellSums {
    double mass = 0.0;
    double cos2 = 0.0;
    double sin2 = 0.0;
};

// Uniform access to a det-zero Hamiltonian on its own parameter interval.
class DetZeroView {
public:
    explicit DetZeroView(const HamiltonianSpec& spec, double rel_tol) {
        validate(spec);
        if (const auto* h = std::get_if<HamburgerSpec>(&spec)) {
            set_hamburger(*h, 0.0);
        } else if (const auto* d = std::get_if<DiagonalSpec>(&spec)) {
            set_hamburger(to_hamburger(*d), d->alpha);
        } else if (const auto* p = std::get_if<AngleProfile>(&spec)) {
            prof_ = *p;
        } else {
            const auto& c = std::get<ConstantMatrixSpec>(spec);
            const RMat2& m = c.matrix;
            const double tr = m.trace();
            if (std::abs(m.det()) > 1e-12 * tr * tr) {
                throw InputError("bound: det H > 0; the sine-square bound needs a rank-one Hamiltonian");
            }
            AngleProfile q;
            q.alpha = 0.0;
            q.beta = c.length;
            q.phi = PhiForm::constant(0.5 * std::atan2(m.m12 + m.m21, m.m11 - m.m22));
            q.density = DensityForm::constant(tr);
            prof_ = q;
        }
        if (prof_) {
            lo_ = prof_->alpha;
            hi_ = prof_->beta;
            mass_ = prof_->total_mass();
        }
        tol_ = rel_tol * mass_;
    }

    [[nodiscard]] double lo() const { return lo_; }
    [[nodiscard]] double hi() const { return hi_; }
    [[nodiscard]] double mass() const { return mass_; }
    [[nodiscard]] const AngleProfile* profile() const { return prof_ ? &*prof_ : nullptr; }

    [[nodiscard]] CellSums sums(double t0, double t1, double psi) const {
        CellSums out;
        if (prof_) {
            const CellIntegrals ci = cell_integrals(*prof_, t0, t1, psi, tol_);
            out.mass = ci.mass;
            out.sin2 = ci.sin2;
            out.cos2 = std::max(0.0, ci.mass - ci.sin2);
            return out;
        }
        each_overlap(t0, t1, [&](double len, double phi) {
            const double s = std::sin(phi - psi);
            const double c = std::cos(phi - psi);
            out.mass += len;
            out.sin2 += len * s * s;
            out.cos2 += len * c * c;
        });
        return out;
    }

    [[nodiscard]] double abs_sin(double t0, double t1, double psi) const {
        if (prof_) {
            auto g = [psi](double phi) { return std::array<double, 1>{std::abs(std::sin(phi - psi))}; };
            return integrate_profile<1>(*prof_, t0, t1, g, tol_)[0];
        }
        double out = 0.0;
        each_overlap(t0, t1, [&](double len, double phi) { out += len * std::abs(std::sin(phi - psi)); });
        return out;
    }

    [[nodiscard]] double circ_mean(double t0, double t1) const {
        if (prof_) {
            return circular_mean(*prof_, t0, t1, tol_);
        }
        double c = 0.0;
        double s = 0.0;
        each_overlap(t0, t1, [&](double len, double phi) {
            c += len * std::cos(2.0 * phi);
            s += len * std::sin(2.0 * phi);
        });
        if (c == 0.0 && s == 0.0) {
            return phi_at(0.5 * (t0 + t1));
        }
        return 0.5 * std::atan2(s, c);
    }

    [[nodiscard]] double phi_at(double t) const {
        if (prof_) {
            return prof_->phi_at(std::clamp(t, lo_, hi_));
        }
        return ham_.angles[segment(t)];
    }

    [[nodiscard]] bool is_hamburger() const { return !prof_; }
    [[nodiscard]] const std::vector<double>& boundaries() const { return cum_; }
    [[nodiscard]] const HamburgerSpec& hamburger() const { return ham_; }

private:
    void set_hamburger(const HamburgerSpec& h, double offset) {
        ham_ = h;
        cum_.assign(1, offset);
        for (double l : h.lengths) {
            cum_.push_back(cum_.back() + l);
        }
        lo_ = offset;
        hi_ = cum_.back();
        mass_ = hi_ - lo_;
    }

    [[nodiscard]] std::size_t segment(double t) const {
        const auto it = std::upper_bound(cum_.begin(), cum_.end(), t);
        const std::ptrdiff_t k = (it - cum_.begin()) - 1;
        return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(k, 0, static_cast<std::ptrdiff_t>(ham_.size()) - 1));
    }

    template <class F>
    void each_overlap(double t0, double t1, F&& f) const {
        for (std::size_t k = segment(t0); k < ham_.size() && cum_[k] < t1; ++k) {
            const double len = std::min(t1, cum_[k + 1]) - std::max(t0, cum_[k]);
            if (len > 0.0) {
                f(len, ham_.angles[k]);
            }
        }
    }

    std::optional<AngleProfile> prof_;
    HamburgerSpec ham_;
    std::vector<double> cum_;
    double lo_ = 0.0;
    double hi_ = 0.0;
    double mass_ = 0.0;
    double tol_ = 0.0;
};

double a3_term(double a, double b, double psi_a, double psi_b, bool exact) {
    if (exact) {
        return std::log(lemma5_norms(a, psi_a, psi_b, b).cross_norm);
    }
    const double d = psi_a - psi_b;
    const double arg = std::max(a / b, b / a) * std::abs(std::cos(d)) + std::abs(std::sin(d)) / (a * b);
    return std::max(0.0, std::log(arg));
}

BoundValue evaluate_with(const DetZeroView& v, const BoundData& data, const BoundOptions& opt) {
    data.validate(v.lo(), v.hi());
    BoundValue out;
    const std::size_t n = data.size();
    for (std::size_t j = 0; j < n; ++j) {
        const CellSums s = v.sums(data.partition[j], data.partition[j + 1], data.psi[j]);
        const double a2 = data.a[j] * data.a[j];
        out.A1 += a2 * s.cos2;
        out.A2 += s.sin2 / a2;
    }
    for (std::size_t j = 0; j + 1 < n; ++j) {
        out.A3 += a3_term(data.a[j], data.a[j + 1], data.psi[j], data.psi[j + 1], opt.exact_a3);
    }
    out.A4 = -std::log(data.a.front()) - std::log(data.a.back());
    return out;
}

// Data on a fixed partition with fixed rotations; only the distortions move.
// In x = log a the objective is a sum of convex terms (log-sum-exp of affine
// pieces), so each coordinate problem is unimodal.
class DistortionProblem {
public:
    DistortionProblem(std::vector<double> cos2, std::vector<double> sin2, std::vector<double> psi, double z,
                      const OptimizeOptions& opt)
        : c_(std::move(cos2)), s_(std::move(sin2)), psi_(std::move(psi)), z_(z), opt_(opt) {}

    [[nodiscard]] double total(const std::vector<double>& x) const {
        double t = 0.0;
        const std::size_t n = x.size();
        for (std::size_t j = 0; j < n; ++j) {
            t += cell(j, x[j]);
        }
        for (std::size_t j = 0; j + 1 < n; ++j) {
            t += link(j, x[j], x[j + 1]);
        }
        return t - x.front() - x.back();
    }

    /// All distortions equal; golden section on the common value.
    [[nodiscard]] double best_common() const {
        std::vector<double> x(c_.size());
        return golden([&](double v) {
            std::fill(x.begin(), x.end(), v);
            return total(x);
        });
    }

    void descend(std::vector<double>& x) const {
        const std::size_t n = x.size();
        double current = total(x);
        for (int sweep = 0; sweep < opt_.max_sweeps; ++sweep) {
            for (std::size_t j = 0; j < n; ++j) {
                auto local = [&](double v) {
                    double t = cell(j, v);
                    if (j > 0) {
                        t += link(j - 1, x[j - 1], v);
                    }
                    if (j + 1 < n) {
                        t += link(j, v, x[j + 1]);
                    }
                    if (j == 0) {
                        t -= v;
                    }
                    if (j + 1 == n) {
                        t -= v;
                    }
                    return t;
                };
                const double cand = golden(local);
                if (local(cand) < local(x[j])) {
                    x[j] = cand;
                }
            }
            const double next = total(x);
            const double gain = current - next;
            current = next;
            if (gain <= opt_.rel_improvement * std::max(1.0, std::abs(next))) {
                break;
            }
        }
    }

private:
    [[nodiscard]] double cell(std::size_t j, double x) const {
        return z_ * (std::exp(2.0 * x) * c_[j] + std::exp(-2.0 * x) * s_[j]);
    }

    [[nodiscard]] double link(std::size_t j, double x0, double x1) const {
        return a3_term(std::exp(x0), std::exp(x1), psi_[j], psi_[j + 1], opt_.bound.exact_a3);
    }

    template <class F>
    [[nodiscard]] double golden(F&& f) const {
        double lo = std::log(opt_.a_floor);
        double hi = 0.0;
        const double g = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = hi - g * (hi - lo);
        double x2 = lo + g * (hi - lo);
        double f1 = f(x1);
        double f2 = f(x2);
        for (int it = 0; it < opt_.golden_iterations; ++it) {
            if (f1 <= f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - g * (hi - lo);
                f1 = f(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + g * (hi - lo);
                f2 = f(x2);
            }
        }
        // The ends are candidates too: the minimum may sit on the box.
        double best = f1 <= f2 ? x1 : x2;
        double fb = std::min(f1, f2);
        for (double e : {std::log(opt_.a_floor), 0.0}) {
            const double fe = f(e);
            if (fe < fb) {
                fb = fe;
                best = e;
            }
        }
        return best;
    }

    std::vector<double> c_;
    std::vector<double> s_;
    std::vector<double> psi_;
    double z_;
    const OptimizeOptions& opt_;
};

struct Candidate {
    BoundData data;
    BoundValue value;
    double total = std::numeric_limits<double>::infinity();
    std::string origin;
};

// Coordinate descent on the distortions for a fixed partition and rotations.
// `start` seeds the distortions; empty means the best common value.
Candidate descend_on(const DetZeroView& v, std::vector<double> partition, std::vector<double> psi,
                     const std::vector<double>& start, double z, const OptimizeOptions& opt,
                     std::string origin) {
    const std::size_t n = psi.size();
    std::vector<double> c(n);
    std::vector<double> s(n);
    for (std::size_t j = 0; j < n; ++j) {
        const CellSums cs = v.sums(partition[j], partition[j + 1], psi[j]);
        c[j] = cs.cos2;
        s[j] = cs.sin2;
    }
    DistortionProblem prob(c, s, psi, z, opt);
    std::vector<double> x(n);
    if (start.empty()) {
        std::fill(x.begin(), x.end(), prob.best_common());
    } else {
        for (std::size_t j = 0; j < n; ++j) {
            x[j] = std::log(start[j]);
        }
    }
    prob.descend(x);
    Candidate out;
    out.data.partition = std::move(partition);
    out.data.psi = std::move(psi);
    out.data.a.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        out.data.a[j] = std::clamp(std::exp(x[j]), opt.a_floor, 1.0);
    }
    out.value = evaluate_with(v, out.data, opt.bound);
    out.total = out.value.total_at(z);
    out.origin = std::move(origin);
    return out;
}

std::vector<double> circular_means(const DetZeroView& v, const std::vector<double>& partition) {
    std::vector<double> psi(partition.size() - 1);
    for (std::size_t j = 0; j + 1 < partition.size(); ++j) {
        psi[j] = v.circ_mean(partition[j], partition[j + 1]);
    }
    return psi;
}

std::vector<double> equidistant(double lo, double hi, std::size_t n) {
    std::vector<double> y(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
        y[j] = (j == n) ? hi : lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(n);
    }
    return y;
}

void keep_better(Candidate& best, Candidate c) {
    if (c.total < best.total ||
        (c.total == best.total && c.data.size() < best.data.size())) {
        best = std::move(c);
    }
}

std::optional<RecipeResult> try_recipe(const DetZeroView& v, double z, const OptimizeOptions& opt) {
    const AngleProfile* p = v.profile();
    if (p == nullptr || p->phi.kind == PhiForm::Kind::Constant) {
        return std::nullopt;
    }
    try {
        const Modulus m = opt.modulus ? *opt.modulus : profile_modulus(*p);
        return thm14_recipe(*p, z, m, opt.bound);
    } catch (const InputError&) {
        return std::nullopt;
    }
}

// Coordinate descent on the natural partition: segment boundaries for
// Hamburger specs, the recipe partition for profiles (both the recipe's own
// rotations and circular means are tried), one cell otherwise.
Candidate natural_descent(const DetZeroView& v, double z, const OptimizeOptions& opt,
                          const std::optional<RecipeResult>& recipe) {
    if (v.is_hamburger()) {
        const auto& y = v.boundaries();
        std::vector<double> psi(v.hamburger().angles);
        return descend_on(v, y, psi, {}, z, opt, "segments");
    }
    if (recipe) {
        Candidate best = descend_on(v, recipe->data.partition, recipe->data.psi, recipe->data.a, z, opt,
                                    "recipe-partition");
        keep_better(best, descend_on(v, recipe->data.partition, circular_means(v, recipe->data.partition), {},
                                     z, opt, "recipe-partition-mean"));
        return best;
    }
    std::vector<double> y{v.lo(), v.hi()};
    return descend_on(v, y, circular_means(v, y), {}, z, opt, "single-cell");
}

}  // namespace

void BoundData::validate(double lo, double hi) const {
    const std::size_t n = psi.size();
    if (n == 0 || partition.size() != n + 1 || a.size() != n) {
        throw InputError("bound data: need N >= 1 rotations, N distortions and N + 1 partition points");
    }
    const double tol = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
    if (std::abs(partition.front() - lo) > tol || std::abs(partition.back() - hi) > tol) {
        throw InputError("bound data: partition must span the domain");
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (!(partition[j + 1] > partition[j])) {
            throw InputError("bound data: partition must be strictly increasing");
        }
        if (!(a[j] > 0.0 && a[j] <= 1.0)) {
            throw InputError("bound data: distortions must lie in (0, 1]");
        }
        if (!std::isfinite(psi[j])) {
            throw InputError("bound data: rotations must be finite");
        }
    }
}

BoundValue evaluate_bound(const HamiltonianSpec& spec, const BoundData& data, const BoundOptions& opt) {
    const DetZeroView v(spec, opt.rel_tol);
    return evaluate_with(v, data, opt);
}

Modulus profile_modulus(const AngleProfile& spec) {
    spec.validate();
    if (spec.phi.kind == PhiForm::Kind::Constant) {
        throw InputError("degenerate modulus: the angle is constant, so omega vanishes");
    }
    if (spec.phi.kind == PhiForm::Kind::Holder && spec.alpha == 0.0 && spec.warp == 1.0 &&
        spec.phi.exponent > 0.0 && spec.phi.exponent <= 1.0) {
        return Modulus::power(spec.phi.exponent, std::abs(spec.phi.scale));
    }
    const double l = spec.length();
    std::vector<double> grid;
    for (int k = 0; k <= 60; ++k) {
        grid.push_back(l * std::pow(10.0, -6.0 + 0.1 * k));
    }
    return estimate_modulus(spec, grid);
}

RecipeResult thm14_recipe(const AngleProfile& spec, double z_abs, const Modulus& modulus,
                          const BoundOptions& opt) {
    spec.validate();
    modulus.validate();
    if (!(z_abs > 0.0) || !std::isfinite(z_abs)) {
        throw InputError("recipe: |z| must be positive");
    }
    const double l = spec.length();
    const double mass = spec.total_mass();
    RecipeResult out;
    out.delta = 1.0 / gamma_of(modulus, mass / l * z_abs);
    const double w = modulus(out.delta);
    out.a = std::sqrt(w);
    if (!(out.delta < l)) {
        throw InputError("recipe: |z| too small, delta = 1/Gamma(L|z|/l) is not below the length");
    }
    if (!(out.a <= 1.0) || !(out.a > 0.0)) {
        throw InputError("recipe: |z| too small, a = omega(delta)^(1/2) is not in (0, 1]");
    }
    const double ratio = l / out.delta;
    std::size_t n = static_cast<std::size_t>(std::ceil(ratio));
    if (static_cast<double>(n) - 1.0 >= ratio) {
        --n;
    }
    n = std::max<std::size_t>(n, 1);
    BoundData& d = out.data;
    d.partition.resize(n + 1);
    for (std::size_t j = 0; j < n; ++j) {
        d.partition[j] = spec.alpha + static_cast<double>(j) * out.delta;
    }
    d.partition[n] = spec.beta;
    d.psi.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        d.psi[j] = spec.phi_at(d.partition[j + 1]);
    }
    d.a.assign(n, out.a);
    out.value = evaluate_bound(spec, d, opt);
    out.B1 = out.a * out.a * mass;
    out.B2 = w * w * mass / (out.a * out.a);
    out.B3 = ratio * w / (out.a * out.a);
    return out;
}

RomanovReport romanov_check(const HamiltonianSpec& spec, double d, const BoundFamily& family, double C,
                            const std::vector<double>& r_grid, const BoundOptions& opt) {
    if (!(d > 0.0 && d < 1.0)) {
        throw InputError("romanov_check: d must lie in (0, 1)");
    }
    if (!(C > 0.0)) {
        throw InputError("romanov_check: C must be positive");
    }
    const DetZeroView v(spec, opt.rel_tol);
    RomanovReport rep;
    rep.d = d;
    rep.C = C;
    rep.K = 4.0 * C;
    rep.holds.fill(true);
    for (double r : r_grid) {
        const BoundData data = family(r);
        data.validate(v.lo(), v.hi());
        const std::size_t n = data.size();
        RomanovRow row;
        row.r = r;
        for (std::size_t j = 0; j < n; ++j) {
            const double t0 = data.partition[j];
            const double t1 = data.partition[j + 1];
            const double a2 = data.a[j] * data.a[j];
            // ||H - trH xi_psi xi_psi^T|| = trH |sin(phi - psi)|
            row.lhs[0] += v.abs_sin(t0, t1, data.psi[j]) / a2;
            row.lhs[1] += a2 * v.sums(t0, t1, data.psi[j]).mass;
        }
        for (std::size_t j = 0; j + 1 < n; ++j) {
            row.lhs[2] += std::log1p(std::abs(std::sin(data.psi[j] - data.psi[j + 1])) /
                                     (data.a[j] * data.a[j + 1]));
            row.lhs[3] += std::abs(std::log(data.a[j + 1] / data.a[j]));
        }
        row.lhs[3] += -std::log(data.a.front()) - std::log(data.a.back());
        const std::array<double, 4> scale{std::pow(r, d - 1.0), std::pow(r, d - 1.0), std::pow(r, d),
                                          std::pow(r, d)};
        for (std::size_t k = 0; k < 4; ++k) {
            row.rhs[k] = C * scale[k];
            row.required_C[k] = row.lhs[k] / scale[k];
            row.ok[k] = row.lhs[k] <= row.rhs[k];
            rep.max_required_C[k] = std::max(rep.max_required_C[k], row.required_C[k]);
            rep.holds[k] = rep.holds[k] && row.ok[k];
        }
        rep.rows.push_back(row);
    }
    rep.all_ok = rep.holds[0] && rep.holds[1] && rep.holds[2] && rep.holds[3];
    return rep;
}

OptimizeResult optimize_bound(const HamiltonianSpec& spec, double z_abs, Strategy strategy,
                              const OptimizeOptions& opt) {
    if (!(z_abs > 0.0) || !std::isfinite(z_abs)) {
        throw InputError("optimize_bound: |z| must be positive");
    }
    if (!(opt.a_floor > 0.0 && opt.a_floor < 1.0)) {
        throw InputError("optimize_bound: a_floor must lie in (0, 1)");
    }
    const DetZeroView v(spec, opt.bound.rel_tol);
    const std::optional<RecipeResult> recipe = try_recipe(v, z_abs, opt);
    if (strategy == Strategy::Recipe) {
        if (!recipe) {
            if (v.profile() == nullptr) {
                throw InputError("optimize_bound: the recipe needs a continuous-angle profile");
            }
            // Surface the underlying reason.
            const Modulus m = opt.modulus ? *opt.modulus : profile_modulus(*v.profile());
            (void)thm14_recipe(*v.profile(), z_abs, m, opt.bound);
        }
        return {recipe->data, recipe->value, "recipe"};
    }
    Candidate best = natural_descent(v, z_abs, opt, recipe);
    if (strategy == Strategy::DyadicScan) {
        int kmax = opt.max_dyadic_level;
        if (kmax < 0) {
            std::size_t natural = best.data.size();
            kmax = 1;
            while ((std::size_t{1} << kmax) < natural && kmax < 17) {
                ++kmax;
            }
            kmax = std::max(kmax + 1, 6);
        }
        for (int k = 0; k <= kmax; ++k) {
            const std::size_t n = std::size_t{1} << k;
            auto y = equidistant(v.lo(), v.hi(), n);
            auto psi = circular_means(v, y);
            keep_better(best, descend_on(v, std::move(y), std::move(psi), {}, z_abs, opt,
                                         "dyadic-" + std::to_string(k)));
        }
    }
    if (recipe && recipe->value.total_at(z_abs) < best.total) {
        return {recipe->data, recipe->value, "recipe"};
    }
    return {std::move(best.data), best.value, std::move(best.origin)};
}

}  // namespace cansys
