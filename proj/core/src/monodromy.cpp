#include "cansys/monodromy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <type_traits>

#include "cansys/errors.hpp"

namespace cansys {

namespace {

constexpr double kPi = std::numbers::pi;

// Double-double number for compensated coefficient products.
struct DD {
    double hi = 0.0;
    double lo = 0.0;
};

inline DD two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    const double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline DD operator+(DD a, DD b) {
    DD s = two_sum(a.hi, b.hi);
    s.lo += a.lo + b.lo;
    return two_sum(s.hi, s.lo);
}

inline DD operator*(DD a, double b) {
    const double p = a.hi * b;
    const double e = std::fma(a.hi, b, -p);
    return two_sum(p, e + a.lo * b);
}

inline DD operator-(DD a) { return {-a.hi, -a.lo}; }

inline double value_of(double x) { return x; }
inline double value_of(DD x) { return x.hi + x.lo; }

template <class T>
MatrixPolynomial poly_product(const HamburgerSpec& spec) {
    const std::size_t n = spec.size();
    std::vector<T> p11(n + 1), p12(n + 1), p21(n + 1), p22(n + 1);
    p11[0] = T{1.0};
    p22[0] = T{1.0};
    for (std::size_t j = 0; j < n; ++j) {
        const double c = std::cos(spec.angles[j]);
        const double s = std::sin(spec.angles[j]);
        const double l = spec.lengths[j];
        const double ncs = l * c * s;
        const double nc2 = l * c * c;
        const double ns2 = l * s * s;
        // P <- P (I - z l N), N = [[cs, -c^2], [s^2, -cs]]
        for (std::size_t k = j + 1; k >= 1; --k) {
            const T a = p11[k - 1];
            const T b = p12[k - 1];
            const T cc = p21[k - 1];
            const T d = p22[k - 1];
            p11[k] = p11[k] + (-(a * ncs) + -(b * ns2));
            p12[k] = p12[k] + (a * nc2 + b * ncs);
            p21[k] = p21[k] + (-(cc * ncs) + -(d * ns2));
            p22[k] = p22[k] + (cc * nc2 + d * ncs);
        }
    }
    MatrixPolynomial out;
    for (std::size_t k = 0; k <= n; ++k) {
        out.c11.push_back(value_of(p11[k]));
        out.c12.push_back(value_of(p12[k]));
        out.c21.push_back(value_of(p21[k]));
        out.c22.push_back(value_of(p22[k]));
    }
    return out;
}

cplx horner(const std::vector<double>& c, cplx z) {
    cplx acc = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) {
        acc = acc * z + c[k];
    }
    return acc;
}

MonodromyResult from_constant(const ConstantMatrixSpec& s, cplx z) {
    const bool flip = z.imag() < 0.0;
    const cplx zz = flip ? std::conj(z) : z;
    const CellFactor f = constant_factor(s.matrix, s.length, zz);
    MonodromyResult out;
    out.W = ScaledMat2::from(flip ? conj(f.unit) : f.unit, f.log_scale);
    out.log_norm = out.W.log_norm();
    const cplx d = f.unit.det();
    out.log_det = cplx(std::log(std::abs(d)) + 2.0 * f.log_scale, flip ? -std::arg(d) : std::arg(d));
    out.cells = 1;
    return out;
}

bool exactly_representable(const AngleProfile& p) {
    if (p.phi.kind == PhiForm::Kind::Constant || p.phi.kind == PhiForm::Kind::Steps) {
        return true;
    }
    return p.phi.kind == PhiForm::Kind::Table && p.density.is_piecewise_constant();
}

[[noreturn]] void no_convergence(const char* where, int levels, double a, double b) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s: no convergence after %d refinements (last iterates %.17g, %.17g)",
                  where, levels, a, b);
    throw NumericalError(buf);
}

// Maximum of f over theta in [0, pi]: equally spaced samples, then a golden
// section search around the best sample.
template <class F>
double circle_max(F&& f, const MaxModulusOptions& opt) {
    const int n = std::max(opt.samples, 4);
    std::vector<double> vals(static_cast<std::size_t>(n));
    std::size_t best = 0;
    for (int k = 0; k < n; ++k) {
        vals[static_cast<std::size_t>(k)] = f(kPi * k / (n - 1));
        if (vals[static_cast<std::size_t>(k)] > vals[best]) {
            best = static_cast<std::size_t>(k);
        }
    }
    double result = vals[best];
    if (!opt.refine) {
        return result;
    }
    const double h = kPi / (n - 1);
    double lo = std::max(0.0, h * (static_cast<double>(best) - 1.0));
    double hi = std::min(kPi, h * (static_cast<double>(best) + 1.0));
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - g * (hi - lo);
    double x2 = lo + g * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int it = 0; it < opt.golden_iterations; ++it) {
        if (f1 >= f2) {
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
    return std::max({result, f1, f2});
}

}  // namespace

Mat2 MatrixPolynomial::eval(cplx z) const {
    return {horner(c11, z), horner(c12, z), horner(c21, z), horner(c22, z)};
}

std::vector<double> MatrixPolynomial::det_coefficients() const {
    const std::size_t n = c11.size();
    std::vector<double> out(n == 0 ? 0 : 2 * n - 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            out[i + j] += c11[i] * c22[j] - c12[i] * c21[j];
        }
    }
    return out;
}

MatrixPolynomial monodromy_poly(const HamburgerSpec& spec, const PolyOptions& opt) {
    spec.validate();
    if (spec.size() > opt.cap) {
        throw InputError("monodromy_poly: segment count " + std::to_string(spec.size()) +
                         " exceeds the cap " + std::to_string(opt.cap));
    }
    if (spec.size() > opt.compensated_above) {
        return poly_product<DD>(spec);
    }
    return poly_product<double>(spec);
}

MonodromyResult propagate(const std::vector<Cell>& cells, cplx z, Accumulation acc) {
    // The lower half plane goes through the same arithmetic as the upper one,
    // so W(conj z) = conj W(z) holds exactly.
    const bool flip = z.imag() < 0.0;
    const cplx zz = flip ? std::conj(z) : z;
    MonodromyResult out;
    out.cells = cells.size();
    if (acc == Accumulation::Stable) {
        StableProduct sp;
        for (const Cell& c : cells) {
            const CellFactor f = cell_factor(c, zz);
            sp.multiply_unimodular(f.unit, f.log_scale);
        }
        out.W = sp.result();
        out.log_norm = sp.log_norm();
        out.log_det = sp.log_det();
    } else {
        ScaledProduct sp;
        for (const Cell& c : cells) {
            const CellFactor f = cell_factor(c, zz);
            sp.multiply(f.unit, f.log_scale);
        }
        out.W = sp.result();
        out.log_norm = out.W.log_scale;
        const cplx d = out.W.unit.det();
        out.log_det = cplx(std::log(std::abs(d)) + 2.0 * out.W.log_scale, std::arg(d));
    }
    if (!std::isfinite(out.log_norm)) {
        throw NumericalError("propagate: non-finite log-norm");
    }
    if (flip) {
        out.W.unit = conj(out.W.unit);
        out.log_det = std::conj(out.log_det);
    }
    return out;
}

MonodromyResult monodromy_at(const HamiltonianSpec& spec, cplx z, const MonodromyOptions& opt) {
    validate(spec);
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw InputError("monodromy_at: z must be finite");
    }
    if (const auto* h = std::get_if<HamburgerSpec>(&spec)) {
        return propagate(hamburger_cells(*h), z, opt.accumulation);
    }
    if (const auto* d = std::get_if<DiagonalSpec>(&spec)) {
        return propagate(hamburger_cells(to_hamburger(*d)), z, opt.accumulation);
    }
    if (const auto* c = std::get_if<ConstantMatrixSpec>(&spec)) {
        return from_constant(*c, z);
    }
    const auto& p = std::get<AngleProfile>(spec);
    if (z == cplx(0.0, 0.0) || exactly_representable(p)) {
        GridOptions g;
        g.z_abs = std::abs(z);
        MonodromyResult r = propagate(profile_cells(p, g), z, opt.accumulation);
        return r;
    }
    double prev = 0.0;
    for (int k = 0; k <= opt.max_refinements; ++k) {
        std::vector<Cell> cells;
        if (opt.scheme == Scheme::Adaptive) {
            GridOptions g;
            g.z_abs = std::abs(z);
            g.eta = opt.eta0 * std::pow(8.0, -k);
            cells = profile_cells(p, g);
        } else {
            cells = frozen_midpoint_cells(p, 4 + k);
        }
        MonodromyResult r = propagate(cells, z, opt.accumulation);
        r.refinements = k;
        if (k > 0 && std::abs(r.log_norm - prev) <= opt.tol * (1.0 + std::abs(r.log_norm))) {
            return r;
        }
        if (k == opt.max_refinements) {
            no_convergence("monodromy_at", k, prev, r.log_norm);
        }
        prev = r.log_norm;
    }
    throw NumericalError("monodromy_at: unreachable");
}

double max_modulus(const HamiltonianSpec& spec, double r, const MaxModulusOptions& opt) {
    validate(spec);
    if (!(r > 0.0) || !std::isfinite(r)) {
        throw InputError("max_modulus: r must be positive");
    }
    const Accumulation acc = opt.monodromy.accumulation;
    auto over_cells = [&](const std::vector<Cell>& cells) {
        return circle_max(
            [&](double th) { return propagate(cells, std::polar(r, th), acc).log_norm; }, opt);
    };
    if (const auto* h = std::get_if<HamburgerSpec>(&spec)) {
        return over_cells(hamburger_cells(*h));
    }
    if (const auto* d = std::get_if<DiagonalSpec>(&spec)) {
        return over_cells(hamburger_cells(to_hamburger(*d)));
    }
    if (const auto* c = std::get_if<ConstantMatrixSpec>(&spec)) {
        return circle_max([&](double th) { return from_constant(*c, std::polar(r, th)).log_norm; },
                          opt);
    }
    const auto& p = std::get<AngleProfile>(spec);
    GridOptions g;
    g.z_abs = r;
    if (exactly_representable(p)) {
        return over_cells(profile_cells(p, g));
    }
    const MonodromyOptions& mo = opt.monodromy;
    double prev = 0.0;
    for (int k = 0; k <= mo.max_refinements; ++k) {
        std::vector<Cell> cells;
        if (mo.scheme == Scheme::Adaptive) {
            g.eta = mo.eta0 * std::pow(8.0, -k);
            cells = profile_cells(p, g);
        } else {
            cells = frozen_midpoint_cells(p, 4 + k);
        }
        const double v = over_cells(cells);
        if (k > 0 && std::abs(v - prev) <= mo.tol * (1.0 + std::abs(v))) {
            return v;
        }
        if (k == mo.max_refinements) {
            no_convergence("max_modulus", k, prev, v);
        }
        prev = v;
    }
    throw NumericalError("max_modulus: unreachable");
}

PnPolynomials pn_polynomials(const HamburgerSpec& spec, const PolyOptions& opt) {
    spec.validate();
    const std::size_t n = spec.size();
    if (n > opt.cap) {
        throw InputError("pn_polynomials: segment count exceeds the cap");
    }
    PnPolynomials out;
    std::vector<double> r1{1.0};
    std::vector<double> r2{0.0};
    double expected = std::cos(spec.angles[0]);
    bool degenerate = false;
    for (std::size_t j = 0; j < n; ++j) {
        const double c = std::cos(spec.angles[j]);
        const double s = std::sin(spec.angles[j]);
        if (j > 0) {
            const double jump = std::sin(spec.angles[j] - spec.angles[j - 1]);
            if (std::abs(jump) < 1e-13) {
                degenerate = true;
            }
            expected *= spec.lengths[j - 1] * jump;
        }
        std::vector<double> p(r1.size());
        for (std::size_t k = 0; k < r1.size(); ++k) {
            p[k] = r1[k] * c + r2[k] * s;
        }
        const bool check = !degenerate && std::abs(expected) > 1e-280;
        if (check) {
            const double lead = p.back();
            if (std::abs(lead - expected) > 1e-9 * std::abs(expected)) {
                char buf[160];
                std::snprintf(buf, sizeof buf,
                              "pn_polynomials: leading coefficient of p_%zu is %.17g, expected %.17g",
                              j + 1, lead, expected);
                throw NumericalError(buf);
            }
        }
        out.p.push_back(std::move(p));
        out.expected_leading.push_back(expected);
        out.checked.push_back(check);

        // r <- r (I - z l N)
        const double l = spec.lengths[j];
        r1.push_back(0.0);
        r2.push_back(0.0);
        for (std::size_t k = r1.size() - 1; k >= 1; --k) {
            const double a = r1[k - 1];
            const double b = r2[k - 1];
            r1[k] -= l * (a * c * s + b * s * s);
            r2[k] += l * (a * c * c + b * c * s);
        }
    }
    return out;
}

double pn_kernel_sum(const HamburgerSpec& spec, cplx z) {
    spec.validate();
    cplx r1 = 1.0;
    cplx r2 = 0.0;
    double sum = 0.0;
    for (std::size_t j = 0; j < spec.size(); ++j) {
        const double c = std::cos(spec.angles[j]);
        const double s = std::sin(spec.angles[j]);
        const double l = spec.lengths[j];
        const cplx p = r1 * c + r2 * s;
        sum += std::norm(p) * l;
        const cplx w = z * l * p;  // r xi, scaled
        r1 -= w * s;
        r2 += w * c;
    }
    if (!std::isfinite(sum)) {
        throw NumericalError("pn_kernel_sum: overflow");
    }
    return sum;
}

double herglotz_kernel(const Mat2& w, cplx z) {
    if (z.imag() == 0.0) {
        throw InputError("herglotz_kernel: z must be nonreal");
    }
    return (w.m12 * std::conj(w.m11)).imag() / z.imag();
}

}  // namespace cansys
