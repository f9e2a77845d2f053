#include "cansys/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "cansys/errors.hpp"

namespace cansys {

namespace {

bool strictly_increasing(const std::vector<double>& x) {
    for (std::size_t i = 1; i < x.size(); ++i) {
        if (!(x[i] > x[i - 1])) {
            return false;
        }
    }
    return true;
}

bool all_finite(const std::vector<double>& x) {
    return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

// Index of the piece [x[i], x[i+1]] containing u, clamped to the valid range.
std::size_t piece_index(const std::vector<double>& x, double u) {
    if (u <= x.front()) {
        return 0;
    }
    if (u >= x.back()) {
        return x.size() - 2;
    }
    auto it = std::upper_bound(x.begin(), x.end(), u);
    return static_cast<std::size_t>(it - x.begin()) - 1;
}

double interp_linear(const std::vector<double>& x, const std::vector<double>& y, double u) {
    if (u <= x.front()) {
        return y.front();
    }
    if (u >= x.back()) {
        return y.back();
    }
    const std::size_t i = piece_index(x, u);
    const double w = (u - x[i]) / (x[i + 1] - x[i]);
    return y[i] + w * (y[i + 1] - y[i]);
}

std::vector<double> interior_nodes(const std::vector<double>& x, double lo, double hi) {
    std::vector<double> out;
    for (double n : x) {
        if (n > lo && n < hi) {
            out.push_back(n);
        }
    }
    return out;
}

void check_table(const std::vector<double>& t, const std::vector<double>& v, bool steps,
                 const char* what) {
    const std::size_t need = steps ? v.size() + 1 : v.size();
    if (t.size() < 2 || t.size() != need) {
        throw InputError(std::string(what) + ": node and value lists have inconsistent sizes");
    }
    if (!strictly_increasing(t) || !all_finite(t) || !all_finite(v)) {
        throw InputError(std::string(what) + ": nodes must be finite and strictly increasing");
    }
}

// Solves r0 x + k x^2 / 2 = m for the smallest x >= 0.
double linear_density_inverse(double r0, double k, double m) {
    const double disc = r0 * r0 + 2.0 * k * m;
    return 2.0 * m / (r0 + std::sqrt(std::max(disc, 0.0)));
}

}  // namespace

// ---------------------------------------------------------------- Hamburger

void HamburgerSpec::validate() const {
    if (lengths.empty()) {
        throw InputError("hamburger: at least one segment is required");
    }
    if (lengths.size() != angles.size()) {
        throw InputError("hamburger: lengths and angles differ in size");
    }
    for (double l : lengths) {
        if (!(l > 0.0) || !std::isfinite(l)) {
            throw InputError("hamburger: lengths must be positive and finite");
        }
    }
    if (!all_finite(angles)) {
        throw InputError("hamburger: angles must be finite");
    }
}

double HamburgerSpec::total_length() const {
    double s = 0.0;
    for (double l : lengths) {
        s += l;
    }
    return s;
}

// ---------------------------------------------------------------- PhiForm

PhiForm PhiForm::constant(double value) {
    PhiForm p;
    p.kind = Kind::Constant;
    p.value = value;
    return p;
}

PhiForm PhiForm::chirp(double gamma, double beta) {
    PhiForm p;
    p.kind = Kind::Chirp;
    p.gamma = gamma;
    p.beta = beta;
    return p;
}

PhiForm PhiForm::holder(double scale, double exponent) {
    PhiForm p;
    p.kind = Kind::Holder;
    p.scale = scale;
    p.exponent = exponent;
    return p;
}

PhiForm PhiForm::table(std::vector<double> t, std::vector<double> v) {
    PhiForm p;
    p.kind = Kind::Table;
    p.t = std::move(t);
    p.v = std::move(v);
    return p;
}

PhiForm PhiForm::steps(std::vector<double> breaks, std::vector<double> v) {
    PhiForm p;
    p.kind = Kind::Steps;
    p.t = std::move(breaks);
    p.v = std::move(v);
    return p;
}

double PhiForm::operator()(double u) const {
    switch (kind) {
        case Kind::Constant:
            return value;
        case Kind::Chirp:
            return u > 0.0 ? std::pow(u, gamma) * std::sin(std::pow(u, -beta)) : 0.0;
        case Kind::Holder:
            return u > 0.0 ? scale * std::pow(u, exponent) : 0.0;
        case Kind::Table:
            return interp_linear(t, v, u);
        case Kind::Steps:
            return v[piece_index(t, u)];
    }
    return 0.0;
}

std::vector<double> PhiForm::breakpoints(double lo, double hi) const {
    if (kind == Kind::Table || kind == Kind::Steps) {
        return interior_nodes(t, lo, hi);
    }
    return {};
}

double PhiForm::unresolved_envelope(double u0, double u1) const {
    if (kind != Kind::Chirp) {
        return -1.0;
    }
    // Phase t^-beta moves by more than one radian across the interval.
    const double phase = u0 > 0.0 ? std::pow(u0, -beta) - std::pow(u1, -beta)
                                   : std::numeric_limits<double>::infinity();
    if (phase <= 1.0) {
        return -1.0;
    }
    return std::pow(u1, gamma);
}

// ---------------------------------------------------------------- DensityForm

DensityForm DensityForm::constant(double value) {
    DensityForm d;
    d.kind = Kind::Const;
    d.value = value;
    return d;
}

DensityForm DensityForm::power_law(double coeff, double power) {
    DensityForm d;
    d.kind = Kind::Power;
    d.coeff = coeff;
    d.power = power;
    return d;
}

DensityForm DensityForm::table(std::vector<double> t, std::vector<double> v) {
    DensityForm d;
    d.kind = Kind::Table;
    d.t = std::move(t);
    d.v = std::move(v);
    return d;
}

DensityForm DensityForm::steps(std::vector<double> breaks, std::vector<double> v) {
    DensityForm d;
    d.kind = Kind::Steps;
    d.t = std::move(breaks);
    d.v = std::move(v);
    return d;
}

double DensityForm::operator()(double u) const {
    switch (kind) {
        case Kind::Const:
            return value;
        case Kind::Power:
            return power == 0.0 ? coeff : (u > 0.0 ? coeff * std::pow(u, power) : 0.0);
        case Kind::Table:
            return interp_linear(t, v, u);
        case Kind::Steps:
            return v[piece_index(t, u)];
    }
    return 0.0;
}

double DensityForm::mass(double u0, double u1) const {
    if (u1 <= u0) {
        return 0.0;
    }
    switch (kind) {
        case Kind::Const:
            return value * (u1 - u0);
        case Kind::Power: {
            const double q = power + 1.0;
            if (u0 <= 0.0) {
                return coeff / q * std::pow(u1, q);
            }
            // u1^q - u0^q without cancellation on short intervals.
            return coeff / q * std::pow(u0, q) * std::expm1(q * std::log1p((u1 - u0) / u0));
        }
        case Kind::Table:
        case Kind::Steps: {
            double s = 0.0;
            double a = u0;
            while (a < u1) {
                const std::size_t i = piece_index(t, a);
                double b = (i + 2 < t.size()) ? std::min(t[i + 1], u1) : u1;
                if (b <= a) {
                    b = u1;
                }
                if (kind == Kind::Steps) {
                    s += v[i] * (b - a);
                } else {
                    s += 0.5 * ((*this)(a) + (*this)(b)) * (b - a);
                }
                a = b;
            }
            return s;
        }
    }
    return 0.0;
}

double DensityForm::inverse_mass(double u0, double m) const {
    if (m <= 0.0) {
        return u0;
    }
    switch (kind) {
        case Kind::Const:
            return u0 + m / value;
        case Kind::Power: {
            const double q = power + 1.0;
            if (u0 <= 0.0) {
                return std::pow(m * q / coeff, 1.0 / q);
            }
            const double base = std::pow(u0, q);
            return u0 + u0 * std::expm1(std::log1p(m * q / (coeff * base)) / q);
        }
        case Kind::Table:
        case Kind::Steps: {
            double a = u0;
            double left = m;
            for (;;) {
                const std::size_t i = piece_index(t, a);
                const bool last = i + 2 >= t.size();
                const double b = last ? std::numeric_limits<double>::infinity() : t[i + 1];
                const double ra = (*this)(a);
                const double k = kind == Kind::Steps ? 0.0 : (v[i + 1] - v[i]) / (t[i + 1] - t[i]);
                const double piece = last ? std::numeric_limits<double>::infinity() : mass(a, b);
                if (left <= piece) {
                    return a + (k == 0.0 ? left / ra : linear_density_inverse(ra, k, left));
                }
                left -= piece;
                a = b;
            }
        }
    }
    return u0;
}

std::vector<double> DensityForm::breakpoints(double lo, double hi) const {
    if (kind == Kind::Table || kind == Kind::Steps) {
        return interior_nodes(t, lo, hi);
    }
    return {};
}

// ---------------------------------------------------------------- AngleProfile

void AngleProfile::validate() const {
    if (!std::isfinite(alpha) || !std::isfinite(beta) || !(alpha < beta)) {
        throw InputError("profile: domain must satisfy alpha < beta");
    }
    if (!(warp > 0.0) || !std::isfinite(warp)) {
        throw InputError("profile: warp exponent must be positive");
    }
    if (warp != 1.0 && (alpha != 0.0 || beta != 1.0)) {
        throw InputError("profile: a warped profile must live on [0, 1]");
    }
    const double u0 = to_base(alpha);
    const double u1 = to_base(beta);

    switch (phi.kind) {
        case PhiForm::Kind::Constant:
            if (!std::isfinite(phi.value)) {
                throw InputError("profile: constant angle must be finite");
            }
            break;
        case PhiForm::Kind::Chirp:
            if (!(phi.gamma > 0.0) || !(phi.beta > 0.0)) {
                throw InputError("profile: chirp exponents must be positive");
            }
            if (alpha < 0.0) {
                throw InputError("profile: chirp requires a domain inside [0, inf)");
            }
            break;
        case PhiForm::Kind::Holder:
            if (!(phi.exponent > 0.0) || !std::isfinite(phi.scale)) {
                throw InputError("profile: holder exponent must be positive");
            }
            if (alpha < 0.0) {
                throw InputError("profile: holder requires a domain inside [0, inf)");
            }
            break;
        case PhiForm::Kind::Table:
        case PhiForm::Kind::Steps:
            check_table(phi.t, phi.v, phi.kind == PhiForm::Kind::Steps, "profile phi");
            if (phi.t.front() > u0 || phi.t.back() < u1) {
                throw InputError("profile: phi table does not cover the domain");
            }
            break;
    }

    switch (density.kind) {
        case DensityForm::Kind::Const:
            if (!(density.value > 0.0) || !std::isfinite(density.value)) {
                throw InputError("profile: density must be positive");
            }
            break;
        case DensityForm::Kind::Power:
            if (!(density.coeff > 0.0) || !(density.power >= 0.0) || !std::isfinite(density.power)) {
                throw InputError("profile: power density needs coeff > 0 and power >= 0");
            }
            if (alpha < 0.0) {
                throw InputError("profile: power density requires a domain inside [0, inf)");
            }
            break;
        case DensityForm::Kind::Table:
        case DensityForm::Kind::Steps:
            check_table(density.t, density.v, density.kind == DensityForm::Kind::Steps,
                        "profile density");
            for (double x : density.v) {
                if (!(x > 0.0)) {
                    throw InputError("profile: density values must be positive");
                }
            }
            if (density.t.front() > u0 || density.t.back() < u1) {
                throw InputError("profile: density table does not cover the domain");
            }
            break;
    }
    if (!(total_mass() > 0.0)) {
        throw InputError("profile: total trace mass must be positive");
    }
}

double AngleProfile::to_base(double t) const { return warp == 1.0 ? t : std::pow(t, warp); }

double AngleProfile::phi_at(double t) const { return phi(to_base(t)); }

double AngleProfile::density_at(double t) const {
    if (warp == 1.0) {
        return density(t);
    }
    return warp * std::pow(t, warp - 1.0) * density(to_base(t));
}

double AngleProfile::total_mass() const { return density.mass(to_base(alpha), to_base(beta)); }

// ---------------------------------------------------------------- Diagonal / constant

void DiagonalSpec::validate() const {
    if (!std::isfinite(alpha) || !std::isfinite(beta) || !(alpha < beta)) {
        throw InputError("diagonal: domain must satisfy alpha < beta");
    }
    double prev = alpha;
    for (const auto& [x0, x1] : h1_intervals) {
        if (!std::isfinite(x0) || !std::isfinite(x1) || !(x0 < x1)) {
            throw InputError("diagonal: each interval needs x0 < x1");
        }
        if (x0 < prev || x1 > beta) {
            throw InputError("diagonal: intervals must be sorted, disjoint and inside the domain");
        }
        prev = x1;
    }
}

void ConstantMatrixSpec::validate() const {
    if (!matrix.finite() || !(length > 0.0) || !std::isfinite(length)) {
        throw InputError("constant: matrix must be finite and length positive");
    }
    const double a = matrix.m11;
    const double b = matrix.m12;
    const double c = matrix.m22;
    const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), 1e-300});
    if (std::abs(matrix.m12 - matrix.m21) > 1e-12 * scale) {
        throw InputError("constant: matrix must be symmetric");
    }
    if (a < 0.0 || c < 0.0 || a * c - b * b < -1e-12 * scale * scale || a + c <= 0.0) {
        throw InputError("constant: matrix must be positive semidefinite and nonzero");
    }
}

void validate(const HamiltonianSpec& spec) {
    std::visit([](const auto& s) { s.validate(); }, spec);
}

// ---------------------------------------------------------------- transforms

AngleProfile reparameterize(const AngleProfile& spec, double kappa) {
    if (!(kappa > 1.0) || !std::isfinite(kappa)) {
        throw InputError("reparameterize: kappa must exceed 1");
    }
    if (spec.alpha != 0.0 || spec.beta != 1.0) {
        throw InputError("reparameterize: domain must be [0, 1]");
    }
    spec.validate();
    AngleProfile out = spec;
    out.warp = spec.warp * kappa;
    return out;
}

HamburgerSpec cut(const HamburgerSpec& spec, const std::set<std::size_t>& keep) {
    spec.validate();
    if (keep.empty()) {
        throw InputError("cut: the keep set is empty");
    }
    HamburgerSpec out;
    for (std::size_t j : keep) {
        if (j >= spec.size()) {
            throw InputError("cut: segment index out of range");
        }
        out.lengths.push_back(spec.lengths[j]);
        out.angles.push_back(spec.angles[j]);
    }
    return out;
}

AngleProfile diagonal_to_profile(const DiagonalSpec& spec) {
    spec.validate();
    std::vector<double> breaks{0.0};
    std::vector<double> mvals;
    double c = 0.0;  // h1 mass before the current interval
    for (const auto& [x0, x1] : spec.h1_intervals) {
        const double m = (x0 - spec.alpha) - c;  // h2 mass before x0
        c += x1 - x0;
        if (!mvals.empty() && mvals.back() == m) {
            breaks.back() = c;
        } else {
            mvals.push_back(m);
            breaks.push_back(c);
        }
    }
    if (mvals.empty() || !(c > 0.0)) {
        throw InputError("diagonal_to_profile: h1 vanishes almost everywhere");
    }
    std::vector<double> phis;
    std::vector<double> dens;
    for (double m : mvals) {
        phis.push_back(-std::atan(m));
        dens.push_back(1.0 + m * m);
    }
    AngleProfile out;
    out.alpha = 0.0;
    out.beta = c;
    if (mvals.size() == 1) {
        out.phi = PhiForm::constant(phis.front());
        out.density = DensityForm::constant(dens.front());
    } else {
        out.phi = PhiForm::steps(breaks, phis);
        out.density = DensityForm::steps(breaks, dens);
    }
    return out;
}

HamburgerSpec to_hamburger(const DiagonalSpec& spec) {
    spec.validate();
    HamburgerSpec out;
    auto push = [&out](double len, double angle) {
        if (len > 0.0) {
            out.lengths.push_back(len);
            out.angles.push_back(angle);
        }
    };
    double pos = spec.alpha;
    for (const auto& [x0, x1] : spec.h1_intervals) {
        push(x0 - pos, std::numbers::pi / 2);
        push(x1 - x0, 0.0);
        pos = x1;
    }
    push(spec.beta - pos, std::numbers::pi / 2);
    return out;
}

TraceMass total_trace_mass(const HamiltonianSpec& spec) {
    validate(spec);
    struct Visitor {
        TraceMass operator()(const HamburgerSpec& s) const {
            const double l = s.total_length();
            return {l, l};
        }
        TraceMass operator()(const AngleProfile& s) const { return {s.length(), s.total_mass()}; }
        TraceMass operator()(const DiagonalSpec& s) const {
            return {s.beta - s.alpha, s.beta - s.alpha};
        }
        TraceMass operator()(const ConstantMatrixSpec& s) const {
            return {s.length, s.length * s.matrix.trace()};
        }
    };
    return std::visit(Visitor{}, spec);
}

}  // namespace cansys
