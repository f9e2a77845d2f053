#include "cansys/propagation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "cansys/errors.hpp"

namespace cansys {

namespace {

constexpr double kPi = std::numbers::pi;

// Gauss-Legendre 3 on [-1, 1].
constexpr double kG3 = 0.7745966692414834;  // sqrt(3/5)

std::vector<double> piece_cuts(const AngleProfile& p) {
    const double ua = p.to_base(p.alpha);
    const double ub = p.to_base(p.beta);
    std::vector<double> cuts{ua};
    auto a = p.phi.breakpoints(ua, ub);
    auto b = p.density.breakpoints(ua, ub);
    cuts.insert(cuts.end(), a.begin(), a.end());
    cuts.insert(cuts.end(), b.begin(), b.end());
    cuts.push_back(ub);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    return cuts;
}

bool phi_is_constant(const AngleProfile& p) {
    return p.phi.kind == PhiForm::Kind::Constant || p.phi.kind == PhiForm::Kind::Steps;
}

class CellBuilder {
public:
    CellBuilder(const AngleProfile& p, const GridOptions& opt, std::vector<Cell>& out)
        : p_(p), opt_(opt), out_(out) {}

    void refine(double a, double b, int depth) {
        const double mu = p_.density.mass(a, b);
        if (!(mu > 0.0)) {
            return;
        }
        std::array<double, 3> phis{};
        const std::array<double, 3> xs{-kG3, 0.0, kG3};
        for (int i = 0; i < 3; ++i) {
            const double s = 0.5 * mu * (1.0 + xs[i]);
            const double u = std::clamp(p_.density.inverse_mass(a, s), a, b);
            phis[i] = p_.phi(u);
        }
        // L2 projection onto functions linear in the mass coordinate.
        const double mean = (5.0 * phis[0] + 8.0 * phis[1] + 5.0 * phis[2]) / 18.0;
        const double half = (phis[2] - phis[0]) * kG3 * 5.0 / 6.0;
        Cell c{mu, mean - half, mean + half};

        const double zm = opt_.z_abs * mu;
        bool ok;
        const double env = p_.phi.unresolved_envelope(a, b);
        if (env >= 0.0) {
            ok = zm * 2.0 * env <= opt_.eta;
        } else {
            const double e = std::max({std::abs(p_.phi(a) - c.phi0), std::abs(p_.phi(b) - c.phi1),
                                       std::abs(phis[1] - mean)});
            ok = zm * e <= opt_.eta;
        }
        if (opt_.prufer_safe && zm > 2.0) {
            ok = false;
        }
        const bool tiny = (b - a) <= 1e-15 * std::max(1.0, std::abs(b));
        if (ok || tiny || depth > 200) {
            push(c);
            return;
        }
        const double m = 0.5 * (a + b);
        refine(a, m, depth + 1);
        refine(m, b, depth + 1);
    }

    void push(const Cell& c) {
        if (out_.size() >= opt_.max_cells) {
            throw NumericalError("profile_cells: cell budget exhausted");
        }
        out_.push_back(c);
    }

private:
    const AngleProfile& p_;
    const GridOptions& opt_;
    std::vector<Cell>& out_;
};

}  // namespace

CellFactor cell_factor(const Cell& c, cplx z) {
    const double dphi = c.phi1 - c.phi0;
    if (dphi == 0.0) {
        // I - z mass xi xi^T J
        const double cs = std::cos(c.phi0);
        const double sn = std::sin(c.phi0);
        const cplx w = z * c.mass;
        return {{1.0 - w * (cs * sn), w * (cs * cs), -w * (sn * sn), 1.0 + w * (cs * sn)}, 0.0};
    }
    // In the frame rotating with the angle the system has constant
    // coefficients: W_end = W R(phi0) exp(B) R(phi1)^{-1},
    // B = [[0, z mass - dphi], [dphi, 0]].
    const cplx b12 = z * c.mass - dphi;
    const cplx m2 = b12 * dphi;
    cplx ch;
    cplx shm;  // sinh(m) / m
    double scale = 0.0;
    if (std::abs(m2) < 1e-4) {
        ch = 1.0 + m2 / 2.0 * (1.0 + m2 / 12.0 * (1.0 + m2 / 30.0));
        shm = 1.0 + m2 / 6.0 * (1.0 + m2 / 20.0 * (1.0 + m2 / 42.0));
    } else {
        const cplx m = std::sqrt(m2);
        scale = std::abs(m.real());
        const cplx ep = std::exp(m - scale);
        const cplx em = std::exp(-m - scale);
        ch = 0.5 * (ep + em);
        shm = 0.5 * (ep - em) / m;
    }
    const Mat2 e{ch, shm * b12, shm * dphi, ch};
    const Mat2 r0 = to_complex(rotation(c.phi0));
    const Mat2 r1 = to_complex(rotation(-c.phi1));
    return {r0 * e * r1, scale};
}

CellFactor constant_factor(const RMat2& mat, double length, cplx z) {
    const double a = mat.m11;
    const double b = 0.5 * (mat.m12 + mat.m21);
    const double d = mat.m22;
    const cplx w = -z * length;
    // Y = w M J, traceless, Y^2 = -s^2 I with s^2 = (z length)^2 det M.
    const Mat2 y{w * b, -w * a, w * d, -w * b};
    const cplx s2 = (z * length) * (z * length) * (a * d - b * b);
    cplx co;
    cplx si;  // sin(s) / s
    double scale = 0.0;
    if (std::abs(s2) < 1e-4) {
        co = 1.0 - s2 / 2.0 * (1.0 - s2 / 12.0 * (1.0 - s2 / 30.0));
        si = 1.0 - s2 / 6.0 * (1.0 - s2 / 20.0 * (1.0 - s2 / 42.0));
    } else {
        const cplx s = std::sqrt(s2);
        scale = std::abs(s.imag());
        const cplx i{0.0, 1.0};
        const cplx ep = std::exp(i * s - scale);
        const cplx em = std::exp(-i * s - scale);
        co = 0.5 * (ep + em);
        si = (ep - em) / (2.0 * i * s);
    }
    Mat2 out{co + si * y.m11, si * y.m12, si * y.m21, co + si * y.m22};
    return {out, scale};
}

std::vector<Cell> hamburger_cells(const HamburgerSpec& spec) {
    std::vector<Cell> out;
    out.reserve(spec.size());
    for (std::size_t j = 0; j < spec.size(); ++j) {
        out.push_back({spec.lengths[j], spec.angles[j], spec.angles[j]});
    }
    return out;
}

std::vector<Cell> profile_cells(const AngleProfile& p, const GridOptions& opt) {
    std::vector<Cell> out;
    CellBuilder builder(p, opt, out);
    const auto cuts = piece_cuts(p);
    const bool exact_density = p.density.is_piecewise_constant();
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i];
        const double b = cuts[i + 1];
        if (!(b > a)) {
            continue;
        }
        const double mu = p.density.mass(a, b);
        if (phi_is_constant(p)) {
            builder.push({mu, p.phi(0.5 * (a + b)), p.phi(0.5 * (a + b))});
            continue;
        }
        if (p.phi.kind == PhiForm::Kind::Table && exact_density) {
            const double fa = p.phi(a);
            const double fb = p.phi(b);
            int n = 1;
            if (opt.prufer_safe && fa != fb) {
                n = std::max(1, static_cast<int>(std::ceil(opt.z_abs * mu / 2.0)));
            }
            for (int j = 0; j < n; ++j) {
                builder.push({mu / n, fa + (fb - fa) * j / n, fa + (fb - fa) * (j + 1) / n});
            }
            continue;
        }
        builder.refine(a, b, 0);
    }
    return out;
}

std::vector<Cell> frozen_midpoint_cells(const AngleProfile& p, int level) {
    std::vector<Cell> out;
    const auto cuts = piece_cuts(p);
    const std::size_t n = std::size_t{1} << std::clamp(level, 0, 40);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i];
        const double h = (cuts[i + 1] - a) / static_cast<double>(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double x0 = a + h * static_cast<double>(j);
            const double x1 = (j + 1 == n) ? cuts[i + 1] : x0 + h;
            const double phi = p.phi(0.5 * (x0 + x1));
            out.push_back({p.density.mass(x0, x1), phi, phi});
        }
    }
    return out;
}

namespace {

// Adds the signed angle from (v1, v2) to (w1, w2), knowing its sign from x and
// that its magnitude stays below pi.
double advance(double& v1, double& v2, double w1, double w2, double x) {
    double d = std::atan2(v1 * w2 - v2 * w1, v1 * w1 + v2 * w2);
    if (x > 0.0 && d < -0.5 * kPi) {
        d += 2.0 * kPi;
    } else if (x < 0.0 && d > 0.5 * kPi) {
        d -= 2.0 * kPi;
    }
    const double n = std::hypot(w1, w2);
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw NumericalError("prufer_angle: degenerate solution vector");
    }
    v1 = w1 / n;
    v2 = w2 / n;
    return d;
}

}  // namespace

double prufer_angle(const std::vector<Cell>& cells, double x) {
    double v1 = 0.0;
    double v2 = 1.0;
    double theta = 0.5 * kPi;
    if (x == 0.0) {
        return theta;
    }
    for (const Cell& c : cells) {
        const Mat2 f = cell_factor(c, x).unit;
        const double w1 = v1 * f.m11.real() + v2 * f.m21.real();
        const double w2 = v1 * f.m12.real() + v2 * f.m22.real();
        theta += advance(v1, v2, w1, w2, x);
    }
    return theta;
}

double prufer_angle_constant(const RMat2& m, double length, double x) {
    double v1 = 0.0;
    double v2 = 1.0;
    double theta = 0.5 * kPi;
    if (x == 0.0) {
        return theta;
    }
    const double norm = spectral_norm(m);
    const int n = std::max(1, static_cast<int>(std::ceil(std::abs(x) * length * norm / 1.5)));
    const Mat2 f = constant_factor(m, length / n, x).unit;
    for (int k = 0; k < n; ++k) {
        const double w1 = v1 * f.m11.real() + v2 * f.m21.real();
        const double w2 = v1 * f.m12.real() + v2 * f.m22.real();
        theta += advance(v1, v2, w1, w2, x);
    }
    return theta;
}

}  // namespace cansys
