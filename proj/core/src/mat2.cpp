#include "cansys/mat2.hpp"

#include <algorithm>
#include <cmath>

#include "cansys/errors.hpp"

namespace cansys {

Mat2 to_complex(const RMat2& m) { return {m.m11, m.m12, m.m21, m.m22}; }

Mat2 conj(const Mat2& m) {
    return {std::conj(m.m11), std::conj(m.m12), std::conj(m.m21), std::conj(m.m22)};
}

Mat2 adjoint(const Mat2& m) {
    return {std::conj(m.m11), std::conj(m.m21), std::conj(m.m12), std::conj(m.m22)};
}

double spectral_norm(const Mat2& m) {
    // M = Q R with R upper triangular; phases can then be rotated away so that
    // R = [[f, g], [0, h]] with f, g, h >= 0, whose largest singular value is
    // (hypot(f+h, g) + hypot(f-h, g)) / 2.
    const double f = std::hypot(std::abs(m.m11), std::abs(m.m21));
    if (f == 0.0) {
        return std::hypot(std::abs(m.m12), std::abs(m.m22));
    }
    const double g = std::abs(std::conj(m.m11) * m.m12 + std::conj(m.m21) * m.m22) / f;
    const double h = std::abs(m.m11 * m.m22 - m.m12 * m.m21) / f;
    return 0.5 * (std::hypot(f + h, g) + std::hypot(f - h, g));
}

double spectral_norm(const RMat2& m) {
    const double p = std::hypot(m.m11 + m.m22, m.m12 - m.m21);
    const double q = std::hypot(m.m11 - m.m22, m.m12 + m.m21);
    return 0.5 * (p + q);
}

std::pair<double, double> singular_values(const Mat2& m) {
    const double s1 = spectral_norm(m);
    if (s1 == 0.0) {
        return {0.0, 0.0};
    }
    return {s1, std::abs(m.det()) / s1};
}

RMat2 symplectic_j() { return {0.0, -1.0, 1.0, 0.0}; }

RMat2 rotation(double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {c, -s, s, c};
}

RMat2 diag(double a, double b) { return {a, 0.0, 0.0, b}; }

RMat2 xi_outer(double phi) {
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    return {c * c, c * s, c * s, s * s};
}

RMat2 xi_outer_j(double phi) {
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    return {c * s, -c * c, s * s, -c * s};
}

RMat2 omega_matrix(double a, double psi) {
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw InputError("omega_matrix: distortion a must be positive and finite");
    }
    const double c = std::cos(psi);
    const double s = std::sin(psi);
    // D(a, 1/a) * exp(-psi J), exp(-psi J) = [[c, s], [-s, c]].
    return {a * c, a * s, -s / a, c / a};
}

Lemma5Norms lemma5_norms(double a, double psi, double phi, double b) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw InputError("lemma5_norms: a and b must be positive");
    }
    const double sigma = phi - psi;
    const double c = std::abs(std::cos(sigma));
    const double s = std::abs(std::sin(sigma));

    Lemma5Norms out{};
    out.omega_norm = std::max(a, 1.0 / a);
    out.conj_norm = a * a * c * c + s * s / (a * a);

    const double r1 = a / b;
    const double r2 = a * b;
    const double hi1 = std::max(r1, 1.0 / r1);
    const double lo1 = std::min(r1, 1.0 / r1);
    const double hi2 = std::max(r2, 1.0 / r2);
    const double lo2 = std::min(r2, 1.0 / r2);
    const double vp1 = hi1 * c;
    const double vp2 = hi2 * s;
    const double vm1 = lo1 * c;
    const double vm2 = lo2 * s;
    const double diff = std::hypot(vp1 - vm1, vp2 - vm2);
    const double sum = std::hypot(vp1 + vm1, vp2 + vm2);
    out.cross_norm = std::sqrt(1.0 + 0.5 * diff * (diff + sum));
    out.vplus_l2 = std::hypot(vp1, vp2);
    out.vplus_l1 = vp1 + vp2;
    return out;
}

ScaledMat2 ScaledMat2::from(const Mat2& m, double log_scale) {
    ScaledMat2 out{m, log_scale};
    out.normalize();
    return out;
}

void ScaledMat2::normalize() {
    const double n = spectral_norm(unit);
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw NumericalError("ScaledMat2: cannot normalize a zero or non-finite matrix");
    }
    unit *= cplx(1.0 / n);
    log_scale += std::log(n);
}

Mat2 ScaledMat2::value() const {
    Mat2 out = unit;
    out *= cplx(std::exp(log_scale));
    return out;
}

cplx ScaledMat2::entry(int i, int j) const {
    const cplx e = i == 0 ? (j == 0 ? unit.m11 : unit.m12) : (j == 0 ? unit.m21 : unit.m22);
    return e * std::exp(log_scale);
}

ScaledMat2 operator*(const ScaledMat2& a, const ScaledMat2& b) {
    return ScaledMat2::from(a.unit * b.unit, a.log_scale + b.log_scale);
}

void ScaledProduct::multiply(const Mat2& f, double f_log_scale) {
    acc_ = acc_ * f;
    log_scale_ += f_log_scale;
    maybe_renormalize();
}

void ScaledProduct::multiply(const RMat2& f, double f_log_scale) {
    multiply(to_complex(f), f_log_scale);
}

void ScaledProduct::maybe_renormalize() {
    auto mag = [](const cplx& x) { return std::max(std::abs(x.real()), std::abs(x.imag())); };
    const double m = std::max({mag(acc_.m11), mag(acc_.m12), mag(acc_.m21), mag(acc_.m22)});
    if (m > 1e2 || m < 1e-2) {
        ScaledMat2 s{acc_, log_scale_};
        s.normalize();
        acc_ = s.unit;
        log_scale_ = s.log_scale;
    }
}

ScaledMat2 ScaledProduct::result() const {
    ScaledMat2 s{acc_, log_scale_};
    s.normalize();
    return s;
}

}  // namespace cansys
