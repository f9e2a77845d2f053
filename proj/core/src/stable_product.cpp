#include <cmath>

#include "cansys/errors.hpp"
#include "cansys/mat2.hpp"

namespace cansys {

namespace {

// Restores exact orthonormality of a nearly unitary matrix while keeping the
// phase of its determinant.
void reorthonormalize(Mat2& u) {
    const double n1 = std::hypot(std::abs(u.m11), std::abs(u.m21));
    const cplx a = u.m11 / n1;
    const cplx b = u.m21 / n1;
    cplx ph = u.det();
    const double aph = std::abs(ph);
    ph = aph > 0.0 ? ph / aph : cplx(1.0);
    u = {a, -std::conj(b) * ph, b, std::conj(a) * ph};
}

double row_norm(const cplx& x, const cplx& y) { return std::hypot(std::abs(x), std::abs(y)); }

}  // namespace

void StableProduct::multiply(const RMat2& f, double f_log_scale) {
    step(to_complex(f), f_log_scale, nullptr);
}

void StableProduct::multiply(const Mat2& f, double f_log_scale) { step(f, f_log_scale, nullptr); }

void StableProduct::multiply_unimodular(const Mat2& f, double f_log_scale) {
    const double ld = -2.0 * f_log_scale;
    step(f, f_log_scale, &ld);
}

void StableProduct::step(const Mat2& f, double f_log_scale, const double* log_det_f) {
    // W F = U diag(e^s) (V F). Re-factor the row-graded matrix diag(e^s) G by a
    // pivoted LQ step followed by an exact 2x2 real SVD of the triangular part.
    const Mat2 g = v_ * f;
    cplx h1a = g.m11, h1b = g.m12, h2a = g.m21, h2b = g.m22;
    double t1 = s1_, t2 = s2_;
    double n1 = row_norm(h1a, h1b);
    double n2 = row_norm(h2a, h2b);
    if (!(n1 > 0.0 || n2 > 0.0) || !std::isfinite(n1) || !std::isfinite(n2)) {
        throw NumericalError("StableProduct: singular or non-finite factor");
    }
    Mat2 u = u_;
    bool swapped = false;
    if (t2 + std::log(n2) > t1 + std::log(n1)) {
        swapped = true;
        std::swap(h1a, h2a);
        std::swap(h1b, h2b);
        std::swap(t1, t2);
        std::swap(n1, n2);
        u = {u.m12, u.m11, u.m22, u.m21};
    }

    // Q = [q1; q2] with q2 the exact unitary complement of q1 (det Q = 1).
    const cplx q1a = h1a / n1;
    const cplx q1b = h1b / n1;
    const cplx q2a = -std::conj(q1b);
    const cplx q2b = std::conj(q1a);
    const cplx l21 = h2a * std::conj(q1a) + h2b * std::conj(q1b);
    // l22 is kept as log modulus and phase: for unimodular factors with a
    // large scale it underflows.
    const cplx l22 = h2a * std::conj(q2a) + h2b * std::conj(q2b);
    double log_abs_l22 = std::log(std::abs(l22));
    cplx e_g = std::abs(l22) > 0.0 ? l22 / std::abs(l22) : cplx(1.0);
    if (log_det_f != nullptr) {
        // det [h1; h2] = n1 * l22 because det Q = 1, and det f > 0.
        const cplx dv = v_.det() * (swapped ? -1.0 : 1.0);
        log_abs_l22 = *log_det_f + std::log(std::abs(dv)) - std::log(n1);
        e_g = dv / std::abs(dv);
    }

    const double b1 = t1 + std::log(n1);
    const double beta_abs = std::exp(t2 - b1) * std::abs(l21);
    if (!std::isfinite(log_abs_l22)) {
        throw NumericalError("StableProduct: rank loss in factor");
    }
    const double y_log = (t2 - b1) + log_abs_l22;
    const double x = beta_abs;
    const double y = std::exp(y_log);

    // Phases: K' = D1^* Kr D2^* with Kr = [[1,0],[x,y]] real.
    const cplx e_b = std::abs(l21) > 0.0 ? l21 / std::abs(l21) : cplx(1.0);
    const cplx d2 = e_b / e_g;  // D2 = diag(1, d2), D1 = diag(1, conj(e_b))

    // Real SVD of Kr: left vectors from Kr Kr^T = [[1, x], [x, x^2 + y^2]].
    const double p = 1.0;
    const double q = x;
    const double r = x * x + y * y;
    const double theta = 0.5 * std::atan2(2.0 * q, p - r);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double disc = std::hypot(p - r, 2.0 * q);
    const double sa = std::sqrt(0.5 * (p + r + disc));
    const double log_sa = std::log(sa);
    const double va1 = (c + x * s) / sa;
    const double va2 = (y * s) / sa;

    // U' = U_perm D1^* U~, with D1^* = diag(1, e_b).
    const Mat2 ut{c, -s, s, c};
    const Mat2 d1s{1.0, 0.0, 0.0, e_b};
    u_ = u * d1s * ut;

    // V' = V~^T D2^* Q, V~ = [[va1, -va2], [va2, va1]].
    const Mat2 vtt{va1, va2, -va2, va1};
    const Mat2 d2s{1.0, 0.0, 0.0, std::conj(d2)};
    const Mat2 qm{q1a, q1b, q2a, q2b};
    v_ = vtt * d2s * qm;

    reorthonormalize(u_);
    reorthonormalize(v_);

    s1_ = b1 + log_sa + f_log_scale;
    s2_ = b1 + y_log - log_sa + f_log_scale;
}

ScaledMat2 StableProduct::result() const {
    const cplx small = std::exp(s2_ - s1_);
    const Mat2 mid{1.0, 0.0, 0.0, small};
    ScaledMat2 out{u_ * mid * v_, s1_};
    return out;
}

cplx StableProduct::log_det() const {
    const cplx du = u_.det();
    const cplx dv = v_.det();
    return cplx(s1_ + s2_ + std::log(std::abs(du)) + std::log(std::abs(dv)),
                std::arg(du) + std::arg(dv));
}

}  // namespace cansys
