#pragma once

#include <cmath>
#include <complex>
#include <type_traits>
#include <utility>

namespace cansys {

using cplx = std::complex<double>;

/// Plain 2x2 matrix over double or std::complex<double>.
template <class T>
struct Mat2T {
    T m11{}, m12{}, m21{}, m22{};

    static constexpr Mat2T identity() { return {T(1), T(0), T(0), T(1)}; }
    static constexpr Mat2T zero() { return {}; }

    Mat2T& operator+=(const Mat2T& o) {
        m11 += o.m11; m12 += o.m12; m21 += o.m21; m22 += o.m22;
        return *this;
    }
    Mat2T& operator-=(const Mat2T& o) {
        m11 -= o.m11; m12 -= o.m12; m21 -= o.m21; m22 -= o.m22;
        return *this;
    }
    Mat2T& operator*=(T s) {
        m11 *= s; m12 *= s; m21 *= s; m22 *= s;
        return *this;
    }

    [[nodiscard]] T det() const { return m11 * m22 - m12 * m21; }
    [[nodiscard]] T trace() const { return m11 + m22; }
    [[nodiscard]] Mat2T transpose() const { return {m11, m21, m12, m22}; }
    [[nodiscard]] bool finite() const;
};

using Mat2 = Mat2T<cplx>;
using RMat2 = Mat2T<double>;

template <class T>
[[nodiscard]] inline Mat2T<T> operator*(const Mat2T<T>& a, const Mat2T<T>& b) {
    return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
            a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
}
template <class T>
[[nodiscard]] inline Mat2T<T> operator+(Mat2T<T> a, const Mat2T<T>& b) { return a += b; }
template <class T>
[[nodiscard]] inline Mat2T<T> operator-(Mat2T<T> a, const Mat2T<T>& b) { return a -= b; }
template <class T>
[[nodiscard]] inline Mat2T<T> operator*(T s, Mat2T<T> a) { return a *= s; }

[[nodiscard]] Mat2 to_complex(const RMat2& m);
[[nodiscard]] Mat2 conj(const Mat2& m);
[[nodiscard]] Mat2 adjoint(const Mat2& m);

/// Largest singular value. Closed form after a unitary triangularisation,
/// free of the cancellation that the plain quadratic-root formula suffers
/// when the two singular values are close.
[[nodiscard]] double spectral_norm(const Mat2& m);
[[nodiscard]] double spectral_norm(const RMat2& m);

/// (largest, smallest) singular value; the smallest one comes from |det|/largest.
[[nodiscard]] std::pair<double, double> singular_values(const Mat2& m);

// Special matrices.
[[nodiscard]] RMat2 symplectic_j();                 ///< J = [[0,-1],[1,0]]
[[nodiscard]] RMat2 rotation(double theta);         ///< exp(theta J)
[[nodiscard]] RMat2 diag(double a, double b);       ///< D(a, b)
[[nodiscard]] RMat2 xi_outer(double phi);           ///< xi_phi xi_phi^T
[[nodiscard]] RMat2 xi_outer_j(double phi);         ///< xi_phi xi_phi^T J, nilpotent

/// Omega(a, psi) = D(a, 1/a) exp(-psi J).
[[nodiscard]] RMat2 omega_matrix(double a, double psi);

struct Lemma5Norms {
    double omega_norm;   ///< ||Omega(a,psi)||
    double conj_norm;    ///< ||Omega(a,psi) xi xi^T J Omega(a,psi)^{-1}||
    double cross_norm;   ///< ||Omega(a,psi) Omega(b,phi)^{-1}||
    double vplus_l2;     ///< ||v+||_2, lower end of the sandwich for cross_norm
    double vplus_l1;     ///< ||v+||_1, upper end
};

/// Closed-form norms for a = distortion of the left factor, b of the right one.
[[nodiscard]] Lemma5Norms lemma5_norms(double a, double psi, double phi, double b);

/// exp(log_scale) * unit with ||unit|| = 1.
struct ScaledMat2 {
    Mat2 unit = Mat2::identity();
    double log_scale = 0.0;

    [[nodiscard]] static ScaledMat2 from(const Mat2& m, double log_scale = 0.0);

    /// Moves the spectral norm of `unit` into `log_scale`.
    void normalize();
    [[nodiscard]] double log_norm() const { return log_scale + std::log(spectral_norm(unit)); }
    /// The represented matrix; overflows when log_scale is large.
    [[nodiscard]] Mat2 value() const;
    [[nodiscard]] cplx entry(int i, int j) const;
};

[[nodiscard]] ScaledMat2 operator*(const ScaledMat2& a, const ScaledMat2& b);

/// Left-to-right running product with lazy renormalisation: the norm is only
/// recomputed when a cheap entry bound leaves [1e-2, 1e2].
class ScaledProduct {
public:
    void multiply(const Mat2& f, double f_log_scale = 0.0);
    void multiply(const RMat2& f, double f_log_scale = 0.0);
    [[nodiscard]] ScaledMat2 result() const;

private:
    void maybe_renormalize();
    Mat2 acc_ = Mat2::identity();
    double log_scale_ = 0.0;
};

/// Running product kept as U diag(e^s1, e^s2) V with U, V unitary.
/// Both singular values stay accurate in log space, so the determinant of a
/// product with enormous norm is still available to full relative precision.
class StableProduct {
public:
    void multiply(const Mat2& f, double f_log_scale = 0.0);
    void multiply(const RMat2& f, double f_log_scale = 0.0);
    /// Same as multiply() for a factor known to satisfy det(f) e^{2 f_log_scale} = 1.
    /// The determinant is then taken from that identity instead of being
    /// recomputed from cancelling entries.
    void multiply_unimodular(const Mat2& f, double f_log_scale = 0.0);

    [[nodiscard]] ScaledMat2 result() const;
    [[nodiscard]] double log_norm() const { return s1_; }
    [[nodiscard]] double log_min_singular() const { return s2_; }
    /// log det = log|det| + i arg det.
    [[nodiscard]] cplx log_det() const;

private:
    /// log_det_f: log |det f| of the unit part when it is known exactly.
    void step(const Mat2& f, double f_log_scale, const double* log_det_f);
    Mat2 u_ = Mat2::identity();
    Mat2 v_ = Mat2::identity();
    double s1_ = 0.0;
    double s2_ = 0.0;
};

template <class T>
bool Mat2T<T>::finite() const {
    auto ok = [](const T& x) {
        if constexpr (std::is_same_v<T, double>) {
            return std::isfinite(x);
        } else {
            return std::isfinite(x.real()) && std::isfinite(x.imag());
        }
    };
    return ok(m11) && ok(m12) && ok(m21) && ok(m22);
}

}  // namespace cansys
