#include "cansys/lower_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cansys/errors.hpp"

namespace cansys {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

LogSeries f_series(const HamburgerSpec& spec, std::size_t n_max) {
    spec.validate();
    const std::size_t n = std::min(n_max, spec.size() - 1);
    LogSeries out;
    out.log_coeffs.reserve(n + 1);
    out.log_coeffs.push_back(0.0);
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double s = std::abs(std::sin(spec.angles[j + 1] - spec.angles[j]));
        if (s == 0.0 || acc == kNegInf) {
            acc = kNegInf;
        } else {
            acc += std::log(spec.lengths[j + 1]) + std::log(spec.lengths[j]) + 2.0 * std::log(s);
        }
        out.log_coeffs.push_back(acc);
    }
    return out;
}

LowerBound lower_bound_at(const LogSeries& series, double r) {
    if (!(r > 0.0)) {
        throw InputError("lower_bound_at: r must be positive");
    }
    const double lr2 = 2.0 * std::log(r);
    double top = kNegInf;
    for (std::size_t n = 0; n < series.log_coeffs.size(); ++n) {
        top = std::max(top, series.log_coeffs[n] + static_cast<double>(n) * lr2);
    }
    LowerBound out;
    if (top == kNegInf) {
        out.value = kNegInf;
        return out;
    }
    double sum = 0.0;
    for (std::size_t n = 0; n < series.log_coeffs.size(); ++n) {
        const double t = series.log_coeffs[n] + static_cast<double>(n) * lr2;
        if (t != kNegInf) {
            sum += std::exp(t - top);
        }
    }
    const double log_sum = top + std::log(sum);
    const double cutoff = log_sum + std::log(1e-16);
    for (std::size_t n = 0; n < series.log_coeffs.size(); ++n) {
        if (series.log_coeffs[n] + static_cast<double>(n) * lr2 >= cutoff) {
            out.truncation = n;
        }
    }
    out.value = 0.5 * log_sum;
    return out;
}

double liminf_coefficient_bound(const LogSeries& series, const std::function<double(double)>& g_inverse,
                                std::size_t n_lo, std::size_t n_hi) {
    n_lo = std::max<std::size_t>(n_lo, 1);
    n_hi = std::min(n_hi, series.log_coeffs.size() - 1);
    if (n_hi < n_lo) {
        throw InputError("liminf_coefficient_bound: empty index range");
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t n = n_lo; n <= n_hi; ++n) {
        const double c = series.log_coeffs[n];
        const double v = (c == kNegInf) ? kNegInf
                                        : std::log(g_inverse(static_cast<double>(n))) + c / static_cast<double>(n);
        best = std::min(best, v);
    }
    return best;
}

Cor48Report cor48_rate(const HamburgerSpec& spec, const RegVarFn& f, std::size_t n_check) {
    spec.validate();
    f.validate();
    const std::size_t n = std::min(n_check, spec.size() - 1);
    if (n == 0) {
        throw InputError("cor48_rate: need at least two segments");
    }
    Cor48Report rep;
    rep.ratios.reserve(n);
    rep.min_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j <= n; ++j) {
        const double fj = f(static_cast<double>(j));
        if (!(fj > 0.0) || !std::isfinite(fj)) {
            throw InputError("cor48_rate: f must be positive and finite on [1, n]");
        }
        const double s = std::sin(spec.angles[j] - spec.angles[j - 1]);
        const double ratio = fj * spec.lengths[j] * spec.lengths[j - 1] * s * s;
        rep.ratios.push_back(ratio);
        if (ratio < rep.min_ratio) {
            rep.min_ratio = ratio;
            rep.argmin = j;
        }
    }
    rep.g = asymptotic_inverse(f);
    return rep;
}

HamburgerSpec normalize_first_angle(const HamburgerSpec& spec) {
    spec.validate();
    if (std::abs(std::cos(spec.angles.front())) >= 1e-8) {
        return spec;
    }
    HamburgerSpec out = spec;
    for (double& a : out.angles) {
        a += 0.25 * std::numbers::pi;
    }
    return out;
}

SlackFit fit_log_slack(const std::vector<double>& r, const std::vector<double>& lower,
                       const std::vector<double>& maxmod) {
    const std::size_t n = r.size();
    if (n < 2 || lower.size() != n || maxmod.size() != n) {
        throw InputError("fit_log_slack: need at least two aligned samples");
    }
    double sx = 0.0;
    double sy = 0.0;
    std::size_t m = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::isfinite(lower[i])) {
            sx += std::log(r[i]);
            sy += std::max(0.0, lower[i] - maxmod[i]);
            ++m;
        }
    }
    SlackFit fit;
    if (m < 2) {
        fit.intercept = sy;
        return fit;
    }
    const double mx = sx / static_cast<double>(m);
    const double my = sy / static_cast<double>(m);
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::isfinite(lower[i])) {
            const double dx = std::log(r[i]) - mx;
            sxx += dx * dx;
            sxy += dx * (std::max(0.0, lower[i] - maxmod[i]) - my);
        }
    }
    fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    fit.intercept = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::isfinite(lower[i])) {
            fit.intercept = std::max(fit.intercept, lower[i] - maxmod[i] - fit.slope * std::log(r[i]));
        }
    }
    return fit;
}

}  // namespace cansys
