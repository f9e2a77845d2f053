#include "cansys/regvar.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>

#include <boost/math/tools/roots.hpp>

#include "cansys/errors.hpp"

namespace cansys {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Smallest x in [lo, hi] with h(x) >= 0 for a nondecreasing h, to absolute
// width `tol`.
template <class H>
double bisect_increasing(H&& h, double lo, double hi, double tol) {
    auto [a, b] = boost::math::tools::bisect(
        [&h](double x) { return h(x) >= 0.0 ? 1.0 : -1.0; }, lo, hi,
        [tol](double p, double q) { return std::abs(q - p) <= tol; });
    return 0.5 * (a + b);
}

// Expands [lo, hi] geometrically around 0 until h(lo) < 0 <= h(hi).
template <class H>
std::pair<double, double> bracket(H&& h, double lo, double hi, double limit) {
    while (h(lo) >= 0.0 && lo > -limit) {
        lo *= 2.0;
    }
    while (h(hi) < 0.0 && hi < limit) {
        hi *= 2.0;
    }
    if (h(lo) >= 0.0 || h(hi) < 0.0) {
        throw NumericalError("regvar: could not bracket the inverse");
    }
    return {lo, hi};
}

// Log-log piecewise linear interpolation with end-slope extrapolation.
double table_log_eval(const std::vector<double>& x, const std::vector<double>& y, double lx,
                      double right_slope) {
    const std::size_t n = x.size();
    if (n == 1) {
        return std::log(y[0]) + right_slope * (lx - std::log(x[0]));
    }
    const double lx0 = std::log(x.front());
    const double lxn = std::log(x.back());
    if (lx <= lx0) {
        const double s = (std::log(y[1]) - std::log(y[0])) / (std::log(x[1]) - lx0);
        return std::log(y[0]) + s * (lx - lx0);
    }
    if (lx >= lxn) {
        return std::log(y.back()) + right_slope * (lx - lxn);
    }
    const double xv = std::exp(lx);
    const std::size_t k = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), xv) - x.begin());
    const std::size_t i = std::clamp<std::size_t>(k, 1, n - 1) - 1;
    const double a = std::log(x[i]);
    const double b = std::log(x[i + 1]);
    const double w = (lx - a) / (b - a);
    return (1.0 - w) * std::log(y[i]) + w * std::log(y[i + 1]);
}

bool increasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i] > v[i - 1])) {
            return false;
        }
    }
    return true;
}

bool nondecreasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i] >= v[i - 1])) {
            return false;
        }
    }
    return true;
}

// log of the ray start of a PowerLog form, in the variable u = log r.
double powerlog_u0(const RegVarFn& f) {
    double u0 = 0.0;
    if (f.kappa2 != 0.0) {
        u0 = std::numbers::e;
    } else if (f.kappa1 != 0.0) {
        u0 = 1.0;
    } else {
        return -kInf;
    }
    // d log f / du = rho + kappa1 / u + kappa2 / (u log u); find where it
    // turns nonnegative for good.
    auto slope = [&f](double u) { return f.rho + f.kappa1 / u + f.kappa2 / (u * std::log(u)); };
    double last_bad = -1.0;
    for (double u = u0; u < 1e6; u *= 1.02) {
        if (slope(u) < 0.0) {
            last_bad = u;
        }
    }
    return last_bad < 0.0 ? u0 : last_bad * 1.02;
}

}  // namespace

RegVarFn RegVarFn::power(double rho, double scale) {
    RegVarFn f;
    f.kind = Kind::Power;
    f.rho = rho;
    f.scale = scale;
    f.validate();
    return f;
}

RegVarFn RegVarFn::power_log(double rho, double kappa1, double kappa2, double scale) {
    RegVarFn f;
    f.kind = (kappa1 == 0.0 && kappa2 == 0.0) ? Kind::Power : Kind::PowerLog;
    f.rho = rho;
    f.kappa1 = kappa1;
    f.kappa2 = kappa2;
    f.scale = scale;
    f.validate();
    if (f.kind == Kind::PowerLog) {
        f.ray_log = powerlog_u0(f);
    }
    return f;
}

RegVarFn RegVarFn::table(std::vector<double> x, std::vector<double> y) {
    if (x.size() < 2 || x.size() != y.size()) {
        throw InputError("RegVarFn: table needs at least two (x, y) samples of equal count");
    }
    const std::size_t n = x.size();
    const std::size_t h = (n / 2 == n - 1) ? 0 : n / 2;
    const double idx = (std::log(y.back()) - std::log(y[h])) / (std::log(x.back()) - std::log(x[h]));
    return table(std::move(x), std::move(y), idx);
}

RegVarFn RegVarFn::table(std::vector<double> x, std::vector<double> y, double index) {
    RegVarFn f;
    f.kind = Kind::Table;
    f.x = std::move(x);
    f.y = std::move(y);
    f.rho = index;
    f.validate();
    return f;
}

void RegVarFn::validate() const {
    if (!std::isfinite(rho) || rho < 0.0) {
        throw InputError("RegVarFn: index must be finite and nonnegative");
    }
    if (kind == Kind::Table) {
        if (x.size() < 1 || x.size() != y.size()) {
            throw InputError("RegVarFn: table sizes differ");
        }
        if (!increasing(x) || !(x.front() > 0.0)) {
            throw InputError("RegVarFn: table abscissae must be positive and strictly increasing");
        }
        if (!nondecreasing(y) || !(y.front() > 0.0)) {
            throw InputError("RegVarFn: table values must be positive and nondecreasing");
        }
        return;
    }
    if (!(scale > 0.0) || !std::isfinite(scale) || !std::isfinite(kappa1) || !std::isfinite(kappa2)) {
        throw InputError("RegVarFn: scale must be positive and exponents finite");
    }
}

double RegVarFn::log_eval_log(double lr) const {
    switch (kind) {
        case Kind::Power:
            return std::log(scale) + rho * lr;
        case Kind::PowerLog: {
            const double u0 = std::isnan(ray_log) ? powerlog_u0(*this) : ray_log;
            const double u = std::max(lr, u0);
            double v = std::log(scale) + rho * u;
            if (kappa1 != 0.0) {
                v += kappa1 * std::log(u);
            }
            if (kappa2 != 0.0) {
                v += kappa2 * std::log(std::log(u));
            }
            return v - rho * (u - lr);
        }
        case Kind::Table:
            return table_log_eval(x, y, lr, rho);
    }
    return 0.0;
}

double RegVarFn::log_eval(double r) const {
    if (!(r > 0.0)) {
        throw InputError("RegVarFn: argument must be positive");
    }
    return log_eval_log(std::log(r));
}

double RegVarFn::operator()(double r) const { return std::exp(log_eval(r)); }

double RegVarFn::ray_start() const {
    if (kind == Kind::PowerLog) {
        return std::exp(std::isnan(ray_log) ? powerlog_u0(*this) : ray_log);
    }
    if (kind == Kind::Table) {
        return x.front();
    }
    return 0.0;
}

double RegVarFn::log_inverse_log(double ly) const {
    if (!(rho > 0.0) && kind != Kind::Table) {
        throw InputError("RegVarFn: inverse needs a positive index");
    }
    if (kind == Kind::Power) {
        return (ly - std::log(scale)) / rho;
    }
    auto h = [this, ly](double lr) { return log_eval_log(lr) - ly; };
    auto [lo, hi] = bracket(h, -1.0, 1.0, 1e6);
    return bisect_increasing(h, lo, hi, 1e-14 * std::max(1.0, std::abs(hi)));
}

double RegVarFn::inverse(double y) const {
    if (!(y > 0.0)) {
        throw InputError("RegVarFn: inverse argument must be positive");
    }
    return std::exp(log_inverse_log(std::log(y)));
}

AsymptoticInverse asymptotic_inverse(const RegVarFn& f) {
    f.validate();
    if (!(f.rho > 0.0)) {
        throw InputError("asymptotic_inverse: index must be positive");
    }
    AsymptoticInverse out;
    switch (f.kind) {
        case RegVarFn::Kind::Power:
            out.g = RegVarFn::power(1.0 / f.rho, std::pow(f.scale, -1.0 / f.rho));
            break;
        case RegVarFn::Kind::PowerLog: {
            const double c = std::pow(f.scale, -1.0 / f.rho) * std::pow(f.rho, f.kappa1 / f.rho);
            out.g = RegVarFn::power_log(1.0 / f.rho, -f.kappa1 / f.rho, -f.kappa2 / f.rho, c);
            break;
        }
        case RegVarFn::Kind::Table: {
            std::vector<double> gx;
            std::vector<double> gy;
            for (std::size_t i = 0; i < f.x.size(); ++i) {
                if (gx.empty() || f.y[i] > gx.back()) {
                    gx.push_back(f.y[i]);
                    gy.push_back(f.x[i]);
                }
            }
            out.g = RegVarFn::table(gx, gy, 1.0 / f.rho);
            out.threshold = gx.front();
            return out;
        }
    }
    // Scan log x over [0, 700] for the last exit from the tolerance band.
    double threshold_log = 0.0;
    for (double lx = 0.0; lx <= 700.0; lx += 0.25) {
        const double ratio = std::exp(f.log_eval_log(out.g.log_eval_log(lx)) - lx);
        if (!(ratio >= 0.9 && ratio <= 1.1)) {
            threshold_log = lx + 0.25;
        }
    }
    if (threshold_log > 700.0) {
        throw NumericalError("asymptotic_inverse: f(g(x))/x never settles in [0.9, 1.1]");
    }
    out.threshold = std::exp(threshold_log);
    return out;
}

RegVarFn compose(const RegVarFn& outer, const RegVarFn& inner) {
    if (outer.kind == RegVarFn::Kind::Table || inner.kind == RegVarFn::Kind::Table) {
        throw InputError("compose: only Power and PowerLog forms compose symbolically");
    }
    const double a = outer.rho;
    const double scale = outer.scale * std::pow(inner.scale, a) * std::pow(inner.rho, outer.kappa1);
    return RegVarFn::power_log(a * inner.rho, a * inner.kappa1 + outer.kappa1,
                               a * inner.kappa2 + outer.kappa2, scale);
}

Modulus Modulus::power(double alpha, double scale) {
    Modulus m;
    m.kind = Kind::Power;
    m.alpha = alpha;
    m.scale = scale;
    m.validate();
    return m;
}

Modulus Modulus::table(std::vector<double> delta, std::vector<double> omega) {
    Modulus m;
    m.kind = Kind::Table;
    m.delta = std::move(delta);
    m.omega = std::move(omega);
    if (m.delta.empty() || m.delta.size() != m.omega.size() || !increasing(m.delta) ||
        !(m.delta.front() > 0.0) || !nondecreasing(m.omega) || !(m.omega.front() >= 0.0)) {
        throw InputError("Modulus: table needs increasing positive deltas and nondecreasing values");
    }
    return m;
}

Modulus Modulus::inverse_regvar(RegVarFn g) {
    g.validate();
    if (!(g.rho > 0.0)) {
        throw InputError("Modulus: the generating function needs a positive index");
    }
    Modulus m;
    m.kind = Kind::InverseRegVar;
    m.g = std::make_shared<const RegVarFn>(std::move(g));
    return m;
}

void Modulus::validate() const {
    switch (kind) {
        case Kind::Power:
            if (!(scale > 0.0) || !(alpha > 0.0) || !std::isfinite(scale) || !std::isfinite(alpha)) {
                throw InputError("Modulus: power form needs positive scale and exponent");
            }
            return;
        case Kind::Table:
            if (delta.empty() || !(omega.front() > 0.0)) {
                throw InputError("Modulus: degenerate modulus (omega vanishes on the grid, angle constant?)");
            }
            return;
        case Kind::InverseRegVar:
            if (!g) {
                throw InputError("Modulus: missing generating function");
            }
            return;
    }
}

double Modulus::operator()(double d) const {
    if (!(d > 0.0)) {
        return 0.0;
    }
    switch (kind) {
        case Kind::Power:
            return scale * std::pow(d, alpha);
        case Kind::Table: {
            const std::size_t n = delta.size();
            if (d >= delta.back()) {
                return omega.back();
            }
            if (n == 1 || d <= delta.front()) {
                double s = 1.0;
                if (n > 1 && omega[0] > 0.0 && omega[1] > omega[0]) {
                    s = std::log(omega[1] / omega[0]) / std::log(delta[1] / delta[0]);
                }
                return omega.front() * std::pow(d / delta.front(), s);
            }
            const std::size_t k =
                static_cast<std::size_t>(std::upper_bound(delta.begin(), delta.end(), d) - delta.begin());
            const std::size_t i = k - 1;
            if (omega[i] > 0.0 && omega[i + 1] > 0.0) {
                const double w = std::log(d / delta[i]) / std::log(delta[i + 1] / delta[i]);
                return std::exp((1.0 - w) * std::log(omega[i]) + w * std::log(omega[i + 1]));
            }
            const double w = (d - delta[i]) / (delta[i + 1] - delta[i]);
            return (1.0 - w) * omega[i] + w * omega[i + 1];
        }
        case Kind::InverseRegVar: {
            const double ld = std::log(d);
            return std::exp(-ld - g->log_inverse_log(-ld));
        }
    }
    return 0.0;
}

double gamma_of(const Modulus& omega, double r) {
    omega.validate();
    if (!(r > 0.0)) {
        throw InputError("gamma_of: r must be positive");
    }
    switch (omega.kind) {
        case Modulus::Kind::Power:
            return std::pow(omega.scale * r, 1.0 / (1.0 + omega.alpha));
        case Modulus::Kind::InverseRegVar:
            return (*omega.g)(r);
        case Modulus::Kind::Table:
            break;
    }
    // x omega(x) is an increasing bijection; solve x omega(x) = 1/r in log x.
    const double lr = std::log(r);
    auto h = [&omega, lr](double lx) {
        const double w = omega(std::exp(lx));
        return w > 0.0 ? lx + std::log(w) + lr : -kInf;
    };
    double lo = std::log(1e-300);
    double hi = 0.0;
    while (h(hi) < 0.0) {
        hi = hi * 2.0 + 1.0;
        if (hi > 700.0) {
            throw NumericalError("gamma_of: bracket expansion failed");
        }
    }
    if (h(lo) >= 0.0) {
        throw NumericalError("gamma_of: bracket expansion failed");
    }
    return std::exp(-bisect_increasing(h, lo, hi, 1e-13));
}

double omega_from_gamma(const Modulus& omega, double d) {
    if (!(d > 0.0)) {
        return 0.0;
    }
    // Gamma^{-1}(1/d) by bisection on log r.
    const double target = -std::log(d);
    auto h = [&omega, target](double lr) { return std::log(gamma_of(omega, std::exp(lr))) - target; };
    auto [lo, hi] = bracket(h, -1.0, 1.0, 700.0);
    const double lr = bisect_increasing(h, lo, hi, 1e-13);
    return std::exp(-std::log(d) - lr);
}

Modulus estimate_modulus(const AngleProfile& profile, const std::vector<double>& delta_grid,
                         const ModulusOptions& opt) {
    profile.validate();
    if (delta_grid.empty() || !increasing(delta_grid) || !(delta_grid.front() > 0.0)) {
        throw InputError("estimate_modulus: delta grid must be positive and increasing");
    }
    double t_lo = profile.alpha;
    const double t_hi = profile.beta;
    if (profile.phi.kind == PhiForm::Kind::Chirp) {
        t_lo = std::max(t_lo, std::pow(opt.chirp_floor, 1.0 / profile.warp));
    }
    const double len = t_hi - t_lo;
    const double want = std::ceil(opt.points_per_delta * len / delta_grid.front());
    const std::size_t m = std::clamp(static_cast<std::size_t>(std::min(want, 1e18)), opt.min_points,
                                     opt.max_points);
    const double h = len / static_cast<double>(m - 1);
    std::vector<double> phi(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double t = (i + 1 == m) ? t_hi : t_lo + h * static_cast<double>(i);
        phi[i] = profile.phi_at(t);
    }
    const auto [gmin, gmax] = std::minmax_element(phi.begin(), phi.end());
    const double global = *gmax - *gmin;
    double adjacent = 0.0;
    for (std::size_t i = 1; i < m; ++i) {
        adjacent = std::max(adjacent, std::abs(phi[i] - phi[i - 1]));
    }

    std::vector<double> out;
    out.reserve(delta_grid.size());
    for (double d : delta_grid) {
        const std::size_t w = static_cast<std::size_t>(std::floor(d / h + 1e-9));
        double v;
        if (w == 0) {
            v = adjacent * d / h;
        } else if (w >= m - 1) {
            v = global;
        } else {
            // Windows of w + 1 consecutive samples, monotone deques.
            std::deque<std::size_t> qmax;
            std::deque<std::size_t> qmin;
            v = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                while (!qmax.empty() && phi[qmax.back()] <= phi[i]) {
                    qmax.pop_back();
                }
                qmax.push_back(i);
                while (!qmin.empty() && phi[qmin.back()] >= phi[i]) {
                    qmin.pop_back();
                }
                qmin.push_back(i);
                if (qmax.front() + w < i) {
                    qmax.pop_front();
                }
                if (qmin.front() + w < i) {
                    qmin.pop_front();
                }
                if (i >= w) {
                    v = std::max(v, phi[qmax.front()] - phi[qmin.front()]);
                }
            }
        }
        if (!out.empty()) {
            v = std::max(v, out.back());
        }
        out.push_back(v);
    }
    return Modulus::table(delta_grid, std::move(out));
}

double geometric_mean_ratio(const RegVarFn& f, long long n) {
    f.validate();
    if (n < 1) {
        throw InputError("geometric_mean_ratio: n must be at least 1");
    }
    long double sum = 0.0L;
    for (long long j = 1; j <= n; ++j) {
        sum += static_cast<long double>(f.log_eval(static_cast<double>(j)));
    }
    const long double lr = sum / static_cast<long double>(n) + static_cast<long double>(f.rho) -
                           static_cast<long double>(f.log_eval(static_cast<double>(n)));
    return static_cast<double>(std::exp(lr));
}

}  // namespace cansys
