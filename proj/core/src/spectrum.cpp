#include "cansys/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>

#include "cansys/errors.hpp"
#include "cansys/propagation.hpp"

namespace cansys {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kZeroSin = 1e-13;

// Segments that cannot reach w22 are dropped: equal neighbouring angles
// merge, a first segment with sin phi = 0 fixes the row (0, 1), and a last
// segment with cos phi = 0 fixes the column (0, 1)^T.
HamburgerSpec reduce_for_w22(const HamburgerSpec& s, std::size_t& dropped) {
    HamburgerSpec out;
    for (std::size_t j = 0; j < s.size(); ++j) {
        if (!out.angles.empty() && std::abs(std::sin(s.angles[j] - out.angles.back())) < kZeroSin) {
            out.lengths.back() += s.lengths[j];
            continue;
        }
        out.lengths.push_back(s.lengths[j]);
        out.angles.push_back(s.angles[j]);
    }
    if (!out.angles.empty() && std::abs(std::sin(out.angles.front())) < kZeroSin) {
        out.angles.erase(out.angles.begin());
        out.lengths.erase(out.lengths.begin());
    }
    if (!out.angles.empty() && std::abs(std::cos(out.angles.back())) < kZeroSin) {
        out.angles.pop_back();
        out.lengths.pop_back();
    }
    dropped = s.size() - out.size();
    return out;
}

// theta(x) for real x; zeros of w22 sit at theta in pi Z and theta(0) = pi/2.
using AngleFn = std::function<double(double)>;

AngleFn angle_function(const HamiltonianSpec& spec, double R, const ZeroOptions& opt) {
    if (const auto* h = std::get_if<HamburgerSpec>(&spec)) {
        auto cells = std::make_shared<std::vector<Cell>>(hamburger_cells(*h));
        return [cells](double x) { return prufer_angle(*cells, x); };
    }
    if (const auto* d = std::get_if<DiagonalSpec>(&spec)) {
        auto cells = std::make_shared<std::vector<Cell>>(hamburger_cells(to_hamburger(*d)));
        return [cells](double x) { return prufer_angle(*cells, x); };
    }
    if (const auto* c = std::get_if<ConstantMatrixSpec>(&spec)) {
        const ConstantMatrixSpec cm = *c;
        return [cm](double x) { return prufer_angle_constant(cm.matrix, cm.length, x); };
    }
    GridOptions g;
    g.z_abs = R;
    g.eta = opt.eta;
    g.prufer_safe = true;
    auto cells = std::make_shared<std::vector<Cell>>(profile_cells(std::get<AngleProfile>(spec), g));
    return [cells](double x) { return prufer_angle(*cells, x); };
}

std::size_t count_from_angles(double theta_minus, double theta_plus) {
    const double hi = std::floor(theta_plus / kPi);
    const double lo = std::ceil(theta_minus / kPi);
    return hi >= lo ? static_cast<std::size_t>(hi - lo + 1.0) : 0;
}

// All x in [-R, R] with theta(x) = k pi, by bisection on the monotone angle.
std::vector<double> locate(const AngleFn& theta, double R, double rel_tol) {
    const double tp = theta(R);
    const double tm = theta(-R);
    const long long k_hi = static_cast<long long>(std::floor(tp / kPi));
    const long long k_lo = static_cast<long long>(std::ceil(tm / kPi));
    std::vector<double> out;
    for (long long k = k_lo; k <= k_hi; ++k) {
        const double target = static_cast<double>(k) * kPi;
        double lo = k >= 1 ? 0.0 : -R;
        double hi = k >= 1 ? R : 0.0;
        while (hi - lo > rel_tol * std::max(std::abs(lo), std::abs(hi)) && hi - lo > 1e-300) {
            const double mid = 0.5 * (lo + hi);
            if (theta(mid) < target) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        out.push_back(0.5 * (lo + hi));
    }
    std::sort(out.begin(), out.end());
    return out;
}

void flag_close(ZeroSet& z) {
    for (std::size_t i = 1; i < z.zeros.size(); ++i) {
        if (z.zeros[i] - z.zeros[i - 1] <= 1e-10 * z.R) {
            z.close_pair = true;
        }
    }
}

}  // namespace

ZeroSet zeros_w22(const HamiltonianSpec& spec, double R, const ZeroOptions& opt) {
    validate(spec);
    if (!(R > 0.0) || !std::isfinite(R)) {
        throw InputError("zeros_w22: R must be positive");
    }
    ZeroSet out;
    out.R = R;
    const HamburgerSpec* ham = std::get_if<HamburgerSpec>(&spec);
    HamburgerSpec from_diag;
    if (const auto* d = std::get_if<DiagonalSpec>(&spec)) {
        from_diag = to_hamburger(*d);
        ham = &from_diag;
    }
    if (ham == nullptr) {
        out.method = "scan";
        out.zeros = locate(angle_function(spec, R, opt), R, opt.rel_tol);
        flag_close(out);
        return out;
    }
    std::size_t dropped = 0;
    const HamburgerSpec red = reduce_for_w22(*ham, dropped);
    out.degree_drop = dropped;
    out.degree = red.size();
    if (red.size() == 0) {
        out.method = "polynomial";
        return out;
    }
    const HamiltonianSpec red_spec = red;
    const AngleFn theta = angle_function(red_spec, R, opt);
    if (red.size() <= opt.poly.cap) {
        // Every root lies within the Cauchy bound, so the angle count there
        // must reach the full degree.
        const MatrixPolynomial poly = monodromy_poly(red, opt.poly);
        const auto& c = poly.c22;
        const double lead = c.back();
        double bound = 0.0;
        for (std::size_t k = 0; k + 1 < c.size(); ++k) {
            bound = std::max(bound, std::abs(c[k] / lead));
        }
        bound = (1.0 + bound) * (1.0 + 1e-9);
        if (std::isfinite(bound) && bound < 1e150) {
            const std::size_t total = count_from_angles(theta(-bound), theta(bound));
            if (total != red.size()) {
                throw NumericalError("zeros_w22: found " + std::to_string(total) + " real zeros, expected degree " +
                                     std::to_string(red.size()));
            }
            out.method = "polynomial";
        } else {
            out.method = "prufer";
        }
    } else {
        out.method = "prufer";
    }
    out.zeros = locate(theta, R, opt.rel_tol);
    flag_close(out);
    return out;
}

std::size_t counting_function(const ZeroSet& zeros, double r) {
    if (r > zeros.R * (1.0 + 1e-12)) {
        throw InputError("counting_function: r exceeds the radius of the zero set");
    }
    if (r < 0.0) {
        return 0;
    }
    return static_cast<std::size_t>(std::count_if(zeros.zeros.begin(), zeros.zeros.end(),
                                                  [r](double x) { return std::abs(x) <= r; }));
}

std::size_t zero_count(const HamiltonianSpec& spec, double r, const ZeroOptions& opt) {
    validate(spec);
    if (!(r > 0.0) || !std::isfinite(r)) {
        throw InputError("zero_count: r must be positive");
    }
    const AngleFn theta = angle_function(spec, r, opt);
    return count_from_angles(theta(-r), theta(r));
}

KdbDensity kdb_density(const HamiltonianSpec& spec, double R, const ZeroOptions& opt) {
    KdbDensity out;
    out.count = zero_count(spec, R, opt);
    out.empirical = static_cast<double>(out.count) / (2.0 * R);
    if (const auto* c = std::get_if<ConstantMatrixSpec>(&spec)) {
        out.predicted = c->length * std::sqrt(std::max(0.0, c->matrix.det())) / kPi;
    }
    return out;
}

CutReport cut_zero_inequality(const HamburgerSpec& spec, const std::set<std::size_t>& keep, double R,
                              std::size_t grid_points, const ZeroOptions& opt) {
    const HamburgerSpec reduced = cut(spec, keep);
    const ZeroSet z0 = zeros_w22(spec, R, opt);
    const ZeroSet z1 = zeros_w22(reduced, R, opt);
    CutReport rep;
    std::vector<double> grid;
    const std::size_t n = std::max<std::size_t>(grid_points, 2);
    for (std::size_t k = 0; k < n; ++k) {
        grid.push_back(R * static_cast<double>(k) / static_cast<double>(n - 1));
    }
    for (double x : z0.zeros) {
        grid.push_back(std::abs(x));
    }
    for (double x : z1.zeros) {
        grid.push_back(std::abs(x));
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    rep.max_violation = std::numeric_limits<long long>::min();
    for (double r : grid) {
        const std::size_t a = counting_function(z0, r);
        const std::size_t b = counting_function(z1, r);
        rep.r.push_back(r);
        rep.n_original.push_back(a);
        rep.n_cut.push_back(b);
        rep.max_violation =
            std::max(rep.max_violation, static_cast<long long>(b) - static_cast<long long>(a) - 2);
    }
    rep.ok = rep.max_violation <= 0;
    return rep;
}

OrderFit fit_order(const GrowthCurve& curve) {
    if (curve.r.size() != curve.value.size()) {
        throw InputError("fit_order: r and value differ in length");
    }
    std::vector<double> x;
    std::vector<double> y;
    for (std::size_t i = 0; i < curve.r.size(); ++i) {
        if (curve.r[i] > 0.0 && curve.value[i] > 1.0 && std::isfinite(curve.value[i])) {
            x.push_back(std::log(curve.r[i]));
            y.push_back(std::log(curve.value[i]));
        }
    }
    if (x.size() < 8) {
        throw InputError("fit_order: need at least 8 points with value > 1");
    }
    const double m = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    OrderFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - fit.intercept - fit.slope * x[i];
        ss += e * e;
    }
    fit.residual = std::sqrt(ss / m);
    fit.r_min = std::exp(*std::min_element(x.begin(), x.end()));
    fit.r_max = std::exp(*std::max_element(x.begin(), x.end()));
    fit.points = x.size();
    return fit;
}

}  // namespace cansys
