#include "cansys/quadrature.hpp"

#include <cmath>

namespace cansys {

CellIntegrals cell_integrals(const AngleProfile& p, double t0, double t1, double psi,
                             double abs_tol) {
    auto g = [psi](double phi) {
        const double s = std::sin(phi - psi);
        return std::array<double, 1>{s * s};
    };
    CellIntegrals out;
    out.sin2 = integrate_profile<1>(p, t0, t1, g, abs_tol)[0];
    out.mass = p.density.mass(p.to_base(std::max(t0, p.alpha)), p.to_base(std::min(t1, p.beta)));
    return out;
}

double circular_mean(const AngleProfile& p, double t0, double t1, double abs_tol) {
    auto g = [](double phi) { return std::array<double, 2>{std::cos(2.0 * phi), std::sin(2.0 * phi)}; };
    const auto cs = integrate_profile<2>(p, t0, t1, g, abs_tol);
    if (cs[0] == 0.0 && cs[1] == 0.0) {
        return p.phi_at(0.5 * (t0 + t1));
    }
    return 0.5 * std::atan2(cs[1], cs[0]);
}

}  // namespace cansys
