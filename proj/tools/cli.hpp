#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "cansys/regvar.hpp"

namespace cansys::cli {

/// "a+bi", "a", "bi" with optional whitespace.
[[nodiscard]] std::complex<double> parse_complex(const std::string& text);

/// c * r^rho * log(r)^k1 * loglog(r)^k2, factors in any order separated by '*'.
[[nodiscard]] RegVarFn parse_regvar(const std::string& text);

/// r_k = r_min (r_max / r_min)^(k / (count - 1)).
[[nodiscard]] std::vector<double> radius_grid(double r_min, double r_max, int count);

/// %.17g, with -inf written literally.
[[nodiscard]] std::string format_double(double v);

/// Runs the command line; returns 0, 2 on input errors and 3 on numerical failures.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cansys::cli
