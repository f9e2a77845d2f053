#pragma once

#include "cansys/errors.hpp"
#include "cansys/examples.hpp"
#include "cansys/hamiltonian.hpp"
#include "cansys/lower_bounds.hpp"
#include "cansys/mat2.hpp"
#include "cansys/monodromy.hpp"
#include "cansys/propagation.hpp"
#include "cansys/quadrature.hpp"
#include "cansys/regvar.hpp"
#include "cansys/spec_json.hpp"
#include "cansys/spectrum.hpp"
#include "cansys/upper_bounds.hpp"
