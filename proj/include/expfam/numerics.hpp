#pragma once

#include "expfam/numerics/quadrature.hpp"
#include "expfam/numerics/random.hpp"
#include "expfam/numerics/roots.hpp"
#include "expfam/numerics/special_functions.hpp"
