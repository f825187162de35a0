#pragma once

// Umbrella header.

#include "rou/errors.hpp"
#include "rou/model.hpp"
#include "rou/normal.hpp"
#include "rou/random.hpp"
#include "rou/parallel.hpp"
#include "rou/reflection.hpp"
#include "rou/simulate.hpp"
#include "rou/quadrature.hpp"
#include "rou/ode.hpp"
#include "rou/stats.hpp"
#include "rou/stationary.hpp"
#include "rou/cumulant.hpp"
#include "rou/variational.hpp"
#include "rou/estimate.hpp"
#include "rou/io.hpp"
