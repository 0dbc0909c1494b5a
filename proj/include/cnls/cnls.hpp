#pragma once

#include "cnls/beta_threshold.hpp"
#include "cnls/coupled_solver.hpp"
#include "cnls/energy.hpp"
#include "cnls/error.hpp"
#include "cnls/io.hpp"
#include "cnls/nonlinearity.hpp"
#include "cnls/radial_grid.hpp"
#include "cnls/scalar_solver.hpp"
