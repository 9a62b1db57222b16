/*
 * tempus.hpp — convenience umbrella pulling in the whole library.
 */
#pragma once

#include "energy_grid.hpp"
#include "errors.hpp"
#include "gauge.hpp"
#include "halfline.hpp"
#include "kernel.hpp"
#include "lyapunov.hpp"
#include "scenario.hpp"
#include "spectral_state.hpp"
#include "temporal.hpp"
#include "time_observables.hpp"
#include "transform.hpp"
