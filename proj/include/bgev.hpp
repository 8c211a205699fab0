#pragma once

// Umbrella header for the bimodal GEV library.

#include "bgev/distribution.hpp"
#include "bgev/fit.hpp"
#include "bgev/gev.hpp"
#include "bgev/gof.hpp"
#include "bgev/likelihood.hpp"
#include "bgev/modes.hpp"
#include "bgev/moments.hpp"
#include "bgev/params.hpp"
#include "bgev/pipeline.hpp"
#include "bgev/random.hpp"
#include "bgev/sim.hpp"
#include "bgev/sim_config.hpp"
#include "bgev/special.hpp"
#include "bgev/transform.hpp"
