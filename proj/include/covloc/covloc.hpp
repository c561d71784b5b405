#pragma once

// Umbrella header for the covering location toolkit.

#include "covloc/instance.hpp"
#include "covloc/lp.hpp"
#include "covloc/model.hpp"
#include "covloc/export.hpp"
#include "covloc/lagrangian.hpp"
#include "covloc/exact.hpp"
#include "covloc/reductions.hpp"
#include "covloc/report.hpp"
