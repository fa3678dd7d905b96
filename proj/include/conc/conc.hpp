#pragma once

// Umbrella header: certified lower bounds and numerical upper bounds on the
// concurrence of mixed bipartite states.

#include "conc/types.hpp"
#include "conc/linalg.hpp"
#include "conc/states.hpp"
#include "conc/state_io.hpp"
#include "conc/tensor.hpp"
#include "conc/bounds.hpp"
#include "conc/scan.hpp"
#include "conc/selfcheck.hpp"
