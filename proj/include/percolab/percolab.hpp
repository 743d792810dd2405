#pragma once

// Umbrella header for the percolation laboratory.

#include "percolab/bitset.hpp"
#include "percolab/cube.hpp"
#include "percolab/estimate.hpp"
#include "percolab/events.hpp"
#include "percolab/exact.hpp"
#include "percolab/gf2.hpp"
#include "percolab/ising.hpp"
#include "percolab/lattice.hpp"
#include "percolab/montecarlo.hpp"
#include "percolab/parallel.hpp"
#include "percolab/plaquette.hpp"
#include "percolab/rng.hpp"
#include "percolab/rsw.hpp"
#include "percolab/union_find.hpp"
