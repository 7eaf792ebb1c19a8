#pragma once

#include "rectcft/errors.hpp"
#include "rectcft/algebra/rational.hpp"
#include "rectcft/algebra/cpoly.hpp"
#include "rectcft/algebra/series.hpp"
#include "rectcft/algebra/eta.hpp"
#include "rectcft/algebra/linear_combination.hpp"
#include "rectcft/virasoro/partition.hpp"
#include "rectcft/virasoro/verma.hpp"
#include "rectcft/virasoro/boundary_state.hpp"
#include "rectcft/virasoro/amplitude.hpp"
#include "rectcft/virasoro/slit_map.hpp"
#include "rectcft/freefield/boson.hpp"
#include "rectcft/freefield/gmatrix.hpp"
#include "rectcft/freefield/fermion.hpp"
#include "rectcft/lattice/link_state.hpp"
#include "rectcft/lattice/loop_spectrum.hpp"
#include "rectcft/lattice/ising.hpp"
#include "rectcft/fit/scaling_fit.hpp"
#include "rectcft/fit/summary.hpp"
