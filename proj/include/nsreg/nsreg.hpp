#pragma once

#include "error.hpp"
#include "grid.hpp"
#include "fft.hpp"
#include "field.hpp"
#include "spectral.hpp"
#include "calculus.hpp"
#include "generate.hpp"
#include "poisson.hpp"
#include "evolve.hpp"
#include "rescale.hpp"
#include "persist.hpp"
#include "exponents.hpp"
#include "parallel.hpp"
#include "cylinder.hpp"
#include "quantities.hpp"
#include "cutoff.hpp"
#include "pressure.hpp"
#include "inequalities.hpp"
#include "harmonic.hpp"
#include "criteria.hpp"
