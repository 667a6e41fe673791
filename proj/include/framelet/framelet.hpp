#pragma once

// Umbrella header for the framelet reconstruction library.

#include "framelet/approximant.hpp"
#include "framelet/bounds.hpp"
#include "framelet/box.hpp"
#include "framelet/bracket.hpp"
#include "framelet/errors.hpp"
#include "framelet/experiment.hpp"
#include "framelet/generator.hpp"
#include "framelet/jitter.hpp"
#include "framelet/lattice.hpp"
#include "framelet/norms.hpp"
#include "framelet/parallel.hpp"
#include "framelet/rate.hpp"
#include "framelet/report_io.hpp"
#include "framelet/rng.hpp"
#include "framelet/test_function.hpp"
#include "framelet/verify.hpp"
