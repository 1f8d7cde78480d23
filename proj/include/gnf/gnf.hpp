#pragma once

// Umbrella header for the neuron-gated adaptive G-neighbor mean filter
// library: image handling, software filters, the behavioral model of the
// analog pipeline, noise injection, quality metrics and the benchmark runner.

#include "gnf/analog.hpp"
#include "gnf/bench.hpp"
#include "gnf/csv.hpp"
#include "gnf/filters.hpp"
#include "gnf/image.hpp"
#include "gnf/metrics.hpp"
#include "gnf/noise.hpp"
#include "gnf/pgm.hpp"
#include "gnf/pipeline.hpp"
