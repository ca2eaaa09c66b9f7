#pragma once

// Umbrella header for the whole library.

#include "infs/errors.hpp"      // IWYU pragma: export
#include "infs/parallel.hpp"    // IWYU pragma: export
#include "infs/rng.hpp"         // IWYU pragma: export
#include "infs/csv.hpp"         // IWYU pragma: export
#include "infs/json_io.hpp"     // IWYU pragma: export
#include "infs/dataset.hpp"     // IWYU pragma: export
#include "infs/estimators.hpp"  // IWYU pragma: export
#include "infs/micc.hpp"        // IWYU pragma: export
#include "infs/merge.hpp"       // IWYU pragma: export
#include "infs/external.hpp"    // IWYU pragma: export
#include "infs/learners.hpp"    // IWYU pragma: export
#include "infs/evaluate.hpp"    // IWYU pragma: export
#include "infs/rfe.hpp"         // IWYU pragma: export
#include "infs/baselines.hpp"   // IWYU pragma: export
#include "infs/schema.hpp"      // IWYU pragma: export
#include "infs/config.hpp"      // IWYU pragma: export
#include "infs/report.hpp"      // IWYU pragma: export
