#pragma once

// Umbrella header for the fof flow-table matching library.

#include "fof/fields.hpp"
#include "fof/flow.hpp"
#include "fof/signature.hpp"
#include "fof/index.hpp"
#include "fof/engines.hpp"
#include "fof/workload.hpp"
#include "fof/bench.hpp"
#include "fof/io.hpp"
