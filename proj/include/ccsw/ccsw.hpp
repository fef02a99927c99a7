#pragma once

#include "ccsw/archive.hpp"
#include "ccsw/bench.hpp"
#include "ccsw/bit_solution.hpp"
#include "ccsw/engine.hpp"
#include "ccsw/graph.hpp"
#include "ccsw/normal.hpp"
#include "ccsw/objective.hpp"
#include "ccsw/oracles.hpp"
#include "ccsw/problems.hpp"
#include "ccsw/random.hpp"
#include "ccsw/stats.hpp"
#include "ccsw/synthetic.hpp"
