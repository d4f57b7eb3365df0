#pragma once

#include "shiftbench/causal.hpp"
#include "shiftbench/csv.hpp"
#include "shiftbench/error.hpp"
#include "shiftbench/harness/runner.hpp"
#include "shiftbench/holt.hpp"
#include "shiftbench/interval.hpp"
#include "shiftbench/json_io.hpp"
#include "shiftbench/protocol.hpp"
#include "shiftbench/series.hpp"
#include "shiftbench/svg.hpp"
