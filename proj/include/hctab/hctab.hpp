#pragma once

// Umbrella header: the full engine plus the benchmark harness.

#include "hctab/arena.hpp"
#include "hctab/bench.hpp"
#include "hctab/builtins.hpp"
#include "hctab/cells.hpp"
#include "hctab/copier.hpp"
#include "hctab/hashcons.hpp"
#include "hctab/hashing.hpp"
#include "hctab/heap.hpp"
#include "hctab/parser.hpp"
#include "hctab/program.hpp"
#include "hctab/programs.hpp"
#include "hctab/stats.hpp"
#include "hctab/symbols.hpp"
#include "hctab/tabling.hpp"
#include "hctab/terms.hpp"
