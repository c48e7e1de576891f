#pragma once

#include "drdf/acquisition.hpp"
#include "drdf/bench.hpp"
#include "drdf/config.hpp"
#include "drdf/dimension.hpp"
#include "drdf/epidemic.hpp"
#include "drdf/error.hpp"
#include "drdf/gp_surrogate.hpp"
#include "drdf/local_search.hpp"
#include "drdf/optimizer.hpp"
#include "drdf/random.hpp"
#include "drdf/report.hpp"
#include "drdf/sampling.hpp"
