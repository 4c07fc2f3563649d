#pragma once

#include "iflt/baselines.hpp"
#include "iflt/bench.hpp"
#include "iflt/error_analysis.hpp"
#include "iflt/errors.hpp"
#include "iflt/interp_filter.hpp"
#include "iflt/io.hpp"
#include "iflt/linalg.hpp"
#include "iflt/model_io.hpp"
#include "iflt/orthogonalizer.hpp"
#include "iflt/parallel.hpp"
#include "iflt/signal.hpp"
