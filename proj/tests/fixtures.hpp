#pragma once

#include "iflt/bench.hpp"

// A benchmark small enough for unit tests.
inline iflt::bench::ExperimentConfig small_config(std::uint64_t seed = 7) {
  iflt::bench::ExperimentConfig c;
  c.n_signals = 20;
  c.m = c.n = 6;
  c.s = 120;
  c.rank = 2;
  c.p_values = {3};
  c.s_indices = {3, 10, 16};
  c.seed = seed;
  return c;
}
