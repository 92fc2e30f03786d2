#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fy/types.hpp"

namespace fy {

/// One row per (dimension, solver): function evaluations and wall time
/// needed to bring the 1.5-entmax iterate within `target` of a tight
/// reference solution, with medians and 99% intervals over the draws.
struct BenchRow {
  int d = 0;
  std::string solver;
  double evals_median = 0.0;
  double evals_lo = 0.0;   // 0.5% quantile
  double evals_hi = 0.0;   // 99.5% quantile
  double time_us_median = 0.0;
  double time_us_lo = 0.0;
  double time_us_hi = 0.0;
  int reached = 0;  // draws that hit the target
  int draws = 0;
};

/// Draws theta ~ N(0, sigma^2 I) with log sigma ~ U(-4, 4), runs bisection,
/// Brent and projected gradient on the 1.5-Tsallis prediction, and measures
/// evaluations and time (min of 5 repetitions per draw) until
/// ||p - p*||_2 < target. Timing runs are single-threaded on a monotonic
/// clock.
std::vector<BenchRow> bench_solvers(const std::vector<int>& d_list, int n_draws, double target,
                                    std::uint64_t seed = 0);

std::string bench_csv(const std::vector<BenchRow>& rows);

}  // namespace fy
