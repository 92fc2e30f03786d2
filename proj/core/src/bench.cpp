#include "fy/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "fy/predict.hpp"
#include "fy/synth.hpp"

namespace fy {

namespace {

constexpr double kAlpha = 1.5;

double quantile(std::vector<double> xs, double q) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  const double pos = q * (xs.size() - 1);
  const size_t lo = static_cast<size_t>(pos);
  const size_t hi = std::min(lo + 1, xs.size() - 1);
  const double frac = pos - lo;
  return xs[lo] * (1.0 - frac) + xs[hi] * frac;
}

struct DrawResult {
  long evals = 0;
  double time_us = 0.0;
  bool reached = false;
};

SolverConfig solver_cfg(SolveMethod method) {
  SolverConfig cfg;
  cfg.method = method;
  cfg.tol = method == SolveMethod::ProjectedGradient ? 1e-10 : 1e-14;
  cfg.max_iter = method == SolveMethod::ProjectedGradient ? 40000 : 200;
  return cfg;
}

DrawResult run_draw(const Vector& theta, SolveMethod method, const Vector& p_star,
                    double target) {
  DrawResult out;
  const SolverConfig cfg = solver_cfg(method);

  // trace pass: locate the first evaluation within the target radius
  std::vector<Vector> trace;
  try {
    (void)detail::entmax_tsallis_impl(theta, kAlpha, cfg, &trace, 0);
  } catch (const NoConvergence&) {
    // keep whatever trace was produced
  }
  long first_hit = -1;
  for (size_t k = 0; k < trace.size(); ++k) {
    Vector p = trace[k];
    const double s = p.sum();
    if (s > 0.0) p /= s;
    if ((p - p_star).norm() < target) {
      first_hit = static_cast<long>(k) + 1;
      break;
    }
  }
  if (first_hit < 0) return out;
  out.reached = true;
  out.evals = first_hit;

  // timing pass: rerun capped at the located budget, min over 5 repetitions
  double best_us = std::numeric_limits<double>::infinity();
  for (int rep = 0; rep < 5; ++rep) {
    const auto t0 = std::chrono::steady_clock::now();
    (void)detail::entmax_tsallis_impl(theta, kAlpha, cfg, nullptr, first_hit);
    const auto t1 = std::chrono::steady_clock::now();
    best_us = std::min(best_us,
                       std::chrono::duration<double, std::micro>(t1 - t0).count());
  }
  out.time_us = best_us;
  return out;
}

}  // namespace

std::vector<BenchRow> bench_solvers(const std::vector<int>& d_list, int n_draws, double target,
                                    std::uint64_t seed) {
  if (!(target > 0.0)) throw std::invalid_argument("bench target must be positive");
  if (n_draws < 1) throw std::invalid_argument("bench needs at least one draw");
  const std::vector<std::pair<SolveMethod, std::string>> methods = {
      {SolveMethod::Bisection, "bisection"},
      {SolveMethod::Brent, "brent"},
      {SolveMethod::ProjectedGradient, "projected-gradient"},
  };
  std::vector<BenchRow> rows;
  for (int d : d_list) {
    if (d < 2) throw std::invalid_argument("bench dimensions must be >= 2");
    rng::Stream gen(seed ^ (0x517cc1b7ULL * static_cast<std::uint64_t>(d)));
    std::vector<Vector> thetas;
    std::vector<Vector> references;
    thetas.reserve(n_draws);
    for (int k = 0; k < n_draws; ++k) {
      const double log_sigma = -4.0 + 8.0 * gen.uniform();
      const double sigma = std::exp(log_sigma);
      Vector theta(d);
      for (int i = 0; i < d; ++i) theta(i) = sigma * gen.normal();
      // tight reference solution
      SolverConfig ref_cfg;
      ref_cfg.method = SolveMethod::Brent;
      ref_cfg.tol = 1e-14;
      ref_cfg.max_iter = 300;
      references.push_back(entmax_tsallis(theta, kAlpha, ref_cfg).p.vec());
      thetas.push_back(std::move(theta));
    }
    for (const auto& [method, name] : methods) {
      std::vector<double> evals, times;
      int reached = 0;
      for (int k = 0; k < n_draws; ++k) {
        const DrawResult r = run_draw(thetas[k], method, references[k], target);
        if (r.reached) {
          ++reached;
          evals.push_back(static_cast<double>(r.evals));
          times.push_back(r.time_us);
        }
      }
      BenchRow row;
      row.d = d;
      row.solver = name;
      row.draws = n_draws;
      row.reached = reached;
      row.evals_median = quantile(evals, 0.5);
      row.evals_lo = quantile(evals, 0.005);
      row.evals_hi = quantile(evals, 0.995);
      row.time_us_median = quantile(times, 0.5);
      row.time_us_lo = quantile(times, 0.005);
      row.time_us_hi = quantile(times, 0.995);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << std::setprecision(10);
  out << "d,solver,evals_median,evals_lo,evals_hi,time_us_median,time_us_lo,time_us_hi,"
         "reached,draws\n";
  for (const BenchRow& r : rows) {
    out << r.d << "," << r.solver << "," << r.evals_median << "," << r.evals_lo << ","
        << r.evals_hi << "," << r.time_us_median << "," << r.time_us_lo << ","
        << r.time_us_hi << "," << r.reached << "," << r.draws << "\n";
  }
  return out.str();
}

}  // namespace fy
