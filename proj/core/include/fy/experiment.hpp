#pragma once

#include <string>
#include <vector>

#include "fy/synth.hpp"
#include "fy/train.hpp"

namespace fy {

/// Jensen-Shannon divergence between two simplex points, in [0, log 2].
double js_divergence(const Vector& p, const Vector& y);

struct ExperimentCell {
  double alpha = 0.0;
  double lambda = 0.0;
  double dev_js = 0.0;
  double test_js = 0.0;
  double test_mse = 0.0;
  bool ok = false;
  std::string error;
};

struct MetricsReport {
  double js = 0.0;   // test JS of the dev-selected cell
  double mse = 0.0;  // test MSE of the dev-selected cell
  double chosen_alpha = 0.0;
  double chosen_lambda = 0.0;
  double softmax_js = 0.0;   // best alpha = 1 column (NaN when absent)
  double softmax_mse = 0.0;
  std::vector<ExperimentCell> cells;

  std::string to_json() const;  // stable, sorted keys
  std::string to_csv() const;
};

/// Trains one linear model per (alpha, lambda) with the Tsallis loss family
/// (alpha = 1 is the logistic/softmax column), selects on dev JS and reports
/// test metrics. Model selection never reads the test split. Failed cells
/// are recorded, not fatal. threads <= 0 picks the hardware concurrency.
MetricsReport run_label_proportion(const SynthData& data, const std::vector<double>& alphas,
                                   const std::vector<double>& lambdas, const OptConfig& opt,
                                   int threads = 1);

/// Grid grammars used by the command line: "1.0:2.0:0.25" (arithmetic) and
/// "1e-4:1e2:log" (decades); plain comma lists also work.
std::vector<double> parse_grid(const std::string& text);

}  // namespace fy
