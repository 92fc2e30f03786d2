#include "fy/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <thread>

#include "fy/predict.hpp"

namespace fy {

double js_divergence(const Vector& p, const Vector& y) {
  if (p.size() != y.size()) throw std::invalid_argument("distribution sizes differ");
  auto kl_to_mid = [](const Vector& a, const Vector& mid) {
    double out = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      if (a(i) > 0.0) out += a(i) * std::log(a(i) / mid(i));
    }
    return out;
  };
  const Vector mid = 0.5 * (p + y);
  const double js = 0.5 * kl_to_mid(p, mid) + 0.5 * kl_to_mid(y, mid);
  return std::max(js, 0.0);
}

namespace {

struct SplitMetrics {
  double js = 0.0;
  double mse = 0.0;
};

SplitMetrics evaluate(const LinearModel& model, const Dataset& split, const EntropySpec& spec) {
  SplitMetrics out;
  for (Eigen::Index i = 0; i < split.n(); ++i) {
    const Vector theta = model.W * split.X.row(i).transpose();
    const Vector p = predict(spec, theta).p.vec();
    const Vector y = split.Y.row(i).transpose();
    out.js += js_divergence(p, y);
    out.mse += 0.5 * (p - y).squaredNorm();
  }
  out.js /= static_cast<double>(split.n());
  out.mse /= static_cast<double>(split.n());
  return out;
}

ExperimentCell run_cell(const SynthData& data, double alpha, double lambda,
                        const OptConfig& opt) {
  ExperimentCell cell;
  cell.alpha = alpha;
  cell.lambda = lambda;
  try {
    const EntropySpec spec = EntropySpec::tsallis(alpha);
    const LossSpec loss = LossSpec::entropy(spec);
    const TrainResult trained = train_primal(data.train, loss, RegularizerG::l2(lambda), opt);
    const SplitMetrics dev = evaluate(trained.model, data.dev, spec);
    const SplitMetrics test = evaluate(trained.model, data.test, spec);
    cell.dev_js = dev.js;
    cell.test_js = test.js;
    cell.test_mse = test.mse;
    cell.ok = true;
  } catch (const std::exception& e) {
    cell.ok = false;
    cell.error = e.what();
  }
  return cell;
}

std::string fmt(double v) {
  std::ostringstream out;
  out << std::setprecision(12) << v;
  return out.str();
}

}  // namespace

MetricsReport run_label_proportion(const SynthData& data, const std::vector<double>& alphas,
                                   const std::vector<double>& lambdas, const OptConfig& opt,
                                   int threads) {
  if (alphas.empty() || lambdas.empty()) {
    throw std::invalid_argument("experiment needs non-empty alpha and lambda grids");
  }
  MetricsReport report;
  std::vector<std::pair<double, double>> grid;
  for (double a : alphas)
    for (double l : lambdas) grid.emplace_back(a, l);

  int n_threads = threads > 0 ? threads
                              : std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
  n_threads = std::min<int>(n_threads, static_cast<int>(grid.size()));

  report.cells.resize(grid.size());
  std::atomic<size_t> cursor{0};
  auto worker = [&]() {
    while (true) {
      const size_t k = cursor.fetch_add(1);
      if (k >= grid.size()) return;
      report.cells[k] = run_cell(data, grid[k].first, grid[k].second, opt);
    }
  };
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // dev selection; ties break toward smaller alpha then smaller lambda so
  // reruns are stable
  const ExperimentCell* best = nullptr;
  const ExperimentCell* best_softmax = nullptr;
  for (const ExperimentCell& cell : report.cells) {
    if (!cell.ok) continue;
    if (!best || cell.dev_js < best->dev_js - 1e-15 ||
        (std::abs(cell.dev_js - best->dev_js) <= 1e-15 &&
         (cell.alpha < best->alpha ||
          (cell.alpha == best->alpha && cell.lambda < best->lambda)))) {
      best = &cell;
    }
    if (cell.alpha == 1.0 && (!best_softmax || cell.dev_js < best_softmax->dev_js)) {
      best_softmax = &cell;
    }
  }
  if (!best) throw std::runtime_error("every experiment cell failed");
  report.js = best->test_js;
  report.mse = best->test_mse;
  report.chosen_alpha = best->alpha;
  report.chosen_lambda = best->lambda;
  report.softmax_js = best_softmax ? best_softmax->test_js
                                   : std::numeric_limits<double>::quiet_NaN();
  report.softmax_mse = best_softmax ? best_softmax->test_mse
                                    : std::numeric_limits<double>::quiet_NaN();
  return report;
}

std::string MetricsReport::to_json() const {
  std::ostringstream out;
  out << std::setprecision(12);
  out << "{\n";
  out << "  \"cells\": [\n";
  for (size_t k = 0; k < cells.size(); ++k) {
    const ExperimentCell& c = cells[k];
    out << "    {\"alpha\": " << c.alpha << ", \"dev_js\": " << c.dev_js
        << ", \"error\": \"" << c.error << "\", \"lambda\": " << c.lambda
        << ", \"ok\": " << (c.ok ? "true" : "false") << ", \"test_js\": " << c.test_js
        << ", \"test_mse\": " << c.test_mse << "}" << (k + 1 < cells.size() ? "," : "") << "\n";
  }
  out << "  ],\n";
  out << "  \"chosen_alpha\": " << chosen_alpha << ",\n";
  out << "  \"chosen_lambda\": " << chosen_lambda << ",\n";
  out << "  \"js\": " << js << ",\n";
  out << "  \"mse\": " << mse << ",\n";
  out << "  \"softmax_js\": " << softmax_js << ",\n";
  out << "  \"softmax_mse\": " << softmax_mse << "\n";
  out << "}\n";
  return out.str();
}

std::string MetricsReport::to_csv() const {
  std::ostringstream out;
  out << "alpha,lambda,dev_js,test_js,test_mse,ok,error\n";
  for (const ExperimentCell& c : cells) {
    out << fmt(c.alpha) << "," << fmt(c.lambda) << "," << fmt(c.dev_js) << ","
        << fmt(c.test_js) << "," << fmt(c.test_mse) << "," << (c.ok ? 1 : 0) << ",\""
        << c.error << "\"\n";
  }
  return out.str();
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  if (text.find(',') != std::string::npos || text.find(':') == std::string::npos) {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
  }
  const auto c1 = text.find(':');
  const auto c2 = text.find(':', c1 + 1);
  if (c2 == std::string::npos) throw std::invalid_argument("grid needs lo:hi:step or lo:hi:log");
  const double lo = std::stod(text.substr(0, c1));
  const double hi = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
  const std::string step = text.substr(c2 + 1);
  if (step == "log") {
    for (double v = lo; v <= hi * (1.0 + 1e-12); v *= 10.0) out.push_back(v);
    return out;
  }
  const double h = std::stod(step);
  if (!(h > 0.0)) throw std::invalid_argument("grid step must be positive");
  for (double v = lo; v <= hi + 1e-12 * std::max(1.0, std::abs(hi)); v += h) out.push_back(v);
  return out;
}

}  // namespace fy
