// Command-line front end for the Fenchel-Young loss library: predictions,
// losses, structured losses, training, synthetic data and the solver
// benchmark. All machine output is JSON (or CSV for tables).

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fy/fy.hpp"

namespace {

using nlohmann::json;

fy::Vector parse_vector(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) vals.push_back(std::stod(item));
  }
  if (vals.empty()) throw std::invalid_argument("empty vector literal '" + text + "'");
  fy::Vector v(static_cast<Eigen::Index>(vals.size()));
  for (size_t i = 0; i < vals.size(); ++i) v(static_cast<Eigen::Index>(i)) = vals[i];
  return v;
}

json vector_to_json(const fy::Vector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

fy::SolveMethod parse_method(const std::string& name) {
  if (name == "bisection") return fy::SolveMethod::Bisection;
  if (name == "brent") return fy::SolveMethod::Brent;
  if (name == "pg" || name == "projected-gradient") return fy::SolveMethod::ProjectedGradient;
  throw std::invalid_argument("unknown method '" + name + "'");
}

fy::Dataset load_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open data file " + path);
  std::vector<std::vector<double>> xs, ys;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json row = json::parse(line);
    xs.push_back(row.at("x").get<std::vector<double>>());
    ys.push_back(row.at("y").get<std::vector<double>>());
  }
  if (xs.empty()) throw std::runtime_error("data file " + path + " is empty");
  fy::Dataset data;
  data.X.resize(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(xs[0].size()));
  data.Y.resize(static_cast<Eigen::Index>(ys.size()), static_cast<Eigen::Index>(ys[0].size()));
  for (size_t i = 0; i < xs.size(); ++i) {
    if (xs[i].size() != static_cast<size_t>(data.X.cols()) ||
        ys[i].size() != static_cast<size_t>(data.Y.cols())) {
      throw std::runtime_error("ragged rows in " + path);
    }
    for (size_t j = 0; j < xs[i].size(); ++j) data.X(i, j) = xs[i][j];
    for (size_t j = 0; j < ys[i].size(); ++j) data.Y(i, j) = ys[i][j];
  }
  return data;
}

void save_jsonl(const fy::Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.precision(17);
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    json row;
    row["x"] = std::vector<double>(data.X.row(i).begin(), data.X.row(i).end());
    row["y"] = std::vector<double>(data.Y.row(i).begin(), data.Y.row(i).end());
    out << row.dump() << "\n";
  }
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

int run(int argc, char** argv) {
  CLI::App app{"Fenchel-Young losses: prediction, losses, prox, training"};
  app.require_subcommand(1);

  // ---- predict ------------------------------------------------------------
  auto* predict_cmd = app.add_subcommand("predict", "regularized prediction over the simplex");
  std::string predict_entropy = "shannon", predict_theta, predict_method = "bisection";
  double predict_tol = 1e-9, predict_temperature = 1.0;
  int predict_max_iter = 0;
  predict_cmd->add_option("--entropy", predict_entropy, "entropy spec, e.g. tsallis:1.5");
  predict_cmd->add_option("--theta", predict_theta, "comma-separated scores")->required();
  predict_cmd->add_option("--method", predict_method, "bisection | brent | pg");
  predict_cmd->add_option("--tol", predict_tol, "solver tolerance");
  predict_cmd->add_option("--max-iter", predict_max_iter, "solver iteration cap");
  predict_cmd->add_option("--temperature", predict_temperature, "temperature t > 0");

  // ---- loss ---------------------------------------------------------------
  auto* loss_cmd = app.add_subcommand("loss", "Fenchel-Young loss value and gradient");
  std::string loss_spec_text = "shannon", loss_theta, loss_target, loss_cost;
  loss_cmd->add_option("--spec", loss_spec_text, "loss spec: entropy grammar, zero, squared");
  loss_cmd->add_option("--theta", loss_theta)->required();
  loss_cmd->add_option("--target", loss_target, "target vector on the loss domain")->required();
  loss_cmd->add_option("--cost", loss_cost, "zero-one or an explicit cost vector");

  // ---- ova ----------------------------------------------------------------
  auto* ova_cmd = app.add_subcommand("ova", "one-vs-all losses over the nonnegative cone");
  std::string ova_phi = "fermi-dirac", ova_theta, ova_target;
  ova_cmd->add_option("--phi", ova_phi, "squared | fermi-dirac | sparse-sigmoid");
  ova_cmd->add_option("--theta", ova_theta)->required();
  ova_cmd->add_option("--target", ova_target)->required();

  // ---- structured ---------------------------------------------------------
  auto* structured_cmd = app.add_subcommand("structured", "structured polytope losses");
  std::string structured_polytope = "sequence", structured_loss = "crf", structured_file;
  structured_cmd->add_option("--polytope", structured_polytope, "sequence | permutahedron");
  structured_cmd->add_option("--loss", structured_loss, "crf | hinge | perceptron | sparsemap");
  structured_cmd->add_option("--potentials", structured_file, "instance JSON file")->required();

  // ---- train --------------------------------------------------------------
  auto* train_cmd = app.add_subcommand("train", "fit a linear model");
  std::string train_mode = "primal", train_loss_text = "tsallis:2", train_data, train_out;
  std::string train_optimizer = "pg";
  double train_lambda = 1e-3, train_rho = 0.0, train_tol = 1e-6, train_gap_tol = 1e-4;
  int train_max_iter = 500, train_epochs = 200;
  std::uint64_t train_seed = 0;
  bool train_bias = false;
  train_cmd->add_option("--mode", train_mode, "primal | dual");
  train_cmd->add_option("--loss", train_loss_text);
  train_cmd->add_option("--lambda", train_lambda);
  train_cmd->add_option("--rho", train_rho, "elastic-net l1 factor (0 = plain l2)");
  train_cmd->add_option("--data", train_data, "JSONL with {\"x\":[...],\"y\":[...]}")->required();
  train_cmd->add_option("--out", train_out, "model JSON path")->required();
  train_cmd->add_option("--optimizer", train_optimizer, "pg | lbfgs (primal only)");
  train_cmd->add_option("--max-iter", train_max_iter);
  train_cmd->add_option("--epochs", train_epochs);
  train_cmd->add_option("--tol", train_tol);
  train_cmd->add_option("--gap-tol", train_gap_tol);
  train_cmd->add_option("--seed", train_seed);
  train_cmd->add_flag("--bias", train_bias, "append a constant feature");

  // ---- synth --------------------------------------------------------------
  auto* synth_cmd = app.add_subcommand("synth", "generate synthetic label-proportion data");
  fy::SynthConfig synth_cfg;
  std::string synth_out;
  synth_cmd->add_option("--seed", synth_cfg.seed);
  synth_cmd->add_option("--d", synth_cfg.d);
  synth_cmd->add_option("--p", synth_cfg.p);
  synth_cmd->add_option("--n-train", synth_cfg.n_train);
  synth_cmd->add_option("--n-dev", synth_cfg.n_dev);
  synth_cmd->add_option("--n-test", synth_cfg.n_test);
  synth_cmd->add_option("--doc-len-mean", synth_cfg.doc_len_mean);
  synth_cmd->add_option("--label-count-mean", synth_cfg.label_count_mean);
  synth_cmd->add_option("--out", synth_out, "output directory")->required();

  // ---- experiment ---------------------------------------------------------
  auto* experiment_cmd = app.add_subcommand("experiment", "experiment harnesses");
  auto* labelprop_cmd = experiment_cmd->add_subcommand("label-prop",
                                                       "label proportion estimation grid");
  std::string exp_data, exp_alphas = "1.0:2.0:0.1", exp_lambdas = "1e-4:1e4:log";
  std::string exp_out, exp_csv;
  int exp_threads = 0, exp_max_iter = 150;
  labelprop_cmd->add_option("--data", exp_data, "directory produced by `fy synth`")->required();
  labelprop_cmd->add_option("--alphas", exp_alphas);
  labelprop_cmd->add_option("--lambdas", exp_lambdas);
  labelprop_cmd->add_option("--out", exp_out, "report JSON path")->required();
  labelprop_cmd->add_option("--csv", exp_csv, "optional CSV path");
  labelprop_cmd->add_option("--threads", exp_threads, "0 = hardware concurrency");
  labelprop_cmd->add_option("--max-iter", exp_max_iter, "per-cell optimizer iterations");

  // ---- bench --------------------------------------------------------------
  auto* bench_cmd = app.add_subcommand("bench", "benchmarks");
  auto* solvers_cmd = bench_cmd->add_subcommand("solvers", "prediction solver comparison");
  std::string bench_d = "10,100,1000", bench_out;
  int bench_draws = 200;
  double bench_tol = 1e-5;
  std::uint64_t bench_seed = 0;
  solvers_cmd->add_option("--d", bench_d, "comma-separated dimensions");
  solvers_cmd->add_option("--draws", bench_draws);
  solvers_cmd->add_option("--tol", bench_tol, "target distance to the reference solution");
  solvers_cmd->add_option("--seed", bench_seed);
  solvers_cmd->add_option("--out", bench_out, "CSV path (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  std::cout.precision(17);

  if (predict_cmd->parsed()) {
    fy::SolverConfig cfg;
    cfg.method = parse_method(predict_method);
    cfg.tol = predict_tol;
    cfg.max_iter = predict_max_iter;
    const fy::EntropySpec spec = fy::EntropySpec::parse(predict_entropy);
    const fy::Vector theta = parse_vector(predict_theta);
    const fy::PredictionResult r =
        predict_temperature == 1.0 ? fy::predict(spec, theta, cfg)
                                   : fy::temperature_predict(spec, theta, predict_temperature, cfg);
    json out;
    out["p"] = vector_to_json(r.p.vec());
    out["conjugate"] = r.conjugate_value;
    out["iterations"] = r.iterations;
    out["function_evals"] = r.function_evals;
    std::cout << out.dump(2) << "\n";
    return 0;
  }

  if (loss_cmd->parsed()) {
    fy::LossSpec spec = fy::LossSpec::parse(loss_spec_text);
    if (!loss_cost.empty()) {
      spec = loss_cost == "zero-one" ? spec.with_zero_one_cost()
                                     : spec.with_cost(parse_vector(loss_cost));
    }
    const fy::Vector theta = parse_vector(loss_theta);
    const fy::Vector target = parse_vector(loss_target);
    const fy::ValueGrad vg = fy::fy_loss_value_grad(spec, theta, target);
    json out;
    out["loss"] = vg.value;
    out["grad"] = vector_to_json(vg.grad);
    std::cout << out.dump(2) << "\n";
    return 0;
  }

  if (ova_cmd->parsed()) {
    const fy::OvaPhi phi = fy::parse_ova_phi(ova_phi);
    const fy::Vector theta = parse_vector(ova_theta);
    const fy::Vector target = parse_vector(ova_target);
    json out;
    out["prediction"] = vector_to_json(fy::ova_predict(phi, theta));
    out["loss"] = fy::ova_loss(phi, theta, target);
    out["grad"] = vector_to_json(fy::ova_loss_grad(phi, theta, target));
    std::cout << out.dump(2) << "\n";
    return 0;
  }

  if (structured_cmd->parsed()) {
    std::ifstream in(structured_file);
    if (!in) throw std::runtime_error("cannot open " + structured_file);
    const json instance = json::parse(in);
    json out;
    if (structured_polytope == "sequence") {
      const int n = instance.at("n").get<int>();
      const int m = instance.at("m").get<int>();
      fy::Vector theta(static_cast<Eigen::Index>(n) * m * m);
      const auto& tens = instance.at("theta");
      for (int t = 0; t < n; ++t)
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j)
            theta((static_cast<Eigen::Index>(t) * m + i) * m + j) =
                tens.at(t).at(i).at(j).get<double>();
      const auto pot = fy::SequencePotentials::from_vector(n, m, theta);
      pot.validate();
      fy::SequenceOracle oracle(n, m);
      fy::Vector target;
      if (instance.contains("target")) {
        target.resize(theta.size());
        const auto& ty = instance.at("target");
        for (int t = 0; t < n; ++t)
          for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
              target((static_cast<Eigen::Index>(t) * m + i) * m + j) =
                  ty.at(t).at(i).at(j).get<double>();
      }
      if (structured_loss == "sparsemap") {
        const fy::SparseMapResult r = fy::sparsemap(oracle, theta);
        out["mu"] = vector_to_json(r.mu);
        out["support_size"] = r.weights.size();
        out["weights"] = vector_to_json(r.weights);
        if (target.size() > 0) {
          const fy::ValueGrad vg = fy::sparsemap_loss(oracle, theta, target);
          out["loss"] = vg.value;
          out["grad"] = vector_to_json(vg.grad);
        }
      } else {
        if (target.size() == 0) throw std::runtime_error("this loss needs a \"target\" entry");
        fy::ValueGrad vg;
        if (structured_loss == "crf") vg = fy::crf_loss(pot, target);
        else if (structured_loss == "perceptron")
          vg = fy::structured_perceptron_loss(oracle, theta, target);
        else if (structured_loss == "hinge")
          vg = fy::structured_hinge_loss(oracle, theta, target);
        else throw std::runtime_error("unknown structured loss " + structured_loss);
        out["loss"] = vg.value;
        out["grad"] = vector_to_json(vg.grad);
      }
    } else if (structured_polytope == "permutahedron") {
      const fy::Vector w = parse_vector([&] {
        std::string s;
        for (const auto& v : instance.at("w")) s += std::to_string(v.get<double>()) + ",";
        return s;
      }());
      fy::PermutahedronSpec spec(w);
      fy::Vector theta(w.size());
      const auto& th = instance.at("theta");
      for (Eigen::Index i = 0; i < theta.size(); ++i) theta(i) = th.at(i).get<double>();
      out["map"] = vector_to_json(fy::permutahedron_map(spec, theta));
      out["projection"] = vector_to_json(fy::permutahedron_project(spec, theta));
      if (instance.contains("target")) {
        fy::Vector target(w.size());
        for (Eigen::Index i = 0; i < target.size(); ++i)
          target(i) = instance.at("target").at(i).get<double>();
        fy::PermutationOracle oracle(spec);
        fy::ValueGrad vg;
        if (structured_loss == "sparsemap") vg = fy::sparsemap_loss(oracle, theta, target);
        else if (structured_loss == "perceptron")
          vg = fy::structured_perceptron_loss(oracle, theta, target);
        else if (structured_loss == "hinge")
          vg = fy::structured_hinge_loss(oracle, theta, target);
        else throw std::runtime_error("loss " + structured_loss + " not available here");
        out["loss"] = vg.value;
        out["grad"] = vector_to_json(vg.grad);
      }
    } else {
      throw std::runtime_error("unknown polytope " + structured_polytope);
    }
    std::cout << out.dump(2) << "\n";
    return 0;
  }

  if (train_cmd->parsed()) {
    fy::Dataset data = load_jsonl(train_data);
    if (train_bias) {
      fy::Matrix X(data.X.rows(), data.X.cols() + 1);
      X << data.X, fy::Matrix::Ones(data.X.rows(), 1);
      data.X = std::move(X);
    }
    const fy::LossSpec loss = fy::LossSpec::parse(train_loss_text);
    const fy::RegularizerG reg = train_rho > 0.0
                                     ? fy::RegularizerG::elastic_net(train_lambda, train_rho)
                                     : fy::RegularizerG::l2(train_lambda);
    fy::LinearModel model;
    json info;
    if (train_mode == "primal") {
      fy::OptConfig opt;
      opt.max_iter = train_max_iter;
      opt.tol = train_tol;
      opt.algo = train_optimizer == "lbfgs" ? fy::OptConfig::Algo::Lbfgs
                                            : fy::OptConfig::Algo::ProxGradient;
      const fy::TrainResult r = fy::train_primal(data, loss, reg, opt);
      model = r.model;
      info["converged"] = r.converged;
      info["grad_norm"] = r.grad_norm;
      info["iterations"] = r.iterations;
      if (!r.converged) {
        std::cerr << "warning: primal training stopped with gradient norm " << r.grad_norm
                  << "\n";
      }
    } else if (train_mode == "dual") {
      fy::DualTrainConfig dual_cfg;
      dual_cfg.max_epochs = train_epochs;
      dual_cfg.gap_tol = train_gap_tol;
      dual_cfg.seed = train_seed;
      const fy::DualTrainResult r = fy::train_dual(data, loss, reg, dual_cfg);
      model = r.model;
      info["converged"] = r.converged;
      info["duality_gap"] = r.gap;
      info["epochs"] = r.epochs;
      if (!r.converged) {
        std::cerr << "warning: dual training stopped with duality gap " << r.gap << "\n";
      }
    } else {
      throw std::runtime_error("unknown mode " + train_mode);
    }
    info["objective"] = fy::primal_objective(model, data, loss, reg);
    json model_json;
    model_json["d"] = model.W.rows();
    model_json["p"] = model.W.cols();
    std::vector<double> flat;
    flat.reserve(model.W.size());
    for (Eigen::Index i = 0; i < model.W.rows(); ++i)
      for (Eigen::Index j = 0; j < model.W.cols(); ++j) flat.push_back(model.W(i, j));
    model_json["W"] = flat;  // row-major
    model_json["loss"] = loss.to_string();
    write_file(train_out, model_json.dump(2) + "\n");
    std::cout << info.dump(2) << "\n";
    return 0;
  }

  if (synth_cmd->parsed()) {
    std::filesystem::create_directories(synth_out);
    const fy::SynthData data = fy::synth_generate(synth_cfg);
    save_jsonl(data.train, synth_out + "/train.jsonl");
    save_jsonl(data.dev, synth_out + "/dev.jsonl");
    save_jsonl(data.test, synth_out + "/test.jsonl");
    json meta;
    meta["seed"] = synth_cfg.seed;
    meta["d"] = synth_cfg.d;
    meta["p"] = synth_cfg.p;
    meta["n_train"] = synth_cfg.n_train;
    meta["n_dev"] = synth_cfg.n_dev;
    meta["n_test"] = synth_cfg.n_test;
    meta["doc_len_mean"] = synth_cfg.doc_len_mean;
    meta["label_count_mean"] = synth_cfg.label_count_mean;
    write_file(synth_out + "/meta.json", meta.dump(2) + "\n");
    std::cout << "wrote " << synth_out << "/{train,dev,test}.jsonl\n";
    return 0;
  }

  if (labelprop_cmd->parsed()) {
    fy::SynthData data;
    data.train = load_jsonl(exp_data + "/train.jsonl");
    data.dev = load_jsonl(exp_data + "/dev.jsonl");
    data.test = load_jsonl(exp_data + "/test.jsonl");
    fy::OptConfig opt;
    opt.algo = fy::OptConfig::Algo::Lbfgs;
    opt.max_iter = exp_max_iter;
    opt.tol = 1e-5;
    const fy::MetricsReport report = fy::run_label_proportion(
        data, fy::parse_grid(exp_alphas), fy::parse_grid(exp_lambdas), opt, exp_threads);
    write_file(exp_out, report.to_json());
    if (!exp_csv.empty()) write_file(exp_csv, report.to_csv());
    std::cout << "chosen alpha " << report.chosen_alpha << ", lambda " << report.chosen_lambda
              << ", test js " << report.js << ", test mse " << report.mse << "\n";
    return 0;
  }

  if (solvers_cmd->parsed()) {
    std::vector<int> dims;
    {
      std::stringstream ss(bench_d);
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (!item.empty()) dims.push_back(std::stoi(item));
      }
    }
    const auto rows = fy::bench_solvers(dims, bench_draws, bench_tol, bench_seed);
    const std::string csv = fy::bench_csv(rows);
    if (bench_out.empty()) std::cout << csv;
    else {
      write_file(bench_out, csv);
      std::cout << "wrote " << bench_out << "\n";
    }
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
