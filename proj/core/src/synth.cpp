#include "fy/synth.hpp"

#include <cmath>

namespace fy {

namespace rng {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Stream::Stream(std::uint64_t seed) : state(seed) {
  // warm up so nearby seeds decorrelate
  for (int i = 0; i < 4; ++i) splitmix64(state);
}

std::uint64_t Stream::next_u64() { return splitmix64(state); }

double Stream::uniform() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Stream::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  spare_ = r * std::sin(angle);
  have_spare_ = true;
  return r * std::cos(angle);
}

int Stream::poisson(double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("poisson rate must be positive");
  if (rate > 700.0) {  // stay clear of exp underflow
    const int k = static_cast<int>(std::lround(rate + std::sqrt(rate) * normal()));
    return k < 0 ? 0 : k;
  }
  const double limit = std::exp(-rate);
  int k = 0;
  double prod = uniform();
  while (prod > limit) {
    ++k;
    prod *= uniform();
  }
  return k;
}

int Stream::categorical(const Vector& pmf) {
  const double u = uniform() * pmf.sum();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < pmf.size(); ++i) {
    acc += pmf(i);
    if (u <= acc) return static_cast<int>(i);
  }
  return static_cast<int>(pmf.size() - 1);
}

}  // namespace rng

namespace {

Dataset sample_split(rng::Stream& gen, int n, const SynthConfig& cfg, const Matrix& topics,
                     double label_rate) {
  Dataset data;
  data.X = Matrix::Zero(n, cfg.p);
  data.Y = Matrix::Zero(n, cfg.d);
  for (int i = 0; i < n; ++i) {
    const int n_labels = std::max(1, gen.poisson(label_rate));
    Vector y = Vector::Zero(cfg.d);
    for (int k = 0; k < n_labels; ++k) {
      y(static_cast<Eigen::Index>(gen.next_u64() % cfg.d)) += 1.0;
    }
    y /= static_cast<double>(n_labels);
    data.Y.row(i) = y.transpose();

    const int n_words = std::max(1, gen.poisson(cfg.doc_len_mean));
    for (int w = 0; w < n_words; ++w) {
      const int cls = gen.categorical(y);
      const int word = gen.categorical(topics.row(cls).transpose());
      data.X(i, word) += 1.0;
    }
  }
  return data;
}

}  // namespace

SynthData synth_generate(const SynthConfig& cfg) {
  if (cfg.n_train < 1 || cfg.n_dev < 1 || cfg.n_test < 1 || cfg.d < 2 || cfg.p < 2) {
    throw std::invalid_argument("synth config sizes must be positive (d >= 2, p >= 2)");
  }
  if (!(cfg.doc_len_mean > 0.0)) throw std::invalid_argument("doc_len_mean must be positive");
  const double label_rate =
      cfg.label_count_mean > 0.0 ? cfg.label_count_mean : std::max(1.0, cfg.d / 10.0);

  rng::Stream gen(cfg.seed);

  // Per-class word distributions: Dirichlet(1) sharpened by a fourth power
  // so classes have distinct signatures.
  Matrix topics(cfg.d, cfg.p);
  for (int c = 0; c < cfg.d; ++c) {
    double sum = 0.0;
    for (int w = 0; w < cfg.p; ++w) {
      const double e = -std::log(gen.uniform());
      const double sharpened = e * e * e * e;
      topics(c, w) = sharpened;
      sum += sharpened;
    }
    topics.row(c) /= sum;
  }

  SynthData out;
  out.train = sample_split(gen, cfg.n_train, cfg, topics, label_rate);
  out.dev = sample_split(gen, cfg.n_dev, cfg, topics, label_rate);
  out.test = sample_split(gen, cfg.n_test, cfg, topics, label_rate);

  // standardize features with train statistics
  const Vector mean = out.train.X.colwise().mean();
  Vector std_dev(cfg.p);
  for (int w = 0; w < cfg.p; ++w) {
    const double var =
        (out.train.X.col(w).array() - mean(w)).square().sum() / out.train.X.rows();
    std_dev(w) = var > 0.0 ? std::sqrt(var) : 1.0;
  }
  for (Dataset* split : {&out.train, &out.dev, &out.test}) {
    for (Eigen::Index i = 0; i < split->X.rows(); ++i) {
      split->X.row(i) = ((split->X.row(i).transpose() - mean).array() / std_dev.array())
                            .matrix()
                            .transpose();
    }
  }
  return out;
}

}  // namespace fy
