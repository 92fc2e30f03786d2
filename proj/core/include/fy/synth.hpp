#pragma once

#include <cstdint>

#include "fy/train.hpp"
#include "fy/types.hpp"

namespace fy {

/// Mixture-of-multinomials generator for label-proportion data: per-class
/// word distributions, Poisson label counts and document lengths, features
/// standardized with training statistics. Fully determined by the seed.
struct SynthConfig {
  std::uint64_t seed = 0;
  int n_train = 1200;
  int n_dev = 200;
  int n_test = 1000;
  int d = 10;                     // classes
  int p = 500;                    // vocabulary size
  double doc_len_mean = 200.0;    // Poisson rate for words per document
  double label_count_mean = 0.0;  // Poisson rate for labels per sample; 0 = d / 10
};

struct SynthData {
  Dataset train;
  Dataset dev;
  Dataset test;
};

SynthData synth_generate(const SynthConfig& cfg);

namespace rng {

/// Deterministic samplers on top of a raw 64-bit generator state, so that
/// datasets are bit-identical across standard libraries.
struct Stream {
  std::uint64_t state;
  explicit Stream(std::uint64_t seed);
  std::uint64_t next_u64();
  double uniform();                    // (0, 1)
  double normal();                     // Box-Muller, one value per call
  int poisson(double rate);            // inversion; normal approximation for huge rates
  int categorical(const Vector& pmf);  // CDF inversion

 private:
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace rng

}  // namespace fy
