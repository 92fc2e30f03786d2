#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fy/predict.hpp"
#include "oracles.hpp"

using fy::EntropySpec;
using fy::SimplexPoint;
using fy::SolveMethod;
using fy::SolverConfig;
using fy::Vector;

namespace {

Vector vec(std::initializer_list<double> vals) {
  Vector v(static_cast<Eigen::Index>(vals.size()));
  Eigen::Index i = 0;
  for (double x : vals) v(i++) = x;
  return v;
}

const double kLog2 = std::log(2.0);

}  // namespace

TEST_CASE("argmax prediction with lowest-index tie break") {
  CHECK(fy::argmax_predict(vec({1, 3, 2})).vec() == vec({0, 1, 0}));
  CHECK(fy::argmax_predict(vec({2, 2})).vec() == vec({1, 0}));
  CHECK(fy::argmax_predict(vec({-1, -5})).vec() == vec({1, 0}));
}

TEST_CASE("softmax") {
  CHECK((fy::softmax(vec({0, 0, 0})).vec() - Vector::Constant(3, 1.0 / 3)).norm() <= 1e-15);
  const Vector p = fy::softmax(vec({kLog2, 0})).vec();
  CHECK(p(0) == doctest::Approx(2.0 / 3).epsilon(1e-14));
  CHECK(p(1) == doctest::Approx(1.0 / 3).epsilon(1e-14));
  const Vector q = fy::softmax(vec({1000, 0})).vec();
  CHECK(std::isfinite(q(0)));
  CHECK(q(0) == doctest::Approx(1.0));
  CHECK(q(1) == doctest::Approx(0.0));
}

TEST_CASE("sparsemax closed form") {
  const Vector p = fy::sparsemax(vec({0.5, 0.2, -0.3})).vec();
  CHECK(p(0) == doctest::Approx(0.65).epsilon(1e-12));
  CHECK(p(1) == doctest::Approx(0.35).epsilon(1e-12));
  CHECK(p(2) == 0.0);
  CHECK(fy::sparsemax(vec({0, 0})).vec() == vec({0.5, 0.5}));
  CHECK(fy::sparsemax(vec({2, 0, 0})).vec() == vec({1, 0, 0}));
}

TEST_CASE("score validation") {
  CHECK_THROWS_AS(fy::softmax(vec({1})), std::invalid_argument);
  Vector bad(2);
  bad << 1.0, std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(fy::sparsemax(bad), std::invalid_argument);
  CHECK_THROWS_AS(fy::entmax_tsallis(vec({1, 0}), 1.0), std::invalid_argument);
}

TEST_CASE("entmax at alpha 2 equals sparsemax") {
  oracles::Rng rng(5);
  for (const SolveMethod method : {SolveMethod::Bisection, SolveMethod::Brent}) {
    SolverConfig cfg;
    cfg.method = method;
    for (int rep = 0; rep < 200; ++rep) {
      const int d = rng.integer(2, 20);
      const Vector theta = rng.normal_vector(d, rng.uniform(0.1, 3.0));
      const Vector reference = fy::sparsemax(theta).vec();
      const Vector p = fy::entmax_tsallis(theta, 2.0, cfg).p.vec();
      CHECK((p - reference).lpNorm<Eigen::Infinity>() <= 1e-6);
    }
  }
}

TEST_CASE("entmax near alpha 1 approaches softmax") {
  oracles::Rng rng(6);
  for (int rep = 0; rep < 50; ++rep) {
    const int d = rng.integer(2, 12);
    const Vector theta = rng.normal_vector(d);
    const Vector p = fy::entmax_tsallis(theta, 1.0 + 1e-4).p.vec();
    CHECK((p - fy::softmax(theta).vec()).lpNorm<Eigen::Infinity>() <= 1e-3);
  }
}

TEST_CASE("entmax symmetric input gives the uniform point") {
  const Vector p = fy::entmax_tsallis(vec({0, 0}), 1.5).p.vec();
  CHECK(p(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p(1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("entmax 1.5 against the projected-gradient oracle") {
  SolverConfig pg_cfg;
  pg_cfg.method = SolveMethod::ProjectedGradient;
  pg_cfg.tol = 1e-11;
  pg_cfg.max_iter = 200000;
  const Vector theta = vec({1, 0, -1});
  const Vector root = fy::entmax_tsallis(theta, 1.5).p.vec();
  const Vector pg = fy::predict_generic(EntropySpec::tsallis(1.5), theta, pg_cfg).p.vec();
  CHECK(root(2) == 0.0);  // spread scores force an exact zero
  CHECK((root - pg).lpNorm<Eigen::Infinity>() <= 1e-5);

  oracles::Rng rng(8);
  for (int rep = 0; rep < 20; ++rep) {
    const Vector t = rng.normal_vector(rng.integer(2, 6), 1.5);
    const Vector a = fy::entmax_tsallis(t, 1.5).p.vec();
    const Vector b = fy::predict_generic(EntropySpec::tsallis(1.5), t, pg_cfg).p.vec();
    CHECK((a - b).lpNorm<Eigen::Infinity>() <= 1e-5);
  }
}

TEST_CASE("entmax produces exact zeros for spread scores (alpha 1.5 and 2)") {
  oracles::Rng rng(9);
  for (const double alpha : {1.5, 2.0}) {
    int zeros_seen = 0;
    for (int rep = 0; rep < 50; ++rep) {
      const int d = rng.integer(3, 10);
      const Vector theta = rng.normal_vector(d, 4.0);
      const Vector p = fy::entmax_tsallis(theta, alpha).p.vec();
      for (Eigen::Index i = 0; i < d; ++i) {
        if (p(i) == 0.0) ++zeros_seen;
      }
    }
    CAPTURE(alpha);
    CHECK(zeros_seen > 0);
  }
}

TEST_CASE("predict_generic reference points") {
  const Vector p1 =
      fy::predict_generic(EntropySpec::tsallis(2.0), vec({0.5, 0.2, -0.3})).p.vec();
  CHECK((p1 - vec({0.65, 0.35, 0.0})).lpNorm<Eigen::Infinity>() <= 1e-5);

  SolverConfig tight;
  tight.tol = 1e-11;
  tight.max_iter = 100000;
  const Vector p2 = fy::predict_generic(EntropySpec::shannon(), vec({kLog2, 0}), tight).p.vec();
  CHECK((p2 - vec({2.0 / 3, 1.0 / 3})).lpNorm<Eigen::Infinity>() <= 1e-6);

  const Vector p3 =
      fy::predict_generic(EntropySpec::squared_norm(1.5), vec({0, 0})).p.vec();
  CHECK((p3 - vec({0.5, 0.5})).lpNorm<Eigen::Infinity>() <= 1e-9);

  CHECK_THROWS_AS(fy::predict_generic(EntropySpec::berger_parker(), vec({1, 0})),
                  std::invalid_argument);
}

TEST_CASE("conjugate values") {
  CHECK(fy::conjugate_value(EntropySpec::shannon(), vec({0, 0})) ==
        doctest::Approx(kLog2).epsilon(1e-14));
  CHECK(fy::conjugate_value(EntropySpec::tsallis(2.0), vec({2, 0, 0})) == doctest::Approx(2.0));
  // constant scores force the uniform maximizer: value = c + H(uniform)
  oracles::Rng rng(10);
  for (const EntropySpec& spec :
       {EntropySpec::shannon(), EntropySpec::tsallis(1.5), EntropySpec::squared_norm(1.5),
        EntropySpec::renyi(0.5), EntropySpec::norm(2.0)}) {
    const double c = rng.uniform(-2.0, 2.0);
    const int d = rng.integer(2, 5);
    const double expected =
        c + fy::detail::entropy_value_raw(spec, Vector::Constant(d, 1.0 / d));
    CAPTURE(spec.to_string());
    CHECK(fy::conjugate_value(spec, Vector::Constant(d, c)) ==
          doctest::Approx(expected).epsilon(1e-7));
  }
}

TEST_CASE("conjugate is convex along sampled segments") {
  oracles::Rng rng(12);
  for (const EntropySpec& spec :
       {EntropySpec::shannon(), EntropySpec::tsallis(1.5), EntropySpec::tsallis(2.0)}) {
    for (int rep = 0; rep < 100; ++rep) {
      const int d = rng.integer(2, 6);
      const Vector a = rng.normal_vector(d, 2.0);
      const Vector b = rng.normal_vector(d, 2.0);
      const double lam = rng.uniform();
      const double mid = fy::conjugate_value(spec, lam * a + (1 - lam) * b);
      const double chord =
          lam * fy::conjugate_value(spec, a) + (1 - lam) * fy::conjugate_value(spec, b);
      CHECK(mid <= chord + 1e-9);
    }
  }
}

TEST_CASE("phi is decreasing on the bracket with opposite end signs") {
  // direct check of the root-finding reduction on random instances
  oracles::Rng rng(13);
  for (int rep = 0; rep < 100; ++rep) {
    const double alpha = rng.uniform(1.1, 3.0);
    const int d = rng.integer(2, 8);
    const Vector theta = rng.normal_vector(d, 2.0);
    const double am1 = alpha - 1.0;
    auto p_of_tau = [&](double tau) {
      double sum = 0.0;
      for (int i = 0; i < d; ++i) {
        const double s = theta(i) - tau;
        if (s <= -1.0 / am1) continue;
        sum += std::pow(1.0 + am1 * s, 1.0 / am1);
      }
      return sum;
    };
    const double gp1 = 0.0;
    const double gp_inv_d = (std::pow(1.0 / d, am1) - 1.0) / am1;
    const double lo = theta.maxCoeff() - gp1;
    const double hi = theta.maxCoeff() - gp_inv_d;
    CHECK(p_of_tau(lo) - 1.0 >= -1e-12);
    CHECK(p_of_tau(hi) - 1.0 <= 1e-12);
    double prev = p_of_tau(lo);
    for (int k = 1; k <= 10; ++k) {
      const double cur = p_of_tau(lo + (hi - lo) * k / 10.0);
      CHECK(cur <= prev + 1e-12);
      prev = cur;
    }
  }
}

TEST_CASE("temperature scaling") {
  const EntropySpec shannon = EntropySpec::shannon();
  const Vector theta = vec({1, 0});
  CHECK((fy::temperature_predict(shannon, theta, 1.0).p.vec() -
         fy::predict(shannon, theta).p.vec())
            .norm() <= 1e-15);
  const Vector cooled = fy::temperature_predict(shannon, theta, 1000.0).p.vec();
  CHECK(cooled(0) == doctest::Approx(0.5).epsilon(1e-3));
  // small temperature drives tsallis-2 onto the vertex
  const Vector heated = fy::temperature_predict(EntropySpec::tsallis(2.0), theta, 0.1).p.vec();
  CHECK(heated(0) == 1.0);
  CHECK(heated(1) == 0.0);
  CHECK_THROWS_AS(fy::temperature_predict(shannon, theta, 0.0), std::invalid_argument);
}

TEST_CASE("solver nonconvergence is reported") {
  SolverConfig cfg;
  cfg.method = SolveMethod::ProjectedGradient;
  cfg.max_iter = 1;
  cfg.tol = 1e-14;
  CHECK_THROWS_AS(fy::predict_generic(EntropySpec::tsallis(1.5), vec({3.0, 1.0, -2.0}), cfg),
                  fy::NoConvergence);
}

TEST_CASE("degenerate spread still solves") {
  // widely spread scores: the solution is a vertex, found exactly
  const Vector p = fy::entmax_tsallis(vec({50.0, -50.0}), 1.5).p.vec();
  CHECK(p(0) == 1.0);
  CHECK(p(1) == 0.0);
}
