#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fy/loss.hpp"
#include "oracles.hpp"

using fy::BinaryLossKind;
using fy::EntropySpec;
using fy::LossSpec;
using fy::SimplexPoint;
using fy::Vector;

namespace {

Vector vec(std::initializer_list<double> vals) {
  Vector v(static_cast<Eigen::Index>(vals.size()));
  Eigen::Index i = 0;
  for (double x : vals) v(i++) = x;
  return v;
}

Vector one_hot(int d, int k) {
  Vector v = Vector::Zero(d);
  v(k) = 1.0;
  return v;
}

const double kLog2 = std::log(2.0);

}  // namespace

TEST_CASE("reference losses") {
  CHECK(fy::fy_loss(LossSpec::entropy(EntropySpec::shannon()), vec({0, 0}), one_hot(2, 0)) ==
        doctest::Approx(kLog2).epsilon(1e-14));
  CHECK(fy::fy_loss(LossSpec::perceptron(), vec({1, 3, 2}), one_hot(3, 0)) ==
        doctest::Approx(2.0));
  // sparsemax loss at a satisfied unit margin is exactly zero
  CHECK(fy::fy_loss(LossSpec::entropy(EntropySpec::tsallis(2.0)), vec({2, 0}), one_hot(2, 0)) ==
        0.0);
  CHECK(fy::fy_loss(LossSpec::squared(), vec({1, 2}), vec({0, 1})) == doctest::Approx(1.0));
}

TEST_CASE("target validation") {
  const LossSpec spec = LossSpec::entropy(EntropySpec::shannon());
  CHECK_THROWS_AS(fy::fy_loss(spec, vec({0, 0}), vec({0.5, 0.2})), fy::TargetOutsideDomain);
  CHECK_THROWS_AS(fy::fy_loss(spec, vec({0, 0}), vec({-0.1, 1.1})), fy::TargetOutsideDomain);
  // label proportions are fine
  CHECK(fy::fy_loss(spec, vec({0, 0}), vec({0.25, 0.75})) >= 0.0);
}

TEST_CASE("gradients") {
  const Vector g = fy::fy_loss_grad(LossSpec::entropy(EntropySpec::shannon()), vec({0, 0}),
                                    one_hot(2, 0));
  CHECK(g(0) == doctest::Approx(-0.5));
  CHECK(g(1) == doctest::Approx(0.5));
  const Vector g2 = fy::fy_loss_grad(LossSpec::entropy(EntropySpec::tsallis(2.0)), vec({2, 0}),
                                     one_hot(2, 0));
  CHECK(g2.lpNorm<Eigen::Infinity>() == 0.0);
  // perceptron subgradient ties break toward the lowest index
  const Vector g3 = fy::fy_loss_grad(LossSpec::perceptron(), vec({1, 1}), one_hot(2, 1));
  CHECK(g3 == vec({1, -1}));
}

TEST_CASE("gradients match finite differences") {
  oracles::Rng rng(21);
  const std::vector<LossSpec> specs = {
      LossSpec::entropy(EntropySpec::shannon()),
      LossSpec::entropy(EntropySpec::tsallis(1.5)),
      LossSpec::entropy(EntropySpec::tsallis(2.0)),
      LossSpec::entropy(EntropySpec::squared_norm(1.5)),
      LossSpec::squared(),
      LossSpec::entropy(EntropySpec::shannon()).with_zero_one_cost()};
  fy::SolverConfig tight;
  tight.tol = 1e-11;
  tight.max_iter = 100000;
  for (const auto& spec : specs) {
    CAPTURE(spec.to_string());
    for (int rep = 0; rep < 10; ++rep) {
      const int d = rng.integer(2, 5);
      const Vector theta = rng.normal_vector(d);
      const Vector y = spec.omega_kind() == fy::OmegaKind::Squared
                           ? rng.normal_vector(d)
                           : Vector(one_hot(d, rng.integer(0, d - 1)));
      const Vector grad = fy::fy_loss_grad(spec, theta, y, tight);
      const Vector fd = oracles::finite_difference_grad(
          [&](const Vector& t) { return fy::fy_loss(spec, t, y, tight); }, theta, 1e-5);
      CHECK(oracles::rel_error(grad, fd) <= 1e-5);
    }
  }
}

TEST_CASE("cost augmentation") {
  // zero + 0/1 cost is the multiclass hinge
  const LossSpec hinge = LossSpec::perceptron().with_zero_one_cost();
  CHECK(fy::fy_loss(hinge, vec({0, 0}), one_hot(2, 0)) == doctest::Approx(1.0));
  // shannon + 0/1 cost is the softmax margin: log(1 + e) at zero scores
  const LossSpec softmax_margin = LossSpec::entropy(EntropySpec::shannon()).with_zero_one_cost();
  CHECK(fy::fy_loss(softmax_margin, vec({0, 0}), one_hot(2, 0)) ==
        doctest::Approx(std::log(1.0 + std::exp(1.0))).epsilon(1e-12));
  // sparsemax + 0/1 cost with ample margin
  const LossSpec cost_sparsemax =
      LossSpec::entropy(EntropySpec::tsallis(2.0)).with_zero_one_cost();
  CHECK(fy::fy_loss(cost_sparsemax, vec({5, 0}), one_hot(2, 0)) == 0.0);
  // explicit costs must be nonnegative
  CHECK_THROWS_AS(LossSpec::perceptron().with_cost(vec({-1, 0})), std::invalid_argument);
  CHECK(fy::cost_augment(LossSpec::perceptron(), vec({0, 1})).cost_kind() ==
        fy::CostKind::Explicit);
}

TEST_CASE("binary margin losses") {
  CHECK(fy::binary_loss(BinaryLossKind::Logistic, 0.0, +1) == doctest::Approx(kLog2));
  // u = -ys = 0.5 on the middle branch
  CHECK(fy::binary_loss(BinaryLossKind::ModifiedHuber, -0.5, +1) == doctest::Approx(0.5625));
  CHECK(fy::binary_loss(BinaryLossKind::SmoothedHinge, 2.0, +1) == 0.0);
  CHECK(fy::binary_loss(BinaryLossKind::SmoothedHinge, -2.0, +1) == doctest::Approx(2.5));
  CHECK_THROWS_AS(fy::binary_loss(BinaryLossKind::Logistic, 0.0, 2), std::invalid_argument);

  // the binary case of the simplex losses: L(theta; e1) = phi*(-s) at
  // theta = [s, 0]
  oracles::Rng rng(22);
  for (int rep = 0; rep < 50; ++rep) {
    const double s = rng.uniform(-3.0, 3.0);
    const Vector theta = vec({s, 0});
    CHECK(fy::fy_loss(LossSpec::entropy(EntropySpec::shannon()), theta, one_hot(2, 0)) ==
          doctest::Approx(fy::binary_loss(BinaryLossKind::Logistic, s, +1)).epsilon(1e-10));
    CHECK(fy::fy_loss(LossSpec::entropy(EntropySpec::tsallis(2.0)), theta, one_hot(2, 0)) ==
          doctest::Approx(fy::binary_loss(BinaryLossKind::ModifiedHuber, s, +1))
              .epsilon(1e-10));
  }
}

TEST_CASE("expected loss and bregman information") {
  const LossSpec shannon = LossSpec::entropy(EntropySpec::shannon());
  // p = e_k reduces to the pointwise loss
  CHECK(fy::expected_loss(shannon, vec({0.3, -0.2}), SimplexPoint(one_hot(2, 0))) ==
        doctest::Approx(fy::fy_loss(shannon, vec({0.3, -0.2}), one_hot(2, 0))));
  CHECK(fy::expected_loss(shannon, vec({0, 0}), SimplexPoint(vec({0.5, 0.5}))) ==
        doctest::Approx(kLog2));

  CHECK(fy::bregman_information(shannon, SimplexPoint(one_hot(3, 1))) == doctest::Approx(0.0));
  CHECK(fy::bregman_information(shannon, SimplexPoint(vec({0.5, 0.5}))) ==
        doctest::Approx(kLog2));
  CHECK(fy::bregman_information(LossSpec::entropy(EntropySpec::tsallis(2.0)),
                                SimplexPoint(vec({0.75, 0.25}))) == doctest::Approx(0.1875));

  // decomposition: E_p[L] = L(theta; p) + I(p), both sides independent
  oracles::Rng rng(23);
  for (const auto& spec :
       {shannon, LossSpec::entropy(EntropySpec::tsallis(2.0))}) {
    for (int rep = 0; rep < 25; ++rep) {
      const int d = rng.integer(2, 6);
      const Vector theta = rng.normal_vector(d);
      const SimplexPoint p(rng.simplex_point(d));
      const double lhs = fy::expected_loss(spec, theta, p);
      const double rhs =
          fy::fy_loss(spec, theta, p.vec()) + fy::bregman_information(spec, p);
      CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
    }
  }
}

TEST_CASE("margin predicate") {
  CHECK(fy::margin_holds(vec({2, 0}), 0, 1.0));
  CHECK(!fy::margin_holds(vec({1.5, 1}), 0, 1.0));
  CHECK(fy::margin_holds(vec({3, 1, 0}), 0, 2.0));
}

TEST_CASE("margin suite for tsallis losses") {
  oracles::Rng rng(24);
  for (const double alpha : {1.5, 2.0, 3.0}) {
    const double margin = 1.0 / (alpha - 1.0);
    const LossSpec spec = LossSpec::entropy(EntropySpec::tsallis(alpha));
    for (int rep = 0; rep < 50; ++rep) {
      const int d = rng.integer(2, 6);
      const int k = rng.integer(0, d - 1);
      Vector theta = rng.normal_vector(d);
      // unique runner-up
      int runner = (k + 1) % d;
      double best_other = -1e100;
      for (int j = 0; j < d; ++j) {
        if (j != k && theta(j) > best_other) {
          best_other = theta(j);
          runner = j;
        }
      }
      for (int j = 0; j < d; ++j) {
        if (j != k && j != runner) theta(j) = std::min(theta(j), best_other - 0.5);
      }
      // exactly satisfied margin (plus slack) gives a hard zero
      theta(k) = best_other + margin + 1e-9;
      CAPTURE(alpha);
      CHECK(fy::fy_loss(spec, theta, one_hot(d, k)) == 0.0);
      // slightly violated margin gives a positive loss
      theta(k) = best_other + margin - 0.01;
      CHECK(fy::fy_loss(spec, theta, one_hot(d, k)) > 1e-8);
    }
  }
  // shannon never reaches zero (up to where the exponentials underflow)
  CHECK(fy::fy_loss(LossSpec::entropy(EntropySpec::shannon()), vec({5, 0}), one_hot(2, 0)) >
        0.0);
}

TEST_CASE("bregman bound and composite form") {
  oracles::Rng rng(25);
  const LossSpec sparsemax_loss = LossSpec::entropy(EntropySpec::tsallis(2.0));
  for (int rep = 0; rep < 200; ++rep) {
    const int d = rng.integer(2, 8);
    const Vector theta = rng.normal_vector(d, 2.0);
    const Vector y = rng.simplex_point(d);
    const double bound = 0.5 * (y - fy::sparsemax(theta).vec()).squaredNorm();
    const double loss = fy::fy_loss(sparsemax_loss, theta, y);
    CHECK(bound >= 0.0);
    CHECK(bound <= loss + 1e-12);
  }
  // composite form: shannon loss equals KL(y || softmax(theta))
  const LossSpec shannon = LossSpec::entropy(EntropySpec::shannon());
  for (int rep = 0; rep < 100; ++rep) {
    const int d = rng.integer(2, 6);
    const Vector theta = rng.normal_vector(d, 2.0);
    Vector y = rng.simplex_point(d);
    y = (y.array() + 0.01).matrix() / (1.0 + 0.01 * d);  // relative interior
    const Vector s = fy::softmax(theta).vec();
    double kl = 0.0;
    for (int i = 0; i < d; ++i) kl += y(i) * std::log(y(i) / s(i));
    const double loss = fy::fy_loss(shannon, theta, y);
    CHECK(std::abs(loss - kl) <= 1e-10 * std::max(1.0, std::abs(kl)));
  }
}

TEST_CASE("temperature identity for losses") {
  oracles::Rng rng(26);
  for (const auto& spec : {LossSpec::entropy(EntropySpec::shannon()),
                           LossSpec::entropy(EntropySpec::tsallis(2.0))}) {
    for (int rep = 0; rep < 50; ++rep) {
      const int d = rng.integer(2, 5);
      const Vector theta = rng.normal_vector(d);
      const Vector y = one_hot(d, rng.integer(0, d - 1));
      const double t = rng.uniform(0.2, 5.0);
      // L_{t Omega}(theta; y) assembled from the scaled conjugate
      const double lhs = t * fy::conjugate_value(spec.entropy_spec(), theta / t) +
                         t * 0.0 /* Omega(y) = 0 at vertices */ - theta.dot(y);
      const double rhs = t * fy::fy_loss(spec, theta / t, y);
      CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST_CASE("zero-loss equivalence for strictly convex regularizers") {
  oracles::Rng rng(27);
  for (const auto& spec : {LossSpec::entropy(EntropySpec::shannon()),
                           LossSpec::entropy(EntropySpec::tsallis(1.5)),
                           LossSpec::entropy(EntropySpec::tsallis(2.0))}) {
    for (int rep = 0; rep < 25; ++rep) {
      const int d = rng.integer(2, 5);
      const Vector theta = rng.normal_vector(d, 2.0);
      const Vector yhat = fy::predict(spec.entropy_spec(), theta).p.vec();
      CHECK(fy::fy_loss(spec, theta, yhat) <= 1e-8);
      // a target away from the prediction keeps the loss positive
      Vector far = rng.simplex_point(d);
      if ((far - yhat).norm() > 1e-4) {
        CHECK(fy::fy_loss(spec, theta, far) > 1e-8);
      }
    }
  }
}
