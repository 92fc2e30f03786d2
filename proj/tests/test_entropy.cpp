#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fy/entropy.hpp"
#include "oracles.hpp"

using fy::EntropySpec;
using fy::HingeKind;
using fy::SimplexPoint;
using fy::Vector;

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

Vector vec3(double a, double b, double c) {
  Vector v(3);
  v << a, b, c;
  return v;
}

const double kLog2 = std::log(2.0);

}  // namespace

TEST_CASE("entropy values at reference points") {
  CHECK(fy::entropy_value(EntropySpec::shannon(), SimplexPoint(vec2(0.5, 0.5))) ==
        doctest::Approx(kLog2).epsilon(1e-12));
  CHECK(fy::entropy_value(EntropySpec::tsallis(2.0), SimplexPoint(vec2(0.5, 0.5))) ==
        doctest::Approx(0.25).epsilon(1e-12));
  CHECK(fy::entropy_value(EntropySpec::norm(2.0), SimplexPoint(vec2(1.0, 0.0))) == 0.0);
  CHECK(fy::entropy_value(EntropySpec::renyi(0.5), SimplexPoint(vec2(1.0, 0.0))) == 0.0);
  CHECK(fy::entropy_value(EntropySpec::berger_parker(), SimplexPoint(vec2(0.7, 0.3))) ==
        doctest::Approx(0.3));
}

TEST_CASE("entropy is exactly zero at every vertex") {
  const std::vector<EntropySpec> specs = {
      EntropySpec::shannon(),
      EntropySpec::tsallis(1.5),
      EntropySpec::tsallis(2.0),
      EntropySpec::tsallis(3.0),
      EntropySpec::norm(2.0),
      EntropySpec::squared_norm(1.5),
      EntropySpec::renyi(0.5),
      EntropySpec::berger_parker(),
      EntropySpec::pairwise_hinge(HingeKind::Hinge),
      EntropySpec::pairwise_hinge(HingeKind::SmoothedHinge),
      EntropySpec::pairwise_hinge(HingeKind::SquaredHinge)};
  for (const auto& spec : specs) {
    CAPTURE(spec.to_string());
    for (int d = 2; d <= 5; ++d) {
      for (int k = 0; k < d; ++k) {
        CHECK(fy::entropy_value(spec, SimplexPoint::vertex(d, k)) == 0.0);
      }
    }
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(EntropySpec::tsallis(0.5), std::invalid_argument);
  CHECK_THROWS_AS(EntropySpec::norm(1.0), std::invalid_argument);
  CHECK_THROWS_AS(EntropySpec::squared_norm(0.9), std::invalid_argument);
  CHECK_THROWS_AS(EntropySpec::renyi(1.5), std::invalid_argument);
  CHECK_THROWS_AS(EntropySpec::renyi(0.0), std::invalid_argument);
  // near-1 parameters dispatch to shannon
  CHECK(EntropySpec::tsallis(1.0).family() == fy::EntropyFamily::Shannon);
  CHECK(EntropySpec::renyi(1.0).family() == fy::EntropyFamily::Shannon);
}

TEST_CASE("textual round trip") {
  for (const std::string text : {"shannon", "tsallis:1.5", "norm:2", "sqnorm:1.5", "renyi:0.5",
                                 "berger-parker", "pairwise-hinge:squared"}) {
    const EntropySpec spec = EntropySpec::parse(text);
    CHECK(EntropySpec::parse(spec.to_string()).to_string() == spec.to_string());
  }
  CHECK_THROWS(EntropySpec::parse("nope"));
  CHECK_THROWS(EntropySpec::parse("tsallis"));
}

TEST_CASE("gradients at reference points") {
  const Vector g_tsallis =
      fy::entropy_grad(EntropySpec::tsallis(2.0), SimplexPoint(vec2(0.5, 0.5)));
  CHECK(g_tsallis.lpNorm<Eigen::Infinity>() == doctest::Approx(0.0).epsilon(1e-15));

  const Vector g_norm = fy::entropy_grad(EntropySpec::norm(2.0), SimplexPoint(vec2(1.0, 0.0)));
  CHECK(g_norm(0) == doctest::Approx(-1.0));
  CHECK(g_norm(1) == doctest::Approx(0.0));

  const Vector g_shannon =
      fy::entropy_grad(EntropySpec::shannon(), SimplexPoint(vec2(0.5, 0.5)));
  CHECK(g_shannon(0) == doctest::Approx(kLog2 - 1.0).epsilon(1e-12));
  CHECK(g_shannon(1) == doctest::Approx(kLog2 - 1.0).epsilon(1e-12));

  CHECK_THROWS_AS(fy::entropy_grad(EntropySpec::shannon(), SimplexPoint(vec2(1.0, 0.0))),
                  fy::BoundaryGradient);
  CHECK_THROWS_AS(fy::entropy_grad(EntropySpec::renyi(0.5), SimplexPoint(vec2(1.0, 0.0))),
                  fy::BoundaryGradient);
}

TEST_CASE("gradients match finite differences along simplex directions") {
  const std::vector<EntropySpec> specs = {
      EntropySpec::shannon(),         EntropySpec::tsallis(1.5),
      EntropySpec::tsallis(2.0),      EntropySpec::tsallis(3.0),
      EntropySpec::norm(2.0),         EntropySpec::norm(3.0),
      EntropySpec::squared_norm(1.5), EntropySpec::renyi(0.5),
      EntropySpec::pairwise_hinge(HingeKind::SquaredHinge),
      EntropySpec::pairwise_hinge(HingeKind::SmoothedHinge)};
  oracles::Rng rng(42);
  for (const auto& spec : specs) {
    CAPTURE(spec.to_string());
    for (int rep = 0; rep < 20; ++rep) {
      const int d = rng.integer(2, 6);
      Vector p = rng.simplex_point(d);
      // keep clear of the boundary so the stencil stays in the domain
      p = (p.array() + 0.05).matrix() / (1.0 + 0.05 * d);
      const Vector g = fy::entropy_grad(spec, SimplexPoint(p));
      auto value = [&](const Vector& q) { return fy::detail::entropy_value_raw(spec, q); };
      const double h = 1e-6;
      for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
          if (spec.family() == fy::EntropyFamily::PairwiseHinge &&
              std::abs(p(i) - p(j)) < 10 * h) {
            continue;  // smoothed kind has kinks at argmax ties
          }
          Vector hi = p, lo = p;
          hi(i) += h;
          hi(j) -= h;
          lo(i) -= h;
          lo(j) += h;
          const double fd = (value(hi) - value(lo)) / (2.0 * h);
          const double an = g(i) - g(j);
          CAPTURE(i);
          CAPTURE(j);
          CHECK(std::abs(fd - an) <= 1e-6 * std::max(1.0, std::abs(an)));
        }
      }
    }
  }
}

TEST_CASE("margins") {
  CHECK(fy::margin_of(EntropySpec::tsallis(1.2)).value() == doctest::Approx(5.0));
  CHECK(fy::margin_of(EntropySpec::tsallis(1.5)).value() == doctest::Approx(2.0));
  CHECK(fy::margin_of(EntropySpec::tsallis(2.0)).value() == doctest::Approx(1.0));
  CHECK(fy::margin_of(EntropySpec::tsallis(3.0)).value() == doctest::Approx(0.5));
  CHECK(fy::margin_of(EntropySpec::norm(2.0)).value() == doctest::Approx(1.0));
  CHECK(fy::margin_of(EntropySpec::squared_norm(1.5)).value() == doctest::Approx(1.0));
  CHECK(!fy::margin_of(EntropySpec::shannon()).has_value());
  CHECK(!fy::margin_of(EntropySpec::renyi(0.5)).has_value());
}

TEST_CASE("nonnegative and maximized by the uniform distribution") {
  const std::vector<EntropySpec> specs = {
      EntropySpec::shannon(),
      EntropySpec::tsallis(1.5),
      EntropySpec::tsallis(2.0),
      EntropySpec::norm(2.0),
      EntropySpec::squared_norm(1.5),
      EntropySpec::renyi(0.5),
      EntropySpec::berger_parker(),
      EntropySpec::pairwise_hinge(HingeKind::Hinge),
      EntropySpec::pairwise_hinge(HingeKind::SmoothedHinge),
      EntropySpec::pairwise_hinge(HingeKind::SquaredHinge)};
  oracles::Rng rng(7);
  for (const auto& spec : specs) {
    CAPTURE(spec.to_string());
    for (int rep = 0; rep < 200; ++rep) {
      const int d = rng.integer(2, 8);
      const SimplexPoint p(rng.simplex_point(d));
      const double h = fy::entropy_value(spec, p);
      const double h_uniform = fy::entropy_value(spec, SimplexPoint::uniform(d));
      CHECK(h >= 0.0);
      CHECK(h <= h_uniform + 1e-12);
    }
  }
}

TEST_CASE("permutation symmetry on random permutations") {
  const std::vector<EntropySpec> specs = {
      EntropySpec::shannon(), EntropySpec::tsallis(1.7), EntropySpec::norm(2.5),
      EntropySpec::renyi(0.3), EntropySpec::pairwise_hinge(HingeKind::SquaredHinge)};
  oracles::Rng rng(11);
  std::mt19937_64 shuffler(13);
  for (const auto& spec : specs) {
    for (int rep = 0; rep < 100; ++rep) {
      const int d = rng.integer(2, 7);
      const Vector p = rng.simplex_point(d);
      std::vector<int> idx(d);
      for (int i = 0; i < d; ++i) idx[i] = i;
      std::shuffle(idx.begin(), idx.end(), shuffler);
      Vector q(d);
      for (int i = 0; i < d; ++i) q(i) = p(idx[i]);
      const double hp = fy::entropy_value(spec, SimplexPoint(p));
      const double hq = fy::entropy_value(spec, SimplexPoint(q));
      CHECK(std::abs(hp - hq) <= 1e-12 * (1.0 + std::abs(hp)));
    }
  }
}

TEST_CASE("assumption checks") {
  CHECK(fy::check_assumptions(EntropySpec::shannon(), 3).all_pass());
  CHECK(fy::check_assumptions(EntropySpec::tsallis(2.0), 5).all_pass());
  CHECK(fy::check_assumptions(EntropySpec::tsallis(1.5), 4).all_pass());
  CHECK(fy::check_assumptions(EntropySpec::renyi(0.5), 3).all_pass());
  CHECK(fy::check_assumptions(EntropySpec::squared_norm(1.5), 3).all_pass());

  // the constant stub is concave and symmetric but not strictly concave
  const auto report = fy::check_assumptions([](const Vector&) { return 0.0; }, 3);
  CHECK(report.zero_at_vertices);
  CHECK(report.symmetric);
  CHECK(!report.strictly_concave);
  CHECK(!report.all_pass());

  // an asymmetric candidate trips A.3
  const auto skewed = fy::check_assumptions(
      [](const Vector& p) {
        double h = 0.0;
        for (Eigen::Index i = 0; i < p.size(); ++i) {
          h -= (1.0 + 0.1 * i) * (p(i) > 0 ? p(i) * std::log(p(i)) : 0.0);
        }
        return h;
      },
      3);
  CHECK(!skewed.symmetric);
}

TEST_CASE("pairwise hinge entropies at reference points") {
  CHECK(fy::pairwise_hinge_entropy(HingeKind::Hinge, SimplexPoint(vec2(0.5, 0.5))) ==
        doctest::Approx(1.0));
  CHECK(fy::pairwise_hinge_entropy(HingeKind::SquaredHinge, SimplexPoint(vec2(1.0, 0.0))) ==
        0.0);
  CHECK(fy::pairwise_hinge_entropy(HingeKind::SmoothedHinge,
                                   SimplexPoint(vec3(1.0 / 3, 1.0 / 3, 1.0 / 3))) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pairwise hinge formulas match the loss-minimization oracle at d = 3") {
  // H(p) = min over zero-sum theta of sum_j p_j l(theta; e_j), with the
  // zero-sum reduction l(theta; e_k) = sum_{j != k} phi(theta_j) that the
  // closed forms are derived from. The raw difference form
  // sum_{j != k} phi(theta_j - theta_k) has the same minimum for the plain
  // hinge (checked below) but not for the smoothed variants.
  auto phi = [](HingeKind kind, double t) {
    switch (kind) {
      case HingeKind::Hinge:
        return std::max(1.0 + t, 0.0);
      case HingeKind::SmoothedHinge:
        if (t >= 0.0) return t + 0.5;
        if (t <= -1.0) return 0.0;
        return 0.5 * (1.0 + t) * (1.0 + t);
      case HingeKind::SquaredHinge: {
        const double v = std::max(1.0 + t, 0.0);
        return 0.5 * v * v;
      }
    }
    return 0.0;
  };
  oracles::Rng rng(3);
  for (const HingeKind kind :
       {HingeKind::Hinge, HingeKind::SmoothedHinge, HingeKind::SquaredHinge}) {
    for (int rep = 0; rep < 5; ++rep) {
      const Vector p = rng.simplex_point(3);
      const double expected = oracles::nested_grid_min_zero_sum3([&](const Vector& theta) {
        double risk = 0.0;
        for (int j = 0; j < 3; ++j) {
          for (int k = 0; k < 3; ++k) {
            if (k != j) risk += p(j) * phi(kind, theta(k));
          }
        }
        return risk;
      });
      const double formula = fy::pairwise_hinge_entropy(kind, SimplexPoint(p));
      CAPTURE(static_cast<int>(kind));
      CHECK(std::abs(formula - expected) <= 1e-3);
    }
  }
  // hinge kind: the difference form agrees as well
  for (int rep = 0; rep < 5; ++rep) {
    const Vector p = rng.simplex_point(3);
    const double expected = oracles::nested_grid_min_zero_sum3([&](const Vector& theta) {
      double risk = 0.0;
      for (int j = 0; j < 3; ++j) {
        for (int k = 0; k < 3; ++k) {
          if (k != j) risk += p(j) * phi(HingeKind::Hinge, theta(k) - theta(j));
        }
      }
      return risk;
    });
    CHECK(std::abs(fy::pairwise_hinge_entropy(HingeKind::Hinge, SimplexPoint(p)) - expected) <=
          1e-3);
  }
}
