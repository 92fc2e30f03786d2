#include "fy/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

namespace fy {

namespace {

constexpr double kAlphaShannonTol = 1e-6;

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

double norm_q(const Vector& p, double q) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) s += std::pow(p(i), q);
  return std::pow(s, 1.0 / q);
}

}  // namespace

EntropySpec EntropySpec::shannon() {
  return EntropySpec(EntropyFamily::Shannon, 0.0, HingeKind::Hinge);
}

EntropySpec EntropySpec::tsallis(double alpha) {
  if (!(alpha >= 1.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("tsallis entropy needs alpha >= 1");
  }
  if (std::abs(alpha - 1.0) < kAlphaShannonTol) return shannon();
  return EntropySpec(EntropyFamily::Tsallis, alpha, HingeKind::Hinge);
}

EntropySpec EntropySpec::norm(double q) {
  if (!(q > 1.0) || !std::isfinite(q)) throw std::invalid_argument("norm entropy needs q > 1");
  return EntropySpec(EntropyFamily::Norm, q, HingeKind::Hinge);
}

EntropySpec EntropySpec::squared_norm(double q) {
  if (!(q > 1.0) || !std::isfinite(q)) {
    throw std::invalid_argument("squared-norm entropy needs q > 1");
  }
  return EntropySpec(EntropyFamily::SquaredNorm, q, HingeKind::Hinge);
}

EntropySpec EntropySpec::renyi(double beta) {
  if (!(beta > 0.0) || !(beta <= 1.0)) {
    throw std::invalid_argument("renyi entropy needs beta in (0, 1]");
  }
  if (std::abs(beta - 1.0) < kAlphaShannonTol) return shannon();
  return EntropySpec(EntropyFamily::Renyi, beta, HingeKind::Hinge);
}

EntropySpec EntropySpec::berger_parker() {
  return EntropySpec(EntropyFamily::BergerParker, 0.0, HingeKind::Hinge);
}

EntropySpec EntropySpec::pairwise_hinge(HingeKind kind) {
  return EntropySpec(EntropyFamily::PairwiseHinge, 0.0, kind);
}

EntropySpec EntropySpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string tail = colon == std::string::npos ? "" : text.substr(colon + 1);
  auto param = [&]() {
    if (tail.empty()) throw std::invalid_argument("entropy spec '" + text + "' needs a parameter");
    return std::stod(tail);
  };
  if (head == "shannon") return shannon();
  if (head == "tsallis") return tsallis(param());
  if (head == "norm") return norm(param());
  if (head == "sqnorm") return squared_norm(param());
  if (head == "renyi") return renyi(param());
  if (head == "berger-parker") return berger_parker();
  if (head == "pairwise-hinge") {
    if (tail == "hinge") return pairwise_hinge(HingeKind::Hinge);
    if (tail == "smoothed") return pairwise_hinge(HingeKind::SmoothedHinge);
    if (tail == "squared") return pairwise_hinge(HingeKind::SquaredHinge);
    throw std::invalid_argument("unknown hinge kind '" + tail + "'");
  }
  throw std::invalid_argument("unknown entropy spec '" + text + "'");
}

std::string EntropySpec::to_string() const {
  std::ostringstream out;
  switch (family_) {
    case EntropyFamily::Shannon: return "shannon";
    case EntropyFamily::Tsallis: out << "tsallis:" << param_; return out.str();
    case EntropyFamily::Norm: out << "norm:" << param_; return out.str();
    case EntropyFamily::SquaredNorm: out << "sqnorm:" << param_; return out.str();
    case EntropyFamily::Renyi: out << "renyi:" << param_; return out.str();
    case EntropyFamily::BergerParker: return "berger-parker";
    case EntropyFamily::PairwiseHinge:
      switch (hinge_kind_) {
        case HingeKind::Hinge: return "pairwise-hinge:hinge";
        case HingeKind::SmoothedHinge: return "pairwise-hinge:smoothed";
        case HingeKind::SquaredHinge: return "pairwise-hinge:squared";
      }
  }
  return "?";
}

bool EntropySpec::strictly_concave() const {
  switch (family_) {
    case EntropyFamily::Shannon:
    case EntropyFamily::Tsallis:
    case EntropyFamily::Norm:
    case EntropyFamily::SquaredNorm:
    case EntropyFamily::Renyi:
      return true;
    case EntropyFamily::BergerParker:
      return false;
    case EntropyFamily::PairwiseHinge:
      return hinge_kind_ != HingeKind::Hinge;
  }
  return false;
}

namespace detail {

double entropy_value_raw(const EntropySpec& spec, const Vector& p) {
  switch (spec.family()) {
    case EntropyFamily::Shannon: {
      double h = 0.0;
      for (Eigen::Index i = 0; i < p.size(); ++i) h -= xlogx(p(i));
      return h;
    }
    case EntropyFamily::Tsallis: {
      // separable form with the k = 1/alpha constant: sum (t - t^a) / (a(a-1))
      const double a = spec.alpha();
      const double denom = a * (a - 1.0);
      double h = 0.0;
      for (Eigen::Index i = 0; i < p.size(); ++i) h += (p(i) - std::pow(p(i), a)) / denom;
      return h;
    }
    case EntropyFamily::Norm:
      return 1.0 - norm_q(p, spec.q());
    case EntropyFamily::SquaredNorm: {
      const double nq = norm_q(p, spec.q());
      return 0.5 * (1.0 - nq * nq);
    }
    case EntropyFamily::Renyi: {
      const double b = spec.beta();
      double s = 0.0;
      for (Eigen::Index i = 0; i < p.size(); ++i) s += std::pow(p(i), b);
      return std::log(s) / (1.0 - b);
    }
    case EntropyFamily::BergerParker:
      return 1.0 - p.maxCoeff();
    case EntropyFamily::PairwiseHinge: {
      const double dd = static_cast<double>(p.size());
      const double tau = 1.0 - p.maxCoeff();
      if (tau <= 0.0) return 0.0;
      switch (spec.hinge_kind()) {
        case HingeKind::Hinge:
          return tau * dd;
        case HingeKind::SmoothedHinge: {
          double s = 0.0;
          for (Eigen::Index i = 0; i < p.size(); ++i) s += 1.0 / (1.0 - p(i));
          return -0.5 * tau * tau * s + tau * dd;
        }
        case HingeKind::SquaredHinge: {
          double s = 0.0;
          for (Eigen::Index i = 0; i < p.size(); ++i) s += 1.0 / (1.0 - p(i));
          return 0.5 * dd * dd / s;
        }
      }
      break;
    }
  }
  throw std::logic_error("unreachable entropy family");
}

Vector entropy_grad_raw(const EntropySpec& spec, const Vector& p, double clamp_floor) {
  const Eigen::Index d = p.size();
  Vector g(d);
  auto floored = [&](Eigen::Index i) { return std::max(p(i), clamp_floor); };
  switch (spec.family()) {
    case EntropyFamily::Shannon: {
      for (Eigen::Index i = 0; i < d; ++i) {
        const double t = floored(i);
        if (t <= 0.0) throw BoundaryGradient("shannon gradient at a boundary point");
        g(i) = -std::log(t) - 1.0;
      }
      return g;
    }
    case EntropyFamily::Tsallis: {
      const double a = spec.alpha();
      const double denom = a * (a - 1.0);
      for (Eigen::Index i = 0; i < d; ++i) {
        g(i) = (1.0 - a * std::pow(p(i), a - 1.0)) / denom;
      }
      return g;
    }
    case EntropyFamily::Norm: {
      const double q = spec.q();
      const double nq = norm_q(p, q);
      for (Eigen::Index i = 0; i < d; ++i) g(i) = -std::pow(p(i) / nq, q - 1.0);
      return g;
    }
    case EntropyFamily::SquaredNorm: {
      const double q = spec.q();
      const double nq = norm_q(p, q);
      const double scale = std::pow(nq, 2.0 - q);
      for (Eigen::Index i = 0; i < d; ++i) g(i) = -scale * std::pow(p(i), q - 1.0);
      return g;
    }
    case EntropyFamily::Renyi: {
      const double b = spec.beta();
      double s = 0.0;
      for (Eigen::Index i = 0; i < d; ++i) s += std::pow(p(i), b);
      for (Eigen::Index i = 0; i < d; ++i) {
        const double t = floored(i);
        if (t <= 0.0) throw BoundaryGradient("renyi gradient at a boundary point");
        g(i) = b * std::pow(t, b - 1.0) / ((1.0 - b) * s);
      }
      return g;
    }
    case EntropyFamily::BergerParker:
      throw std::invalid_argument("berger-parker entropy is not differentiable");
    case EntropyFamily::PairwiseHinge: {
      const HingeKind kind = spec.hinge_kind();
      if (kind == HingeKind::Hinge) {
        throw std::invalid_argument("pairwise hinge entropy is not differentiable");
      }
      double s = 0.0;
      for (Eigen::Index i = 0; i < d; ++i) {
        if (p(i) >= 1.0) throw BoundaryGradient("pairwise hinge entropy gradient at a vertex");
        s += 1.0 / (1.0 - p(i));
      }
      const double dd = static_cast<double>(d);
      if (kind == HingeKind::SquaredHinge) {
        for (Eigen::Index i = 0; i < d; ++i) {
          const double r = 1.0 - p(i);
          g(i) = -(0.5 * dd * dd) / (s * s) * (1.0 / (r * r));
        }
        return g;
      }
      // smoothed hinge: tau(p) = min_j (1 - p_j); differentiable only where
      // the argmax of p is unique
      Eigen::Index top = 0;
      p.maxCoeff(&top);
      for (Eigen::Index i = 0; i < d; ++i) {
        if (i != top && p(i) == p(top)) {
          throw std::invalid_argument("smoothed pairwise hinge entropy: tied argmax");
        }
      }
      const double tau = 1.0 - p(top);
      for (Eigen::Index i = 0; i < d; ++i) {
        const double r = 1.0 - p(i);
        g(i) = -0.5 * tau * tau / (r * r);
        if (i == top) g(i) += tau * s - dd;
      }
      return g;
    }
  }
  throw std::logic_error("unreachable entropy family");
}

}  // namespace detail

double entropy_value(const EntropySpec& spec, const SimplexPoint& p) {
  return detail::entropy_value_raw(spec, p.vec());
}

Vector entropy_grad(const EntropySpec& spec, const SimplexPoint& p) {
  return detail::entropy_grad_raw(spec, p.vec(), 0.0);
}

std::optional<double> margin_of(const EntropySpec& spec) {
  switch (spec.family()) {
    case EntropyFamily::Shannon:
      return std::nullopt;  // slope of h explodes at 0: no margin
    case EntropyFamily::Tsallis:
      return 1.0 / (spec.alpha() - 1.0);  // h'(0) - h'(1)
    case EntropyFamily::Norm:
    case EntropyFamily::SquaredNorm:
    case EntropyFamily::BergerParker:
      return 1.0;  // the gradient at a vertex is -e_k
    case EntropyFamily::Renyi:
    case EntropyFamily::PairwiseHinge:
      return std::nullopt;
  }
  return std::nullopt;
}

namespace {

Vector dirichlet1(std::mt19937_64& gen, int d) {
  Vector p(d);
  double sum = 0.0;
  for (int i = 0; i < d; ++i) {
    const double u = (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
    p(i) = -std::log(u);  // Exp(1) by inversion
    sum += p(i);
  }
  return p / sum;
}

}  // namespace

AssumptionReport check_assumptions(const std::function<double(const Vector&)>& entropy, int d,
                                   int n_samples, std::uint64_t seed) {
  AssumptionReport report;
  if (d < 2) throw std::invalid_argument("check_assumptions needs d >= 2");

  for (int k = 0; k < d && report.zero_at_vertices; ++k) {
    Vector e = Vector::Zero(d);
    e(k) = 1.0;
    if (entropy(e) != 0.0) {
      report.zero_at_vertices = false;
      report.first_violation = "A.1: H(e_" + std::to_string(k + 1) + ") != 0";
    }
  }

  std::mt19937_64 gen(seed);
  for (int s = 0; s < n_samples; ++s) {
    const Vector p = dirichlet1(gen, d);
    const Vector q = dirichlet1(gen, d);
    if (report.strictly_concave && (p - q).lpNorm<Eigen::Infinity>() > 1e-9) {
      const double mid = entropy(0.5 * (p + q));
      if (mid <= 0.5 * (entropy(p) + entropy(q)) + 1e-12) {
        report.strictly_concave = false;
        if (report.first_violation.empty()) {
          report.first_violation =
              "A.2: midpoint not strictly above chord at sample " + std::to_string(s);
        }
      }
    }
    if (report.symmetric) {
      Vector perm(d);
      std::vector<int> idx(d);
      for (int i = 0; i < d; ++i) idx[i] = i;
      std::shuffle(idx.begin(), idx.end(), gen);
      for (int i = 0; i < d; ++i) perm(i) = p(idx[i]);
      const double hp = entropy(p);
      if (std::abs(entropy(perm) - hp) > 1e-12 * (1.0 + std::abs(hp))) {
        report.symmetric = false;
        if (report.first_violation.empty()) {
          report.first_violation = "A.3: permuted value differs at sample " + std::to_string(s);
        }
      }
    }
    if (!report.strictly_concave && !report.symmetric) break;
  }
  return report;
}

AssumptionReport check_assumptions(const EntropySpec& spec, int d, int n_samples,
                                   std::uint64_t seed) {
  return check_assumptions(
      [&spec](const Vector& p) { return detail::entropy_value_raw(spec, p); }, d, n_samples,
      seed);
}

double pairwise_hinge_entropy(HingeKind kind, const SimplexPoint& point) {
  return detail::entropy_value_raw(EntropySpec::pairwise_hinge(kind), point.vec());
}

}  // namespace fy
