#include "lev/regularizer.hpp"

#include <algorithm>
#include <cmath>

namespace lev {

namespace {
// 0 log 0 = 0 continuous extension.
inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }
}  // namespace

double Regularizer::value(const Vec& x) const {
  require_positive(x, "Regularizer::value");
  double ent = 0.0, bar = 0.0;
  for (double xi : x) {
    ent += xlogx(xi);
    bar += std::log(xi);
  }
  switch (kind) {
    case RegKind::Negentropy:
      return ent / eta;
    case RegKind::LogBarrier:
      return -bar / eta;
    case RegKind::Hybrid:
      return ent / eta - bar / (eta * num_arms);
  }
  return 0.0;
}

double Regularizer::grad_scalar(double xi) const {
  switch (kind) {
    case RegKind::Negentropy:
      return (1.0 + std::log(xi)) / eta;
    case RegKind::LogBarrier:
      return -1.0 / (eta * xi);
    case RegKind::Hybrid:
      return (1.0 + std::log(xi)) / eta - 1.0 / (eta * num_arms * xi);
  }
  return 0.0;
}

double Regularizer::grad_slope(double xi) const {
  switch (kind) {
    case RegKind::Negentropy:
      return 1.0 / (eta * xi);
    case RegKind::LogBarrier:
      return 1.0 / (eta * xi * xi);
    case RegKind::Hybrid:
      return (1.0 / xi + 1.0 / (num_arms * xi * xi)) / eta;
  }
  return 0.0;
}

double Regularizer::grad_inverse(double v) const {
  switch (kind) {
    case RegKind::Negentropy:
      return std::exp(eta * v - 1.0);
    case RegKind::LogBarrier:
      return -1.0 / (eta * v);  // caller guarantees v < 0
    case RegKind::Hybrid:
      break;
  }
  // Hybrid: solve (1/eta)(1 + u) - exp(-u)/(eta K) = v for u = log x.
  // grad_scalar is strictly increasing, so bracket and run safeguarded Newton.
  const double target = eta * v;  // (1 + u) - exp(-u)/K = target
  auto f = [&](double u) {
    double e = u > -700.0 ? std::exp(-u) : std::exp(700.0);
    return (1.0 + u) - e / num_arms - target;
  };
  // Start near the root. For target <= 0 the barrier term dominates:
  // exp(-u)/K ~ 1 - target, so u ~ -log(K (1 - target)). Starting far below
  // the root is expensive because there Newton advances only one unit per
  // step. For positive targets the linear term dominates and x <= e.
  double u = target < 0.0 ? -std::log(num_arms * (1.0 - target)) : std::min(target, 1.0);
  double lo = u - 2.0;
  double hi = std::max(1.0, u + 2.0);
  while (f(lo) > 0.0) lo -= 1.0;
  while (f(hi) < 0.0) hi += 1.0;
  if (!(u > lo && u < hi)) u = 0.5 * (lo + hi);
  // f itself rounds at ulp(|target|), so the tolerance scales with it.
  const double ftol = 1e-15 * std::max(1.0, std::abs(target));
  for (int it = 0; it < 200; ++it) {
    double fu = f(u);
    if (std::abs(fu) < ftol) break;
    if (fu > 0.0) hi = u; else lo = u;
    double fp = 1.0 + std::exp(std::max(-u, -700.0)) / num_arms;  // d/du
    double un = u - fu / fp;
    if (!(un > lo && un < hi)) un = 0.5 * (lo + hi);
    if (hi - lo < 1e-16 * std::max(1.0, std::abs(u))) break;
    u = un;
  }
  return std::exp(u);
}

Vec Regularizer::gradient(const Vec& x) const {
  require_positive(x, "Regularizer::gradient");
  Vec g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) g[i] = grad_scalar(x[i]);
  return g;
}

Vec Regularizer::hessian_diag(const Vec& x) const {
  require_positive(x, "Regularizer::hessian_diag");
  Vec h(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) h[i] = grad_slope(x[i]);
  return h;
}

double Regularizer::bregman(const Vec& x, const Vec& y) const {
  require_positive(x, "Regularizer::bregman");
  require_positive(y, "Regularizer::bregman");
  double d = value(x) - value(y);
  for (std::size_t i = 0; i < x.size(); ++i) d -= grad_scalar(y[i]) * (x[i] - y[i]);
  return d;
}

double Regularizer::local_norm(const Vec& x, const Vec& u) const {
  require_positive(x, "Regularizer::local_norm");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += u[i] * u[i] * grad_slope(x[i]);
  return std::sqrt(s);
}

double Regularizer::dual_norm(const Vec& x, const Vec& u) const {
  require_positive(x, "Regularizer::dual_norm");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += u[i] * u[i] / grad_slope(x[i]);
  return std::sqrt(s);
}

}  // namespace lev
