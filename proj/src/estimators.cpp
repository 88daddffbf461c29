#include "lev/estimators.hpp"

#include <cmath>

namespace lev {

Vec build_estimate(const EstimatorConfig& cfg, const Vec& message, const Vec& observation,
                   int played_arm, bool query_flag, const Vec& play_dist) {
  const double eps = cfg.epsilon_or_alpha;
  Vec est = message;
  if (!query_flag) return est;
  switch (cfg.setting) {
    case Setting::LEFullInfo:
    case Setting::RevealingAction:
      for (std::size_t i = 0; i < est.size(); ++i) {
        est[i] = (observation[i] - message[i]) / eps + message[i];
      }
      break;
    case Setting::LEBandit: {
      double p = play_dist[static_cast<std::size_t>(played_arm)];
      if (p < kSimplexFloor) throw std::domain_error("build_estimate: play probability below floor");
      est[static_cast<std::size_t>(played_arm)] +=
          (observation[static_cast<std::size_t>(played_arm)] - message[static_cast<std::size_t>(played_arm)]) / (eps * p);
      break;
    }
    case Setting::HardPM:
      throw std::invalid_argument("build_estimate: use build_estimate_hard_pm");
  }
  return est;
}

Vec build_estimate_hard_pm(const std::vector<Vec>& component_means, const Vec& observed_column,
                           int played_arm, const Vec& play_dist) {
  const std::size_t K = play_dist.size();
  double p = play_dist[static_cast<std::size_t>(played_arm)];
  if (p < kSimplexFloor) throw std::domain_error("build_estimate_hard_pm: play probability below floor");
  Vec est(K, 0.0);
  for (std::size_t j = 0; j < component_means.size(); ++j) {
    for (std::size_t i = 0; i < K; ++i) est[i] += component_means[j][i];
  }
  const Vec& mp = component_means[static_cast<std::size_t>(played_arm)];
  for (std::size_t i = 0; i < K; ++i) {
    est[i] += (observed_column[i] - mp[i]) / p;
  }
  return est;
}

Vec build_correction(const EstimatorConfig& cfg, const Vec& estimate, const Vec& message,
                     const Vec& play_dist) {
  const double eps = cfg.epsilon_or_alpha;
  Vec a(estimate.size(), 0.0);
  if (cfg.setting == Setting::HardPM) return a;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = estimate[i] - message[i];
    a[i] = 6.0 * cfg.eta * eps * eps * d * d;
    if (cfg.setting == Setting::LEBandit) a[i] *= play_dist[i];
  }
  return a;
}

double quadratic_variation(const std::vector<Vec>& losses) {
  if (losses.empty()) throw std::domain_error("quadratic_variation: empty sequence");
  const std::size_t K = losses[0].size();
  Vec mu(K, 0.0);
  for (const Vec& l : losses) {
    for (std::size_t i = 0; i < K; ++i) mu[i] += l[i];
  }
  for (double& m : mu) m /= static_cast<double>(losses.size());
  double q = 0.0;
  for (const Vec& l : losses) {
    for (std::size_t i = 0; i < K; ++i) {
      double d = l[i] - mu[i];
      q += d * d;
    }
  }
  return q;
}

int best_arm_index(const std::vector<Vec>& losses) {
  if (losses.empty()) throw std::domain_error("best_arm_index: empty sequence");
  const std::size_t K = losses[0].size();
  Vec total(K, 0.0);
  for (const Vec& l : losses) {
    for (std::size_t i = 0; i < K; ++i) total[i] += l[i];
  }
  int best = 0;
  for (std::size_t i = 1; i < K; ++i) {
    if (total[i] < total[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
  }
  return best;
}

double best_arm_variation(const std::vector<Vec>& losses) {
  int star = best_arm_index(losses);
  double mu = 0.0;
  for (const Vec& l : losses) mu += l[static_cast<std::size_t>(star)];
  mu /= static_cast<double>(losses.size());
  double q = 0.0;
  for (const Vec& l : losses) {
    double d = l[static_cast<std::size_t>(star)] - mu;
    q += d * d;
  }
  return q;
}

}  // namespace lev
