#pragma once

#include "lev/simplex.hpp"

namespace lev {

enum class Setting { LEFullInfo, LEBandit, RevealingAction, HardPM };

struct EstimatorConfig {
  Setting setting;
  double epsilon_or_alpha;  // query probability (eps = n/T) or reveal probability
  double eta;
  int num_arms;

  EstimatorConfig(Setting s, double eps, double eta_, int k)
      : setting(s), epsilon_or_alpha(eps), eta(eta_), num_arms(k) {
    if (!(eps > 0.0 && eps <= 1.0)) {
      throw std::invalid_argument("EstimatorConfig: epsilon_or_alpha must be in (0,1]");
    }
  }
};

// Importance-weighted loss estimate. `observation` is the full loss vector for
// LEFullInfo / RevealingAction (valid only when query_flag is set) and carries
// the played arm's loss in coordinate played_arm for LEBandit. The estimate
// is unbiased under the query/play randomization; off rounds it equals the
// message.
Vec build_estimate(const EstimatorConfig& cfg, const Vec& message, const Vec& observation,
                   int played_arm, bool query_flag, const Vec& play_dist);

// Hard partial monitoring estimate from per-component reservoir means.
// component_means[j][i] estimates the i-th arm's j-th loss component
// w(i,j) h(j,.); observed_column[i] = w(i, played) h(played, t).
Vec build_estimate_hard_pm(const std::vector<Vec>& component_means, const Vec& observed_column,
                           int played_arm, const Vec& play_dist);

// Second-order correction a_t; zero for HardPM.
Vec build_correction(const EstimatorConfig& cfg, const Vec& estimate, const Vec& message,
                     const Vec& play_dist);

// Q = sum_t ||l_t - mu_T||^2 over the whole sequence.
double quadratic_variation(const std::vector<Vec>& losses);
// Q* restricted to the best arm's coordinate (lowest total loss, ties to
// lowest index).
double best_arm_variation(const std::vector<Vec>& losses);
int best_arm_index(const std::vector<Vec>& losses);

}  // namespace lev
