#pragma once

#include <cstdint>

#include "lev/rng.hpp"
#include "lev/simplex.hpp"

namespace lev {

// Oblivious loss generators. Every emission is a pure function of (seed, t),
// so re-emission is bit-identical and the sequence never depends on the
// learner's actions.
struct Environment {
  enum class Kind { FixedVariation, BernoulliGap, Dyadic, PmColumns };

  Kind kind;
  long horizon = 0;
  int num_arms = 0;
  std::uint64_t seed = 0;

  // FixedVariation
  Vec base;
  double amplitude = 0.0;
  double realized_q = 0.0;

  // BernoulliGap / Dyadic
  double alpha_center = 0.0;
  double gap = 0.0;
  int planted_best_arm = 0;

  // PmColumns
  std::vector<double> column_probs;

  Vec losses(long t) const;
  int column(long t) const;  // PmColumns only
  std::vector<Vec> all_losses() const;
};

// Rademacher perturbation around `base` with amplitude calibrated so the
// realized Q lands in [0.8, 1.2] * target_q (one recalibration pass).
Environment gen_fixed_variation(long T, int K, double target_q, Vec base, std::uint64_t seed);

// i.i.d. Bernoulli losses: the planted best arm draws Bern(alpha_center),
// every other arm Bern(alpha_center + gap).
Environment gen_bernoulli_gap(long T, int K, double alpha_center, double gap, int best_arm,
                              std::uint64_t seed);

// Dyadic-expansion construction: emitted losses are the first K coefficients,
// i.e. independent Bernoulli coordinates with the same marginals as above.
Environment gen_dyadic(long T, int K, double alpha_center, double gap, int best_arm,
                       std::uint64_t seed);

// i.i.d. column indices for partial monitoring games.
Environment gen_pm_columns(long T, std::vector<double> column_probs, std::uint64_t seed);

// Membership in the alpha-variation ball: Q / (T K) <= alpha.
bool variation_ball_check(const std::vector<Vec>& losses, double alpha);

}  // namespace lev
