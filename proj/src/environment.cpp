#include "lev/environment.hpp"

#include <algorithm>
#include <cmath>

#include "lev/estimators.hpp"

namespace lev {

Vec Environment::losses(long t) const {
  Vec l(static_cast<std::size_t>(num_arms));
  switch (kind) {
    case Kind::FixedVariation:
      for (int i = 0; i < num_arms; ++i) {
        double sign = uniform_at(seed, static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(i)) < 0.5 ? -1.0 : 1.0;
        l[static_cast<std::size_t>(i)] = std::clamp(base[static_cast<std::size_t>(i)] + amplitude * sign, 0.0, 1.0);
      }
      break;
    case Kind::BernoulliGap:
    case Kind::Dyadic:
      for (int i = 0; i < num_arms; ++i) {
        double p = (i == planted_best_arm) ? alpha_center : alpha_center + gap;
        l[static_cast<std::size_t>(i)] =
            uniform_at(seed, static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(i)) < p ? 1.0 : 0.0;
      }
      break;
    case Kind::PmColumns:
      throw std::logic_error("Environment::losses: PM environments emit columns");
  }
  return l;
}

int Environment::column(long t) const {
  if (kind != Kind::PmColumns) throw std::logic_error("Environment::column: not a PM environment");
  double u = uniform_at(seed, static_cast<std::uint64_t>(t), 0);
  double acc = 0.0;
  for (std::size_t j = 0; j < column_probs.size(); ++j) {
    acc += column_probs[j];
    if (u < acc) return static_cast<int>(j);
  }
  return static_cast<int>(column_probs.size()) - 1;
}

std::vector<Vec> Environment::all_losses() const {
  std::vector<Vec> seq;
  seq.reserve(static_cast<std::size_t>(horizon));
  for (long t = 0; t < horizon; ++t) seq.push_back(losses(t));
  return seq;
}

Environment gen_fixed_variation(long T, int K, double target_q, Vec base, std::uint64_t seed) {
  if (static_cast<int>(base.size()) != K) throw std::invalid_argument("gen_fixed_variation: base size != K");
  if (target_q > T * K / 4.0 + 1e-9) throw std::invalid_argument("gen_fixed_variation: target_q > TK/4");

  Environment env;
  env.kind = Environment::Kind::FixedVariation;
  env.horizon = T;
  env.num_arms = K;
  env.seed = seed;
  env.base = std::move(base);

  double clearance = 1.0;
  for (double b : env.base) clearance = std::min({clearance, b, 1.0 - b});

  if (target_q <= 0.0) {
    env.amplitude = 0.0;
    env.realized_q = 0.0;
    return env;
  }

  env.amplitude = std::sqrt(target_q / (static_cast<double>(T) * K));
  if (env.amplitude > clearance + 1e-12) {
    throw std::invalid_argument("gen_fixed_variation: amplitude exceeds clipping clearance");
  }
  env.realized_q = quadratic_variation(env.all_losses());
  if (env.realized_q < 0.8 * target_q || env.realized_q > 1.2 * target_q) {
    // One retry with the amplitude rescaled toward the target.
    env.amplitude *= std::sqrt(target_q / std::max(env.realized_q, 1e-12));
    if (env.amplitude > clearance + 1e-12) {
      throw std::invalid_argument("gen_fixed_variation: recalibrated amplitude exceeds clearance");
    }
    env.realized_q = quadratic_variation(env.all_losses());
  }
  return env;
}

namespace {
Environment make_bernoulli(Environment::Kind kind, long T, int K, double alpha_center, double gap,
                           int best_arm, std::uint64_t seed) {
  // The dyadic construction is well defined at alpha_center = 0.
  double lo = kind == Environment::Kind::Dyadic ? 0.0 : std::nextafter(0.0, 1.0);
  if (!(alpha_center >= lo && alpha_center < 1.0)) {
    throw std::invalid_argument("bernoulli environment: alpha_center out of range");
  }
  if (alpha_center + gap > 1.0) throw std::invalid_argument("bernoulli environment: alpha_center + gap > 1");
  Environment env;
  env.kind = kind;
  env.horizon = T;
  env.num_arms = K;
  env.seed = seed;
  env.alpha_center = alpha_center;
  env.gap = gap;
  env.planted_best_arm = best_arm;
  return env;
}
}  // namespace

Environment gen_bernoulli_gap(long T, int K, double alpha_center, double gap, int best_arm,
                              std::uint64_t seed) {
  return make_bernoulli(Environment::Kind::BernoulliGap, T, K, alpha_center, gap, best_arm, seed);
}

Environment gen_dyadic(long T, int K, double alpha_center, double gap, int best_arm,
                       std::uint64_t seed) {
  if (K > 50) throw std::invalid_argument("gen_dyadic: K exceeds dyadic depth");
  return make_bernoulli(Environment::Kind::Dyadic, T, K, alpha_center, gap, best_arm, seed);
}

Environment gen_pm_columns(long T, std::vector<double> column_probs, std::uint64_t seed) {
  double s = 0.0;
  for (double p : column_probs) {
    if (p < 0.0) throw std::invalid_argument("gen_pm_columns: negative probability");
    s += p;
  }
  if (std::abs(s - 1.0) > 1e-9) throw std::invalid_argument("gen_pm_columns: probabilities must sum to 1");
  Environment env;
  env.kind = Environment::Kind::PmColumns;
  env.horizon = T;
  env.num_arms = 0;
  env.seed = seed;
  env.column_probs = std::move(column_probs);
  return env;
}

bool variation_ball_check(const std::vector<Vec>& losses, double alpha) {
  if (alpha < 0.0 || alpha > 0.25) throw std::invalid_argument("variation_ball_check: alpha must be in [0, 1/4]");
  double q = quadratic_variation(losses);
  double tk = static_cast<double>(losses.size()) * static_cast<double>(losses[0].size());
  // Tolerance absorbs rounding in Q for exactly-constant sequences.
  return q / tk <= alpha + 1e-12;
}

}  // namespace lev
