#include "lev/learners.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace lev {

int reservoir_capacity(long T) {
  if (T < 2) return 1;
  return static_cast<int>(std::ceil(std::log2(static_cast<double>(T))));
}

long dedicated_rounds_per_arm(long T) {
  long k = reservoir_capacity(T);
  return k * k;
}

namespace {

// Bernoulli query draws with the two budget policies.
struct QueryBudget {
  Rng rng;
  double eps;
  BudgetMode mode;
  long budget;
  long used = 0;

  QueryBudget(std::uint64_t seed, double eps_, BudgetMode mode_, long budget_)
      : rng(seed, kStreamQuery), eps(eps_), mode(mode_), budget(budget_) {}

  bool draw() {
    bool d = rng.bernoulli(eps);
    if (mode == BudgetMode::HardCap && used >= budget) d = false;
    if (d) ++used;
    return d;
  }

  // Deterministic query (dedicated sampling rounds); still obeys the cap.
  bool forced() {
    if (mode == BudgetMode::HardCap && used >= budget) return false;
    ++used;
    return true;
  }
};

// Per-round bookkeeping shared by every learner loop.
struct TraceAccum {
  RunTrace trace;
  Vec arm_cum;
  double cum = 0.0;
  bool record_rounds;
  bool record_detail;

  TraceAccum(long T, int K, bool rec, bool detail) : record_rounds(rec), record_detail(detail) {
    arm_cum.assign(static_cast<std::size_t>(K), 0.0);
    if (rec) trace.rounds.reserve(static_cast<std::size_t>(T));
  }

  void round(int arm, bool queried, const Vec& row_losses, const Lemma1Check& lem,
             const StabilityReport& stab) {
    double loss = row_losses[static_cast<std::size_t>(arm)];
    cum += loss;
    for (std::size_t i = 0; i < arm_cum.size(); ++i) arm_cum[i] += row_losses[i];
    trace.all_lemma1_ok = trace.all_lemma1_ok && lem.holds;
    trace.any_stability_flag = trace.any_stability_flag || stab.flagged;
    trace.max_stability_ratio = std::max(trace.max_stability_ratio, stab.ratio);
    trace.max_dual_norm = std::max(trace.max_dual_norm, stab.dual_norm);
    if (record_rounds) {
      double best = *std::min_element(arm_cum.begin(), arm_cum.end());
      trace.rounds.push_back({arm, queried, loss, cum, best, cum - best, lem.residual, lem.holds,
                              stab.ratio, stab.flagged, stab.dual_norm});
    }
  }

  void detail(const Vec& estimate, const Vec& correction) {
    if (record_detail) {
      trace.estimates.push_back(estimate);
      trace.corrections.push_back(correction);
    }
  }

  // Q and Q* need the horizon means, so re-emit the sequence once.
  RunTrace finish(long T, long queries, const std::function<Vec(long)>& row_at) {
    trace.arm_cum_loss = arm_cum;
    trace.learner_loss = cum;
    trace.queries_used = queries;
    if (T == 0) {
      trace.regret = 0.0;
      return std::move(trace);
    }
    const std::size_t K = arm_cum.size();
    Vec mu = arm_cum;
    for (double& m : mu) m /= static_cast<double>(T);
    int best = 0;
    for (std::size_t i = 1; i < K; ++i) {
      if (arm_cum[i] < arm_cum[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
    }
    double q = 0.0, qs = 0.0;
    for (long t = 0; t < T; ++t) {
      Vec l = row_at(t);
      for (std::size_t i = 0; i < K; ++i) {
        double d = l[i] - mu[i];
        q += d * d;
        if (static_cast<int>(i) == best) qs += d * d;
      }
    }
    trace.q = q;
    trace.q_star = qs;
    trace.best_arm = best;
    trace.regret = cum - arm_cum[static_cast<std::size_t>(best)];
    return std::move(trace);
  }
};

const Lemma1Check kTrivialLemma1{true, 0.0};
const StabilityReport kTrivialStability{1.0, 0.0, true, false};

void validate_le_config(const LearnerConfig& cfg) {
  if (cfg.horizon < 0) throw std::invalid_argument("LearnerConfig: negative horizon");
  if (cfg.horizon == 0) return;
  if (cfg.budget < 1 || cfg.budget > cfg.horizon) {
    throw std::invalid_argument("LearnerConfig: budget must satisfy 1 <= n <= T");
  }
}

// Dedicated sampling schedule: for each arm, rounds_per_arm slots spread
// uniformly over [0, T) (collisions probe forward). forced[t] is the arm
// forced at round t, or -1.
std::vector<int> build_schedule(long T, int K, long rounds_per_arm, std::uint64_t seed) {
  std::vector<int> forced(static_cast<std::size_t>(T), -1);
  if (K * rounds_per_arm > T) throw std::invalid_argument("dedicated schedule exceeds horizon");
  Rng rng(seed, kStreamSchedule);
  for (int arm = 0; arm < K; ++arm) {
    for (long s = 0; s < rounds_per_arm; ++s) {
      long t = static_cast<long>(rng.uniform_index(static_cast<std::uint64_t>(T)));
      while (forced[static_cast<std::size_t>(t)] >= 0) t = (t + 1) % T;
      forced[static_cast<std::size_t>(t)] = arm;
    }
  }
  return forced;
}

// Shared loop for the full-information family: optimistic mirror descent with
// per-round Bernoulli queries and a single loss-vector reservoir.
RunTrace run_full_info_family(const LearnerConfig& cfg, const Environment& env, RegKind reg_kind,
                              bool corrections, bool doubling) {
  validate_le_config(cfg);
  const long T = cfg.horizon;
  const int K = cfg.num_arms;
  TraceAccum acc(T, K, cfg.record_rounds, cfg.record_detail);
  if (T == 0) return acc.finish(0, 0, {});

  const double eps = static_cast<double>(cfg.budget) / static_cast<double>(T);
  double eta = doubling ? std::sqrt(2.0 * std::log(static_cast<double>(K))) / eps : cfg.eta;
  double eta_prev_epoch = eta;  // epoch-1 threshold reuses the initial eta
  if (!(eta > 0.0)) throw std::invalid_argument("LearnerConfig: eta must be > 0");

  Regularizer reg(reg_kind, eta, K);
  QueryBudget qb(cfg.seed, eps, cfg.budget_mode, cfg.budget);
  Rng action(cfg.seed, kStreamAction);
  Rng res_rng(cfg.seed, kStreamReservoir);
  Reservoir reservoir(reservoir_capacity(T));

  Vec x_prime = uniform_simplex(K);
  const Vec zeros(static_cast<std::size_t>(K), 0.0);
  double accumulator = 0.0;
  const double log_k = std::log(static_cast<double>(K));
  acc.trace.epoch_starts.push_back(0);
  acc.trace.epoch_etas.push_back(eta);

  Vec cost(static_cast<std::size_t>(K));
  for (long t = 0; t < T; ++t) {
    Vec losses = env.losses(t);
    bool d = qb.draw();
    Vec message = cfg.messages_enabled ? reservoir.mean_or_zero(K) : zeros;

    for (int i = 0; i < K; ++i) cost[static_cast<std::size_t>(i)] = eps * message[static_cast<std::size_t>(i)];
    Vec x_play = solve_omd_step(reg, x_prime, cost).x;
    int arm = sample_index(x_play, action.uniform());

    EstimatorConfig ecfg(Setting::LEFullInfo, eps, eta, K);
    Vec estimate = build_estimate(ecfg, message, losses, arm, d, x_play);
    if (d && cfg.messages_enabled) reservoir.observe(losses, res_rng);
    Vec correction = corrections ? build_correction(ecfg, estimate, message, x_play) : zeros;

    for (int i = 0; i < K; ++i) {
      cost[static_cast<std::size_t>(i)] =
          eps * estimate[static_cast<std::size_t>(i)] + correction[static_cast<std::size_t>(i)];
    }
    Vec x_next = solve_omd_step(reg, x_prime, cost).x;

    Lemma1Check lem = check_lemma1(x_play, x_next, estimate, message, correction, eps);
    StabilityReport stab = check_stability(reg, x_play, x_next, estimate, message, correction, eps);
    acc.round(arm, d, losses, lem, stab);
    acc.detail(estimate, correction);

    bool epoch_reset = false;
    if (doubling) {
      for (int i = 0; i < K; ++i) {
        double dv = estimate[static_cast<std::size_t>(i)] - message[static_cast<std::size_t>(i)];
        accumulator += dv * dv;
      }
      double threshold = 2.0 * log_k / (eps * eps * eta_prev_epoch * eta_prev_epoch);
      if (accumulator >= threshold && t + 1 < T) {
        eta_prev_epoch = eta;
        eta /= 2.0;
        reg = Regularizer(reg_kind, eta, K);
        x_prime = uniform_simplex(K);
        accumulator = 0.0;
        acc.trace.epoch_starts.push_back(t + 1);
        acc.trace.epoch_etas.push_back(eta);
        epoch_reset = true;
      }
    }
    if (!epoch_reset) x_prime = std::move(x_next);
  }

  return acc.finish(T, qb.used, [&](long t) { return env.losses(t); });
}

}  // namespace

RunTrace run_le_prediction(const LearnerConfig& cfg, const Environment& env) {
  return run_full_info_family(cfg, env, RegKind::Hybrid, /*corrections=*/true, /*doubling=*/false);
}

RunTrace run_le_prediction_no_corrections(const LearnerConfig& cfg, const Environment& env) {
  return run_full_info_family(cfg, env, RegKind::Negentropy, false, false);
}

RunTrace run_parameter_free(const LearnerConfig& cfg, const Environment& env) {
  return run_full_info_family(cfg, env, RegKind::Negentropy, false, /*doubling=*/true);
}

RunTrace run_baseline(const LearnerConfig& cfg, const Environment& env) {
  LearnerConfig c = cfg;
  c.messages_enabled = false;
  return run_full_info_family(c, env, RegKind::Negentropy, false, false);
}

RunTrace run_le_bandits(const LearnerConfig& cfg, const Environment& env) {
  validate_le_config(cfg);
  const long T = cfg.horizon;
  const int K = cfg.num_arms;

  if (K == 1) {
    // Single arm: nothing to learn, regret is identically zero.
    TraceAccum acc(T, 1, cfg.record_rounds, false);
    for (long t = 0; t < T; ++t) acc.round(0, false, env.losses(t), kTrivialLemma1, kTrivialStability);
    return acc.finish(T, 0, [&](long t) { return env.losses(t); });
  }

  TraceAccum acc(T, K, cfg.record_rounds, cfg.record_detail);
  if (T == 0) return acc.finish(0, 0, {});

  const long per_arm = dedicated_rounds_per_arm(T);
  const long forced_total = per_arm * K;
  if (forced_total >= cfg.budget) {
    throw std::invalid_argument("run_le_bandits: budget too small for the dedicated sampling schedule");
  }
  std::vector<int> forced = build_schedule(T, K, per_arm, cfg.seed);

  // Dedicated rounds consume labels deterministically; the Bernoulli rate on
  // the remaining rounds is lowered so the expected total stays at n. The
  // same rate scales the estimates, keeping them unbiased in-run.
  const double eps = static_cast<double>(cfg.budget - forced_total) / static_cast<double>(T - forced_total);
  const double eta = cfg.eta;
  if (!(eta > 0.0)) throw std::invalid_argument("LearnerConfig: eta must be > 0");

  Regularizer reg(RegKind::LogBarrier, eta, K);
  QueryBudget qb(cfg.seed, eps, cfg.budget_mode, cfg.budget);
  Rng action(cfg.seed, kStreamAction);
  Rng res_rng(cfg.seed, kStreamReservoir);
  std::vector<Reservoir> reservoirs(static_cast<std::size_t>(K), Reservoir(reservoir_capacity(T)));

  Vec x_prime = uniform_simplex(K);
  const Vec zeros(static_cast<std::size_t>(K), 0.0);
  Vec cost(static_cast<std::size_t>(K));
  EstimatorConfig ecfg(Setting::LEBandit, eps, eta, K);

  for (long t = 0; t < T; ++t) {
    Vec losses = env.losses(t);
    int dedicated = forced[static_cast<std::size_t>(t)];
    if (dedicated >= 0) {
      // Pure sampling round: play the scheduled arm, feed its reservoir,
      // leave the OMD state untouched.
      if (qb.forced()) {
        reservoirs[static_cast<std::size_t>(dedicated)].observe(
            Vec{losses[static_cast<std::size_t>(dedicated)]}, res_rng);
      }
      acc.round(dedicated, true, losses, kTrivialLemma1, kTrivialStability);
      acc.detail(zeros, zeros);
      continue;
    }

    Vec message(static_cast<std::size_t>(K));
    for (int i = 0; i < K; ++i) {
      message[static_cast<std::size_t>(i)] = reservoirs[static_cast<std::size_t>(i)].mean_or_zero(1)[0];
    }
    for (int i = 0; i < K; ++i) cost[static_cast<std::size_t>(i)] = eps * message[static_cast<std::size_t>(i)];
    Vec x_play = solve_omd_step(reg, x_prime, cost).x;
    int arm = sample_index(x_play, action.uniform());
    bool d = qb.draw();

    Vec estimate = build_estimate(ecfg, message, losses, arm, d, x_play);
    Vec correction = build_correction(ecfg, estimate, message, x_play);
    for (int i = 0; i < K; ++i) {
      cost[static_cast<std::size_t>(i)] =
          eps * estimate[static_cast<std::size_t>(i)] + correction[static_cast<std::size_t>(i)];
    }
    Vec x_next = solve_omd_step(reg, x_prime, cost).x;

    Lemma1Check lem = check_lemma1(x_play, x_next, estimate, message, correction, eps);
    StabilityReport stab = check_stability(reg, x_play, x_next, estimate, message, correction, eps);
    acc.round(arm, d, losses, lem, stab);
    acc.detail(estimate, correction);
    x_prime = std::move(x_next);
  }

  return acc.finish(T, qb.used, [&](long t) { return env.losses(t); });
}

RunTrace run_revealing_action(const LearnerConfig& cfg, const GameSpec& game, const Environment& env) {
  if (!game.revealing_row) {
    throw std::invalid_argument("run_revealing_action: game has no revealing action");
  }
  const long T = cfg.horizon;
  const int K = game.num_arms();
  const double alpha = cfg.alpha;
  const double eta = cfg.eta;
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("run_revealing_action: alpha must be in (0,1]");
  if (!(eta > 0.0)) throw std::invalid_argument("LearnerConfig: eta must be > 0");

  TraceAccum acc(T, K, cfg.record_rounds, cfg.record_detail);
  if (T == 0) return acc.finish(0, 0, {});

  auto row_at = [&](long t) {
    int y = env.column(t);
    Vec l(static_cast<std::size_t>(K));
    for (int i = 0; i < K; ++i) l[static_cast<std::size_t>(i)] = game.loss[static_cast<std::size_t>(i)][static_cast<std::size_t>(y)];
    return l;
  };

  Regularizer reg(RegKind::Hybrid, eta, K);
  Rng reveal(cfg.seed, kStreamQuery);
  Rng action(cfg.seed, kStreamAction);
  Rng res_rng(cfg.seed, kStreamReservoir);
  Reservoir reservoir(reservoir_capacity(T));
  EstimatorConfig ecfg(Setting::RevealingAction, alpha, eta, K);

  Vec x_prime = uniform_simplex(K);
  Vec cost(static_cast<std::size_t>(K));
  long reveals = 0;

  for (long t = 0; t < T; ++t) {
    Vec losses = row_at(t);
    Vec message = reservoir.mean_or_zero(K);
    for (int i = 0; i < K; ++i) cost[static_cast<std::size_t>(i)] = alpha * message[static_cast<std::size_t>(i)];
    Vec x_play = solve_omd_step(reg, x_prime, cost).x;

    bool d = reveal.bernoulli(alpha);
    int arm;
    if (d) {
      // The revealing row's feedback identifies the column, which rebuilds
      // the whole loss row.
      arm = *game.revealing_row;
      ++reveals;
      reservoir.observe(losses, res_rng);
    } else {
      arm = sample_index(x_play, action.uniform());
    }
    Vec estimate = build_estimate(ecfg, message, losses, arm, d, x_play);
    Vec correction = build_correction(ecfg, estimate, message, x_play);
    for (int i = 0; i < K; ++i) {
      cost[static_cast<std::size_t>(i)] =
          alpha * estimate[static_cast<std::size_t>(i)] + correction[static_cast<std::size_t>(i)];
    }
    Vec x_next = solve_omd_step(reg, x_prime, cost).x;

    Lemma1Check lem = check_lemma1(x_play, x_next, estimate, message, correction, alpha);
    StabilityReport stab = check_stability(reg, x_play, x_next, estimate, message, correction, alpha);
    acc.round(arm, d, losses, lem, stab);
    acc.detail(estimate, correction);
    x_prime = std::move(x_next);
  }

  return acc.finish(T, reveals, row_at);
}

RunTrace run_hard_pm(const LearnerConfig& cfg, const GameSpec& game, const Environment& env) {
  if (!game.w.feasible) {
    throw std::invalid_argument("run_hard_pm: L = WH decomposition infeasible");
  }
  const long T = cfg.horizon;
  const int K = game.num_arms();
  const double gamma = cfg.gamma;
  const double eta = cfg.eta;
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("run_hard_pm: gamma must be in (0,1]");
  if (!(eta > 0.0)) throw std::invalid_argument("LearnerConfig: eta must be > 0");

  TraceAccum acc(T, K, cfg.record_rounds, cfg.record_detail);
  if (T == 0) return acc.finish(0, 0, {});

  auto row_at = [&](long t) {
    int y = env.column(t);
    Vec l(static_cast<std::size_t>(K));
    for (int i = 0; i < K; ++i) l[static_cast<std::size_t>(i)] = game.loss[static_cast<std::size_t>(i)][static_cast<std::size_t>(y)];
    return l;
  };
  // Component j of arm i's loss, observed whenever arm j is played.
  auto component_column = [&](int j, long t) {
    int y = env.column(t);
    double h = game.feedback[static_cast<std::size_t>(j)][static_cast<std::size_t>(y)];
    Vec v(static_cast<std::size_t>(K));
    for (int i = 0; i < K; ++i) v[static_cast<std::size_t>(i)] = game.w.w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * h;
    return v;
  };

  const long per_arm = dedicated_rounds_per_arm(T);
  std::vector<int> forced = build_schedule(T, K, per_arm, cfg.seed);

  Regularizer reg(RegKind::Negentropy, eta, K);
  Rng action(cfg.seed, kStreamAction);
  Rng res_rng(cfg.seed, kStreamReservoir);
  std::vector<Reservoir> reservoirs(static_cast<std::size_t>(K), Reservoir(reservoir_capacity(T)));

  Vec x_prime = uniform_simplex(K);
  const Vec zeros(static_cast<std::size_t>(K), 0.0);

  for (long t = 0; t < T; ++t) {
    Vec losses = row_at(t);
    int dedicated = forced[static_cast<std::size_t>(t)];
    if (dedicated >= 0) {
      reservoirs[static_cast<std::size_t>(dedicated)].observe(component_column(dedicated, t), res_rng);
      acc.round(dedicated, false, losses, kTrivialLemma1, kTrivialStability);
      acc.detail(zeros, zeros);
      continue;
    }

    std::vector<Vec> comp_means(static_cast<std::size_t>(K));
    Vec message(static_cast<std::size_t>(K), 0.0);
    for (int j = 0; j < K; ++j) {
      comp_means[static_cast<std::size_t>(j)] = reservoirs[static_cast<std::size_t>(j)].mean_or_zero(K);
      for (int i = 0; i < K; ++i) message[static_cast<std::size_t>(i)] += comp_means[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    }
    Vec x_play = solve_omd_step(reg, x_prime, message).x;
    Vec play_dist(static_cast<std::size_t>(K));
    for (int i = 0; i < K; ++i) {
      play_dist[static_cast<std::size_t>(i)] = (1.0 - gamma) * x_play[static_cast<std::size_t>(i)] + gamma / K;
    }
    int arm = sample_index(play_dist, action.uniform());

    Vec estimate = build_estimate_hard_pm(comp_means, component_column(arm, t), arm, play_dist);
    Vec x_next = solve_omd_step(reg, x_prime, estimate).x;

    Lemma1Check lem = check_lemma1(x_play, x_next, estimate, message, zeros, 1.0);
    StabilityReport stab = check_stability(reg, x_play, x_next, estimate, message, zeros, 1.0);
    acc.round(arm, false, losses, lem, stab);
    acc.detail(estimate, zeros);
    x_prime = std::move(x_next);
  }

  return acc.finish(T, 0, row_at);
}

RunTrace run_learner(const LearnerConfig& cfg, const Environment& env, const GameSpec* game) {
  switch (cfg.kind) {
    case LearnerKind::LePrediction:
      return run_le_prediction(cfg, env);
    case LearnerKind::LePredictionNoCorrections:
      return run_le_prediction_no_corrections(cfg, env);
    case LearnerKind::ParameterFree:
      return run_parameter_free(cfg, env);
    case LearnerKind::LeBandit:
      return run_le_bandits(cfg, env);
    case LearnerKind::LeMwBaseline:
      return run_baseline(cfg, env);
    case LearnerKind::RevealingAction:
      if (!game) throw std::invalid_argument("run_learner: revealing action needs a game");
      return run_revealing_action(cfg, *game, env);
    case LearnerKind::HardPm:
      if (!game) throw std::invalid_argument("run_learner: hard PM needs a game");
      return run_hard_pm(cfg, *game, env);
  }
  throw std::logic_error("run_learner: unknown learner kind");
}

}  // namespace lev
