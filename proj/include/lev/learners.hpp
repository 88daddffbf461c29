#pragma once

#include <cstdint>

#include "lev/environment.hpp"
#include "lev/estimators.hpp"
#include "lev/game.hpp"
#include "lev/omd.hpp"
#include "lev/reservoir.hpp"

namespace lev {

enum class LearnerKind {
  LePrediction,                // hybrid regularizer + second-order corrections
  LePredictionNoCorrections,   // negentropy, a_t = 0
  ParameterFree,               // doubling epochs, eta auto
  LeBandit,                    // log-barrier, bandit feedback
  RevealingAction,             // partial monitoring with a revealing row
  HardPm,                      // L = WH games, forced exploration
  LeMwBaseline,                // label-efficient multiplicative weights (no messages)
};

enum class BudgetMode { Expectation, HardCap };

struct LearnerConfig {
  LearnerKind kind = LearnerKind::LePrediction;
  long horizon = 0;      // T
  long budget = 0;       // n, label queries (LE settings)
  int num_arms = 2;      // K
  double eta = 0.0;      // ignored when eta_auto
  bool eta_auto = false; // ParameterFree initializes sqrt(2 log K)/eps
  double gamma = 0.1;    // forced exploration (HardPm)
  double alpha = 0.1;    // reveal probability (RevealingAction)
  bool corrections_enabled = true;
  BudgetMode budget_mode = BudgetMode::HardCap;
  std::uint64_t seed = 0;
  bool record_rounds = true;   // per-round records (off for large sweeps)
  bool record_detail = false;  // keep estimate/correction vectors per round
  bool messages_enabled = true;
};

struct RoundRecord {
  int arm;
  bool queried;
  double loss;           // realized loss of the played arm
  double cum_loss;
  double best_cum_loss;  // min over arms of cumulative loss so far
  double regret;
  double lemma1_residual;
  bool lemma1_ok;
  double stability_ratio;
  bool stability_flag;
  double dual_norm;
};

struct RunTrace {
  std::vector<RoundRecord> rounds;       // empty unless record_rounds
  std::vector<Vec> estimates;            // only with record_detail
  std::vector<Vec> corrections;          // only with record_detail
  Vec arm_cum_loss;                      // L_{T,i}
  double learner_loss = 0.0;             // \hat L_T
  long queries_used = 0;
  double q = 0.0;
  double q_star = 0.0;
  int best_arm = 0;
  double regret = 0.0;
  // Diagnostics aggregated over all rounds.
  bool all_lemma1_ok = true;
  bool any_stability_flag = false;
  double max_stability_ratio = 0.0;
  double max_dual_norm = 0.0;
  // Doubling-trick bookkeeping (ParameterFree only).
  std::vector<long> epoch_starts;
  std::vector<double> epoch_etas;
};

RunTrace run_le_prediction(const LearnerConfig& cfg, const Environment& env);
RunTrace run_le_prediction_no_corrections(const LearnerConfig& cfg, const Environment& env);
RunTrace run_parameter_free(const LearnerConfig& cfg, const Environment& env);
RunTrace run_le_bandits(const LearnerConfig& cfg, const Environment& env);
RunTrace run_baseline(const LearnerConfig& cfg, const Environment& env);
RunTrace run_revealing_action(const LearnerConfig& cfg, const GameSpec& game, const Environment& env);
RunTrace run_hard_pm(const LearnerConfig& cfg, const GameSpec& game, const Environment& env);

// Dispatch on cfg.kind; game may be null for non-PM learners.
RunTrace run_learner(const LearnerConfig& cfg, const Environment& env, const GameSpec* game);

// Reservoir capacity ceil(log2 T) and the per-arm dedicated sampling budget
// ceil(log2 T)^2 used by the bandit and partial monitoring settings.
int reservoir_capacity(long T);
long dedicated_rounds_per_arm(long T);

}  // namespace lev
