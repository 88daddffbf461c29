#pragma once

#include <map>
#include <string>

#include "lev/learners.hpp"

namespace lev {

struct SlopeFit {
  double slope = 0.0;
  double stderr_slope = 0.0;
  double intercept = 0.0;
};

// OLS fit of y on x; log_log fits log y on log x (all values must be > 0).
SlopeFit fit_slope(const std::vector<std::pair<double, double>>& points, bool log_log);

enum class EnvKind { FixedVariation, BernoulliGap, Dyadic, PmColumns };

struct EnvSpec {
  EnvKind kind = EnvKind::FixedVariation;
  Vec base;                  // per-arm base losses; empty = base_value everywhere
  double base_value = 0.5;
  double alpha_center = 0.25;
  double gap = 0.0;
  int best_arm = -1;         // -1: planted best arm rotates with the seed
  std::vector<double> column_probs;  // PmColumns
};

Environment make_environment(const EnvSpec& spec, long T, int K, double target_q,
                             std::uint64_t seed);

struct CellSpec {
  LearnerKind learner = LearnerKind::LePrediction;
  EnvSpec env;
  long T = 0;
  long n = 0;
  int K = 2;
  double eta = 0.0;
  bool eta_auto = false;
  double gamma = 0.1;
  double alpha = 0.1;
  double target_q = 0.0;
  BudgetMode budget_mode = BudgetMode::HardCap;
  int seeds = 1;
  std::uint64_t base_seed = 0;
};

std::string learner_name(LearnerKind kind);
LearnerKind parse_learner(const std::string& name);
std::string cell_id(const CellSpec& spec);

struct CellResult {
  CellSpec spec;
  std::string id;
  bool valid = true;
  std::string error;
  double mean_q = 0.0;
  double mean_qstar = 0.0;
  double mean_regret = 0.0;
  double stderr_regret = 0.0;
  double bound = 0.0;   // 0 when no bound formula applies to the learner
  double ratio = 0.0;
  double queries_mean = 0.0;
  bool all_lemma1_ok = true;
  bool any_stability_flag = false;
  std::vector<double> seed_regrets;
  std::vector<double> seed_q;
  std::vector<double> seed_qstar;
};

// Theoretical bound from the cell parameters and realized mean Q / Q*.
// Returns 0 for learners without a matching closed-form bound.
double bound_value(const CellSpec& spec, double mean_q, double mean_qstar,
                   double revealing_cost);

// Runs all seeds of one cell; workers > 1 parallelizes across seeds.
CellResult run_cell(const CellSpec& spec, const GameSpec* game, int workers = 1);

struct SweepConfig {
  LearnerKind learner = LearnerKind::LePrediction;
  EnvSpec env;
  std::vector<long> T_grid;
  std::vector<long> n_grid;
  std::vector<int> K_grid{2};
  std::vector<double> eta_grid;
  std::vector<double> gamma_grid{0.1};
  std::vector<double> alpha_grid{0.1};
  std::vector<double> target_q_grid{0.0};
  bool eta_auto = false;
  int seeds = 1;
  std::uint64_t base_seed = 0;
  BudgetMode budget_mode = BudgetMode::HardCap;
  int workers = 1;
  std::string out_dir = "out";
  std::string game_path;
  bool write_rounds = false;
};

// Line-oriented `key = value` file; '#' starts a comment, lists are
// comma-separated. Unknown keys and malformed values throw std::runtime_error.
SweepConfig parse_sweep_config(const std::string& path);
SweepConfig parse_sweep_config_text(const std::string& text);

std::vector<CellSpec> expand_grid(const SweepConfig& cfg);

struct SweepResult {
  std::vector<CellResult> cells;      // valid cells only, grid order
  std::vector<std::string> warnings;  // skipped cells and precondition notes
};

// Executes the grid; parallelism from cfg.workers. Throws when every cell is
// invalid. run_sweep_serial is the single-thread reference path.
SweepResult run_sweep(const SweepConfig& cfg, const GameSpec* game = nullptr);
SweepResult run_sweep_serial(const SweepConfig& cfg, const GameSpec* game = nullptr);

std::string summary_csv(const SweepResult& result);
std::string summary_json(const SweepResult& result);
void write_text_file(const std::string& path, const std::string& content);
std::string round_csv(const RunTrace& trace);

}  // namespace lev
