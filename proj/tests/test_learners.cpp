#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lev/learners.hpp"

using lev::Environment;
using lev::LearnerConfig;
using lev::LearnerKind;
using lev::RunTrace;
using lev::Vec;

namespace {

LearnerConfig base_config(LearnerKind kind, long T, long n, int K, double eta) {
  LearnerConfig cfg;
  cfg.kind = kind;
  cfg.horizon = T;
  cfg.budget = n;
  cfg.num_arms = K;
  cfg.eta = eta;
  cfg.seed = 42;
  return cfg;
}

bool traces_identical(const RunTrace& a, const RunTrace& b) {
  if (a.rounds.size() != b.rounds.size()) return false;
  for (std::size_t i = 0; i < a.rounds.size(); ++i) {
    const auto& x = a.rounds[i];
    const auto& y = b.rounds[i];
    if (x.arm != y.arm || x.queried != y.queried || x.loss != y.loss || x.cum_loss != y.cum_loss ||
        x.regret != y.regret || x.stability_ratio != y.stability_ratio) {
      return false;
    }
  }
  return a.learner_loss == b.learner_loss && a.regret == b.regret && a.q == b.q &&
         a.q_star == b.q_star && a.queries_used == b.queries_used;
}

void check_internal_consistency(const RunTrace& tr) {
  if (tr.rounds.empty()) return;
  CHECK(tr.learner_loss == doctest::Approx(tr.rounds.back().cum_loss));
  double best = tr.arm_cum_loss[static_cast<std::size_t>(tr.best_arm)];
  for (double c : tr.arm_cum_loss) CHECK(best <= c + 1e-12);
  CHECK(tr.regret == doctest::Approx(tr.learner_loss - best));
}

}  // namespace

TEST_CASE("schedule helper sizes") {
  CHECK(lev::reservoir_capacity(1024) == 10);
  CHECK(lev::dedicated_rounds_per_arm(1024) == 100);
  CHECK(lev::reservoir_capacity(1) == 1);
}

TEST_CASE("T = 0 gives zero regret everywhere") {
  lev::GameSpec game = lev::load_game(std::string(GAMES_DIR) + "/hard_pm.game");
  Environment env = lev::gen_fixed_variation(0, 2, 0.0, Vec{0.5, 0.5}, 1);
  Environment pm_env = lev::gen_pm_columns(0, {0.25, 0.25, 0.25, 0.25}, 1);
  for (LearnerKind kind :
       {LearnerKind::LePrediction, LearnerKind::LePredictionNoCorrections,
        LearnerKind::ParameterFree, LearnerKind::LeBandit, LearnerKind::LeMwBaseline}) {
    LearnerConfig cfg = base_config(kind, 0, 0, 2, 0.01);
    RunTrace tr = lev::run_learner(cfg, env, nullptr);
    CHECK(tr.regret == 0.0);
    CHECK(tr.rounds.empty());
  }
  LearnerConfig pm = base_config(LearnerKind::HardPm, 0, 0, 4, 0.01);
  CHECK(lev::run_hard_pm(pm, game, pm_env).regret == 0.0);
}

TEST_CASE("fixed seed reruns are bit-identical") {
  Environment env = lev::gen_fixed_variation(500, 3, 30.0, Vec{0.4, 0.5, 0.5}, 9);
  for (LearnerKind kind :
       {LearnerKind::LePrediction, LearnerKind::LePredictionNoCorrections,
        LearnerKind::ParameterFree, LearnerKind::LeMwBaseline}) {
    LearnerConfig cfg = base_config(kind, 500, 250, 3, 1.0 / 486.0);
    RunTrace a = lev::run_learner(cfg, env, nullptr);
    RunTrace b = lev::run_learner(cfg, env, nullptr);
    CHECK(traces_identical(a, b));
    check_internal_consistency(a);
  }
  LearnerConfig bc = base_config(LearnerKind::LeBandit, 2000, 1500, 3, 1.0 / 486.0);
  Environment benv = lev::gen_fixed_variation(2000, 3, 100.0, Vec{0.4, 0.5, 0.5}, 9);
  RunTrace a = lev::run_le_bandits(bc, benv);
  RunTrace b = lev::run_le_bandits(bc, benv);
  CHECK(traces_identical(a, b));
  check_internal_consistency(a);

  lev::GameSpec reveal = lev::load_game(std::string(GAMES_DIR) + "/revealing.game");
  lev::GameSpec pm = lev::load_game(std::string(GAMES_DIR) + "/hard_pm.game");
  Environment cols3 = lev::gen_pm_columns(800, {0.5, 0.3, 0.2}, 9);
  Environment cols4 = lev::gen_pm_columns(800, {0.4, 0.3, 0.2, 0.1}, 9);
  LearnerConfig rc = base_config(LearnerKind::RevealingAction, 800, 0, 3, 0.05);
  rc.alpha = 0.2;
  RunTrace r1 = lev::run_revealing_action(rc, reveal, cols3);
  RunTrace r2 = lev::run_revealing_action(rc, reveal, cols3);
  CHECK(traces_identical(r1, r2));
  check_internal_consistency(r1);

  LearnerConfig hc = base_config(LearnerKind::HardPm, 800, 0, 4, 0.05);
  hc.gamma = 0.2;
  RunTrace h1 = lev::run_hard_pm(hc, pm, cols4);
  RunTrace h2 = lev::run_hard_pm(hc, pm, cols4);
  CHECK(traces_identical(h1, h2));
  check_internal_consistency(h1);
}

TEST_CASE("baseline equals label-efficient multiplicative weights closed form") {
  const long T = 300, n = 120;
  const int K = 3;
  const double eta = 0.05, eps = static_cast<double>(n) / T;
  Environment env = lev::gen_bernoulli_gap(T, K, 0.3, 0.1, 0, 17);
  LearnerConfig cfg = base_config(LearnerKind::LeMwBaseline, T, n, K, eta);
  RunTrace tr = lev::run_baseline(cfg, env);

  // Oracle: x_t proportional to exp(-eta eps G_t) with G_t the cumulative
  // estimate; replays the learner's query and action streams.
  lev::Rng qrng(cfg.seed, lev::kStreamQuery);
  lev::Rng arng(cfg.seed, lev::kStreamAction);
  Vec g(K, 0.0);
  long used = 0;
  for (long t = 0; t < T; ++t) {
    bool d = qrng.bernoulli(eps);
    if (used >= n) d = false;
    if (d) ++used;
    Vec x(static_cast<std::size_t>(K));
    double z = 0.0;
    for (int i = 0; i < K; ++i) {
      x[static_cast<std::size_t>(i)] = std::exp(-eta * eps * g[static_cast<std::size_t>(i)]);
      z += x[static_cast<std::size_t>(i)];
    }
    for (double& xi : x) xi /= z;
    int arm = lev::sample_index(x, arng.uniform());
    CHECK(tr.rounds[static_cast<std::size_t>(t)].arm == arm);
    CHECK(tr.rounds[static_cast<std::size_t>(t)].queried == d);
    if (d) {
      Vec l = env.losses(t);
      for (int i = 0; i < K; ++i) g[static_cast<std::size_t>(i)] += l[static_cast<std::size_t>(i)] / eps;
    }
  }
}

TEST_CASE("single-arm bandit has zero regret") {
  Environment env = lev::gen_bernoulli_gap(500, 1, 0.3, 0.0, 0, 3);
  LearnerConfig cfg = base_config(LearnerKind::LeBandit, 500, 100, 1, 0.001);
  RunTrace tr = lev::run_le_bandits(cfg, env);
  CHECK(tr.regret == 0.0);
  CHECK(tr.queries_used == 0);
}

TEST_CASE("bandit rejects budgets below the dedicated schedule") {
  Environment env = lev::gen_bernoulli_gap(1024, 2, 0.3, 0.0, 0, 3);
  // Dedicated schedule needs 2 * 100 rounds; n = 150 cannot cover it.
  LearnerConfig cfg = base_config(LearnerKind::LeBandit, 1024, 150, 2, 0.001);
  CHECK_THROWS_AS(lev::run_le_bandits(cfg, env), std::invalid_argument);
}

TEST_CASE("hard cap never exceeds the budget") {
  Environment env = lev::gen_bernoulli_gap(400, 2, 0.4, 0.0, 0, 21);
  LearnerConfig cfg = base_config(LearnerKind::LePrediction, 400, 40, 2, 1.0 / 324.0);
  for (std::uint64_t s = 0; s < 20; ++s) {
    cfg.seed = s;
    RunTrace tr = lev::run_le_prediction(cfg, env);
    CHECK(tr.queries_used <= 40);
    long count = 0;
    for (const auto& r : tr.rounds) count += r.queried ? 1 : 0;
    CHECK(count == tr.queries_used);
  }
}

TEST_CASE("expectation mode hits the budget on average") {
  const long T = 400, n = 100;
  const int seeds = 100;
  Environment env = lev::gen_bernoulli_gap(T, 2, 0.4, 0.0, 0, 21);
  LearnerConfig cfg = base_config(LearnerKind::LePrediction, T, n, 2, 1.0 / 324.0);
  cfg.budget_mode = lev::BudgetMode::Expectation;
  double total = 0.0;
  for (int s = 0; s < seeds; ++s) {
    cfg.seed = static_cast<std::uint64_t>(s);
    total += static_cast<double>(lev::run_le_prediction(cfg, env).queries_used);
  }
  double mean = total / seeds;
  double eps = static_cast<double>(n) / T;
  double se = std::sqrt(T * eps * (1 - eps)) / std::sqrt(static_cast<double>(seeds));
  CHECK(std::abs(mean - n) <= 3.0 * se);
}

TEST_CASE("doubling epochs halve eta exactly") {
  const long T = 5000;
  Environment env = lev::gen_fixed_variation(T, 2, 500.0, Vec{0.5, 0.5}, 31);
  LearnerConfig cfg = base_config(LearnerKind::ParameterFree, T, 2500, 2, 0.0);
  cfg.eta_auto = true;
  RunTrace tr = lev::run_parameter_free(cfg, env);
  REQUIRE(!tr.epoch_etas.empty());
  double eta0 = std::sqrt(2.0 * std::log(2.0)) / 0.5;
  for (std::size_t j = 0; j < tr.epoch_etas.size(); ++j) {
    CHECK(tr.epoch_etas[j] == doctest::Approx(eta0 / std::pow(2.0, static_cast<double>(j))));
  }
  CHECK(tr.epoch_starts[0] == 0);
  for (std::size_t j = 1; j < tr.epoch_starts.size(); ++j) {
    CHECK(tr.epoch_starts[j] > tr.epoch_starts[j - 1]);
  }
}

TEST_CASE("doubling stabilizes on constant losses") {
  const long T = 10000;
  for (std::uint64_t s = 0; s < 10; ++s) {
    Environment env = lev::gen_fixed_variation(T, 2, 0.0, Vec{0.3, 0.6}, s);
    LearnerConfig cfg = base_config(LearnerKind::ParameterFree, T, 5000, 2, 0.0);
    cfg.seed = s;
    RunTrace tr = lev::run_parameter_free(cfg, env);
    // Once the reservoir holds the constant loss, the accumulator stops
    // growing; only warm-up rounds can trigger epochs.
    CHECK(tr.epoch_etas.size() <= 6);
  }
}

TEST_CASE("invariant flags clean at the admissible learning rate") {
  const long T = 2000;
  for (std::uint64_t s = 0; s < 3; ++s) {
    Environment env = lev::gen_fixed_variation(T, 2, 200.0, Vec{0.5, 0.5}, s);
    LearnerConfig cfg = base_config(LearnerKind::LePrediction, T, 1000, 2, 1.0 / 324.0);
    cfg.seed = s;
    RunTrace tr = lev::run_le_prediction(cfg, env);
    CHECK(tr.all_lemma1_ok);
    CHECK_FALSE(tr.any_stability_flag);
    CHECK(tr.max_stability_ratio <= 10.0 / 9.0 + 1e-9);
    CHECK(tr.max_dual_norm <= 1.0 / 3.0 + 1e-9);

    LearnerConfig bc = base_config(LearnerKind::LeBandit, T, 1500, 2, 1.0 / 324.0);
    bc.seed = s;
    RunTrace btr = lev::run_le_bandits(bc, env);
    CHECK(btr.all_lemma1_ok);
    CHECK_FALSE(btr.any_stability_flag);
  }
}

TEST_CASE("revealing action preconditions and degenerate alpha") {
  lev::GameSpec reveal = lev::load_game(std::string(GAMES_DIR) + "/revealing.game");
  lev::GameSpec no_reveal = lev::load_game(std::string(GAMES_DIR) + "/hard_pm.game");
  Environment cols3 = lev::gen_pm_columns(300, {0.5, 0.3, 0.2}, 5);
  Environment cols4 = lev::gen_pm_columns(300, {0.25, 0.25, 0.25, 0.25}, 5);

  LearnerConfig cfg = base_config(LearnerKind::RevealingAction, 300, 0, 3, 0.05);
  cfg.alpha = 1.0;
  RunTrace tr = lev::run_revealing_action(cfg, reveal, cols3);
  CHECK(tr.queries_used == 300);
  for (const auto& r : tr.rounds) CHECK(r.arm == 0);

  CHECK_THROWS_AS(lev::run_revealing_action(cfg, no_reveal, cols4), std::invalid_argument);
}

TEST_CASE("hard pm with gamma = 1 plays uniformly") {
  lev::GameSpec pm = lev::load_game(std::string(GAMES_DIR) + "/hard_pm.game");
  const long T = 4000;
  Environment cols = lev::gen_pm_columns(T, {0.4, 0.3, 0.2, 0.1}, 77);
  LearnerConfig cfg = base_config(LearnerKind::HardPm, T, 0, 4, 0.05);
  cfg.gamma = 1.0;
  RunTrace tr = lev::run_hard_pm(cfg, pm, cols);
  std::vector<long> counts(4, 0);
  for (const auto& r : tr.rounds) ++counts[static_cast<std::size_t>(r.arm)];
  double expected = T / 4.0;
  double chi2 = 0.0;
  for (long c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // 3 dof, p > 0.001.
  CHECK(chi2 < 16.27);
  check_internal_consistency(tr);
}

TEST_CASE("run_learner requires a game for partial monitoring") {
  Environment cols = lev::gen_pm_columns(10, {0.5, 0.5}, 1);
  LearnerConfig cfg = base_config(LearnerKind::HardPm, 10, 0, 2, 0.05);
  CHECK_THROWS_AS(lev::run_learner(cfg, cols, nullptr), std::invalid_argument);
}
