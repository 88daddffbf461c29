// Acceptance gate: one pass/fail line per criterion, exit 2 on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "lev/harness.hpp"
#include "lev/verify.hpp"

using lev::CellResult;
using lev::CellSpec;
using lev::EnvKind;
using lev::GameSpec;
using lev::LearnerKind;
using lev::Vec;

namespace {

int failures = 0;

void report(const std::string& name, bool pass, const std::string& detail, double secs) {
  std::printf("%s %s: %s (%.1fs)\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str(), secs);
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

CellSpec base_cell(LearnerKind learner, long T, long n, int K, double eta, int seeds) {
  CellSpec c;
  c.learner = learner;
  c.T = T;
  c.n = n;
  c.K = K;
  c.eta = eta;
  c.seeds = seeds;
  c.env.kind = EnvKind::FixedVariation;
  return c;
}

// 1. Mean regret within the adaptive full-information bound in every cell.
void criterion_bound_ratio() {
  auto t0 = std::chrono::steady_clock::now();
  const long T = 1L << 14;
  bool pass = true;
  double worst = 0.0;
  std::string worst_cell;
  for (int K : {2, 8}) {
    for (double qstar : {0.0, std::sqrt(static_cast<double>(T)), T / 8.0}) {
      CellSpec c = base_cell(LearnerKind::LePrediction, T, T / 2, K, 1.0 / (162.0 * K), 30);
      c.target_q = qstar * K;
      CellResult r = lev::run_cell(c, nullptr);
      if (!r.valid) {
        report("bound_ratio_full_info", false, "cell failed: " + r.error, elapsed(t0));
        return;
      }
      double slack = r.bound + 3.0 * r.stderr_regret;
      double rel = r.mean_regret / std::max(slack, 1e-12);
      if (rel > worst) {
        worst = rel;
        worst_cell = r.id;
      }
      if (r.mean_regret > slack) pass = false;
    }
  }
  report("bound_ratio_full_info", pass,
         "worst regret/bound = " + fmt(worst) + " at " + worst_cell + " (gate 1.0)", elapsed(t0));
}

// 2. Regret scales as n^{-1/2} at fixed T and fixed variation. The planted
// gap sits a constant factor above the n-dependent detection threshold, so
// regret is dominated by the identification cost, which shrinks with the
// label budget; a gap independent of n would instead be masked by the
// constant best-arm fluctuation floor.
void criterion_scaling_n() {
  auto t0 = std::chrono::steady_clock::now();
  const long T = 1L << 14;
  const int K = 2;
  const double alpha = 0.25;
  const double qstar = alpha * (1.0 - alpha) * T;
  std::vector<std::pair<double, double>> pts;
  for (int p = 6; p <= 12; ++p) {
    long n = 1L << p;
    double eps = static_cast<double>(n) / T;
    double eta = std::sqrt((std::log(K) + std::log(static_cast<double>(T))) / (18.0 * eps * qstar));
    CellSpec c = base_cell(LearnerKind::LePrediction, T, n, K, eta, 30);
    c.env.kind = EnvKind::BernoulliGap;
    c.env.alpha_center = alpha;
    c.env.gap = std::sqrt(2.0 * alpha * (1.0 - alpha) * K / static_cast<double>(n));
    CellResult r = lev::run_cell(c, nullptr);
    if (!r.valid) {
      report("scaling_in_n", false, "cell failed: " + r.error, elapsed(t0));
      return;
    }
    pts.push_back({static_cast<double>(n), r.mean_regret});
  }
  auto fit = lev::fit_slope(pts, true);
  bool pass = std::abs(fit.slope + 0.5) <= 0.15;
  report("scaling_in_n", pass, "slope = " + fmt(fit.slope) + " (gate -0.5 +/- 0.15)", elapsed(t0));
}

// 3. Without corrections, regret scales as Q^{1/2} with eta tuned per cell.
void criterion_scaling_q() {
  auto t0 = std::chrono::steady_clock::now();
  const long T = 1L << 13;
  const long n = T / 2;
  const int K = 2;
  const double eps = static_cast<double>(n) / T;
  std::vector<std::pair<double, double>> pts;
  for (int p = 4; p <= 10; ++p) {
    double q = static_cast<double>(1L << p);
    CellSpec c = base_cell(LearnerKind::LePredictionNoCorrections, T, n, K,
                           std::sqrt(2.0 * std::log(K) / (eps * q)), 30);
    c.target_q = q;
    CellResult r = lev::run_cell(c, nullptr);
    if (!r.valid) {
      report("scaling_in_q", false, "cell failed: " + r.error, elapsed(t0));
      return;
    }
    pts.push_back({r.mean_q, r.mean_regret});
  }
  auto fit = lev::fit_slope(pts, true);
  bool pass = std::abs(fit.slope - 0.5) <= 0.15;
  report("scaling_in_q", pass, "slope = " + fmt(fit.slope) + " (gate 0.5 +/- 0.15)", elapsed(t0));
}

// 4. With n ~ sqrt(T) and Q* ~ sqrt(T), the optimistic learner stays near
// sqrt(T) regret while plain label-efficient multiplicative weights does not.
void criterion_comparison() {
  auto t0 = std::chrono::steady_clock::now();
  const int K = 2;
  std::vector<std::pair<double, double>> opt_pts, base_pts;
  for (int p = 12; p <= 18; ++p) {
    long T = 1L << p;
    long n = static_cast<long>(std::lround(std::sqrt(static_cast<double>(T))));
    double eps = static_cast<double>(n) / T;
    double qstar = std::sqrt(static_cast<double>(T));
    // Dense losses near 1/2 with amplitude T^{-1/4} and a mean gap of the
    // same order: centering on the reservoir message cuts the estimator
    // variance to the per-round variation, while the uncentered baseline pays
    // the full loss magnitude through the importance weights and cannot
    // separate the arms within the horizon.
    double gap = std::pow(static_cast<double>(T), -0.25);
    double opt_eta =
        std::sqrt((std::log(K) + std::log(static_cast<double>(T))) / (18.0 * eps * qstar));

    CellSpec opt = base_cell(LearnerKind::LePrediction, T, n, K, opt_eta, 30);
    opt.target_q = qstar * K;
    opt.env.base = Vec{0.5, 0.5 + gap};
    CellResult ro = lev::run_cell(opt, nullptr);

    CellSpec bl = base_cell(LearnerKind::LeMwBaseline, T, n, K,
                            std::sqrt(std::log(K) * eps / (0.125 * T)), 30);
    bl.target_q = qstar * K;
    bl.env.base = Vec{0.5, 0.5 + gap};
    CellResult rb = lev::run_cell(bl, nullptr);

    if (!ro.valid || !rb.valid) {
      report("sqrt_t_comparison", false, "cell failed: " + ro.error + rb.error, elapsed(t0));
      return;
    }
    opt_pts.push_back({static_cast<double>(T), ro.mean_regret});
    base_pts.push_back({static_cast<double>(T), rb.mean_regret});
  }
  auto fo = lev::fit_slope(opt_pts, true);
  auto fb = lev::fit_slope(base_pts, true);
  bool pass = fo.slope <= 0.6 && fb.slope >= 0.7;
  report("sqrt_t_comparison", pass,
         "optimistic slope = " + fmt(fo.slope) + " (gate <= 0.6), baseline slope = " +
             fmt(fb.slope) + " (gate >= 0.7)",
         elapsed(t0));
}

// 5. The doubling trick stays within 4x of the best fixed learning rate.
void criterion_doubling() {
  auto t0 = std::chrono::steady_clock::now();
  const long T = 1L << 13;
  const long n = T / 2;
  const int K = 2;
  bool pass = true;
  double worst = 0.0;
  for (double q : {64.0, 1024.0, 3200.0}) {
    CellSpec pf = base_cell(LearnerKind::ParameterFree, T, n, K, 0.0, 20);
    pf.eta_auto = true;
    pf.target_q = q;
    CellResult rp = lev::run_cell(pf, nullptr);
    if (!rp.valid) {
      report("doubling_vs_best_fixed", false, "cell failed: " + rp.error, elapsed(t0));
      return;
    }
    double best = 1e300;
    for (int j = 0; j < 10; ++j) {
      double eta = 0.001 * std::pow(2.0, j);
      CellSpec fx = base_cell(LearnerKind::LePrediction, T, n, K, eta, 20);
      fx.target_q = q;
      CellResult rf = lev::run_cell(fx, nullptr);
      if (rf.valid) best = std::min(best, rf.mean_regret);
    }
    double ratio = rp.mean_regret / std::max(best, 1e-12);
    worst = std::max(worst, ratio);
    if (ratio > 4.0) pass = false;
  }
  report("doubling_vs_best_fixed", pass, "worst doubling/best-fixed = " + fmt(worst) + " (gate 4.0)",
         elapsed(t0));
}

// 6. Bandit regret within the Q* = 0 bound on constant loss sequences.
void criterion_bandit() {
  auto t0 = std::chrono::steady_clock::now();
  const long T = 1L << 14;
  bool pass = true;
  double worst = 0.0;
  std::string worst_cell;
  for (int K : {2, 8}) {
    CellSpec c = base_cell(LearnerKind::LeBandit, T, T / 2, K, 1.0 / (162.0 * K), 30);
    c.target_q = 0.0;
    c.env.base.resize(static_cast<std::size_t>(K));
    for (int i = 0; i < K; ++i) {
      c.env.base[static_cast<std::size_t>(i)] = K == 1 ? 0.5 : 0.3 + 0.4 * i / (K - 1.0);
    }
    CellResult r = lev::run_cell(c, nullptr);
    if (!r.valid) {
      report("bandit_bound", false, "cell failed: " + r.error, elapsed(t0));
      return;
    }
    double slack = r.bound + 3.0 * r.stderr_regret;
    double rel = r.mean_regret / std::max(slack, 1e-12);
    if (rel > worst) {
      worst = rel;
      worst_cell = r.id;
    }
    if (r.mean_regret > slack) pass = false;
  }
  report("bandit_bound", pass,
         "worst regret/bound = " + fmt(worst) + " at " + worst_cell + " (gate 1.0)", elapsed(t0));
}

// 7. Hard partial monitoring regret grows as T^{2/3} when Q grows linearly.
void criterion_hard_pm() {
  auto t0 = std::chrono::steady_clock::now();
  GameSpec game = lev::load_game(std::string(GAMES_DIR) + "/hard_pm.game");
  const int K = game.num_arms();
  const std::vector<double> probs{0.4, 0.3, 0.2, 0.1};

  // Expected per-round quadratic variation of the column-induced loss rows.
  Vec mu(static_cast<std::size_t>(K), 0.0);
  for (int y = 0; y < game.num_columns(); ++y)
    for (int i = 0; i < K; ++i)
      mu[static_cast<std::size_t>(i)] += probs[static_cast<std::size_t>(y)] *
                                         game.loss[static_cast<std::size_t>(i)][static_cast<std::size_t>(y)];
  double q_rate = 0.0;
  for (int y = 0; y < game.num_columns(); ++y) {
    double d2 = 0.0;
    for (int i = 0; i < K; ++i) {
      double d = game.loss[static_cast<std::size_t>(i)][static_cast<std::size_t>(y)] - mu[static_cast<std::size_t>(i)];
      d2 += d * d;
    }
    q_rate += probs[static_cast<std::size_t>(y)] * d2;
  }

  std::vector<std::pair<double, double>> pts;
  for (int p = 12; p <= 17; ++p) {
    long T = 1L << p;
    double q = q_rate * static_cast<double>(T);
    double gamma = std::clamp(std::cbrt(K * q * std::log(K) / 2.0) / std::cbrt(static_cast<double>(T) * T), 1e-4, 1.0);
    double eta = std::sqrt(2.0 * gamma * std::log(K) / (K * q));
    CellSpec c = base_cell(LearnerKind::HardPm, T, 0, K, eta, 20);
    c.gamma = gamma;
    c.env.kind = EnvKind::PmColumns;
    c.env.column_probs = probs;
    CellResult r = lev::run_cell(c, &game);
    if (!r.valid) {
      report("hard_pm_scaling", false, "cell failed: " + r.error, elapsed(t0));
      return;
    }
    pts.push_back({static_cast<double>(T), r.mean_regret});
  }
  auto fit = lev::fit_slope(pts, true);
  bool pass = std::abs(fit.slope - 2.0 / 3.0) <= 0.15;
  report("hard_pm_scaling", pass, "slope = " + fmt(fit.slope) + " (gate 2/3 +/- 0.15)", elapsed(t0));
}

// 8. The full verification suite is clean.
void criterion_verify() {
  auto t0 = std::chrono::steady_clock::now();
  lev::VerifyReport rep = lev::run_verify(1);
  std::string bad;
  for (const auto& c : rep.checks) {
    if (!c.pass) bad += (bad.empty() ? "" : ", ") + c.name;
  }
  report("verify_suite", rep.all_pass(),
         rep.all_pass() ? "all " + std::to_string(rep.checks.size()) + " checks clean"
                        : "failing: " + bad,
         elapsed(t0));
}

// 9. Small-gap Bernoulli environments force nontrivial regret on every
// loss-vector learner. The two matrix-game learners take their losses from a
// game's columns, so this construction does not apply to them.
void criterion_lower_bound() {
  auto t0 = std::chrono::steady_clock::now();
  const long T = 1L << 13;
  const long n = 1024;
  const int K = 4;
  const double alpha = 0.25;
  const double root = std::sqrt(alpha * (1.0 - alpha) * K / static_cast<double>(n));
  const double gap = root / (2.0 * std::sqrt(2.0));
  const double threshold = 0.25 * (static_cast<double>(T) / 8.0) * root;
  const double eps = static_cast<double>(n) / T;

  struct Entry {
    LearnerKind kind;
    double eta;
    bool eta_auto;
  };
  std::vector<Entry> entries{
      {LearnerKind::LePrediction, 1.0 / (162.0 * K), false},
      {LearnerKind::LePredictionNoCorrections, std::sqrt(2.0 * std::log(K) / (eps * T)), false},
      {LearnerKind::ParameterFree, 0.0, true},
      {LearnerKind::LeBandit, 1.0 / (162.0 * K), false},
      {LearnerKind::LeMwBaseline, std::min(eps, std::sqrt(eps * std::log(K) / T)), false},
  };
  bool pass = true;
  double worst = 1e300;
  std::string worst_learner;
  for (const Entry& e : entries) {
    CellSpec c = base_cell(e.kind, T, n, K, e.eta, 30);
    c.eta_auto = e.eta_auto;
    c.env.kind = EnvKind::BernoulliGap;
    c.env.alpha_center = alpha;
    c.env.gap = gap;
    CellResult r = lev::run_cell(c, nullptr);
    if (!r.valid) {
      report("lower_bound_stress", false, "cell failed: " + r.error, elapsed(t0));
      return;
    }
    double rel = r.mean_regret / threshold;
    if (rel < worst) {
      worst = rel;
      worst_learner = lev::learner_name(e.kind);
    }
    if (r.mean_regret < threshold) pass = false;
  }
  report("lower_bound_stress", pass,
         "worst regret/threshold = " + fmt(worst) + " at " + worst_learner + " (gate 1.0)",
         elapsed(t0));
}

}  // namespace

int main() {
  criterion_bound_ratio();
  criterion_scaling_n();
  criterion_scaling_q();
  criterion_comparison();
  criterion_doubling();
  criterion_bandit();
  criterion_hard_pm();
  criterion_verify();
  criterion_lower_bound();
  if (failures > 0) {
    std::printf("%d of 9 criteria failed\n", failures);
    return 2;
  }
  std::printf("all 9 criteria passed\n");
  return 0;
}
