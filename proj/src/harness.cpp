#include "lev/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace lev {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& s) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("config: bad numeric value for " + key + ": '" + s + "'");
  }
}

long to_long(const std::string& key, const std::string& s) {
  double v = to_double(key, s);
  if (v != std::floor(v)) throw std::runtime_error("config: " + key + " must be an integer");
  return static_cast<long>(v);
}

}  // namespace

SlopeFit fit_slope(const std::vector<std::pair<double, double>>& points, bool log_log) {
  if (points.size() < 3) throw std::invalid_argument("fit_slope: need at least 3 points");
  const std::size_t n = points.size();
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    double x = points[i].first, y = points[i].second;
    if (log_log) {
      if (x <= 0.0 || y <= 0.0) throw std::invalid_argument("fit_slope: log-log needs positive values");
      x = std::log(x);
      y = std::log(y);
    }
    xs[i] = x;
    ys[i] = y;
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx <= 0.0) throw std::invalid_argument("fit_slope: degenerate x values");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    rss += r * r;
  }
  fit.stderr_slope = std::sqrt(std::max(rss, 0.0) / static_cast<double>(n - 2) / sxx);
  return fit;
}

Environment make_environment(const EnvSpec& spec, long T, int K, double target_q,
                             std::uint64_t seed) {
  switch (spec.kind) {
    case EnvKind::FixedVariation: {
      Vec base = spec.base;
      if (base.empty()) base.assign(static_cast<std::size_t>(K), spec.base_value);
      if (static_cast<int>(base.size()) != K) {
        throw std::invalid_argument("make_environment: base length != K");
      }
      return gen_fixed_variation(T, K, target_q, std::move(base), seed);
    }
    case EnvKind::BernoulliGap: {
      int best = spec.best_arm >= 0 ? spec.best_arm : static_cast<int>(seed % static_cast<std::uint64_t>(K));
      return gen_bernoulli_gap(T, K, spec.alpha_center, spec.gap, best, seed);
    }
    case EnvKind::Dyadic: {
      int best = spec.best_arm >= 0 ? spec.best_arm : static_cast<int>(seed % static_cast<std::uint64_t>(K));
      return gen_dyadic(T, K, spec.alpha_center, spec.gap, best, seed);
    }
    case EnvKind::PmColumns:
      return gen_pm_columns(T, spec.column_probs, seed);
  }
  throw std::logic_error("make_environment: unknown kind");
}

std::string learner_name(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::LePrediction: return "le_prediction";
    case LearnerKind::LePredictionNoCorrections: return "le_prediction_no_corrections";
    case LearnerKind::ParameterFree: return "parameter_free";
    case LearnerKind::LeBandit: return "le_bandit";
    case LearnerKind::RevealingAction: return "revealing_action";
    case LearnerKind::HardPm: return "hard_pm";
    case LearnerKind::LeMwBaseline: return "le_mw_baseline";
  }
  return "unknown";
}

LearnerKind parse_learner(const std::string& name) {
  if (name == "le_prediction") return LearnerKind::LePrediction;
  if (name == "le_prediction_no_corrections") return LearnerKind::LePredictionNoCorrections;
  if (name == "parameter_free") return LearnerKind::ParameterFree;
  if (name == "le_bandit") return LearnerKind::LeBandit;
  if (name == "revealing_action") return LearnerKind::RevealingAction;
  if (name == "hard_pm") return LearnerKind::HardPm;
  if (name == "le_mw_baseline") return LearnerKind::LeMwBaseline;
  throw std::runtime_error("config: unknown learner '" + name + "'");
}

std::string cell_id(const CellSpec& spec) {
  std::string id = "T" + std::to_string(spec.T) + "-n" + std::to_string(spec.n) + "-K" +
                   std::to_string(spec.K) + "-eta" + (spec.eta_auto ? "auto" : fmt(spec.eta)) +
                   "-g" + fmt(spec.gamma) + "-a" + fmt(spec.alpha) + "-Q" + fmt(spec.target_q);
  return id;
}

double bound_value(const CellSpec& spec, double mean_q, double mean_qstar,
                   double revealing_cost) {
  if (spec.T <= 0) return 0.0;
  const double T = static_cast<double>(spec.T);
  const double K = static_cast<double>(spec.K);
  const double eps = static_cast<double>(spec.n) / T;
  const double log_k = std::log(K);
  const double log_t = std::log(T);
  switch (spec.learner) {
    case LearnerKind::LePrediction:
      return (log_k + log_t) / (eps * spec.eta) + 18.0 * spec.eta * mean_qstar;
    case LearnerKind::LePredictionNoCorrections:
      return log_k / (spec.eta * eps) + spec.eta * mean_q / 2.0;
    case LearnerKind::LeBandit:
      return K * log_t / (eps * spec.eta) + 18.0 * spec.eta * mean_qstar + K * log_t * log_t;
    case LearnerKind::RevealingAction:
      return (log_k + log_t) / (spec.alpha * spec.eta) + 18.0 * spec.eta * mean_qstar +
             spec.alpha * T * revealing_cost + log_t * log_t;
    case LearnerKind::HardPm:
      return log_k / spec.eta + K * mean_q * spec.eta / (2.0 * spec.gamma) + spec.gamma * T;
    case LearnerKind::ParameterFree:
    case LearnerKind::LeMwBaseline:
      return 0.0;
  }
  return 0.0;
}

CellResult run_cell(const CellSpec& spec, const GameSpec* game, int workers) {
  CellResult res;
  res.spec = spec;
  res.id = cell_id(spec);
  if (spec.seeds < 1) {
    res.valid = false;
    res.error = "seeds must be >= 1";
    return res;
  }

  const int S = spec.seeds;
  res.seed_regrets.assign(static_cast<std::size_t>(S), 0.0);
  res.seed_q.assign(static_cast<std::size_t>(S), 0.0);
  res.seed_qstar.assign(static_cast<std::size_t>(S), 0.0);
  std::vector<double> queries(static_cast<std::size_t>(S), 0.0);
  std::vector<char> lem_ok(static_cast<std::size_t>(S), 1);
  std::vector<char> stab_flag(static_cast<std::size_t>(S), 0);
  std::vector<std::string> errors(static_cast<std::size_t>(S));

#pragma omp parallel for schedule(dynamic) num_threads(std::max(workers, 1))
  for (int s = 0; s < S; ++s) {
    try {
      std::uint64_t seed = spec.base_seed + static_cast<std::uint64_t>(s);
      LearnerConfig lc;
      lc.kind = spec.learner;
      lc.horizon = spec.T;
      lc.budget = spec.n;
      lc.num_arms = game ? game->num_arms() : spec.K;
      lc.eta = spec.eta;
      lc.eta_auto = spec.eta_auto;
      lc.gamma = spec.gamma;
      lc.alpha = spec.alpha;
      lc.budget_mode = spec.budget_mode;
      lc.seed = seed;
      lc.record_rounds = false;
      Environment env = make_environment(spec.env, spec.T, lc.num_arms, spec.target_q, seed);
      RunTrace tr = run_learner(lc, env, game);
      res.seed_regrets[static_cast<std::size_t>(s)] = tr.regret;
      res.seed_q[static_cast<std::size_t>(s)] = tr.q;
      res.seed_qstar[static_cast<std::size_t>(s)] = tr.q_star;
      queries[static_cast<std::size_t>(s)] = static_cast<double>(tr.queries_used);
      lem_ok[static_cast<std::size_t>(s)] = tr.all_lemma1_ok ? 1 : 0;
      stab_flag[static_cast<std::size_t>(s)] = tr.any_stability_flag ? 1 : 0;
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(s)] = e.what();
    }
  }

  for (int s = 0; s < S; ++s) {
    if (!errors[static_cast<std::size_t>(s)].empty()) {
      res.valid = false;
      res.error = errors[static_cast<std::size_t>(s)];
      return res;
    }
  }

  double sum = 0.0, sum_q = 0.0, sum_qs = 0.0, sum_queries = 0.0;
  for (int s = 0; s < S; ++s) {
    sum += res.seed_regrets[static_cast<std::size_t>(s)];
    sum_q += res.seed_q[static_cast<std::size_t>(s)];
    sum_qs += res.seed_qstar[static_cast<std::size_t>(s)];
    sum_queries += queries[static_cast<std::size_t>(s)];
    res.all_lemma1_ok = res.all_lemma1_ok && lem_ok[static_cast<std::size_t>(s)];
    res.any_stability_flag = res.any_stability_flag || stab_flag[static_cast<std::size_t>(s)];
  }
  res.mean_regret = sum / S;
  res.mean_q = sum_q / S;
  res.mean_qstar = sum_qs / S;
  res.queries_mean = sum_queries / S;
  if (S > 1) {
    double ss = 0.0;
    for (int s = 0; s < S; ++s) {
      double d = res.seed_regrets[static_cast<std::size_t>(s)] - res.mean_regret;
      ss += d * d;
    }
    res.stderr_regret = std::sqrt(ss / (S - 1)) / std::sqrt(static_cast<double>(S));
  }
  double c = game ? game->revealing_cost : 0.0;
  res.bound = bound_value(spec, res.mean_q, res.mean_qstar, c);
  res.ratio = res.bound > 0.0 ? res.mean_regret / res.bound : 0.0;
  return res;
}

std::vector<CellSpec> expand_grid(const SweepConfig& cfg) {
  std::vector<CellSpec> cells;
  std::vector<long> ns = cfg.n_grid.empty() ? std::vector<long>{0} : cfg.n_grid;
  std::vector<double> etas = cfg.eta_grid.empty() ? std::vector<double>{0.0} : cfg.eta_grid;
  for (long T : cfg.T_grid)
    for (long n : ns)
      for (int K : cfg.K_grid)
        for (double eta : etas)
          for (double gamma : cfg.gamma_grid)
            for (double alpha : cfg.alpha_grid)
              for (double q : cfg.target_q_grid) {
                CellSpec c;
                c.learner = cfg.learner;
                c.env = cfg.env;
                c.T = T;
                c.n = n;
                c.K = K;
                c.eta = eta;
                c.eta_auto = cfg.eta_auto || cfg.learner == LearnerKind::ParameterFree;
                c.gamma = gamma;
                c.alpha = alpha;
                c.target_q = q;
                c.budget_mode = cfg.budget_mode;
                c.seeds = cfg.seeds;
                c.base_seed = cfg.base_seed;
                cells.push_back(c);
              }
  return cells;
}

namespace {

SweepResult run_sweep_impl(const SweepConfig& cfg, const GameSpec* game, int workers) {
  std::vector<CellSpec> cells = expand_grid(cfg);
  if (cells.empty()) throw std::runtime_error("run_sweep: empty grid");
  SweepResult out;
  for (const CellSpec& c : cells) {
    bool corrections = c.learner == LearnerKind::LePrediction || c.learner == LearnerKind::LeBandit;
    if (corrections && !c.eta_auto && c.eta > 1.0 / (162.0 * c.K)) {
      out.warnings.push_back("cell " + cell_id(c) + ": eta exceeds 1/(162K); correction guarantees do not apply");
    }
    CellResult r = run_cell(c, game, workers);
    if (!r.valid) {
      out.warnings.push_back("cell " + r.id + " skipped: " + r.error);
      continue;
    }
    out.cells.push_back(std::move(r));
  }
  if (out.cells.empty()) throw std::runtime_error("run_sweep: all cells invalid");
  return out;
}

}  // namespace

SweepResult run_sweep(const SweepConfig& cfg, const GameSpec* game) {
  return run_sweep_impl(cfg, game, cfg.workers);
}

SweepResult run_sweep_serial(const SweepConfig& cfg, const GameSpec* game) {
  return run_sweep_impl(cfg, game, 1);
}

SweepConfig parse_sweep_config_text(const std::string& text) {
  SweepConfig cfg;
  bool have_learner = false;
  std::stringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config line " + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty()) {
      throw std::runtime_error("config line " + std::to_string(lineno) + ": empty key or value");
    }

    if (key == "learner") {
      cfg.learner = parse_learner(val);
      have_learner = true;
    } else if (key == "environment") {
      if (val == "fixed_variation") cfg.env.kind = EnvKind::FixedVariation;
      else if (val == "bernoulli_gap") cfg.env.kind = EnvKind::BernoulliGap;
      else if (val == "dyadic") cfg.env.kind = EnvKind::Dyadic;
      else if (val == "pm_columns") cfg.env.kind = EnvKind::PmColumns;
      else throw std::runtime_error("config: unknown environment '" + val + "'");
    } else if (key == "T") {
      cfg.T_grid.clear();
      for (const auto& s : split_list(val)) cfg.T_grid.push_back(to_long(key, s));
    } else if (key == "n") {
      cfg.n_grid.clear();
      for (const auto& s : split_list(val)) cfg.n_grid.push_back(to_long(key, s));
    } else if (key == "K") {
      cfg.K_grid.clear();
      for (const auto& s : split_list(val)) cfg.K_grid.push_back(static_cast<int>(to_long(key, s)));
    } else if (key == "eta") {
      if (val == "auto") {
        cfg.eta_auto = true;
        cfg.eta_grid.clear();
      } else {
        cfg.eta_grid.clear();
        for (const auto& s : split_list(val)) cfg.eta_grid.push_back(to_double(key, s));
      }
    } else if (key == "gamma") {
      cfg.gamma_grid.clear();
      for (const auto& s : split_list(val)) cfg.gamma_grid.push_back(to_double(key, s));
    } else if (key == "alpha") {
      cfg.alpha_grid.clear();
      for (const auto& s : split_list(val)) cfg.alpha_grid.push_back(to_double(key, s));
    } else if (key == "target_q") {
      cfg.target_q_grid.clear();
      for (const auto& s : split_list(val)) cfg.target_q_grid.push_back(to_double(key, s));
    } else if (key == "seeds") {
      cfg.seeds = static_cast<int>(to_long(key, val));
    } else if (key == "seed") {
      cfg.base_seed = static_cast<std::uint64_t>(to_long(key, val));
    } else if (key == "budget_mode") {
      if (val == "hard_cap" || val == "hard-cap") cfg.budget_mode = BudgetMode::HardCap;
      else if (val == "expectation") cfg.budget_mode = BudgetMode::Expectation;
      else throw std::runtime_error("config: unknown budget_mode '" + val + "'");
    } else if (key == "workers") {
      cfg.workers = static_cast<int>(to_long(key, val));
    } else if (key == "out_dir") {
      cfg.out_dir = val;
    } else if (key == "game") {
      cfg.game_path = val;
    } else if (key == "base") {
      auto items = split_list(val);
      if (items.size() == 1) {
        cfg.env.base_value = to_double(key, items[0]);
        cfg.env.base.clear();
      } else {
        cfg.env.base.clear();
        for (const auto& s : items) cfg.env.base.push_back(to_double(key, s));
      }
    } else if (key == "alpha_center") {
      cfg.env.alpha_center = to_double(key, val);
    } else if (key == "gap") {
      cfg.env.gap = to_double(key, val);
    } else if (key == "best_arm") {
      cfg.env.best_arm = val == "rotate" ? -1 : static_cast<int>(to_long(key, val));
    } else if (key == "column_probs") {
      cfg.env.column_probs.clear();
      for (const auto& s : split_list(val)) cfg.env.column_probs.push_back(to_double(key, s));
    } else if (key == "write_rounds") {
      cfg.write_rounds = val == "1" || val == "true";
    } else {
      throw std::runtime_error("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  if (!have_learner) throw std::runtime_error("config: missing required key 'learner'");
  if (cfg.T_grid.empty()) throw std::runtime_error("config: missing required key 'T'");
  bool pm = cfg.learner == LearnerKind::RevealingAction || cfg.learner == LearnerKind::HardPm;
  if (!pm && cfg.n_grid.empty()) throw std::runtime_error("config: missing required key 'n'");
  if (pm && cfg.game_path.empty()) throw std::runtime_error("config: partial monitoring needs 'game'");
  if (!cfg.eta_auto && cfg.eta_grid.empty() && cfg.learner != LearnerKind::ParameterFree) {
    throw std::runtime_error("config: missing required key 'eta'");
  }
  if (cfg.seeds < 1) throw std::runtime_error("config: seeds must be >= 1");
  if (cfg.workers < 1) throw std::runtime_error("config: workers must be >= 1");
  return cfg;
}

SweepConfig parse_sweep_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_sweep_config_text(ss.str());
}

std::string summary_csv(const SweepResult& result) {
  std::string out =
      "cell_id,learner,T,n,K,eta,gamma,alpha,mean_Q,mean_Qstar,mean_regret,stderr_regret,"
      "bound_value,ratio,queries_mean\n";
  for (const CellResult& c : result.cells) {
    out += c.id + ',' + learner_name(c.spec.learner) + ',' + std::to_string(c.spec.T) + ',' +
           std::to_string(c.spec.n) + ',' + std::to_string(c.spec.K) + ',' +
           (c.spec.eta_auto ? "auto" : fmt(c.spec.eta)) + ',' + fmt(c.spec.gamma) + ',' +
           fmt(c.spec.alpha) + ',' + fmt(c.mean_q) + ',' + fmt(c.mean_qstar) + ',' +
           fmt(c.mean_regret) + ',' + fmt(c.stderr_regret) + ',' + fmt(c.bound) + ',' +
           fmt(c.ratio) + ',' + fmt(c.queries_mean) + '\n';
  }
  return out;
}

std::string summary_json(const SweepResult& result) {
  nlohmann::json root;
  root["warnings"] = result.warnings;
  nlohmann::json cells = nlohmann::json::array();
  for (const CellResult& c : result.cells) {
    nlohmann::json j;
    j["cell_id"] = c.id;
    j["learner"] = learner_name(c.spec.learner);
    j["T"] = c.spec.T;
    j["n"] = c.spec.n;
    j["K"] = c.spec.K;
    j["eta"] = c.spec.eta_auto ? nlohmann::json("auto") : nlohmann::json(c.spec.eta);
    j["gamma"] = c.spec.gamma;
    j["alpha"] = c.spec.alpha;
    j["mean_Q"] = c.mean_q;
    j["mean_Qstar"] = c.mean_qstar;
    j["mean_regret"] = c.mean_regret;
    j["stderr_regret"] = c.stderr_regret;
    j["bound_value"] = c.bound;
    j["ratio"] = c.ratio;
    j["queries_mean"] = c.queries_mean;
    j["all_lemma1_ok"] = c.all_lemma1_ok;
    j["any_stability_flag"] = c.any_stability_flag;
    j["seed_regrets"] = c.seed_regrets;
    cells.push_back(std::move(j));
  }
  root["cells"] = std::move(cells);
  return root.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
}

std::string round_csv(const RunTrace& trace) {
  std::string out = "t,arm,queried,loss,cum_loss,best_cum_loss,regret,lemma1_ok,stability_ratio\n";
  for (std::size_t t = 0; t < trace.rounds.size(); ++t) {
    const RoundRecord& r = trace.rounds[t];
    out += std::to_string(t) + ',' + std::to_string(r.arm) + ',' + (r.queried ? "1" : "0") + ',' +
           fmt(r.loss) + ',' + fmt(r.cum_loss) + ',' + fmt(r.best_cum_loss) + ',' + fmt(r.regret) +
           ',' + (r.lemma1_ok ? "1" : "0") + ',' + fmt(r.stability_ratio) + '\n';
  }
  return out;
}

}  // namespace lev
