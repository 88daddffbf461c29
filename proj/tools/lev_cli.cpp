#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <memory>

#include "lev/harness.hpp"
#include "lev/verify.hpp"

namespace {

std::unique_ptr<lev::GameSpec> load_game_if_needed(const lev::SweepConfig& cfg) {
  if (cfg.game_path.empty()) return nullptr;
  return std::make_unique<lev::GameSpec>(lev::load_game(cfg.game_path));
}

int cmd_run(const std::string& config_path, const std::string& out_override) {
  lev::SweepConfig cfg = lev::parse_sweep_config(config_path);
  auto game = load_game_if_needed(cfg);
  std::vector<lev::CellSpec> cells = lev::expand_grid(cfg);
  const lev::CellSpec& cell = cells.front();

  lev::LearnerConfig lc;
  lc.kind = cell.learner;
  lc.horizon = cell.T;
  lc.budget = cell.n;
  lc.num_arms = game ? game->num_arms() : cell.K;
  lc.eta = cell.eta;
  lc.eta_auto = cell.eta_auto;
  lc.gamma = cell.gamma;
  lc.alpha = cell.alpha;
  lc.budget_mode = cell.budget_mode;
  lc.seed = cell.base_seed;
  lc.record_rounds = true;
  lev::Environment env =
      lev::make_environment(cell.env, cell.T, lc.num_arms, cell.target_q, cell.base_seed);
  lev::RunTrace trace = lev::run_learner(lc, env, game.get());

  std::filesystem::create_directories(cfg.out_dir);
  std::string out_path = out_override.empty() ? cfg.out_dir + "/rounds.csv" : out_override;
  lev::write_text_file(out_path, lev::round_csv(trace));
  std::cout << "cell " << lev::cell_id(cell) << ": regret " << trace.regret << ", Q " << trace.q
            << ", Q* " << trace.q_star << ", queries " << trace.queries_used << ", rounds -> "
            << out_path << "\n";
  if (!trace.all_lemma1_ok) std::cout << "warning: lemma-1 condition violated on some round\n";
  if (trace.any_stability_flag) std::cout << "warning: stability flag raised on some round\n";
  return 0;
}

int cmd_sweep(const std::string& config_path) {
  lev::SweepConfig cfg = lev::parse_sweep_config(config_path);
  auto game = load_game_if_needed(cfg);
  lev::SweepResult result = lev::run_sweep(cfg, game.get());
  for (const std::string& w : result.warnings) std::cerr << "warning: " << w << "\n";
  std::filesystem::create_directories(cfg.out_dir);
  lev::write_text_file(cfg.out_dir + "/summary.csv", lev::summary_csv(result));
  lev::write_text_file(cfg.out_dir + "/summary.json", lev::summary_json(result));
  std::cout << result.cells.size() << " cells -> " << cfg.out_dir << "/summary.{csv,json}\n";
  return 0;
}

int cmd_verify(int workers) {
  lev::VerifyReport report = lev::run_verify(workers);
  for (const lev::VerifyCheck& c : report.checks) {
    std::cout << (c.pass ? "PASS" : "FAIL") << " " << c.name << ": " << c.detail << "\n";
  }
  return report.all_pass() ? 0 : 2;
}

int cmd_game_check(const std::string& path) {
  lev::GameSpec game = lev::load_game(path);
  std::cout << "game: " << game.num_arms() << " actions, " << game.num_columns() << " outcomes\n";
  if (game.w.feasible) {
    std::cout << "L = WH feasible (max residual " << game.w.residual << ")\n";
  } else {
    std::cout << "L = WH infeasible: residual " << game.w.residual << " at L(" << game.w.worst_row
              << "," << game.w.worst_col << ")\n";
  }
  if (game.revealing_row) {
    std::cout << "revealing action: row " << *game.revealing_row << ", cost "
              << game.revealing_cost << "\n";
  } else {
    std::cout << "no revealing action\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Label-efficient prediction, bandit, and partial monitoring experiments"};
  app.require_subcommand(1);

  std::string config_path, out_override, game_path;
  int workers = 1;

  CLI::App* run = app.add_subcommand("run", "Single run, emits per-round CSV");
  run->add_option("-c,--config", config_path, "key = value config file")->required();
  run->add_option("-o,--out", out_override, "per-round CSV path");

  CLI::App* sweep = app.add_subcommand("sweep", "Grid sweep, emits summary CSV/JSON");
  sweep->add_option("-c,--config", config_path, "key = value config file")->required();

  CLI::App* verify = app.add_subcommand("verify", "Invariant suite, prints pass/fail");
  verify->add_option("-w,--workers", workers, "parallel workers");

  CLI::App* game = app.add_subcommand("game", "GameSpec tooling");
  CLI::App* check = game->add_subcommand("check", "Validate a game file");
  check->add_option("file", game_path, "game file (K N header, L rows, blank, H rows)")->required();
  game->require_subcommand(1);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, out_override);
    if (sweep->parsed()) return cmd_sweep(config_path);
    if (verify->parsed()) return cmd_verify(workers);
    if (game->parsed()) return cmd_game_check(game_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
