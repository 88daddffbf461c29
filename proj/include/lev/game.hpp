#pragma once

#include <optional>
#include <string>

#include "lev/simplex.hpp"

namespace lev {

using Matrix = std::vector<Vec>;  // row-major

struct WSolution {
  Matrix w;          // K x K, row i regresses L row i on the rows of H
  double residual;   // max |L - WH|
  bool feasible;     // residual <= 1e-8
  int worst_row = 0;
  int worst_col = 0;
};

// Least-squares decomposition L = WH, row by row.
WSolution solve_w(const Matrix& loss, const Matrix& feedback);

// Lowest-index row of H whose entries are pairwise distinct after rounding to
// 1e-12, together with its cost c = max_b L(a, b).
std::optional<std::pair<int, double>> detect_revealing_action(const Matrix& feedback,
                                                              const Matrix& loss);

struct GameSpec {
  Matrix loss;      // K x N, entries in [0,1]
  Matrix feedback;  // K x N
  WSolution w;      // always derived, never read from file
  std::optional<int> revealing_row;
  double revealing_cost = 0.0;

  int num_arms() const { return static_cast<int>(loss.size()); }
  int num_columns() const { return loss.empty() ? 0 : static_cast<int>(loss[0].size()); }
};

GameSpec make_game(Matrix loss, Matrix feedback);

// Plain-text format: "K N" header, K rows of L, blank line, K rows of H.
GameSpec load_game(const std::string& path);
void save_game(const GameSpec& game, const std::string& path);

}  // namespace lev
