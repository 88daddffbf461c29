#include "lev/game.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <fstream>
#include <sstream>

namespace lev {

namespace {
Eigen::MatrixXd to_eigen(const Matrix& m) {
  Eigen::MatrixXd e(m.size(), m.empty() ? 0 : m[0].size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m[i].size(); ++j) e(static_cast<long>(i), static_cast<long>(j)) = m[i][j];
  }
  return e;
}
}  // namespace

WSolution solve_w(const Matrix& loss, const Matrix& feedback) {
  if (loss.empty() || feedback.size() != loss.size()) {
    throw std::invalid_argument("solve_w: L and H must both be K x N");
  }
  Eigen::MatrixXd l = to_eigen(loss);
  Eigen::MatrixXd h = to_eigen(feedback);
  if (l.cols() != h.cols()) throw std::invalid_argument("solve_w: column counts differ");

  // Each row of L regressed on the rows of H: W^T = lstsq(H^T, L^T).
  Eigen::MatrixXd wt = h.transpose().colPivHouseholderQr().solve(l.transpose());
  Eigen::MatrixXd w = wt.transpose();
  Eigen::MatrixXd resid = (l - w * h).cwiseAbs();

  WSolution sol;
  sol.residual = 0.0;
  for (long i = 0; i < resid.rows(); ++i) {
    for (long j = 0; j < resid.cols(); ++j) {
      if (resid(i, j) > sol.residual) {
        sol.residual = resid(i, j);
        sol.worst_row = static_cast<int>(i);
        sol.worst_col = static_cast<int>(j);
      }
    }
  }
  sol.feasible = sol.residual <= 1e-8;
  sol.w.assign(loss.size(), Vec(loss.size(), 0.0));
  for (std::size_t i = 0; i < loss.size(); ++i) {
    for (std::size_t j = 0; j < loss.size(); ++j) sol.w[i][j] = w(static_cast<long>(i), static_cast<long>(j));
  }
  return sol;
}

std::optional<std::pair<int, double>> detect_revealing_action(const Matrix& feedback,
                                                              const Matrix& loss) {
  for (std::size_t a = 0; a < feedback.size(); ++a) {
    const Vec& row = feedback[a];
    bool distinct = true;
    for (std::size_t i = 0; i < row.size() && distinct; ++i) {
      for (std::size_t j = i + 1; j < row.size() && distinct; ++j) {
        if (std::llround(row[i] * 1e12) == std::llround(row[j] * 1e12)) distinct = false;
      }
    }
    if (distinct) {
      double c = 0.0;
      for (double v : loss[a]) c = std::max(c, v);
      return std::make_pair(static_cast<int>(a), c);
    }
  }
  return std::nullopt;
}

GameSpec make_game(Matrix loss, Matrix feedback) {
  if (loss.empty() || loss.size() != feedback.size()) {
    throw std::invalid_argument("make_game: L and H must both be K x N");
  }
  for (std::size_t i = 0; i < loss.size(); ++i) {
    if (loss[i].size() != loss[0].size() || feedback[i].size() != loss[0].size()) {
      throw std::invalid_argument("make_game: ragged matrix");
    }
    for (double v : loss[i]) {
      if (v < 0.0 || v > 1.0) throw std::invalid_argument("make_game: loss entries must be in [0,1]");
    }
  }
  GameSpec g;
  g.loss = std::move(loss);
  g.feedback = std::move(feedback);
  g.w = solve_w(g.loss, g.feedback);
  if (auto rev = detect_revealing_action(g.feedback, g.loss)) {
    g.revealing_row = rev->first;
    g.revealing_cost = rev->second;
  }
  return g;
}

GameSpec load_game(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_game: cannot open " + path);
  int k = 0, n = 0;
  in >> k >> n;
  if (k < 1 || n < 1) throw std::runtime_error("load_game: bad header in " + path);
  auto read_matrix = [&](Matrix& m) {
    m.assign(static_cast<std::size_t>(k), Vec(static_cast<std::size_t>(n)));
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < n; ++j) {
        if (!(in >> m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])) {
          throw std::runtime_error("load_game: truncated matrix in " + path);
        }
      }
    }
  };
  Matrix l, h;
  read_matrix(l);
  read_matrix(h);
  return make_game(std::move(l), std::move(h));
}

void save_game(const GameSpec& game, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_game: cannot open " + path);
  out << game.num_arms() << ' ' << game.num_columns() << '\n';
  auto write_matrix = [&](const Matrix& m) {
    for (const Vec& row : m) {
      for (std::size_t j = 0; j < row.size(); ++j) out << (j ? " " : "") << row[j];
      out << '\n';
    }
  };
  write_matrix(game.loss);
  out << '\n';
  write_matrix(game.feedback);
}

}  // namespace lev
