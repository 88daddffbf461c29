#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "lev/game.hpp"
#include "lev/rng.hpp"

using lev::Matrix;
using lev::Vec;

TEST_CASE("solve_w trivial identities") {
  Matrix l{{0.1, 0.2, 0.3}, {0.4, 0.5, 0.6}};
  auto s1 = lev::solve_w(l, l);
  CHECK(s1.feasible);
  CHECK(s1.residual <= 1e-10);

  Matrix h = l;
  Matrix l2 = l;
  for (auto& row : l2)
    for (double& v : row) v *= 2.0;
  auto s2 = lev::solve_w(l2, h);
  CHECK(s2.feasible);
  CHECK(s2.residual <= 1e-10);
}

TEST_CASE("solve_w recovers constructed decompositions") {
  lev::Rng rng(101, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const int K = 3, N = 4;
    Matrix w0(K, Vec(K)), h(K, Vec(N));
    for (auto& row : w0)
      for (double& v : row) v = (rng.uniform() - 0.5) * 10.0;
    for (auto& row : h)
      for (double& v : row) v = rng.uniform();
    Matrix l(K, Vec(N, 0.0));
    for (int i = 0; i < K; ++i)
      for (int j = 0; j < N; ++j)
        for (int m = 0; m < K; ++m)
          l[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +=
              w0[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)] * h[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)];
    auto sol = lev::solve_w(l, h);
    CHECK(sol.feasible);
    CHECK(sol.residual <= 1e-8);
  }
}

TEST_CASE("solve_w reports infeasibility") {
  // Rank-1 feedback cannot express a rank-2 loss matrix.
  Matrix h{{1.0, 1.0}, {1.0, 1.0}};
  Matrix l{{1.0, 0.0}, {0.0, 1.0}};
  auto sol = lev::solve_w(l, h);
  CHECK_FALSE(sol.feasible);
  CHECK(sol.residual > 1e-8);
}

TEST_CASE("revealing action detection") {
  Matrix l{{0.0, 0.5, 1.0}, {0.2, 0.2, 0.2}, {0.9, 0.1, 0.4}};
  Matrix h1{{1.0, 1.0, 1.0}, {0.1, 0.2, 0.3}, {0.5, 0.5, 0.5}};
  auto r1 = lev::detect_revealing_action(h1, l);
  REQUIRE(r1.has_value());
  CHECK(r1->first == 1);
  CHECK(r1->second == doctest::Approx(0.2));

  Matrix h2{{1.0, 1.0, 1.0}, {2.0, 2.0, 2.0}, {3.0, 3.0, 3.0}};
  CHECK_FALSE(lev::detect_revealing_action(h2, l).has_value());

  // Two revealing rows: lowest index wins.
  Matrix h3{{0.1, 0.2, 0.3}, {0.4, 0.5, 0.6}, {1.0, 1.0, 1.0}};
  auto r3 = lev::detect_revealing_action(h3, l);
  REQUIRE(r3.has_value());
  CHECK(r3->first == 0);
  CHECK(r3->second == doctest::Approx(1.0));
}

TEST_CASE("make_game validates loss range") {
  Matrix bad{{0.0, 1.5}, {0.2, 0.3}};
  Matrix h{{0.1, 0.2}, {0.3, 0.4}};
  CHECK_THROWS_AS(lev::make_game(bad, h), std::invalid_argument);
  CHECK_THROWS_AS(lev::make_game(Matrix{{0.1, 0.2}}, Matrix{{0.1, 0.2}, {0.3, 0.4}}),
                  std::invalid_argument);
}

TEST_CASE("game file round trip") {
  Matrix l{{0.0, 0.5, 1.0}, {0.2, 0.2, 0.2}};
  Matrix h{{0.1, 0.2, 0.3}, {1.0, 1.0, 1.0}};
  lev::GameSpec g = lev::make_game(l, h);
  const std::string path = "test_game_roundtrip.txt";
  lev::save_game(g, path);
  lev::GameSpec back = lev::load_game(path);
  std::remove(path.c_str());
  CHECK(back.loss == g.loss);
  CHECK(back.feedback == g.feedback);
  REQUIRE(back.revealing_row.has_value());
  CHECK(*back.revealing_row == 0);
  CHECK(back.revealing_cost == doctest::Approx(1.0));
}

TEST_CASE("load_game rejects malformed files") {
  const std::string path = "test_game_bad.txt";
  {
    std::ofstream out(path);
    out << "0 3\n";
  }
  CHECK_THROWS_AS(lev::load_game(path), std::runtime_error);
  {
    std::ofstream out(path);
    out << "2 2\n0.1 0.2\n0.3\n";
  }
  CHECK_THROWS_AS(lev::load_game(path), std::runtime_error);
  std::remove(path.c_str());
  CHECK_THROWS_AS(lev::load_game("does_not_exist.game"), std::runtime_error);
}

TEST_CASE("bundled game files validate") {
  lev::GameSpec reveal = lev::load_game(std::string(GAMES_DIR) + "/revealing.game");
  CHECK(reveal.revealing_row.has_value());
  lev::GameSpec pm = lev::load_game(std::string(GAMES_DIR) + "/hard_pm.game");
  CHECK(pm.num_arms() == 4);
  CHECK(pm.num_columns() == 4);
  CHECK(pm.w.feasible);
}
