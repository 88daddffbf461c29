#pragma once

#include "lev/regularizer.hpp"

namespace lev {

struct OmdSolution {
  Vec x;                // clamped to the simplex floor and renormalized
  double kkt_residual;  // stationarity residual before the floor clamp
  int iterations;
};

// Thrown when the dual root finder fails to reach tolerance.
struct OmdSolverError : std::runtime_error {
  double residual;
  explicit OmdSolverError(double r)
      : std::runtime_error("omd solver did not converge"), residual(r) {}
};

// argmin_{x in simplex} <x, cost> + D_R(x, x_prime).
//
// Stationarity: grad R(x) = grad R(x_prime) - cost - lambda * 1 with x on the
// simplex. Each coordinate inverts the (monotone) scalar gradient, and a
// damped Newton iteration drives the normalization residual in lambda to zero
// inside an analytic bracket.
OmdSolution solve_omd_step(const Regularizer& reg, const Vec& x_prime, const Vec& cost);

// Stationarity residual of a candidate solution: max_i |grad R(x) -
// grad R(x_prime) + cost + lambda * 1| after solving for the multiplier.
double kkt_residual(const Regularizer& reg, const Vec& x, const Vec& x_prime, const Vec& cost);

struct Lemma1Check {
  bool holds;       // residual <= 1e-9 slack
  double residual;  // <x_t - x'_{t+1}, eps(est - msg) + corr> - <x_t, corr>
};

Lemma1Check check_lemma1(const Vec& x_play, const Vec& x_next_prime, const Vec& estimate,
                         const Vec& message, const Vec& correction, double epsilon_scale);

struct StabilityReport {
  double ratio;      // max_i x'_{t+1,i} / x_{t,i}
  double dual_norm;  // ||eps(est - msg) + corr||_{x_t,*}
  bool norm_ok;      // dual_norm <= 1/3
  bool flagged;      // ratio > 10/9 while norm_ok held
};

StabilityReport check_stability(const Regularizer& reg, const Vec& x_play,
                                const Vec& x_next_prime, const Vec& estimate,
                                const Vec& message, const Vec& correction,
                                double epsilon_scale);

}  // namespace lev
