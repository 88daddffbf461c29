#pragma once

#include "lev/simplex.hpp"

namespace lev {

enum class RegKind { Negentropy, LogBarrier, Hybrid };

// Simplex regularizers used by the mirror descent updates:
//   Negentropy: (1/eta) sum x_i log x_i
//   LogBarrier: (1/eta) sum log(1/x_i)
//   Hybrid:     (1/eta) sum x_i log x_i - (1/(eta K)) sum log x_i
// All three are separable, so Hessians are kept as diagonal vectors.
struct Regularizer {
  RegKind kind;
  double eta;
  int num_arms;

  Regularizer(RegKind kind_, double eta_, int num_arms_)
      : kind(kind_), eta(eta_), num_arms(num_arms_) {
    if (!(eta > 0.0)) throw std::invalid_argument("Regularizer: eta must be > 0");
    if (num_arms < 2) throw std::invalid_argument("Regularizer: num_arms must be >= 2");
  }

  double value(const Vec& x) const;
  Vec gradient(const Vec& x) const;
  Vec hessian_diag(const Vec& x) const;

  // D_R(x, y) = R(x) - R(y) - <grad R(y), x - y>
  double bregman(const Vec& x, const Vec& y) const;

  // ||u||_x = sqrt(sum u_i^2 h_i), ||u||_{x,*} = sqrt(sum u_i^2 / h_i)
  double local_norm(const Vec& x, const Vec& u) const;
  double dual_norm(const Vec& x, const Vec& u) const;

  // Scalar pieces of the separable gradient, used by the OMD dual solver.
  double grad_scalar(double xi) const;
  double grad_slope(double xi) const;
  // Solve grad_scalar(x) = v for x in (0, 1]; monotone, Newton with bisection
  // fallback.
  double grad_inverse(double v) const;
};

}  // namespace lev
