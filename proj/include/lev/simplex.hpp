#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace lev {

using Vec = std::vector<double>;

// Coordinates below this are clamped; log-barrier and negentropy gradients
// diverge at 0.
constexpr double kSimplexFloor = 1e-10;

inline Vec uniform_simplex(int num_arms) {
  return Vec(static_cast<std::size_t>(num_arms), 1.0 / num_arms);
}

inline double vec_sum(const Vec& v) {
  return std::accumulate(v.begin(), v.end(), 0.0);
}

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Floor then renormalize in place.
inline void clamp_to_simplex(Vec& x) {
  double s = 0.0;
  for (double& xi : x) {
    if (xi < kSimplexFloor) xi = kSimplexFloor;
    s += xi;
  }
  for (double& xi : x) xi /= s;
}

inline bool is_simplex(const Vec& x, double tol = 1e-9) {
  double s = 0.0;
  for (double xi : x) {
    if (!(xi > 0.0)) return false;
    s += xi;
  }
  return std::abs(s - 1.0) <= tol;
}

inline void require_positive(const Vec& x, const char* where) {
  for (double xi : x) {
    if (!(xi > 0.0)) throw std::domain_error(std::string(where) + ": non-positive coordinate");
  }
}

// Inverse-CDF sample from a distribution on [K] given u in [0,1).
inline int sample_index(const Vec& x, double u) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    acc += x[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(x.size()) - 1;
}

}  // namespace lev
