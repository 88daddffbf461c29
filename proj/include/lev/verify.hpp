#pragma once

#include <string>

#include "lev/harness.hpp"

namespace lev {

struct VerifyCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool all_pass() const {
    for (const VerifyCheck& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// Invariant suite behind the `verify` subcommand: Monte-Carlo estimator
// unbiasedness, reservoir uniformity and variance gates, OMD solver KKT and
// closed-form equivalence, Bregman nonnegativity, a clean reference run at
// eta = 1/(162K), and the eta-100x negative control.
VerifyReport run_verify(int workers = 1);

}  // namespace lev
