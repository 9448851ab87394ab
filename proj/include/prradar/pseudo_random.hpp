#pragma once

#include <cmath>
#include <cstddef>

#include "prradar/ambiguity.hpp"
#include "prradar/sequence.hpp"

namespace prradar {

/// Outcome of checking |A(phi, phi)[v]| <= B / sqrt(N) for all v != (0, 0).
struct PseudoRandomCert {
  double b_constant = 0.0;     // smallest B for which the bound holds
  double max_offorigin = 0.0;  // max |A(phi, phi)| over v != (0, 0)
  std::size_t n_len = 0;
  TimeFreqShift argmax{};
};

/// Exhaustive check over the full auto-ambiguity grid.
inline PseudoRandomCert certify_pseudo_random(const Sequence& phi, unsigned threads = 1) {
  require_unit_norm(phi, "certify_pseudo_random");
  const std::size_t n = phi.size();
  const AmbiguityGrid grid = ambiguity_fast(phi, phi, threads);
  PseudoRandomCert cert;
  cert.n_len = n;
  for (std::size_t tau = 0; tau < n; ++tau) {
    for (std::size_t omega = 0; omega < n; ++omega) {
      if (tau == 0 && omega == 0) continue;
      const double m = std::abs(grid.at(tau, omega));
      if (m > cert.max_offorigin) {
        cert.max_offorigin = m;
        cert.argmax = {tau, omega};
      }
    }
  }
  cert.b_constant = cert.max_offorigin * std::sqrt(static_cast<double>(n));
  return cert;
}

}  // namespace prradar
