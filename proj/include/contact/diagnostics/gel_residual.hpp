#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "contact/model.hpp"

namespace contact::diagnostics {

// Max norm over interior samples of the generalised Euler-Lagrange residual
//   dL/dq - d/dt dL/dq' + dL/ds dL/dq'  =  -grad V - q'' - F_s(s, t) q'
// for L = |q'|^2/2 - V(q, t) - F(s, t), with q' and q'' from central
// differences on the uniformly spaced samples.
inline double gel_residual(const std::vector<ContactState>& samples,
                           const SeparableContactModel& model) {
  if (samples.size() < 3) {
    throw ContactError(ErrorKind::InsufficientSamples,
                       "gel_residual needs at least 3 samples");
  }
  const double h = samples[1].t - samples[0].t;
  if (!(h > 0.0)) {
    throw ContactError(ErrorKind::InvalidArgument,
                       "samples must have increasing times");
  }
  for (std::size_t k = 1; k < samples.size(); ++k) {
    const double dk = samples[k].t - samples[k - 1].t;
    if (std::abs(dk - h) > 1e-9 * std::max(1.0, std::abs(samples[k].t))) {
      throw ContactError(ErrorKind::InvalidArgument,
                         "samples are not uniformly spaced");
    }
  }
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < samples.size(); ++k) {
    const auto& prev = samples[k - 1];
    const auto& cur = samples[k];
    const auto& next = samples[k + 1];
    const Vector velocity = (next.q - prev.q) / (2.0 * h);
    const Vector accel = (next.q - 2.0 * cur.q + prev.q) / (h * h);
    const Vector r = -model.potential_gradient(cur.q, cur.t) - accel -
                     model.action_term_ds(cur.s, cur.t) * velocity;
    worst = std::max(worst, r.lpNorm<Eigen::Infinity>());
  }
  return worst;
}

}  // namespace contact::diagnostics
