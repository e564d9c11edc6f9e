#pragma once

#include <algorithm>
#include <vector>

#include <Eigen/Eigenvalues>

#include "contact/contact_form.hpp"

namespace contact::diagnostics {

struct FixedPointOptions {
  double fd_step = 1e-7;
  double tolerance = 1e-12;
  int max_iterations = 50;
};

struct FixedPoint {
  ContactState state;
  // Moduli of the eigenvalues of the map's Jacobian at the fixed point,
  // sorted descending.
  std::vector<double> eigenvalue_moduli;
  int iterations = 0;

  bool stable() const {
    return eigenvalue_moduli.empty() || eigenvalue_moduli.front() <= 1.0;
  }
};

// Newton iteration on map(x) - x = 0 in (q, p, s) with a finite-difference
// Jacobian. The map must not depend on t.
inline FixedPoint numerical_fixed_point(const StateMap& map,
                                        const ContactState& guess,
                                        FixedPointOptions opt = {}) {
  ContactState x = guess;
  const auto m = 2 * x.dim() + 1;
  for (int it = 0; it <= opt.max_iterations; ++it) {
    const Vector residual = map(x).packed() - x.packed();
    if (residual.lpNorm<Eigen::Infinity>() <= opt.tolerance) {
      const Eigen::MatrixXd jac = finite_difference_jacobian(map, x, opt.fd_step);
      Eigen::EigenSolver<Eigen::MatrixXd> solver(jac, false);
      FixedPoint fp{x, {}, it};
      for (const auto& ev : solver.eigenvalues()) {
        fp.eigenvalue_moduli.push_back(std::abs(ev));
      }
      std::sort(fp.eigenvalue_moduli.rbegin(), fp.eigenvalue_moduli.rend());
      return fp;
    }
    if (it == opt.max_iterations) break;
    const Eigen::MatrixXd jac =
        finite_difference_jacobian(map, x, opt.fd_step) -
        Eigen::MatrixXd::Identity(m, m);
    const Vector dx = jac.fullPivLu().solve(-residual);
    if (!dx.allFinite()) break;
    x = ContactState::unpack(x.packed() + dx, x.t);
  }
  throw ContactError(ErrorKind::NoConvergence,
                     "fixed-point Newton iteration did not converge");
}

}  // namespace contact::diagnostics
