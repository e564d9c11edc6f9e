#pragma once

#include <functional>

#include "contact/model.hpp"

namespace contact {

using StateMap = std::function<ContactState(const ContactState&)>;

// Central finite-difference Jacobian of a map in the autonomous coordinates
// (q, p, s); t is held fixed.
inline Eigen::MatrixXd finite_difference_jacobian(const StateMap& map,
                                                  const ContactState& state,
                                                  double fd_step) {
  const Vector x = state.packed();
  const auto m = x.size();
  Eigen::MatrixXd jac(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    Vector xp = x, xm = x;
    xp(j) += fd_step;
    xm(j) -= fd_step;
    const Vector fp = map(ContactState::unpack(xp, state.t)).packed();
    const Vector fm = map(ContactState::unpack(xm, state.t)).packed();
    jac.col(j) = (fp - fm) / (2.0 * fd_step);
  }
  return jac;
}

// Relative distance of the pulled-back contact form eta(map(x)) . J from the
// line spanned by eta(x). Zero for a contact transformation.
inline double contact_form_defect(const StateMap& map,
                                  const ContactState& state,
                                  double fd_step = 1e-6) {
  if (!(fd_step > 0.0)) {
    throw ContactError(ErrorKind::InvalidArgument, "fd_step must be > 0");
  }
  const Eigen::MatrixXd jac = finite_difference_jacobian(map, state, fd_step);
  const Vector image_eta = eta_at(map(state)).coefficients;
  const Vector pulled = jac.transpose() * image_eta;
  const Vector base = eta_at(state).coefficients;
  const double norm = pulled.norm();
  if (norm < 1e-12) {
    throw ContactError(ErrorKind::DegenerateForm,
                       "pulled-back contact form vanishes");
  }
  const double lambda = pulled.dot(base) / base.squaredNorm();
  return (pulled - lambda * base).norm() / norm;
}

// Convenience form for one-step integrators f(model, state, tau).
template <typename Step>
double contact_form_defect(Step&& step, const SeparableContactModel& model,
                           const ContactState& state, double tau,
                           double fd_step = 1e-6) {
  if (!(tau > 0.0)) {
    throw ContactError(ErrorKind::InvalidArgument, "tau must be > 0");
  }
  return contact_form_defect(
      [&](const ContactState& x) { return step(model, x, tau); }, state,
      fd_step);
}

}  // namespace contact
