#pragma once

#include "contact/model.hpp"

namespace contact {

namespace detail {

inline ContactState advance(const ContactState& x, const ContactVelocity& v,
                            double h) {
  ContactState out = x;
  out.q += h * v.dq;
  out.p += h * v.dp;
  out.s += h * v.ds;
  out.t += h * v.dt;
  return out;
}

}  // namespace detail

// Classical fourth-order Runge-Kutta on the extended contact field.
inline ContactState rk4_step(const SeparableContactModel& model,
                             const ContactState& state, double tau) {
  const ContactVelocity k1 = model.vector_field(state);
  const ContactVelocity k2 =
      model.vector_field(detail::advance(state, k1, 0.5 * tau));
  const ContactVelocity k3 =
      model.vector_field(detail::advance(state, k2, 0.5 * tau));
  const ContactVelocity k4 = model.vector_field(detail::advance(state, k3, tau));
  ContactState out = state;
  const double w = tau / 6.0;
  out.q += w * (k1.dq + 2.0 * k2.dq + 2.0 * k3.dq + k4.dq);
  out.p += w * (k1.dp + 2.0 * k2.dp + 2.0 * k3.dp + k4.dp);
  out.s += w * (k1.ds + 2.0 * k2.ds + 2.0 * k3.ds + k4.ds);
  out.t = state.t + tau;
  return out;
}

// Explicit midpoint rule: x + tau F(x + tau/2 F(x)).
inline ContactState midpoint_step(const SeparableContactModel& model,
                                  const ContactState& state, double tau) {
  const ContactVelocity k1 = model.vector_field(state);
  const ContactVelocity k2 =
      model.vector_field(detail::advance(state, k1, 0.5 * tau));
  ContactState out = detail::advance(state, k2, tau);
  out.t = state.t + tau;
  return out;
}

}  // namespace contact
