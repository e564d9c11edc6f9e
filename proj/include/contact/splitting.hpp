#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "contact/model.hpp"

namespace contact {

// Action update used by the potential sub-map. `exact` integrates
// s' = -V(q, t); `printed_half` reproduces the s -= V tau / 2 variant.
enum class PotentialActionUpdate { exact, printed_half };

namespace detail {

template <typename F>
ContactState tagged(const char* map, F&& f) {
  try {
    return std::forward<F>(f)();
  } catch (const ContactError& e) {
    throw ContactError(e.kind(), std::string(map) + ": " + e.what());
  }
}

}  // namespace detail

// Flow of the action piece f(s, t) at frozen t.
inline ContactState step_A(const SeparableContactModel& model,
                           const ContactState& state, double tau) {
  return detail::tagged("A-map",
                        [&] { return model.action_flow(state, tau); });
}

// Flow of the potential piece V(q, t) at frozen t.
inline ContactState step_B(
    const SeparableContactModel& model, const ContactState& state, double tau,
    PotentialActionUpdate update = PotentialActionUpdate::exact) {
  return detail::tagged("B-map", [&] {
    const Vector grad = model.potential_gradient(state.q, state.t);
    const double v = model.potential(state.q, state.t);
    ContactState out = state;
    out.p -= tau * grad;
    out.s -= (update == PotentialActionUpdate::exact ? 1.0 : 0.5) * tau * v;
    return out;
  });
}

// Flow of the kinetic piece |p|^2 / 2.
inline ContactState step_C(const ContactState& state, double tau) {
  ContactState out = state;
  out.q += tau * state.p;
  out.s += 0.5 * tau * state.p.squaredNorm();
  return out;
}

inline ContactState step_D(const ContactState& state, double tau) {
  ContactState out = state;
  out.t += tau;
  return out;
}

// Second-order palindromic composition
//   A(tau/2) B(tau/2) D(tau/2) C(tau) D(tau/2) B(tau/2) A(tau/2),
// rightmost first. The outer A and B on the way back see time t + tau.
inline ContactState chi2_step(
    const SeparableContactModel& model, const ContactState& state, double tau,
    PotentialActionUpdate update = PotentialActionUpdate::exact) {
  const double half = 0.5 * tau;
  ContactState x = step_A(model, state, half);
  x = step_B(model, x, half, update);
  x = step_D(x, half);
  x = step_C(x, tau);
  x = step_D(x, half);
  x = step_B(model, x, half, update);
  x = step_A(model, x, half);
  // D(tau/2) twice can differ from t + tau in the last bit.
  x.t = state.t + tau;
  return x;
}

// Triple-jump weights raising a symmetric scheme of order `order` to
// order + 2: (g1, g2, g1) with g1 = 1 / (2 - 2^{1/(order+1)}).
inline std::pair<double, double> triple_jump_weights(int order) {
  const double g1 = 1.0 / (2.0 - std::pow(2.0, 1.0 / (order + 1)));
  return {g1, 1.0 - 2.0 * g1};
}

inline void check_chi_order(int order) {
  if (order < 2 || order % 2 != 0) {
    throw ContactError(ErrorKind::InvalidArgument,
                       "CHI order must be even and >= 2, got " +
                           std::to_string(order));
  }
}

// Contact Hamiltonian integrator of any even order by recursive triple jump
// on chi2_step.
inline ContactState chi_step(
    const SeparableContactModel& model, const ContactState& state, double tau,
    int order, PotentialActionUpdate update = PotentialActionUpdate::exact) {
  check_chi_order(order);
  if (order == 2) return chi2_step(model, state, tau, update);
  const auto [g1, g2] = triple_jump_weights(order - 2);
  ContactState x = chi_step(model, state, g1 * tau, order - 2, update);
  x = chi_step(model, x, g2 * tau, order - 2, update);
  x = chi_step(model, x, g1 * tau, order - 2, update);
  x.t = state.t + tau;
  return x;
}

}  // namespace contact
