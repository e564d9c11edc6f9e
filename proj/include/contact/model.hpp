#pragma once

#include <cmath>
#include <string>
#include <string_view>

#include "contact/errors.hpp"
#include "contact/state.hpp"

namespace contact {

// Time derivative of a state under a contact Hamiltonian vector field,
// extended with dt/dt = 1.
struct ContactVelocity {
  Vector dq;
  Vector dp;
  double ds = 0.0;
  double dt = 1.0;
};

// A contact Hamiltonian of the form
//
//   H(q, p, s, t) = |p|^2 / 2 + V(q, t) + f(s, t).
//
// Implementations supply V, f, their derivatives and the exact frozen-time
// flow of the action piece f. The kinetic piece is fixed by the framework.
class SeparableContactModel {
 public:
  virtual ~SeparableContactModel() = default;

  virtual std::string_view name() const = 0;
  virtual Eigen::Index dim() const = 0;

  virtual double potential(const Vector& q, double t) const = 0;
  virtual Vector potential_gradient(const Vector& q, double t) const = 0;
  virtual double action_term(double s, double t) const = 0;
  virtual double action_term_ds(double s, double t) const = 0;

  // Exact flow of H_A = f(s, t) with t frozen: q' = 0, p' = -p df/ds,
  // s' = -f. Time is not advanced.
  virtual ContactState action_flow(const ContactState& state,
                                   double tau) const = 0;

  // Partial time derivatives; central differences unless overridden.
  virtual double potential_dt(const Vector& q, double t) const {
    const double h = 1e-6 * std::max(1.0, std::abs(t));
    return (potential(q, t + h) - potential(q, t - h)) / (2.0 * h);
  }
  virtual double action_term_dt(double s, double t) const {
    const double h = 1e-6 * std::max(1.0, std::abs(t));
    return (action_term(s, t + h) - action_term(s, t - h)) / (2.0 * h);
  }

  // Solves x + (tau / 2) f(x, t) = rhs for x. This is the implicit action
  // update of the trapezoidal variational integrator. Models with closed
  // forms override it; the fallback is a safeguarded Newton iteration started
  // from the explicit guess.
  virtual double solve_trapezoidal_action(double rhs, double tau,
                                          double t) const {
    double x = rhs - 0.5 * tau * action_term(rhs, t);
    for (int it = 0; it < 60; ++it) {
      const double g = x + 0.5 * tau * action_term(x, t) - rhs;
      const double dg = 1.0 + 0.5 * tau * action_term_ds(x, t);
      if (std::abs(dg) < 1e-14 || !std::isfinite(g)) break;
      const double dx = g / dg;
      x -= dx;
      if (std::abs(dx) <= 1e-15 * std::max(1.0, std::abs(x))) return x;
    }
    throw ContactError(ErrorKind::ActionSolveFailure,
                       "trapezoidal action equation has no usable root");
  }

  virtual ContactVelocity vector_field(const ContactState& state) const {
    const Vector grad = potential_gradient(state.q, state.t);
    const double v = potential(state.q, state.t);
    const double f = action_term(state.s, state.t);
    const double fs = action_term_ds(state.s, state.t);
    ContactVelocity out;
    out.dq = state.p;
    out.dp = -grad - fs * state.p;
    out.ds = 0.5 * state.p.squaredNorm() - v - f;
    out.dt = 1.0;
    return out;
  }
};

inline void check_dimension(const SeparableContactModel& model,
                            const ContactState& state) {
  if (model.dim() != state.dim()) {
    throw ContactError(ErrorKind::InvalidArgument,
                       "state dimension " + std::to_string(state.dim()) +
                           " does not match model '" +
                           std::string(model.name()) + "' dimension " +
                           std::to_string(model.dim()));
  }
}

// dq = p, dp = -grad V - p df/ds, ds = |p|^2/2 - V - f, dt = 1.
inline ContactVelocity contact_vector_field(const SeparableContactModel& model,
                                            const ContactState& state) {
  check_dimension(model, state);
  return model.vector_field(state);
}

inline double hamiltonian(const SeparableContactModel& model,
                          const ContactState& state) {
  check_dimension(model, state);
  return 0.5 * state.p.squaredNorm() + model.potential(state.q, state.t) +
         model.action_term(state.s, state.t);
}

// dH/dt along the flow: -H dH/ds, plus the explicit-time partials
// dV/dt + df/dt for non-autonomous models.
inline double hamiltonian_drift(const SeparableContactModel& model,
                                const ContactState& state) {
  const double h = hamiltonian(model, state);
  return -h * model.action_term_ds(state.s, state.t) +
         model.potential_dt(state.q, state.t) +
         model.action_term_dt(state.s, state.t);
}

}  // namespace contact
