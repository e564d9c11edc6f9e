#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>

#include "contact/model.hpp"

namespace contact {

// How the variational step advances the action.
//  - trapezoidal: s_{k+1} = s_k + tau L with L averaging F over both ends;
//    solved exactly through the model. Contact and second order.
//  - explicit_left: s_{k+1} uses F(s_k) only (no implicit solve). Second
//    order, but not a contact map.
enum class VariationalAction { trapezoidal, explicit_left };

inline constexpr double kDenominatorTolerance = 1e-12;

namespace detail {

inline double checked_denominator(double d, const char* what) {
  if (std::abs(d) < kDenominatorTolerance) {
    throw ContactError(ErrorKind::DegenerateDenominator, what);
  }
  return d;
}

}  // namespace detail

// Discrete Herglotz Lagrangian on one step [t, t + tau]:
//   |q1 - q0|^2 / (2 tau^2) - (V(q0, t) + V(q1, t + tau)) / 2
//     - (F(s0, t) + F(s1, t + tau)) / 2
inline double discrete_lagrangian(const SeparableContactModel& model,
                                  const Vector& q0, const Vector& q1,
                                  double s0, double s1, double t, double tau) {
  return 0.5 * (q1 - q0).squaredNorm() / (tau * tau) -
         0.5 * (model.potential(q0, t) + model.potential(q1, t + tau)) -
         0.5 * (model.action_term(s0, t) + model.action_term(s1, t + tau));
}

// The two discrete momenta attached to one step of a discrete curve: p_plus
// at its left node (q0, s0, t) and p_minus at its right node
// (q1, s1, t + tau). Partial derivatives of the Lagrangian are analytic; the
// Lagrangian is scaled by tau so that the momenta are O(1).
struct DiscreteMomenta {
  Vector p_plus;
  Vector p_minus;
};

inline DiscreteMomenta discrete_momenta(const SeparableContactModel& model,
                                        const Vector& q0, const Vector& q1,
                                        double s0, double s1, double t,
                                        double tau) {
  const Vector velocity = (q1 - q0) / tau;
  const double left = detail::checked_denominator(
      1.0 - 0.5 * tau * model.action_term_ds(s0, t),
      "p+ denominator 1 + tau dL/ds_k vanishes");
  const double right = detail::checked_denominator(
      1.0 + 0.5 * tau * model.action_term_ds(s1, t + tau),
      "p- denominator 1 - tau dL/ds_{k+1} vanishes");
  DiscreteMomenta out;
  out.p_plus =
      (velocity + 0.5 * tau * model.potential_gradient(q0, t)) / left;
  out.p_minus =
      (velocity - 0.5 * tau * model.potential_gradient(q1, t + tau)) / right;
  return out;
}

// Explicit second-order contact variational step. `grad_at_start`, when
// given, must equal grad V(state.q, state.t); it lets a driver reuse the
// gradient computed at the end of the previous step. The gradient at the new
// position is written to `grad_at_end` if requested.
inline ContactState cvi2_step(
    const SeparableContactModel& model, const ContactState& state, double tau,
    VariationalAction action = VariationalAction::trapezoidal,
    const Vector* grad_at_start = nullptr, Vector* grad_at_end = nullptr) {
  const double t0 = state.t;
  const double t1 = t0 + tau;
  const Vector g0 = grad_at_start ? *grad_at_start
                                  : model.potential_gradient(state.q, t0);
  const double fs0 = model.action_term_ds(state.s, t0);

  ContactState out = state;
  out.t = t1;
  out.q = state.q - 0.5 * tau * tau * g0 +
          state.p * (tau - 0.5 * tau * tau * fs0);

  const double kinetic = 0.5 * (out.q - state.q).squaredNorm() / (tau * tau);
  const double v_mean =
      0.5 * (model.potential(state.q, t0) + model.potential(out.q, t1));
  const double f0 = model.action_term(state.s, t0);
  if (action == VariationalAction::trapezoidal) {
    const double rhs = state.s + tau * (kinetic - v_mean - 0.5 * f0);
    out.s = model.solve_trapezoidal_action(rhs, tau, t1);
  } else {
    out.s = state.s + tau * (kinetic - v_mean - f0);
  }

  Vector g1 = model.potential_gradient(out.q, t1);
  const double den = detail::checked_denominator(
      1.0 + 0.5 * tau * model.action_term_ds(out.s, t1),
      "cvi2: p-update denominator vanishes");
  out.p = ((1.0 - 0.5 * tau * fs0) * state.p - 0.5 * tau * (g0 + g1)) / den;
  if (grad_at_end) *grad_at_end = std::move(g1);
  return out;
}

// Stateful driver for cvi2_step that reuses grad V between consecutive steps,
// so a step costs one new gradient evaluation.
class Cvi2Stepper {
 public:
  explicit Cvi2Stepper(VariationalAction action = VariationalAction::trapezoidal)
      : action_(action) {}

  ContactState operator()(const SeparableContactModel& model,
                          const ContactState& state, double tau) {
    const Vector* reuse = nullptr;
    // Drivers may snap t to a grid, so t matches up to rounding only.
    if (cache_ && cache_->q.size() == state.q.size() && cache_->q == state.q &&
        std::abs(cache_->t - state.t) <= 1e-12 * std::max(1.0, std::abs(state.t))) {
      reuse = &cache_->grad;
    }
    Vector grad_end;
    ContactState next =
        cvi2_step(model, state, tau, action_, reuse, &grad_end);
    cache_ = Cache{next.q, next.t, std::move(grad_end)};
    return next;
  }

  void reset() { cache_.reset(); }

 private:
  struct Cache {
    Vector q;
    double t;
    Vector grad;
  };
  VariationalAction action_;
  std::optional<Cache> cache_;
};

}  // namespace contact
