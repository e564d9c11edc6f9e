#pragma once

#include <cmath>
#include <string>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "contact/model.hpp"

namespace contact {

namespace detail {

inline void require(bool ok, const std::string& message) {
  if (!ok) throw ContactError(ErrorKind::InvalidArgument, message);
}

// Root of x + c x = rhs, the trapezoidal action solve for f linear in s.
inline double solve_linear_action(double rhs, double tau, double slope) {
  const double d = 1.0 + 0.5 * tau * slope;
  if (std::abs(d) < 1e-12) {
    throw ContactError(ErrorKind::ActionSolveFailure,
                       "1 + tau/2 df/ds vanishes");
  }
  return rhs / d;
}

}  // namespace detail

// Kepler problem with a periodically switching linear friction:
//   V(q) = -mu / |q|,  f(s, t) = alpha sin(omega t) s.
class PerturbedKepler final : public SeparableContactModel {
 public:
  struct Params {
    double mu = 1.0;
    double alpha = 0.01;
    double omega = M_PI;
    double eps_radius = 1e-10;
  };

  PerturbedKepler() : PerturbedKepler(Params{}) {}
  explicit PerturbedKepler(Params params) : params_(params) {
    detail::require(params_.mu > 0.0, "kepler: mu must be > 0");
    detail::require(params_.eps_radius > 0.0,
                    "kepler: eps_radius must be > 0");
    detail::require(std::isfinite(params_.alpha) && std::isfinite(params_.omega),
                    "kepler: alpha and omega must be finite");
  }

  const Params& params() const { return params_; }

  std::string_view name() const override { return "kepler"; }
  Eigen::Index dim() const override { return 2; }

  double potential(const Vector& q, double) const override {
    return -params_.mu / radius(q);
  }

  Vector potential_gradient(const Vector& q, double) const override {
    const double r = radius(q);
    return params_.mu * q / (r * r * r);
  }

  double action_term(double s, double t) const override {
    return damping(t) * s;
  }
  double action_term_ds(double, double t) const override { return damping(t); }

  ContactState action_flow(const ContactState& state,
                           double tau) const override {
    const double decay = std::exp(-damping(state.t) * tau);
    ContactState out = state;
    out.p *= decay;
    out.s *= decay;
    return out;
  }

  double potential_dt(const Vector&, double) const override { return 0.0; }
  double action_term_dt(double s, double t) const override {
    return params_.alpha * params_.omega * std::cos(params_.omega * t) * s;
  }

  double solve_trapezoidal_action(double rhs, double tau,
                                  double t) const override {
    return detail::solve_linear_action(rhs, tau, damping(t));
  }

  double damping(double t) const {
    return params_.alpha * std::sin(params_.omega * t);
  }

 private:
  double radius(const Vector& q) const {
    const double r = q.norm();
    if (!(r > params_.eps_radius)) {
      throw ContactError(ErrorKind::ModelSingularity,
                         "kepler: |q| = " + std::to_string(r) +
                             " inside collision radius");
    }
    return r;
  }

  Params params_;
};

// One-dimensional oscillator with quadratic dependence on the action:
//   V(q) = q^2/2 - C,  f(s) = gamma s^2 / 2.
// H = 0 is the ellipsoid q^2 + p^2 + gamma s^2 = 2C.
class QuadraticActionOscillator final : public SeparableContactModel {
 public:
  struct Params {
    double gamma = 1.0;
    double C = 18.0;
  };

  QuadraticActionOscillator() : QuadraticActionOscillator(Params{}) {}
  explicit QuadraticActionOscillator(Params params) : params_(params) {
    detail::require(params_.gamma > 0.0, "quadratic_oscillator: gamma must be > 0");
    detail::require(params_.C > 0.0, "quadratic_oscillator: C must be > 0");
  }

  const Params& params() const { return params_; }

  std::string_view name() const override { return "quadratic_oscillator"; }
  Eigen::Index dim() const override { return 1; }

  double potential(const Vector& q, double) const override {
    return 0.5 * q.squaredNorm() - params_.C;
  }
  Vector potential_gradient(const Vector& q, double) const override {
    return q;
  }
  double action_term(double s, double) const override {
    return 0.5 * params_.gamma * s * s;
  }
  double action_term_ds(double s, double) const override {
    return params_.gamma * s;
  }

  // s' = s / d, p' = p / d^2 with d = 1 + gamma tau s / 2.
  ContactState action_flow(const ContactState& state,
                           double tau) const override {
    const double d = 1.0 + 0.5 * params_.gamma * tau * state.s;
    if (!(d > 0.0)) {
      throw ContactError(
          ErrorKind::SubflowBlowup,
          "quadratic_oscillator: action sub-flow escapes at time " +
              std::to_string(2.0 / (params_.gamma * std::abs(state.s))) +
              " within step " + std::to_string(tau));
    }
    ContactState out = state;
    out.s = state.s / d;
    out.p = state.p / (d * d);
    return out;
  }

  double potential_dt(const Vector&, double) const override { return 0.0; }
  double action_term_dt(double, double) const override { return 0.0; }

  // x + (gamma tau / 4) x^2 = rhs, taking the root that tends to rhs as
  // tau -> 0.
  double solve_trapezoidal_action(double rhs, double tau,
                                  double) const override {
    const double a = 0.25 * params_.gamma * tau;
    const double disc = 1.0 + 4.0 * a * rhs;
    if (!(disc >= 0.0)) {
      throw ContactError(ErrorKind::ActionSolveFailure,
                         "quadratic_oscillator: trapezoidal action equation "
                         "has no real root");
    }
    return 2.0 * rhs / (1.0 + std::sqrt(disc));
  }

 private:
  Params params_;
};

// q'' + damping q' + omega0^2 q = 0 as a contact system:
//   V(q) = omega0^2 q^2 / 2,  f(s) = damping s.
class LinearDampedOscillator final : public SeparableContactModel {
 public:
  struct Params {
    double omega0 = 1.0;
    double damping = 0.2;
  };

  LinearDampedOscillator() : LinearDampedOscillator(Params{}) {}
  explicit LinearDampedOscillator(Params params) : params_(params) {
    detail::require(params_.omega0 > 0.0, "linear_oscillator: omega0 must be > 0");
    detail::require(params_.damping >= 0.0,
                    "linear_oscillator: damping must be >= 0");
  }

  const Params& params() const { return params_; }

  std::string_view name() const override { return "linear_oscillator"; }
  Eigen::Index dim() const override { return 1; }

  double potential(const Vector& q, double) const override {
    return 0.5 * params_.omega0 * params_.omega0 * q.squaredNorm();
  }
  Vector potential_gradient(const Vector& q, double) const override {
    return params_.omega0 * params_.omega0 * q;
  }
  double action_term(double s, double) const override {
    return params_.damping * s;
  }
  double action_term_ds(double, double) const override {
    return params_.damping;
  }

  ContactState action_flow(const ContactState& state,
                           double tau) const override {
    const double decay = std::exp(-params_.damping * tau);
    ContactState out = state;
    out.p *= decay;
    out.s *= decay;
    return out;
  }

  double potential_dt(const Vector&, double) const override { return 0.0; }
  double action_term_dt(double, double) const override { return 0.0; }

  double solve_trapezoidal_action(double rhs, double tau,
                                  double) const override {
    return detail::solve_linear_action(rhs, tau, params_.damping);
  }

 private:
  Params params_;
};

// Exact solution of q'' + damping q' + omega0^2 q = 0, q(0) = q0,
// q'(0) = p0, in the underdamped regime. Returns (q(t), q'(t)).
inline std::pair<double, double> damped_oscillator_exact(double q0, double p0,
                                                         double omega0,
                                                         double damping,
                                                         double t) {
  if (!(damping < 2.0 * omega0)) {
    throw ContactError(ErrorKind::UnsupportedRegime,
                       "damped_oscillator_exact: only damping < 2 omega0 is "
                       "supported");
  }
  const double a = -0.5 * damping;
  const double wd = std::sqrt(omega0 * omega0 - 0.25 * damping * damping);
  const double b = (p0 - a * q0) / wd;
  const double e = std::exp(a * t);
  const double c = std::cos(wd * t);
  const double sn = std::sin(wd * t);
  const double q = e * (q0 * c + b * sn);
  const double dq = a * q + e * wd * (-q0 * sn + b * c);
  return {q, dq};
}

// Full exact state of the linear damped oscillator including the action,
//   s(t) = e^{-damping t} (s0 + int_0^t e^{damping u} (p^2/2 - V) du),
// with the integral evaluated by adaptive Gauss-Kronrod quadrature.
inline ContactState damped_oscillator_exact_state(
    const LinearDampedOscillator& model, const ContactState& initial,
    double t_end) {
  const auto& prm = model.params();
  const double q0 = initial.q(0);
  const double p0 = initial.p(0);
  const double t0 = initial.t;
  auto lagrangian = [&](double u) {
    const auto [q, p] =
        damped_oscillator_exact(q0, p0, prm.omega0, prm.damping, u);
    return std::exp(prm.damping * u) *
           (0.5 * p * p - 0.5 * prm.omega0 * prm.omega0 * q * q);
  };
  const double span = t_end - t0;
  const double integral =
      span == 0.0 ? 0.0
                  : boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                        lagrangian, 0.0, span, 20, 1e-15);
  const auto [q, p] =
      damped_oscillator_exact(q0, p0, prm.omega0, prm.damping, span);
  Vector qv(1), pv(1);
  qv << q;
  pv << p;
  return ContactState(qv, pv,
                      std::exp(-prm.damping * span) * (initial.s + integral),
                      t_end);
}

}  // namespace contact
