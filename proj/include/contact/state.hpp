#pragma once

#include <cmath>
#include <initializer_list>
#include <utility>

#include <Eigen/Dense>

#include "contact/errors.hpp"

namespace contact {

using Vector = Eigen::VectorXd;

// A point (q, p, s, t) of extended contact phase space in Darboux coordinates.
struct ContactState {
  Vector q;
  Vector p;
  double s = 0.0;
  double t = 0.0;

  ContactState() = default;
  ContactState(Vector q_, Vector p_, double s_, double t_ = 0.0)
      : q(std::move(q_)), p(std::move(p_)), s(s_), t(t_) {
    if (q.size() != p.size() || q.size() < 1) {
      throw ContactError(ErrorKind::InvalidArgument,
                         "q and p must have the same dimension n >= 1");
    }
  }

  Eigen::Index dim() const { return q.size(); }

  bool is_finite() const {
    return q.allFinite() && p.allFinite() && std::isfinite(s) &&
           std::isfinite(t);
  }

  // Autonomous coordinates (q, p, s) packed into one (2n+1)-vector.
  Vector packed() const {
    const auto n = dim();
    Vector x(2 * n + 1);
    x << q, p, s;
    return x;
  }

  static ContactState unpack(const Vector& x, double t) {
    const auto n = (x.size() - 1) / 2;
    return ContactState(x.head(n), x.segment(n, n), x(2 * n), t);
  }
};

inline ContactState make_state(std::initializer_list<double> q,
                               std::initializer_list<double> p, double s,
                               double t = 0.0) {
  Vector qv(static_cast<Eigen::Index>(q.size()));
  Vector pv(static_cast<Eigen::Index>(p.size()));
  Eigen::Index i = 0;
  for (double v : q) qv(i++) = v;
  i = 0;
  for (double v : p) pv(i++) = v;
  return ContactState(std::move(qv), std::move(pv), s, t);
}

// Coefficients of a 1-form in the basis (dq_1..dq_n, dp_1..dp_n, ds).
struct ContactCovector {
  Vector coefficients;

  Eigen::Index dim() const { return (coefficients.size() - 1) / 2; }
};

// The contact form eta = ds - sum_i p_i dq_i evaluated at a state.
inline ContactCovector eta_at(const ContactState& state) {
  const auto n = state.dim();
  ContactCovector eta{Vector::Zero(2 * n + 1)};
  eta.coefficients.head(n) = -state.p;
  eta.coefficients(2 * n) = 1.0;
  return eta;
}

}  // namespace contact
