#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "contact/diagnostics/fit.hpp"
#include "contact/integrate.hpp"

namespace contact::diagnostics {

struct OrbitalElements {
  double energy = 0.0;
  double angular_momentum = 0.0;
  double eccentricity = 0.0;
  double perihelion_angle = 0.0;
};

// Two-body elements of a planar state around a centre of strength mu. The
// eccentricity vector is the Laplace-Runge-Lenz vector (p x L) / mu - q / |q|.
inline OrbitalElements kepler_elements(const ContactState& state, double mu) {
  if (state.dim() != 2) {
    throw ContactError(ErrorKind::InvalidArgument,
                       "kepler_elements needs a planar state");
  }
  const double r = state.q.norm();
  if (!(r > 0.0)) {
    throw ContactError(ErrorKind::ModelSingularity, "kepler_elements: |q| = 0");
  }
  const double qx = state.q(0), qy = state.q(1);
  const double px = state.p(0), py = state.p(1);
  OrbitalElements el;
  el.angular_momentum = qx * py - qy * px;
  el.energy = 0.5 * state.p.squaredNorm() - mu / r;
  const double ex = py * el.angular_momentum / mu - qx / r;
  const double ey = -px * el.angular_momentum / mu - qy / r;
  el.eccentricity = std::hypot(ex, ey);
  el.perihelion_angle = std::atan2(ey, ex);
  return el;
}

// Perihelion angle along a trajectory, unwrapped to a continuous curve.
inline std::vector<double> unwrapped_perihelion(
    const std::vector<ContactState>& samples, double mu) {
  std::vector<double> out;
  out.reserve(samples.size());
  double previous = 0.0;
  for (const auto& x : samples) {
    const double raw = kepler_elements(x, mu).perihelion_angle;
    if (out.empty()) {
      out.push_back(raw);
    } else {
      double d = raw - previous;
      while (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
      while (d < -std::numbers::pi) d += 2.0 * std::numbers::pi;
      out.push_back(out.back() + d);
    }
    previous = raw;
  }
  return out;
}

// Slope (radians per time unit) of the unwrapped perihelion angle.
inline double precession_rate(const Trajectory& traj, double mu) {
  std::vector<double> t;
  for (const auto& x : traj.samples) t.push_back(x.t);
  return least_squares_line(t, unwrapped_perihelion(traj.samples, mu)).slope;
}

// Least-squares slope of the two-body energy against time.
inline double energy_drift_slope(const Trajectory& traj, double mu) {
  std::vector<double> t, e;
  for (const auto& x : traj.samples) {
    t.push_back(x.t);
    e.push_back(kepler_elements(x, mu).energy);
  }
  return least_squares_line(t, e).slope;
}

}  // namespace contact::diagnostics
