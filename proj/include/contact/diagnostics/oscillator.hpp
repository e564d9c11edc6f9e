#pragma once

#include <cmath>

#include "contact/state.hpp"

namespace contact::diagnostics {

// | sqrt(q^2 + p^2 + gamma s^2) - sqrt(2C) |; the distance to the H = 0 sphere
// when gamma = 1.
inline double sphere_distance(const ContactState& state, double gamma,
                              double C) {
  const double r2 = state.q.squaredNorm() + state.p.squaredNorm() +
                    gamma * state.s * state.s;
  return std::abs(std::sqrt(r2) - std::sqrt(2.0 * C));
}

struct OscillatorFixedPoints {
  // s-coordinate of the poles (0, 0, +-s) of the continuous flow.
  double continuous = 0.0;
  // Closed-form shifted poles of the discrete map, +-(1/2) sqrt(8C/gamma +
  // tau^2 C^2).
  double shifted = 0.0;
};

inline OscillatorFixedPoints oscillator_fixed_points(double gamma, double C,
                                                     double tau) {
  return {std::sqrt(2.0 * C / gamma),
          0.5 * std::sqrt(8.0 * C / gamma + tau * tau * C * C)};
}

}  // namespace contact::diagnostics
