#pragma once

#include <cmath>
#include <cstddef>
#include <span>

#include "contact/errors.hpp"

namespace contact::diagnostics {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};

// Ordinary least squares y ~ slope * x + intercept.
inline LinearFit least_squares_line(std::span<const double> x,
                                    std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ContactError(ErrorKind::InsufficientSamples,
                       "least squares needs >= 2 matching points");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) {
    throw ContactError(ErrorKind::InvalidArgument,
                       "least squares abscissae are all equal");
  }
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

}  // namespace contact::diagnostics
