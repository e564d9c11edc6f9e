#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <variant>
#include <vector>

#include "contact/diagnostics/fit.hpp"
#include "contact/integrate.hpp"

namespace contact::diagnostics {

// Reference obtained by running a method at a much smaller step.
struct RefinedReference {
  // Defaults to min(tau_list) / 20.
  std::optional<double> tau_ref;
  // Defaults to the method under test.
  std::optional<StepMethod> method;
};

// Either the exact final state or a refinement recipe.
using ConvergenceReference = std::variant<ContactState, RefinedReference>;

struct ConvergenceResult {
  double slope = 0.0;
  std::vector<double> taus;
  std::vector<double> errors;
};

// Max-norm distance in (q, p, s).
inline double state_error(const ContactState& a, const ContactState& b) {
  return std::max({(a.q - b.q).lpNorm<Eigen::Infinity>(),
                   (a.p - b.p).lpNorm<Eigen::Infinity>(), std::abs(a.s - b.s)});
}

// Least-squares slope of log(final error) against log(tau).
inline ConvergenceResult convergence_order(const SeparableContactModel& model,
                                           const StepMethod& method,
                                           const ContactState& state0,
                                           double t_end,
                                           const std::vector<double>& tau_list,
                                           const ConvergenceReference& reference) {
  if (tau_list.size() < 3) {
    throw ContactError(ErrorKind::InvalidArgument,
                       "convergence_order needs at least 3 step sizes");
  }
  for (std::size_t i = 1; i < tau_list.size(); ++i) {
    if (!(tau_list[i] < tau_list[i - 1])) {
      throw ContactError(ErrorKind::InvalidArgument,
                         "step sizes must be strictly decreasing");
    }
  }

  auto final_state = [&](const StepMethod& m, double tau) {
    const auto steps = std::llround((t_end - state0.t) / tau);
    if (std::abs(steps * tau - (t_end - state0.t)) > 1e-9 * std::max(1.0, t_end)) {
      throw ContactError(ErrorKind::InvalidArgument,
                         "t_end - t0 is not a multiple of tau");
    }
    IntegrateOptions opt;
    opt.sample_every = static_cast<std::uint64_t>(std::max<long long>(steps, 1));
    return integrate(model, m, state0, tau, t_end, opt);
  };

  ContactState exact;
  if (const auto* given = std::get_if<ContactState>(&reference)) {
    exact = *given;
  } else {
    const auto& refined = std::get<RefinedReference>(reference);
    const double tau_ref = refined.tau_ref.value_or(tau_list.back() / 20.0);
    if (tau_ref > tau_list.back() / 20.0 * (1.0 + 1e-12)) {
      throw ContactError(ErrorKind::ReferenceUnavailable,
                         "reference step must be <= min(tau) / 20");
    }
    const Trajectory ref = final_state(refined.method.value_or(method), tau_ref);
    if (!ref.completed()) {
      throw ContactError(ErrorKind::ReferenceUnavailable,
                         "reference run failed: " + ref.message);
    }
    exact = ref.samples.back();
  }

  ConvergenceResult result;
  std::vector<double> log_tau, log_err;
  for (double tau : tau_list) {
    const Trajectory run = final_state(method, tau);
    if (!run.completed()) {
      throw ContactError(ErrorKind::NoConvergence,
                         "run at tau = " + std::to_string(tau) +
                             " failed: " + run.message);
    }
    const double err = state_error(run.samples.back(), exact);
    result.taus.push_back(tau);
    result.errors.push_back(err);
    log_tau.push_back(std::log(tau));
    log_err.push_back(std::log(std::max(err, 1e-300)));
  }
  result.slope = least_squares_line(log_tau, log_err).slope;
  return result;
}

}  // namespace contact::diagnostics
