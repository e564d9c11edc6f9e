#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "contact/counters.hpp"
#include "contact/runge_kutta.hpp"
#include "contact/splitting.hpp"
#include "contact/variational.hpp"

namespace contact {

enum class MethodKind { chi, cvi, rk4, midpoint };

struct StepMethod {
  MethodKind kind = MethodKind::chi;
  int order = 2;
  // Reproduce the printed s -= V tau / 2 in the potential sub-map (CHI only).
  bool b_map_compat = false;
  // Use the printed explicit action update in the variational step.
  bool cvi_explicit_action = false;

  static StepMethod chi(int order = 2) {
    check_chi_order(order);
    return {MethodKind::chi, order};
  }
  static StepMethod cvi() { return {MethodKind::cvi, 2}; }
  static StepMethod rk4() { return {MethodKind::rk4, 4}; }
  static StepMethod midpoint() { return {MethodKind::midpoint, 2}; }

  friend bool operator==(const StepMethod&, const StepMethod&) = default;
};

// Accepts chi<even order>, cvi2, rk4 and midpoint.
inline std::optional<StepMethod> parse_method(std::string_view id) {
  if (id == "cvi2") return StepMethod::cvi();
  if (id == "rk4") return StepMethod::rk4();
  if (id == "midpoint") return StepMethod::midpoint();
  if (id.size() > 3 && id.substr(0, 3) == "chi") {
    int order = 0;
    for (char c : id.substr(3)) {
      if (c < '0' || c > '9' || order > 100) return std::nullopt;
      order = order * 10 + (c - '0');
    }
    if (order >= 2 && order % 2 == 0) return StepMethod::chi(order);
  }
  return std::nullopt;
}

inline std::string method_id(const StepMethod& m) {
  switch (m.kind) {
    case MethodKind::chi: return "chi" + std::to_string(m.order);
    case MethodKind::cvi: return "cvi2";
    case MethodKind::rk4: return "rk4";
    case MethodKind::midpoint: return "midpoint";
  }
  return "unknown";
}

using OneStepMap = std::function<ContactState(
    const SeparableContactModel&, const ContactState&, double)>;

// One-step map for a method. The variational map carries a gradient cache,
// so each call returns a fresh stepper intended for a single run.
inline OneStepMap make_stepper(const StepMethod& method) {
  const auto update = method.b_map_compat ? PotentialActionUpdate::printed_half
                                          : PotentialActionUpdate::exact;
  switch (method.kind) {
    case MethodKind::chi: {
      const int order = method.order;
      check_chi_order(order);
      return [order, update](const SeparableContactModel& m,
                             const ContactState& x, double tau) {
        return chi_step(m, x, tau, order, update);
      };
    }
    case MethodKind::cvi: {
      auto stepper = std::make_shared<Cvi2Stepper>(
          method.cvi_explicit_action ? VariationalAction::explicit_left
                                     : VariationalAction::trapezoidal);
      return [stepper](const SeparableContactModel& m, const ContactState& x,
                       double tau) { return (*stepper)(m, x, tau); };
    }
    case MethodKind::rk4:
      return rk4_step;
    case MethodKind::midpoint:
      return midpoint_step;
  }
  throw ContactError(ErrorKind::InvalidArgument, "unknown method");
}

enum class RunStatus { completed, diverged, model_singularity, subflow_blowup };

inline std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::completed: return "Completed";
    case RunStatus::diverged: return "Diverged";
    case RunStatus::model_singularity: return "ModelSingularity";
    case RunStatus::subflow_blowup: return "SubflowBlowup";
  }
  return "Unknown";
}

struct Trajectory {
  std::vector<ContactState> samples;
  StepMethod method;
  double tau = 0.0;
  RunStatus status = RunStatus::completed;
  // Time of the last good state when the run failed.
  std::optional<double> t_fail;
  std::string message;
  std::uint64_t steps = 0;
  EvalCounters counters;

  bool completed() const { return status == RunStatus::completed; }
};

struct IntegrateOptions {
  std::uint64_t sample_every = 1;
  // Called on every accepted state (sampled or not); returning false stops
  // the run with status Diverged.
  std::function<bool(const ContactState&)> accept;
};

namespace detail {

inline RunStatus status_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ModelSingularity: return RunStatus::model_singularity;
    case ErrorKind::SubflowBlowup: return RunStatus::subflow_blowup;
    default: return RunStatus::diverged;
  }
}

}  // namespace detail

// Fixed-step integration from state0.t to t_end. The step count is
// ceil((t_end - t0) / tau) so the final time is t0 + n tau >= t_end.
// Step failures and non-finite states end the run with a status; the
// last good state is always the final sample.
inline Trajectory integrate(const SeparableContactModel& model,
                            const StepMethod& method,
                            const ContactState& state0, double tau,
                            double t_end, IntegrateOptions options = {}) {
  check_dimension(model, state0);
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw ContactError(ErrorKind::InvalidArgument, "tau must be > 0");
  }
  if (!(t_end >= state0.t)) {
    throw ContactError(ErrorKind::InvalidArgument, "t_end must be >= t0");
  }
  if (options.sample_every < 1) {
    throw ContactError(ErrorKind::InvalidArgument, "sample_every must be >= 1");
  }
  if (!state0.is_finite()) {
    throw ContactError(ErrorKind::InvalidArgument, "initial state not finite");
  }

  CountingModel counted(model);
  OneStepMap step = make_stepper(method);
  const double t0 = state0.t;
  const auto n_steps = static_cast<std::uint64_t>(
      std::max(0.0, std::ceil((t_end - t0) / tau - 1e-9)));

  Trajectory traj;
  traj.method = method;
  traj.tau = tau;
  traj.samples.reserve(
      static_cast<std::size_t>(n_steps / options.sample_every + 2));
  traj.samples.push_back(state0);

  ContactState x = state0;
  bool last_stored = true;
  for (std::uint64_t k = 1; k <= n_steps; ++k) {
    ContactState next;
    try {
      next = step(counted, x, tau);
    } catch (const ContactError& e) {
      traj.status = detail::status_for(e.kind());
      traj.message = e.what();
      break;
    }
    // Assign the nominal grid time to avoid accumulated rounding.
    next.t = t0 + static_cast<double>(k) * tau;
    if (!next.is_finite()) {
      traj.status = RunStatus::diverged;
      traj.message = "non-finite state";
      break;
    }
    if (options.accept && !options.accept(next)) {
      x = std::move(next);
      traj.samples.push_back(x);
      traj.steps = k;
      last_stored = true;
      traj.status = RunStatus::diverged;
      traj.message = "state rejected by acceptance bound";
      break;
    }
    x = std::move(next);
    traj.steps = k;
    last_stored = (k % options.sample_every == 0);
    if (last_stored) traj.samples.push_back(x);
  }
  if (!last_stored) traj.samples.push_back(x);
  if (traj.status != RunStatus::completed) traj.t_fail = x.t;
  traj.counters = counted.counters();
  return traj;
}

}  // namespace contact
