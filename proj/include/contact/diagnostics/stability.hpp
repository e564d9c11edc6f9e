#pragma once

#include <cmath>
#include <future>
#include <limits>
#include <optional>
#include <vector>

#include "contact/integrate.hpp"

namespace contact::diagnostics {

struct StabilityRun {
  double tau = 0.0;
  RunStatus status = RunStatus::completed;
  // The run left the box ||(q, p, s)||_inf <= bound.
  bool escaped = false;
  double max_norm = 0.0;
  ContactState final_state;

  bool stable() const { return status == RunStatus::completed && !escaped; }
};

struct StabilityReport {
  StepMethod method;
  std::vector<double> tau_grid;
  std::vector<StabilityRun> runs;
  // Largest grid step whose run completed inside the bound.
  std::optional<double> max_stable_tau;
};

inline StabilityRun classify_run(const SeparableContactModel& model,
                                 const StepMethod& method,
                                 const ContactState& state0, double tau,
                                 double t_end, double bound) {
  StabilityRun run;
  run.tau = tau;
  IntegrateOptions opt;
  const bool bounded = std::isfinite(bound);
  // Only the final state is kept; the bound is tracked on every step.
  opt.sample_every = std::numeric_limits<std::uint64_t>::max();
  double max_norm = state0.packed().lpNorm<Eigen::Infinity>();
  opt.accept = [&](const ContactState& x) {
    const double n = x.packed().lpNorm<Eigen::Infinity>();
    max_norm = std::max(max_norm, n);
    return !bounded || n <= bound;
  };
  const Trajectory traj = integrate(model, method, state0, tau, t_end, opt);
  run.status = traj.status;
  run.max_norm = max_norm;
  run.escaped = bounded && max_norm > bound;
  run.final_state = traj.samples.back();
  return run;
}

// Runs every (method, tau) pair and reports, per method, the largest tau
// whose trajectory completed with all states inside the bound. Runs are
// independent and execute concurrently.
inline std::vector<StabilityReport> stability_scan(
    const SeparableContactModel& model, const std::vector<StepMethod>& methods,
    const ContactState& state0, const std::vector<double>& tau_grid,
    double t_end, double bound = 100.0) {
  if (!(bound > 0.0)) {
    throw ContactError(ErrorKind::InvalidArgument, "bound must be > 0");
  }
  for (std::size_t i = 1; i < tau_grid.size(); ++i) {
    if (!(tau_grid[i] > tau_grid[i - 1])) {
      throw ContactError(ErrorKind::InvalidArgument,
                         "tau grid must be strictly increasing");
    }
  }
  std::vector<std::vector<std::future<StabilityRun>>> pending(methods.size());
  for (std::size_t m = 0; m < methods.size(); ++m) {
    for (double tau : tau_grid) {
      pending[m].push_back(std::async(std::launch::async, [&, m, tau] {
        return classify_run(model, methods[m], state0, tau, t_end, bound);
      }));
    }
  }
  std::vector<StabilityReport> reports;
  for (std::size_t m = 0; m < methods.size(); ++m) {
    StabilityReport report{methods[m], tau_grid, {}, std::nullopt};
    for (auto& f : pending[m]) {
      report.runs.push_back(f.get());
      if (report.runs.back().stable()) {
        report.max_stable_tau = report.runs.back().tau;
      }
    }
    reports.push_back(std::move(report));
  }
  return reports;
}

}  // namespace contact::diagnostics
