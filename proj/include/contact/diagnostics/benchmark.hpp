#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "contact/integrate.hpp"

namespace contact::diagnostics {

struct BenchmarkRow {
  StepMethod method;
  int repeats = 0;
  double mean_seconds = 0.0;
  // Sample standard deviation over repeats (0 for a single run).
  double std_seconds = 0.0;
  std::uint64_t steps = 0;
  EvalCounters counters;
  RunStatus status = RunStatus::completed;
};

// Times `repeats` serial runs of each method with a monotonic clock. Only
// the final state is stored so timing reflects stepping cost.
inline std::vector<BenchmarkRow> benchmark(
    const SeparableContactModel& model, const std::vector<StepMethod>& methods,
    const ContactState& state0, double tau, double t_end, int repeats) {
  if (repeats < 1) {
    throw ContactError(ErrorKind::InvalidArgument, "repeats must be >= 1");
  }
  std::vector<BenchmarkRow> rows;
  for (const auto& method : methods) {
    BenchmarkRow row;
    row.method = method;
    row.repeats = repeats;
    std::vector<double> times;
    for (int r = 0; r < repeats; ++r) {
      IntegrateOptions opt;
      opt.sample_every = std::numeric_limits<std::uint64_t>::max();
      const auto start = std::chrono::steady_clock::now();
      const Trajectory traj = integrate(model, method, state0, tau, t_end, opt);
      const auto stop = std::chrono::steady_clock::now();
      times.push_back(std::chrono::duration<double>(stop - start).count());
      row.steps = traj.steps;
      row.counters = traj.counters;
      row.status = traj.status;
    }
    double mean = 0.0;
    for (double t : times) mean += t;
    mean /= repeats;
    double var = 0.0;
    for (double t : times) var += (t - mean) * (t - mean);
    row.mean_seconds = mean;
    row.std_seconds = repeats > 1 ? std::sqrt(var / (repeats - 1)) : 0.0;
    rows.push_back(row);
  }
  return rows;
}

inline std::string method_label(const StepMethod& m) {
  switch (m.kind) {
    case MethodKind::chi: return "CHI (" + std::to_string(m.order) + "th)";
    case MethodKind::cvi: return "CVI (2nd)";
    case MethodKind::rk4: return "Runge-Kutta (4th)";
    case MethodKind::midpoint: return "Midpoint (2nd)";
  }
  return "?";
}

// Aligned plain-text table: integrator, mean time, standard deviation.
inline std::string format_benchmark_table(const std::vector<BenchmarkRow>& rows) {
  const int repeats = rows.empty() ? 0 : rows.front().repeats;
  const std::string mean_head =
      "Mean time (from " + std::to_string(repeats) + " runs)";
  char line[256];
  std::string out;
  std::snprintf(line, sizeof line, "%-26s %-26s %s\n", "Integrator type (order)",
                mean_head.c_str(), "Standard deviation");
  out += line;
  for (const auto& row : rows) {
    std::string label = method_label(row.method);
    if (row.method.kind == MethodKind::chi && row.method.order == 2) {
      label = "CHI (2nd)";
    }
    char mean[32], sd[32];
    std::snprintf(mean, sizeof mean, "%.4f", row.mean_seconds);
    std::snprintf(sd, sizeof sd, "+- %.4f", row.std_seconds);
    std::snprintf(line, sizeof line, "%-26s %-26s %s\n", label.c_str(), mean, sd);
    out += line;
  }
  return out;
}

}  // namespace contact::diagnostics
