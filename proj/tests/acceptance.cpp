// One PASS/FAIL line per acceptance criterion; nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "contact/contact.hpp"
#include "contact_cli/commands.hpp"
#include "oracles.hpp"

using namespace contact;
using testing::StateSampler;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "FAILED ") + what;
  }
};

std::string num(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

double max_abs_diff(const ContactState& a, const ContactState& b) {
  return (a.packed() - b.packed()).lpNorm<Eigen::Infinity>();
}

// 1. Sub-flow exactness.
Outcome subflow_exactness() {
  Outcome out;
  StateSampler sampler(101);
  struct Case {
    std::string name;
    std::shared_ptr<SeparableContactModel> model;
    testing::Pieces pieces;
    std::function<ContactState()> sample;
  };
  const std::vector<Case> cases{
      {"kepler", std::make_shared<PerturbedKepler>(PerturbedKepler::Params{1.0, 0.05, M_PI, 1e-10}),
       testing::kepler_pieces(1.0, 0.05, M_PI), [&] { return sampler.kepler(); }},
      {"quadratic", std::make_shared<QuadraticActionOscillator>(),
       testing::quadratic_pieces(1.0, 18.0), [&] { return sampler.oscillator(); }},
      {"linear", std::make_shared<LinearDampedOscillator>(), testing::linear_pieces(1.0, 0.2),
       [&] { return sampler.linear(); }},
  };
  for (const auto& c : cases) {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const ContactState x = c.sample();
      const double tau = sampler.uniform(0.01, 0.5);
      const auto p = testing::to_point(x);
      worst = std::max(worst, testing::relative_error(
                                  c.model->action_flow(x, tau),
                                  testing::brute_force_flow(testing::action_field(c.pieces, x.t), p, tau)));
      worst = std::max(worst, testing::relative_error(
                                  step_B(*c.model, x, tau),
                                  testing::brute_force_flow(testing::potential_field(c.pieces, x.t), p, tau)));
      worst = std::max(worst, testing::relative_error(
                                  step_C(x, tau),
                                  testing::brute_force_flow(testing::kinetic_field(c.pieces), p, tau)));
    }
    out.check(worst <= 1e-9, c.name + " max rel err " + num(worst));
  }
  return out;
}

// 2. Convergence orders against the analytic damped oscillator.
Outcome convergence_orders() {
  Outcome out;
  LinearDampedOscillator lin;
  const auto x0 = make_state({1.0}, {0.0}, 0.0);
  const auto exact = damped_oscillator_exact_state(lin, x0, 10.0);
  const std::vector<double> taus{0.2, 0.1, 0.05, 0.025};
  const std::vector<std::tuple<std::string, double, double>> expected{
      {"chi2", 2.0, 0.2}, {"cvi2", 2.0, 0.2}, {"chi4", 4.0, 0.3},
      {"chi6", 6.0, 0.5}, {"rk4", 4.0, 0.3},  {"midpoint", 2.0, 0.2}};
  for (const auto& [id, slope, tol] : expected) {
    const auto r =
        diagnostics::convergence_order(lin, *parse_method(id), x0, 10.0, taus, exact);
    out.check(std::abs(r.slope - slope) <= tol, id + " " + num(r.slope));
  }
  return out;
}

// 3. Contact preservation of single steps.
Outcome contact_preservation() {
  Outcome out;
  StateSampler sampler(103);
  const PerturbedKepler kep({1.0, 0.05, M_PI, 1e-10});
  const QuadraticActionOscillator osc;
  const LinearDampedOscillator lin;
  auto run = [&](const std::string& name, const SeparableContactModel& model,
                 const std::function<ContactState()>& sample) {
    double chi = 0.0, cvi = 0.0;
    for (int i = 0; i < 100; ++i) {
      const ContactState x = sample();
      chi = std::max(chi, contact_form_defect(
                              [&](const ContactState& y) { return chi2_step(model, y, 0.1); },
                              x, 1e-6));
      cvi = std::max(cvi, contact_form_defect(
                              [&](const ContactState& y) { return cvi2_step(model, y, 0.1); },
                              x, 1e-6));
    }
    out.check(chi <= 1e-6 && cvi <= 1e-6,
              name + " chi2 " + num(chi, 2) + " cvi2 " + num(cvi, 2));
  };
  run("kepler", kep, [&] { return sampler.kepler(); });
  run("quadratic", osc, [&] { return sampler.oscillator(); });
  run("linear", lin, [&] { return sampler.linear(); });
  return out;
}

// 4. Equality of the two discrete momenta along a CVI2 trajectory.
Outcome momentum_identity() {
  Outcome out;
  const QuadraticActionOscillator osc;
  const double tau = 0.1;
  std::vector<ContactState> xs{make_state({3.0}, {2.0}, 1.0)};
  for (int k = 0; k < 1000; ++k) xs.push_back(cvi2_step(osc, xs.back(), tau));
  double worst = 0.0, p_max = 0.0;
  for (std::size_t k = 1; k + 1 < xs.size(); ++k) {
    const auto before = discrete_momenta(osc, xs[k - 1].q, xs[k].q, xs[k - 1].s, xs[k].s,
                                         xs[k - 1].t, tau);
    const auto after = discrete_momenta(osc, xs[k].q, xs[k + 1].q, xs[k].s, xs[k + 1].s,
                                        xs[k].t, tau);
    worst = std::max(worst, (before.p_minus - after.p_plus).lpNorm<Eigen::Infinity>());
    p_max = std::max(p_max, xs[k].p.lpNorm<Eigen::Infinity>());
  }
  out.check(worst <= 1e-12 * p_max,
            "max|p- - p+| " + num(worst, 3) + " vs bound " + num(1e-12 * p_max, 3));
  return out;
}

// 5. Adherence to the invariant sphere.
Outcome invariant_sphere() {
  Outcome out;
  const QuadraticActionOscillator osc;
  std::vector<ContactState> starts;
  const double r = 6.0 / std::sqrt(3.0);
  for (int sq : {-1, 1}) {
    for (int sp : {-1, 1}) {
      for (int ss : {-1, 1}) starts.push_back(make_state({sq * r}, {sp * r}, ss * r));
    }
  }
  for (const std::string id : {"chi2", "cvi2"}) {
    auto worst_at = [&](double tau) {
      double worst = 0.0;
      for (const auto& x0 : starts) {
        const auto traj = integrate(osc, *parse_method(id), x0, tau, 500.0);
        if (!traj.completed()) return std::numeric_limits<double>::infinity();
        for (const auto& x : traj.samples) {
          worst = std::max(worst, diagnostics::sphere_distance(x, 1.0, 18.0));
        }
      }
      return worst;
    };
    const double d1 = worst_at(0.1), d2 = worst_at(0.05);
    out.check(d1 <= 0.1 && d1 / d2 >= 2.5,
              id + " max dist " + num(d1, 3) + ", ratio " + num(d1 / d2, 3));
  }
  return out;
}

// 6. Location and stability of the poles of the discrete maps.
Outcome fixed_points() {
  Outcome out;
  const QuadraticActionOscillator osc;
  const double C = 18.0;
  for (const std::string id : {"chi2", "cvi2"}) {
    std::vector<double> dist;
    std::string paper;
    for (double tau : {0.05, 0.1, 0.2}) {
      const StateMap map = [&](const ContactState& x) {
        return id == "chi2" ? chi2_step(osc, x, tau) : cvi2_step(osc, x, tau);
      };
      const auto n = diagnostics::numerical_fixed_point(map, make_state({0.1}, {0.1}, 5.5));
      const auto s = diagnostics::numerical_fixed_point(map, make_state({0.1}, {0.1}, -5.5));
      const double dn = std::abs(n.state.s - 6.0);
      const double bound = 0.5 * tau * tau * C;
      out.check(dn <= bound && std::abs(n.state.q(0)) < 1e-9 && std::abs(n.state.p(0)) < 1e-9,
                id + " tau=" + num(tau, 2) + " N s*=" + num(n.state.s, 6));
      out.check(n.stable(), id + " tau=" + num(tau, 2) + " N max|lambda|=" +
                                num(n.eigenvalue_moduli.front(), 4));
      out.check(std::abs(s.state.s + 6.0) <= bound && !s.stable(),
                id + " tau=" + num(tau, 2) + " S s*=" + num(s.state.s, 6) +
                    " max|lambda|=" + num(s.eigenvalue_moduli.front(), 4));
      dist.push_back(dn);
      paper += (paper.empty() ? "" : ",") +
               num(std::abs(n.state.s - diagnostics::oscillator_fixed_points(1.0, C, tau).shifted), 2);
    }
    // O(tau^2): each doubling of tau at most about quadruples the distance; a
    // map that keeps the pole exactly has zero distance at every step size.
    const bool scaling = dist[2] <= 1e-10 ||
                         (std::abs(dist[1] / dist[0] - 4.0) < 0.6 &&
                          std::abs(dist[2] / dist[1] - 4.0) < 0.6);
    out.check(scaling, id + " |s*-6| = " + num(dist[0], 3) + "," + num(dist[1], 3) + "," +
                           num(dist[2], 3) + " (distance to closed-form shifted pole: " + paper +
                           ")");
  }
  return out;
}

// 7. Stiffness ordering of the stability scan.
Outcome stiffness_ordering() {
  Outcome out;
  const QuadraticActionOscillator osc;
  std::vector<double> grid;
  for (int k = 1; k <= 12; ++k) grid.push_back(0.05 * k);
  const auto reports = diagnostics::stability_scan(
      osc, {StepMethod::rk4(), StepMethod::cvi(), StepMethod::chi()},
      make_state({0.0}, {-1.0}, -7.0), grid, 500.0, 100.0);
  auto tau_of = [](const diagnostics::StabilityReport& r) {
    return r.max_stable_tau.value_or(0.0);
  };
  const double rk = tau_of(reports[0]), cvi = tau_of(reports[1]), chi = tau_of(reports[2]);
  std::string stable_sets;
  for (const auto& r : reports) {
    stable_sets += " " + method_id(r.method) + "{";
    bool first = true;
    for (const auto& run : r.runs) {
      if (!run.stable()) continue;
      stable_sets += (first ? "" : ",") + num(run.tau, 2);
      first = false;
    }
    stable_sets += "}";
  }
  out.check(rk <= cvi && cvi <= chi && rk < chi,
            "max_stable_tau rk4 " + num(rk, 2) + " cvi2 " + num(cvi, 2) + " chi2 " +
                num(chi, 2) + "; stable:" + stable_sets);
  return out;
}

struct RadiusRun {
  RunStatus status;
  std::optional<double> t_fail;
  double r_min = std::numeric_limits<double>::infinity();
  double r_max = 0.0;
};

RadiusRun kepler_run(const PerturbedKepler& kep, const StepMethod& m, double tau,
                     double t_end) {
  RadiusRun rr;
  IntegrateOptions opt;
  opt.sample_every = std::numeric_limits<std::uint64_t>::max();
  opt.accept = [&](const ContactState& x) {
    const double r = x.q.norm();
    rr.r_min = std::min(rr.r_min, r);
    rr.r_max = std::max(rr.r_max, r);
    return true;
  };
  const auto traj = integrate(kep, m, make_state({1.0, 0.0}, {0.0, 1.0}, 0.0), tau, t_end, opt);
  rr.status = traj.status;
  rr.t_fail = traj.t_fail;
  return rr;
}

// 8. Kepler blow-up at a large step.
Outcome kepler_blowup() {
  Outcome out;
  const PerturbedKepler kep({1.0, 0.05, M_PI, 1e-10});
  const auto rk = kepler_run(kep, StepMethod::rk4(), 0.3, 1000.0);
  out.check(rk.status != RunStatus::completed,
            "rk4 status " + std::string(to_string(rk.status)) + " r in [" + num(rk.r_min) +
                ", " + num(rk.r_max) + "]");
  for (const std::string id : {"chi2", "cvi2", "chi6"}) {
    const auto rr = kepler_run(kep, *parse_method(id), 0.3, 5000.0);
    out.check(rr.status == RunStatus::completed && rr.r_min >= 0.1 && rr.r_max <= 10.0,
              id + " " + std::string(to_string(rr.status)) + " r in [" + num(rr.r_min) + ", " +
                  num(rr.r_max) + "]");
  }
  return out;
}

// 9. Long-time Kepler behaviour.
Outcome kepler_long_time() {
  Outcome out;
  const PerturbedKepler forced({1.0, 0.01, M_PI, 1e-10});
  for (const std::string id : {"chi2", "cvi2"}) {
    const auto rr = kepler_run(forced, *parse_method(id), 0.1, 20000.0);
    out.check(rr.status == RunStatus::completed && rr.r_min >= 0.1 && rr.r_max <= 10.0,
              id + " forced r in [" + num(rr.r_min) + ", " + num(rr.r_max) + "]");
  }
  const PerturbedKepler unforced({1.0, 0.0, M_PI, 1e-10});
  for (const std::string id : {"chi2", "cvi2"}) {
    IntegrateOptions opt;
    opt.sample_every = 10;
    double max_dl = 0.0;
    std::optional<double> last_l;
    opt.accept = [&](const ContactState& x) {
      const double l = x.q(0) * x.p(1) - x.q(1) * x.p(0);
      if (last_l) max_dl = std::max(max_dl, std::abs(l - *last_l));
      last_l = l;
      return true;
    };
    const auto traj = integrate(unforced, *parse_method(id),
                                make_state({1.0, 0.0}, {0.0, 1.0}, 0.0), 0.1, 20000.0, opt);
    const double slope = diagnostics::energy_drift_slope(traj, 1.0);
    out.check(traj.completed() && std::abs(slope) <= 1e-8 && max_dl <= 1e-10,
              id + " unforced energy slope " + num(slope, 3) + ", max |dL| per step " +
                  num(max_dl, 3));
  }
  return out;
}

// 10. Evaluation counts per step and the Table 1 report.
Outcome cost_accounting() {
  Outcome out;
  const QuadraticActionOscillator osc;
  const auto x0 = make_state({0.0}, {-1.0}, -7.0);
  const std::uint64_t n = 5000;
  auto counters = [&](const StepMethod& m) {
    return integrate(osc, m, x0, 0.1, 500.0).counters;
  };
  const auto chi = counters(StepMethod::chi());
  out.check(chi.grad_V_evals == 2 * n, "chi2 gradV/step " + num(chi.grad_V_evals / double(n)));
  const auto cvi = counters(StepMethod::cvi());
  // One new gradient per step after the first.
  out.check(cvi.grad_V_evals == n + 1,
            "cvi2 gradV/step with reuse " + num(cvi.grad_V_evals / double(n), 6));
  CountingModel counted(osc);
  ContactState x = x0;
  for (std::uint64_t k = 0; k < n; ++k) x = cvi2_step(counted, x, 0.1);
  out.check(counted.counters().grad_V_evals == 2 * n,
            "cvi2 gradV/step without reuse " +
                num(counted.counters().grad_V_evals / double(n)));
  const auto rk = counters(StepMethod::rk4());
  out.check(rk.vector_field_evals == 4 * n,
            "rk4 field evals/step " + num(rk.vector_field_evals / double(n)));
  const auto mid = counters(StepMethod::midpoint());
  out.check(mid.vector_field_evals == 2 * n,
            "midpoint field evals/step " + num(mid.vector_field_evals / double(n)));

  const auto dir = std::filesystem::temp_directory_path() / "contact_acceptance_table1";
  std::ostringstream table, err;
  const int code =
      cli::run_cli({"--quiet", "--output", dir.string(), "preset", "table1"}, table, err);
  const std::string t = table.str();
  int rows = 0;
  for (const char* label : {"CHI (2nd)", "CVI (2nd)", "Runge-Kutta (4th)", "Midpoint (2nd)"}) {
    rows += t.find(label) != std::string::npos ? 1 : 0;
  }
  out.check(code == 0 && rows == 4 && t.find("Mean time (from 10 runs)") != std::string::npos,
            "preset table1 exit " + std::to_string(code) + ", " + std::to_string(rows) +
                " rows");
  std::printf("%s", t.c_str());
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 sub-flow exactness", subflow_exactness},
      {"2 convergence orders", convergence_orders},
      {"3 contact preservation", contact_preservation},
      {"4 discrete momentum identity", momentum_identity},
      {"5 invariant sphere", invariant_sphere},
      {"6 fixed points", fixed_points},
      {"7 stiffness ordering", stiffness_ordering},
      {"8 Kepler blow-up", kepler_blowup},
      {"9 long-time Kepler stability", kepler_long_time},
      {"10 cost accounting", cost_accounting},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s [%s] (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), secs,
                o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
