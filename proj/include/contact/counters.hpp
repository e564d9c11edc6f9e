#pragma once

#include <cstdint>

#include "contact/model.hpp"

namespace contact {

struct EvalCounters {
  std::uint64_t grad_V_evals = 0;
  std::uint64_t V_evals = 0;
  std::uint64_t f_evals = 0;
  std::uint64_t df_ds_evals = 0;
  std::uint64_t vector_field_evals = 0;
  std::uint64_t a_map_evals = 0;

  friend bool operator==(const EvalCounters&, const EvalCounters&) = default;
};

// Forwards to a wrapped model and tallies every evaluation. One instance per
// run; the wrapped model stays immutable and shareable.
class CountingModel final : public SeparableContactModel {
 public:
  explicit CountingModel(const SeparableContactModel& inner) : inner_(inner) {}

  const EvalCounters& counters() const { return counters_; }
  void reset() { counters_ = {}; }
  const SeparableContactModel& inner() const { return inner_; }

  std::string_view name() const override { return inner_.name(); }
  Eigen::Index dim() const override { return inner_.dim(); }

  double potential(const Vector& q, double t) const override {
    ++counters_.V_evals;
    return inner_.potential(q, t);
  }
  Vector potential_gradient(const Vector& q, double t) const override {
    ++counters_.grad_V_evals;
    return inner_.potential_gradient(q, t);
  }
  double action_term(double s, double t) const override {
    ++counters_.f_evals;
    return inner_.action_term(s, t);
  }
  double action_term_ds(double s, double t) const override {
    ++counters_.df_ds_evals;
    return inner_.action_term_ds(s, t);
  }
  ContactState action_flow(const ContactState& state,
                           double tau) const override {
    ++counters_.a_map_evals;
    return inner_.action_flow(state, tau);
  }
  double potential_dt(const Vector& q, double t) const override {
    return inner_.potential_dt(q, t);
  }
  double action_term_dt(double s, double t) const override {
    return inner_.action_term_dt(s, t);
  }
  double solve_trapezoidal_action(double rhs, double tau,
                                  double t) const override {
    ++counters_.f_evals;
    return inner_.solve_trapezoidal_action(rhs, tau, t);
  }

  // Uses the base formula so the component evaluations are counted too.
  ContactVelocity vector_field(const ContactState& state) const override {
    ++counters_.vector_field_evals;
    return SeparableContactModel::vector_field(state);
  }

 private:
  const SeparableContactModel& inner_;
  mutable EvalCounters counters_;
};

}  // namespace contact
