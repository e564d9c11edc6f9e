#include <gtest/gtest.h>

#include "contact/contact.hpp"
#include "oracles.hpp"

namespace contact {
namespace {

using testing::FreeParticle;
using testing::StateSampler;

TEST(EtaAt, MatchesContactFormCoefficients) {
  EXPECT_EQ(eta_at(make_state({0.0}, {0.0}, 0.0)).coefficients,
            (Vector(3) << 0, 0, 1).finished());
  EXPECT_EQ(eta_at(make_state({5.0}, {3.0}, 1.0)).coefficients,
            (Vector(3) << -3, 0, 1).finished());
  const auto eta = eta_at(make_state({0.0, 0.0}, {1.0, -2.0}, 0.0));
  EXPECT_EQ(eta.coefficients, (Vector(5) << -1, 2, 0, 0, 1).finished());
  EXPECT_EQ(eta.dim(), 2);
}

TEST(ContactState, RejectsMismatchedDimensions) {
  EXPECT_THROW(ContactState(Vector::Zero(2), Vector::Zero(1), 0.0),
               ContactError);
  EXPECT_THROW(ContactState(Vector(0), Vector(0), 0.0), ContactError);
}

TEST(VectorField, NorthPoleIsFixed) {
  QuadraticActionOscillator osc;
  const auto v = contact_vector_field(osc, make_state({0.0}, {0.0}, 6.0));
  EXPECT_EQ(v.dq(0), 0.0);
  EXPECT_EQ(v.dp(0), 0.0);
  EXPECT_EQ(v.ds, 0.0);
  EXPECT_EQ(v.dt, 1.0);
}

TEST(VectorField, FreeParticle) {
  FreeParticle free;
  const auto v = contact_vector_field(free, make_state({1.0}, {2.0}, 0.0));
  EXPECT_EQ(v.dq(0), 2.0);
  EXPECT_EQ(v.dp(0), 0.0);
  EXPECT_EQ(v.ds, 2.0);
}

TEST(VectorField, KeplerCircularStart) {
  PerturbedKepler kep({1.0, 0.01, M_PI, 1e-10});
  const auto v =
      contact_vector_field(kep, make_state({1.0, 0.0}, {0.0, 1.0}, 0.0, 0.0));
  EXPECT_DOUBLE_EQ(v.dq(0), 0.0);
  EXPECT_DOUBLE_EQ(v.dq(1), 1.0);
  EXPECT_DOUBLE_EQ(v.dp(0), -1.0);
  EXPECT_DOUBLE_EQ(v.dp(1), 0.0);
  EXPECT_DOUBLE_EQ(v.ds, 1.5);
}

TEST(VectorField, DimensionMismatchIsRejected) {
  PerturbedKepler kep;
  EXPECT_THROW(contact_vector_field(kep, make_state({1.0}, {0.0}, 0.0)),
               ContactError);
}

TEST(VectorField, KeplerCollisionIsModelSingularity) {
  PerturbedKepler kep;
  try {
    contact_vector_field(kep, make_state({0.0, 0.0}, {1.0, 0.0}, 0.0));
    FAIL();
  } catch (const ContactError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ModelSingularity);
  }
}

TEST(Hamiltonian, Examples) {
  QuadraticActionOscillator osc;
  EXPECT_DOUBLE_EQ(hamiltonian(osc, make_state({0.0}, {0.0}, 6.0)), 0.0);
  EXPECT_DOUBLE_EQ(hamiltonian(osc, make_state({6.0}, {0.0}, 0.0)), 0.0);
  EXPECT_DOUBLE_EQ(hamiltonian(FreeParticle{}, make_state({0.0}, {2.0}, 0.0)),
                   2.0);
}

TEST(HamiltonianDrift, Examples) {
  QuadraticActionOscillator osc;
  EXPECT_DOUBLE_EQ(hamiltonian_drift(osc, make_state({0.0}, {0.0}, 6.0)), 0.0);
  EXPECT_DOUBLE_EQ(hamiltonian_drift(osc, make_state({0.0}, {0.0}, 0.0)), 0.0);
  EXPECT_DOUBLE_EQ(hamiltonian_drift(osc, make_state({0.0}, {0.0}, 7.0)),
                   -45.5);
  // Any point of H = 0 keeps H.
  EXPECT_NEAR(hamiltonian_drift(osc, make_state({3.0}, {3.0}, std::sqrt(18.0))),
              0.0, 1e-12);
}

// dq = dH/dp and dp = -dH/dq - p dH/ds against central differences of H.
TEST(VectorField, AgreesWithFiniteDifferencesOfHamiltonian) {
  StateSampler sampler(11);
  PerturbedKepler kep({1.0, 0.05, M_PI, 1e-10});
  QuadraticActionOscillator osc;
  LinearDampedOscillator lin;
  const std::vector<std::pair<const SeparableContactModel*, int>> models{
      {&kep, 0}, {&osc, 1}, {&lin, 2}};
  const double h = 1e-6;
  for (const auto& [model, kind] : models) {
    for (int i = 0; i < 100; ++i) {
      const ContactState x = kind == 0   ? sampler.kepler()
                             : kind == 1 ? sampler.oscillator()
                                         : sampler.linear();
      const auto v = contact_vector_field(*model, x);
      auto shifted = [&](auto mutate) {
        ContactState a = x, b = x;
        mutate(a, h);
        mutate(b, -h);
        return (hamiltonian(*model, a) - hamiltonian(*model, b)) / (2 * h);
      };
      const double dh_ds = shifted([](ContactState& y, double e) { y.s += e; });
      for (Eigen::Index j = 0; j < x.dim(); ++j) {
        const double dh_dp =
            shifted([j](ContactState& y, double e) { y.p(j) += e; });
        const double dh_dq =
            shifted([j](ContactState& y, double e) { y.q(j) += e; });
        EXPECT_NEAR(v.dq(j), dh_dp, 1e-6);
        EXPECT_NEAR(v.dp(j), -dh_dq - x.p(j) * dh_ds, 1e-6);
      }
      EXPECT_NEAR(v.ds, x.p.dot(v.dq) - hamiltonian(*model, x), 1e-12);
    }
  }
}

// dH/dt from a high-accuracy flow and a central difference in time.
TEST(HamiltonianDrift, MatchesReferenceFlow) {
  StateSampler sampler(12);
  QuadraticActionOscillator osc;
  LinearDampedOscillator lin;
  const auto osc_pieces = testing::quadratic_pieces(1.0, 18.0);
  const auto lin_pieces = testing::linear_pieces(1.0, 0.2);
  const double delta = 1e-4;
  for (int i = 0; i < 50; ++i) {
    for (int which = 0; which < 2; ++which) {
      const SeparableContactModel& model =
          which == 0 ? static_cast<const SeparableContactModel&>(osc) : lin;
      const auto& pieces = which == 0 ? osc_pieces : lin_pieces;
      const ContactState x = which == 0 ? sampler.oscillator() : sampler.linear();
      const auto field = testing::full_field(pieces, 0.0);
      auto h_at = [&](double span) {
        const auto y = testing::brute_force_flow(field, testing::to_point(x),
                                                 span, 1e-5);
        return hamiltonian(model, make_state({y[0]}, {y[2]}, y[4]));
      };
      const double fd = (h_at(delta) - h_at(-delta)) / (2 * delta);
      const double drift = hamiltonian_drift(model, x);
      EXPECT_LE(std::abs(fd - drift), 1e-5 * std::max(1.0, std::abs(drift)));
    }
  }
}

TEST(HamiltonianDrift, IncludesExplicitTimeDependence) {
  PerturbedKepler kep({1.0, 0.05, M_PI, 1e-10});
  const auto pieces = testing::kepler_pieces(1.0, 0.05, M_PI);
  StateSampler sampler(13);
  for (int i = 0; i < 20; ++i) {
    const ContactState x = sampler.kepler();
    // Non-autonomous field: integrate (x, t) together by tiny frozen-time
    // steps of the full field.
    auto h_at = [&](double span) {
      const int n = 2000;
      const double dt = span / n;
      auto y = testing::to_point(x);
      double t = x.t;
      for (int k = 0; k < n; ++k) {
        const auto f1 = testing::full_field(pieces, t)(y);
        const auto f2 = testing::full_field(pieces, t + 0.5 * dt)(
            testing::axpy(y, 0.5 * dt, f1));
        const auto f3 = testing::full_field(pieces, t + 0.5 * dt)(
            testing::axpy(y, 0.5 * dt, f2));
        const auto f4 =
            testing::full_field(pieces, t + dt)(testing::axpy(y, dt, f3));
        for (int c = 0; c < 5; ++c) {
          y[c] += dt / 6 * (f1[c] + 2 * f2[c] + 2 * f3[c] + f4[c]);
        }
        t += dt;
      }
      return hamiltonian(kep, make_state({y[0], y[1]}, {y[2], y[3]}, y[4], t));
    };
    const double delta = 1e-4;
    const double fd = (h_at(delta) - h_at(-delta)) / (2 * delta);
    const double drift = hamiltonian_drift(kep, x);
    EXPECT_LE(std::abs(fd - drift), 1e-5 * std::max(1.0, std::abs(drift)));
  }
}

TEST(ContactFormDefect, IdentityHasNoDefect) {
  StateSampler sampler(14);
  for (int i = 0; i < 10; ++i) {
    const auto x = sampler.kepler();
    // Finite-difference noise floor only.
    EXPECT_LE(contact_form_defect([](const ContactState& y) { return y; }, x),
              1e-9);
  }
}

TEST(ContactFormDefect, CollapsedMapIsDegenerate) {
  const auto x = make_state({1.0}, {0.5}, 0.0);
  const StateMap collapse = [](const ContactState& y) {
    return ContactState(Vector::Zero(1), Vector::Zero(1), 0.0, y.t);
  };
  try {
    contact_form_defect(collapse, x);
    FAIL();
  } catch (const ContactError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateForm);
  }
}

TEST(ContactFormDefect, SplittingStepIsContact) {
  QuadraticActionOscillator osc;
  StateSampler sampler(15);
  for (int i = 0; i < 20; ++i) {
    const auto x = sampler.oscillator();
    EXPECT_LE(contact_form_defect(
                  [](const auto& m, const auto& y, double tau) {
                    return chi2_step(m, y, tau);
                  },
                  osc, x, 0.1, 1e-6),
              1e-6);
  }
}

TEST(ContactFormDefect, RungeKuttaIsWorseThanSplitting) {
  QuadraticActionOscillator osc;
  StateSampler sampler(16);
  for (int i = 0; i < 20; ++i) {
    const auto x = make_state({sampler.uniform(-2, 2)}, {sampler.uniform(-2, 2)},
                              sampler.uniform(4.0, 5.0));
    const double chi = contact_form_defect(
        [](const auto& m, const auto& y, double tau) {
          return chi2_step(m, y, tau);
        },
        osc, x, 0.3);
    const double rk = contact_form_defect(
        [](const auto& m, const auto& y, double tau) { return rk4_step(m, y, tau); },
        osc, x, 0.3);
    EXPECT_GT(rk, chi);
    EXPECT_GT(rk, 1e-5);
  }
}

}  // namespace
}  // namespace contact
