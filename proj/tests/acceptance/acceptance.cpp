// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "liepulse/decomposition.hpp"
#include "liepulse/linalg.hpp"
#include "liepulse/pulses.hpp"
#include "liepulse/simulate.hpp"
#include "liepulse/targets.hpp"
#include "oracles.hpp"

using namespace liepulse;

namespace {

constexpr double kPi = std::numbers::pi;
const double kS2 = std::sqrt(2.0), kS3 = std::sqrt(3.0), kS6 = std::sqrt(6.0);
const double kL1 = std::sqrt(3 + kS6), kL2 = std::sqrt(3 - kS6);

struct Check {
  bool ok = true;
  std::string detail;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
  void near(double got, double want, double tol, const std::string& what) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s: got %.15g, expected %.15g (tol %.1e)", what.c_str(), got, want, tol);
    expect(std::abs(got - want) <= tol, buf);
  }
};

const SystemModel& morse4() {
  static const SystemModel s = morse_system(4, 0.1);
  return s;
}

ComplexMatrix superposition_u1() {
  return ComplexMatrix{{0.5, -kS3 / 6, -kS6 / 6, -kS2 / 2},
                       {0.5, kS3 / 2, 0.0, 0.0},
                       {0.5, -kS3 / 6, kS6 / 3, 0.0},
                       {0.5, -kS3 / 6, -kS6 / 6, kS2 / 2}};
}

ComplexMatrix dipole_u1_theta() {
  const ComplexMatrix u1{{1 / (2 * kL1), 1 / (2 * kL2), 1 / (2 * kL2), 1 / (2 * kL1)},
                         {0.5, 0.5, -0.5, -0.5},
                         {(kS2 + kS3) / (2 * kL1), (kS2 - kS3) / (2 * kL2), (kS2 - kS3) / (2 * kL2),
                          (kS2 + kS3) / (2 * kL1)},
                         {0.5, -0.5, 0.5, -0.5}};
  return u1 * ComplexMatrix::diagonal(std::vector<Complex>{1.0, -1.0, 1.0, -1.0});
}

PulseSchedule square_schedule(const DecompositionResult& d, double slot = 200.0, double tau0 = 30.0) {
  return synthesize(d, morse4(), PulseShape::square_erf(tau0), slot * static_cast<double>(d.factors.size()));
}

void check_factors(Check& c, const DecompositionResult& d, const std::vector<int>& transitions,
                   const std::vector<double>& angles, double tol) {
  c.expect(d.factors.size() == angles.size(), "factor count " + std::to_string(d.factors.size()));
  if (!c.ok) return;
  for (std::size_t k = 0; k < angles.size(); ++k) {
    c.expect(d.factors[k].transition == transitions[k], "transition of factor " + std::to_string(k + 1));
    c.near(std::abs(d.factors[k].angle), angles[k], tol, "|C_" + std::to_string(k + 1) + "|");
  }
}

Check criterion1() {
  Check c;
  const auto d = decompose(superposition_u1(), DecompositionMode::mod_phase);
  check_factors(c, d, {1, 2, 3, 2, 1}, {kPi / 3, std::atan(kS2), kPi / 4, kPi / 2, kPi / 2}, 1e-12);
  return c;
}

Check criterion2() {
  Check c;
  const auto d = decompose(dipole_u1_theta(), DecompositionMode::mod_phase);
  const double c3 = std::atan(3.0 / (kS6 - kS3 + 3 * kS2));
  const double c5 = std::atan(std::sqrt(4 + kS6) / (kS2 + kS3));
  const double c6 = std::atan(1.0 / std::sqrt(3 + kS6));
  check_factors(c, d, {1, 2, 1, 3, 2, 1}, {kPi / 4, std::atan(kS2), c3, kPi / 3, c5, c6}, 1e-10);
  return c;
}

Check criterion3() {
  Check c;
  std::mt19937_64 rng(2024);
  const auto start = std::chrono::steady_clock::now();
  double worst_mod = 0.0, worst_exact = 0.0;
  for (std::size_t n = 2; n <= 8; ++n) {
    const std::size_t pairs = n * (n - 1) / 2;
    for (int rep = 0; rep < 200; ++rep) {
      const auto u = oracle::haar_unitary(n, rng);
      const auto dm = decompose(u, DecompositionMode::mod_phase);
      const auto de = decompose(u, DecompositionMode::exact);
      worst_mod = std::max(worst_mod,
                           unitary_distance(reconstruct(dm, n), u, PhaseEquivalence::mod_diagonal_phases));
      worst_exact = std::max(worst_exact, unitary_distance(reconstruct(de, n), u, PhaseEquivalence::exact));
      c.expect(dm.factors.size() <= pairs, "mod_phase factor count exceeds N(N-1)/2");
      c.expect(de.factors.size() <= pairs + 2 * (n - 1), "exact factor count exceeds N(N-1)/2 + 2(N-1)");
    }
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.expect(worst_mod <= 1e-10, "mod_phase residual " + std::to_string(worst_mod));
  c.expect(worst_exact <= 1e-10, "exact residual " + std::to_string(worst_exact));
  c.expect(seconds < 10.0, "runtime " + std::to_string(seconds) + " s");
  char buf[128];
  std::snprintf(buf, sizeof buf, "residuals %.2e / %.2e, %.2f s", worst_mod, worst_exact, seconds);
  if (c.ok) c.detail = buf;
  return c;
}

Check criterion4() {
  Check c;
  const auto d = target_population_transfer(morse4());
  const auto s0 = EnsembleState::ground(4);
  const auto sq = propagate_rwa(square_schedule(d), morse4(), s0);
  c.expect(sq.populations.back()[3] >= 1 - 1e-6, "square P4 " + std::to_string(sq.populations.back()[3]));
  for (std::size_t i = 1; i < sq.samples(); ++i)
    c.expect(sq.energy[i] >= sq.energy[i - 1] - 1e-6, "energy decreases at t = " + std::to_string(sq.times[i]));
  c.near(sq.energy.back(), 2.275, 1e-6, "final energy");
  const auto ga = propagate_rwa(synthesize(d, morse4(), PulseShape::gaussian(), 600.0), morse4(), s0);
  c.expect(ga.populations.back()[3] >= 0.996, "gaussian P4 " + std::to_string(ga.populations.back()[3]));
  if (c.ok) c.detail = "P4 square " + std::to_string(sq.populations.back()[3]) + ", gaussian " +
                       std::to_string(ga.populations.back()[3]);
  return c;
}

Check criterion5() {
  Check c;
  const auto d = target_inversion(morse4());
  const auto s0 = boltzmann_ensemble(morse4());
  const auto w = s0.populations();
  const auto pw = propagate_piecewise(d, morse4(), s0, 1200.0).populations();
  for (std::size_t n = 0; n < 4; ++n) c.near(pw[n], w[3 - n], 1e-12, "piecewise level " + std::to_string(n + 1));

  const auto rwa = propagate_rwa(square_schedule(d), morse4(), s0);
  for (std::size_t n = 0; n < 4; ++n)
    c.near(rwa.populations.back()[n], w[3 - n], 1e-6, "rwa level " + std::to_string(n + 1));

  // population index held by each level after each pulse
  const int table[7][4] = {{0, 1, 2, 3}, {1, 0, 2, 3}, {1, 2, 0, 3}, {1, 2, 3, 0},
                           {2, 1, 3, 0}, {2, 3, 1, 0}, {3, 2, 1, 0}};
  for (int k = 0; k <= 6; ++k) {
    const double t = 200.0 * k;
    const auto it = std::min_element(rwa.times.begin(), rwa.times.end(),
                                     [&](double a, double b) { return std::abs(a - t) < std::abs(b - t); });
    const auto& pop = rwa.populations[static_cast<std::size_t>(it - rwa.times.begin())];
    c.expect(std::abs(*it - t) < 1e-9, "no sample at slot boundary " + std::to_string(t));
    for (int n = 0; n < 4; ++n)
      c.near(pop[n], w[table[k][n]], 1e-6, "slot " + std::to_string(k) + " level " + std::to_string(n + 1));
  }
  return c;
}

Check criterion6() {
  Check c;
  const auto sup = target_superposition({0.5, 0.5, 0.5, 0.5}, {0, 0, 0, 0}, morse4());
  const auto s0 = EnsembleState::ground(4);
  TraceTargets targets;
  targets.target_state = sup.state;
  const auto tr = trace_metrics(propagate_rwa(square_schedule(sup.decomposition), morse4(), s0), morse4(), targets);
  c.near(tr.overlap->back(), 1.0, 1e-6, "overlap");

  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (int rep = 0; rep < 5; ++rep) {
    std::vector<double> phi(5);
    for (auto& p : phi) p = u(rng);
    DecompositionResult d = sup.decomposition;
    for (std::size_t k = 0; k < 5; ++k) d.factors[k].phase = phi[k];
    const auto run = propagate_rwa(square_schedule(d), morse4(), s0);
    const ComplexVector amp = run.propagators.back().column(0);
    const double expected_phase[4] = {phi[3] + phi[4] - phi[0] - phi[1], -kPi / 2 - phi[4], kPi - phi[0] - phi[3],
                                      kPi / 2 - phi[0] - phi[1] - phi[2]};
    for (std::size_t n = 0; n < 4; ++n) {
      c.near(std::abs(amp[n]), 0.5, 1e-6, "modulus of level " + std::to_string(n + 1));
      c.near(std::abs(amp[n] - std::polar(0.5, expected_phase[n])), 0.0, 2e-6,
             "amplitude of level " + std::to_string(n + 1));
    }
  }
  return c;
}

Check criterion7() {
  Check c;
  const auto& sys = morse4();
  const auto s0 = boltzmann_ensemble(sys);
  const auto w = s0.populations();
  const double lambda[4] = {kL1, kL2, -kL2, -kL1};
  double bound = 0.0;
  for (int n = 0; n < 4; ++n) bound += w[n] * lambda[n];
  const double flipped = w[0] * lambda[1] + w[1] * lambda[0] + w[2] * lambda[2] + w[3] * lambda[3];

  TraceTargets targets;
  targets.observable = transition_dipole_observable(sys);
  const auto d = decompose(dipole_u1_theta(), DecompositionMode::mod_phase);
  const auto tr = trace_metrics(propagate_rwa(square_schedule(d), sys, s0), sys, targets);
  c.near(tr.observable->back(), bound, 1e-6, "<A(T)>");
  c.near(kinematical_bounds(*targets.observable, s0).max, bound, 1e-10, "kinematical maximum");

  const auto probe = phase_flip_probe(d, 1, kPi / 2);
  const auto tf = trace_metrics(propagate_rwa(square_schedule(probe), sys, s0), sys, targets);
  c.near(tf.observable->back(), flipped, 1e-6, "flip probe <A(T)>");
  c.expect(tf.observable->back() < bound - 1e-3, "flip probe not below the bound");
  char buf[128];
  std::snprintf(buf, sizeof buf, "<A> %.9f (bound %.9f), flipped %.9f", tr.observable->back(), bound,
                tf.observable->back());
  if (c.ok) c.detail = buf;
  return c;
}

Check criterion8() {
  Check c;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> angle(0.05, kPi), tau(1.0, 60.0), extra(0.0, 400.0);
  std::uniform_int_distribution<int> trans(1, 3);
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    DecompositionResult d;
    d.factors.push_back({trans(rng), angle(rng), 0.0});
    const double t0 = tau(rng);
    const auto p = synthesize(d, morse4(), PulseShape::square_erf(t0), 2 * t0 + extra(rng)).pulses[0];
    const double want = 2 * d.factors[0].angle / p.dipole;
    worst = std::max(worst, std::abs(envelope_area(p) - want) / want);
  }
  c.expect(worst <= 1e-8, "rectangle identity relative error " + std::to_string(worst));
  for (double slot : {100.0, 200.0, 800.0}) {
    DecompositionResult d;
    d.factors.push_back({2, kPi / 2, 0.0});
    const auto g4 = synthesize(d, morse4(), PulseShape::gaussian(4.0 / slot), slot).pulses[0];
    const auto g6 = synthesize(d, morse4(), PulseShape::gaussian(6.0 / slot), slot).pulses[0];
    c.expect(pulse_area(g4) / (kPi / 2) >= 0.99, "q = 4/dt captures less than 99%");
    c.expect(pulse_area(g6) / (kPi / 2) >= 0.9999, "q = 6/dt captures less than 99.99%");
    c.near(pulse_area(g4) / (kPi / 2), 0.995322, 1e-6, "q = 4/dt fraction");
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "worst rectangle error %.2e", worst);
  if (c.ok) c.detail = buf;
  return c;
}

Check criterion9() {
  Check c;
  const auto d = target_population_transfer(morse4());
  const auto sch = square_schedule(d);
  const auto guard = detuning_guard(sch, morse4());
  for (const auto& g : guard) {
    c.expect(g.margin >= 10.0 && g.margin <= 11.0, "margin " + std::to_string(g.margin));
    c.expect(!g.flagged, "worked example flagged");
  }
  c.near(2 * sch.pulses[0].half_amplitude, kPi / 170, 1e-15, "Rabi rate");
  const auto s0 = EnsembleState::ground(4);
  const double p4 = propagate_labframe(sch, morse4(), s0).populations.back()[3];
  c.expect(p4 >= 0.99, "lab-frame P4 " + std::to_string(p4));
  const auto fast = square_schedule(d, 20.0, 3.0);
  const double p4_fast = propagate_labframe(fast, morse4(), s0).populations.back()[3];
  c.expect(p4_fast < 0.99, "compressed lab-frame P4 " + std::to_string(p4_fast));
  c.expect(!fast.warnings.empty(), "compressed schedule not flagged");
  char buf[128];
  std::snprintf(buf, sizeof buf, "margin %.3f, P4 lab %.6f, compressed %.6f", guard.front().margin, p4, p4_fast);
  if (c.ok) c.detail = buf;
  return c;
}

Check criterion10() {
  Check c;
  const auto d = target_population_transfer(morse4());
  const auto sch = square_schedule(d);
  const auto exact = factor_product(d.factors, 4);
  const auto err = [&](int steps) {
    return oracle::max_abs_diff(propagate_rwa(sch, morse4(), EnsembleState::ground(4), steps).propagators.back(),
                                exact);
  };
  const double coarse = err(100), fine = err(200);
  c.expect(fine > 0.0 && coarse / fine >= 8.0, "error ratio " + std::to_string(coarse / fine));
  char buf[128];
  std::snprintf(buf, sizeof buf, "error %.3e -> %.3e, ratio %.2f", coarse, fine, coarse / fine);
  if (c.ok) c.detail = buf;
  return c;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Check()>>> criteria{
      {"decomposition constants of the superposition target", criterion1},
      {"decomposition constants of the dipole eigenbasis", criterion2},
      {"reconstruction of random unitaries", criterion3},
      {"population transfer", criterion4},
      {"population inversion", criterion5},
      {"superposition state", criterion6},
      {"observable maximization", criterion7},
      {"pulse area identities", criterion8},
      {"detuning guard and lab-frame leakage", criterion9},
      {"RK4 convergence", criterion10},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    try {
      c = criteria[i].second();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s %2zu %s%s%s\n", c.ok ? "PASS" : "FAIL", i + 1, criteria[i].first, c.detail.empty() ? "" : ": ",
                c.detail.c_str());
    failures += c.ok ? 0 : 1;
  }
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}
