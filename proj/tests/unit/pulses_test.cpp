#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "liepulse/errors.hpp"
#include "liepulse/pulses.hpp"
#include "liepulse/targets.hpp"

using namespace liepulse;
constexpr double kPi = std::numbers::pi;

namespace {

DecompositionResult single(double angle, double phase = 0.0, int transition = 1) {
  DecompositionResult d;
  d.factors.push_back({transition, angle, phase});
  d.residual_phases.assign(4, 0.0);
  return d;
}

const SystemModel& morse4() {
  static const SystemModel s = morse_system(4, 0.1);
  return s;
}

}  // namespace

TEST(Synthesize, SquareAmplitudeFromAreaConstraint) {
  const auto sch = synthesize(single(kPi / 2), morse4(), PulseShape::square_erf(30.0), 200.0);
  ASSERT_EQ(sch.pulses.size(), 1u);
  const Pulse& p = sch.pulses[0];
  EXPECT_NEAR(p.half_amplitude, (kPi / 2) / 170.0, 1e-15);
  EXPECT_NEAR(2 * p.half_amplitude, kPi / 170.0, 1e-15);
  EXPECT_EQ(p.carrier, morse4().transition_frequency(1));
  EXPECT_EQ(p.duration, 200.0);
  EXPECT_TRUE(sch.warnings.empty());
}

TEST(Synthesize, GaussianAmplitude) {
  const auto sch = synthesize(single(kPi / 2), morse4(), PulseShape::gaussian(0.02), 200.0);
  EXPECT_NEAR(sch.pulses[0].half_amplitude, 0.02 * (kPi / 2) / std::sqrt(kPi), 1e-15);
  const auto autoq = synthesize(single(kPi / 2), morse4(), PulseShape::gaussian(), 200.0);
  EXPECT_NEAR(autoq.pulses[0].shape_factor, 4.0 / 200.0, 1e-15);
}

TEST(Synthesize, DipoleScalesAmplitude) {
  const auto sch = synthesize(single(kPi / 2, 0.0, 3), morse4(), PulseShape::square_erf(30.0), 200.0);
  EXPECT_NEAR(sch.pulses[0].half_amplitude, (kPi / 2) / (std::sqrt(3.0) * 170.0), 1e-15);
}

TEST(Synthesize, EmptyDecomposition) {
  const auto sch = synthesize(DecompositionResult{}, morse4(), PulseShape::square_erf(30.0), 0.0);
  EXPECT_TRUE(sch.pulses.empty());
  EXPECT_EQ(sch.total_time, 0.0);
}

TEST(Synthesize, Errors) {
  EXPECT_THROW(synthesize(single(1.0), morse4(), PulseShape::square_erf(30.0), 59.0), ScheduleError);
  EXPECT_THROW(synthesize(single(1.0), morse4(), PulseShape::square_erf(30.0), 0.0), ScheduleError);
  EXPECT_THROW(synthesize(single(1.0), morse4(), PulseShape::square_erf(-1.0), 200.0), ArgumentError);
  EXPECT_THROW(synthesize(single(1.0), morse4(), PulseShape::gaussian(0.0), 200.0), ArgumentError);
  EXPECT_THROW(synthesize(single(1.0, 0.0, 4), morse4(), PulseShape::square_erf(30.0), 200.0), ArgumentError);
}

TEST(Schedule, GaplessAndSumsToTotal) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> t(100.0, 5000.0);
  const auto d = target_inversion(morse4());
  for (int rep = 0; rep < 50; ++rep) {
    const double total = t(rng);
    const auto sch = synthesize(d, morse4(), PulseShape::square_erf(5.0), total);
    double sum = 0.0;
    for (std::size_t k = 0; k < sch.pulses.size(); ++k) {
      sum += sch.pulses[k].duration;
      if (k > 0) EXPECT_EQ(sch.pulses[k].start, sch.pulses[k - 1].end());
    }
    EXPECT_EQ(sch.pulses.front().start, 0.0);
    EXPECT_EQ(sch.pulses.back().end(), total);
    EXPECT_NEAR(sum, total, 1e-12 * total);
  }
}

TEST(Envelope, SquareErfShape) {
  const auto p = synthesize(single(kPi / 2), morse4(), PulseShape::square_erf(30.0), 200.0).pulses[0];
  const double a = p.half_amplitude;
  EXPECT_DOUBLE_EQ(envelope(p, 100.0), a);
  EXPECT_DOUBLE_EQ(envelope(p, 15.0), a / 2);
  EXPECT_DOUBLE_EQ(envelope(p, 185.0), a / 2);
  EXPECT_EQ(envelope(p, -1e-9), 0.0);
  EXPECT_EQ(envelope(p, 200.0 + 1e-9), 0.0);
  EXPECT_NEAR(envelope(p, 0.0), a * 0.5 * (1 + std::erf(-2.0)), 1e-18);
  // symmetric about the pulse centre
  for (double t : {3.0, 11.0, 27.0, 60.0}) EXPECT_NEAR(envelope(p, t), envelope(p, 200.0 - t), 1e-15);
}

TEST(Envelope, GaussianShape) {
  const auto p = synthesize(single(kPi / 2), morse4(), PulseShape::gaussian(), 200.0).pulses[0];
  EXPECT_DOUBLE_EQ(envelope(p, 100.0), p.half_amplitude);
  EXPECT_NEAR(envelope(p, 150.0), p.half_amplitude * std::exp(-1.0), 1e-15);
}

TEST(FieldValue, CarrierAndPhase) {
  const auto sch = synthesize(single(kPi / 2, -kPi / 2), morse4(), PulseShape::square_erf(30.0), 200.0);
  const Pulse& p = sch.pulses[0];
  for (double t = 0.0; t <= 200.0; t += 0.37) {
    EXPECT_NEAR(field_value(p, t), 2 * envelope(p, t) * std::sin(p.carrier * t), 1e-14);
    EXPECT_LE(std::abs(field_value(p, t)), 2 * p.half_amplitude + 1e-15);
  }
  EXPECT_EQ(field_value(p, 250.0), 0.0);
  EXPECT_EQ(field_value(p, -5.0), 0.0);
}

TEST(FieldValue, NegativeAngleIsPhaseShift) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (int rep = 0; rep < 20; ++rep) {
    const double c = std::abs(u(rng)), phi = u(rng);
    const auto neg = synthesize(single(-c, phi), morse4(), PulseShape::square_erf(30.0), 200.0).pulses[0];
    const auto pos = synthesize(single(c, phi + kPi), morse4(), PulseShape::square_erf(30.0), 200.0).pulses[0];
    for (double t = 0.0; t <= 200.0; t += 1.3) EXPECT_NEAR(field_value(neg, t), field_value(pos, t), 1e-12);
  }
}

TEST(PulseArea, SquareRectangleIdentity) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> c(0.01, 3.0), tau(0.5, 50.0), extra(0.0, 300.0);
  for (int rep = 0; rep < 100; ++rep) {
    const double angle = c(rng), t0 = tau(rng), slot = 2 * t0 + extra(rng);
    const auto p = synthesize(single(angle, 0.0, 2), morse4(), PulseShape::square_erf(t0), slot).pulses[0];
    EXPECT_NEAR(pulse_area(p), angle, 1e-8 * std::max(1.0, angle));
    EXPECT_NEAR(envelope_area(p), 2 * angle / p.dipole, 1e-8 * 2 * angle / p.dipole);
  }
}

TEST(PulseArea, ExactlyTwoRiseTimes) {
  const auto p = synthesize(single(kPi / 2), morse4(), PulseShape::square_erf(30.0), 60.0).pulses[0];
  EXPECT_EQ(p.segments().size(), 2u);
  EXPECT_NEAR(pulse_area(p), kPi / 2, 1e-8);
}

TEST(PulseArea, GaussianTruncation) {
  for (double slot : {50.0, 200.0, 1000.0}) {
    const auto p4 = synthesize(single(kPi / 2), morse4(), PulseShape::gaussian(4.0 / slot), slot).pulses[0];
    const double f4 = pulse_area(p4) / (kPi / 2);
    EXPECT_GE(f4, 0.99);
    EXPECT_LE(f4, 1.0001);
    EXPECT_NEAR(f4, std::erf(2.0), 1e-9);
    const auto p6 = synthesize(single(kPi / 2), morse4(), PulseShape::gaussian(6.0 / slot), slot).pulses[0];
    EXPECT_GE(pulse_area(p6) / (kPi / 2), 0.9999);
  }
}

TEST(DetuningGuard, WorkedExampleMargin) {
  const auto sch = synthesize(target_population_transfer(morse4()), morse4(), PulseShape::square_erf(30.0), 600.0);
  const auto g = detuning_guard(sch, morse4());
  ASSERT_EQ(g.size(), 3u);
  for (const auto& m : g) {
    EXPECT_GE(m.margin, 10.0);
    EXPECT_LE(m.margin, 11.0);
    EXPECT_FALSE(m.flagged);
  }
  // 0.2 / (pi / 170)
  EXPECT_NEAR(g[0].margin, 0.2 * 170.0 / kPi, 1e-12);
}

TEST(DetuningGuard, ShortSlotsAreFlagged) {
  // dt = 40 with tau0 = 30 cannot be synthesized, so evaluate the guard on the pulse by hand
  Pulse p;
  p.transition = 1;
  p.carrier = morse4().transition_frequency(1);
  p.duration = 40.0;
  p.rise_time = 30.0;
  p.area_constant = kPi / 2;
  p.half_amplitude = (kPi / 2) / (40.0 - 30.0);
  PulseSchedule manual{{p}, 40.0, {}};
  const auto g = detuning_guard(manual, morse4());
  ASSERT_EQ(g.size(), 1u);
  EXPECT_NEAR(g[0].margin, 0.2 / (kPi / 10), 1e-12);
  EXPECT_TRUE(g[0].flagged);
  EXPECT_THROW(synthesize(single(kPi / 2), morse4(), PulseShape::square_erf(30.0), 40.0), ScheduleError);

  const auto sch = synthesize(target_population_transfer(morse4()), morse4(), PulseShape::square_erf(5.0), 60.0);
  for (const auto& m : detuning_guard(sch, morse4())) {
    EXPECT_LT(m.margin, 1.0);
    EXPECT_TRUE(m.flagged);
  }
  EXPECT_EQ(sch.warnings.size(), 3u);
  EXPECT_TRUE(detuning_guard(PulseSchedule{}, morse4()).empty());
}

TEST(DetuningGuard, PhaseDoesNotChangeMargin) {
  const auto a = synthesize(single(kPi / 2, 0.0), morse4(), PulseShape::square_erf(30.0), 200.0);
  const auto b = synthesize(single(kPi / 2, -kPi / 2), morse4(), PulseShape::square_erf(30.0), 200.0);
  EXPECT_EQ(detuning_guard(a, morse4())[0].margin, detuning_guard(b, morse4())[0].margin);
}
