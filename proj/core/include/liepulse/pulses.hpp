#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "liepulse/decomposition.hpp"
#include "liepulse/system.hpp"

namespace liepulse {

enum class EnvelopeKind { square_erf, gaussian };

struct PulseShape {
  EnvelopeKind kind = EnvelopeKind::square_erf;
  double rise_time = 30.0;             // tau0; square_erf only
  std::optional<double> shape_factor;  // q; gaussian only, nullopt means 4 / slot length

  static PulseShape square_erf(double rise_time) { return {EnvelopeKind::square_erf, rise_time, std::nullopt}; }
  static PulseShape gaussian(std::optional<double> q = std::nullopt) { return {EnvelopeKind::gaussian, 0.0, q}; }

  friend bool operator==(const PulseShape&, const PulseShape&) = default;
};

/// Smooth piece of an envelope, in time local to the pulse start.
struct EnvelopeSegment {
  double begin = 0.0;
  double end = 0.0;
};

/// One resonant pulse f(t) = 2 A(t) cos(mu t + phi), active on
/// [start, start + duration]. `half_amplitude` is A_k; the
/// physical peak field is twice that.
struct Pulse {
  int transition = 1;
  double carrier = 0.0;
  double phase = 0.0;
  double start = 0.0;
  double duration = 0.0;
  double half_amplitude = 0.0;
  EnvelopeKind kind = EnvelopeKind::square_erf;
  double rise_time = 0.0;
  double shape_factor = 0.0;
  double area_constant = 0.0;  // C >= 0 this pulse realizes
  double dipole = 1.0;         // d of the addressed transition

  double end() const { return start + duration; }

  /// The square_erf envelope is erf rise on [0, tau0], flat top, mirrored
  /// fall; the pieces meet with a small jump, so integrators step each
  /// segment with its own formula.
  std::vector<EnvelopeSegment> segments() const;
  /// A(tau) using the formula of `segment`, tau local; no support clipping.
  double segment_envelope(std::size_t segment, double tau) const;

  friend bool operator==(const Pulse&, const Pulse&) = default;
};

/// Flags pulses whose peak Rabi rate is not at least this many times smaller
/// than the nearest off-resonant detuning.
inline constexpr double kGuardMarginThreshold = 10.0;

struct GuardMargin {
  std::size_t pulse = 0;  // 0-based index into the schedule
  double margin = 0.0;    // min_{n != m} |mu_m - mu_n| / (2 A d_m); +inf without neighbours
  bool flagged = false;
};

struct PulseSchedule {
  std::vector<Pulse> pulses;  // gapless, time ordered
  double total_time = 0.0;
  std::vector<GuardMargin> warnings;  // flagged guard margins, attached by synthesize
};

/// One pulse per factor in equal slots T/K on carrier mu_sigma(k). Negative C
/// is realized as |C| with phase + pi. Square: A = C / (d (dt - tau0));
/// Gaussian: A = q C / (d sqrt(pi)).
/// Throws ScheduleError when a slot is shorter than 2 tau0 or T <= 0.
PulseSchedule synthesize(const DecompositionResult& d, const SystemModel& system, const PulseShape& shape,
                         double total_time);

/// Half-amplitude envelope A(t) at absolute time t; zero off support.
double envelope(const Pulse& p, double t);

/// 2 A(t) cos(mu t + phi); zero off support.
double field_value(const Pulse& p, double t);

/// d * integral A(t) dt over the pulse slot (adaptive Simpson); equals the
/// rotation angle C the pulse produces under the RWA.
double pulse_area(const Pulse& p);

/// integral 2 A(t) dt over the slot.
double envelope_area(const Pulse& p);

std::vector<GuardMargin> detuning_guard(const PulseSchedule& schedule, const SystemModel& system);

}  // namespace liepulse
