#include "liepulse/pulses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "liepulse/errors.hpp"
#include "quadrature.hpp"

namespace liepulse {
namespace {

constexpr double kPi = std::numbers::pi;

double wrap_angle(double a) {
  double w = std::remainder(a, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

void validate_shape(const PulseShape& shape) {
  if (shape.kind == EnvelopeKind::square_erf) {
    if (!(shape.rise_time > 0.0) || !std::isfinite(shape.rise_time))
      throw ArgumentError("square_erf rise time tau0 must be positive, got " + std::to_string(shape.rise_time));
  } else if (shape.shape_factor && !(*shape.shape_factor > 0.0 && std::isfinite(*shape.shape_factor))) {
    throw ArgumentError("gaussian shape factor q must be positive, got " + std::to_string(*shape.shape_factor));
  }
}

}  // namespace

std::vector<EnvelopeSegment> Pulse::segments() const {
  if (kind == EnvelopeKind::gaussian) return {{0.0, duration}};
  std::vector<EnvelopeSegment> out;
  out.push_back({0.0, rise_time});
  if (duration - rise_time > rise_time) out.push_back({rise_time, duration - rise_time});
  out.push_back({duration - rise_time, duration});
  return out;
}

double Pulse::segment_envelope(std::size_t segment, double tau) const {
  if (kind == EnvelopeKind::gaussian) {
    const double x = shape_factor * (tau - 0.5 * duration);
    return half_amplitude * std::exp(-x * x);
  }
  const std::size_t count = duration - rise_time > rise_time ? 3 : 2;
  if (segment >= count) throw ArgumentError("envelope segment index out of range");
  if (segment == 0) return 0.5 * half_amplitude * (1.0 + std::erf(4.0 * (tau - 0.5 * rise_time) / rise_time));
  if (segment + 1 == count)
    return 0.5 * half_amplitude * (1.0 + std::erf(4.0 * (duration - 0.5 * rise_time - tau) / rise_time));
  return half_amplitude;
}

PulseSchedule synthesize(const DecompositionResult& d, const SystemModel& system, const PulseShape& shape,
                         double total_time) {
  validate_shape(shape);
  PulseSchedule schedule;
  const std::size_t k = d.factors.size();
  if (k == 0) return schedule;
  if (!(total_time > 0.0) || !std::isfinite(total_time))
    throw ScheduleError("total time must be positive, got " + std::to_string(total_time));
  const double slot = total_time / static_cast<double>(k);
  if (shape.kind == EnvelopeKind::square_erf && slot < 2.0 * shape.rise_time)
    throw ScheduleError("slot length " + std::to_string(slot) + " is shorter than 2*tau0 = " +
                        std::to_string(2.0 * shape.rise_time));

  schedule.pulses.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const FactorSpec& f = d.factors[i];
    if (f.transition < 1 || static_cast<std::size_t>(f.transition) > system.transitions())
      throw ArgumentError("factor " + std::to_string(i + 1) + " addresses transition " +
                          std::to_string(f.transition) + ", system has " + std::to_string(system.transitions()));
    Pulse p;
    p.transition = f.transition;
    p.carrier = system.transition_frequency(f.transition);
    p.dipole = system.dipole(f.transition);
    p.area_constant = std::abs(f.angle);
    p.phase = f.angle < 0.0 ? wrap_angle(f.phase + kPi) : f.phase;
    // the last slot ends exactly at T
    p.start = slot * static_cast<double>(i);
    p.duration = (i + 1 == k ? total_time : slot * static_cast<double>(i + 1)) - p.start;
    p.kind = shape.kind;
    if (shape.kind == EnvelopeKind::square_erf) {
      p.rise_time = shape.rise_time;
      p.half_amplitude = p.area_constant / (p.dipole * (p.duration - p.rise_time));
    } else {
      p.shape_factor = shape.shape_factor.value_or(4.0 / slot);
      p.half_amplitude = p.shape_factor * p.area_constant / (p.dipole * std::sqrt(kPi));
    }
    schedule.pulses.push_back(p);
  }
  schedule.total_time = total_time;
  for (const auto& g : detuning_guard(schedule, system))
    if (g.flagged) schedule.warnings.push_back(g);
  return schedule;
}

double envelope(const Pulse& p, double t) {
  const double tau = t - p.start;
  if (tau < 0.0 || tau > p.duration) return 0.0;
  if (p.kind == EnvelopeKind::gaussian) return p.segment_envelope(0, tau);
  if (tau < p.rise_time) return p.segment_envelope(0, tau);
  if (tau > p.duration - p.rise_time) return p.segment_envelope(p.segments().size() - 1, tau);
  return p.half_amplitude;
}

double field_value(const Pulse& p, double t) {
  const double a = envelope(p, t);
  if (a == 0.0) return 0.0;
  return 2.0 * a * std::cos(p.carrier * t + p.phase);
}

double envelope_area(const Pulse& p) {
  const auto segs = p.segments();
  double area = 0.0;
  for (std::size_t s = 0; s < segs.size(); ++s) {
    area += detail::adaptive_simpson([&](double tau) { return p.segment_envelope(s, tau); }, segs[s].begin,
                                     segs[s].end, 1e-10);
  }
  return 2.0 * area;
}

double pulse_area(const Pulse& p) { return 0.5 * envelope_area(p) * p.dipole; }

std::vector<GuardMargin> detuning_guard(const PulseSchedule& schedule, const SystemModel& system) {
  std::vector<GuardMargin> out;
  const auto mu = system.transition_frequencies();
  for (std::size_t i = 0; i < schedule.pulses.size(); ++i) {
    const Pulse& p = schedule.pulses[i];
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < mu.size(); ++n)
      if (static_cast<int>(n) + 1 != p.transition) gap = std::min(gap, std::abs(p.carrier - mu[n]));
    const double rabi = 2.0 * p.half_amplitude * p.dipole;
    const double margin = rabi > 0.0 ? gap / rabi : std::numeric_limits<double>::infinity();
    out.push_back({i, margin, margin < kGuardMarginThreshold});
  }
  return out;
}

}  // namespace liepulse
