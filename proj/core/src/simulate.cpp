#include "liepulse/simulate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "liepulse/errors.hpp"
#include "liepulse/linalg.hpp"

namespace liepulse {
namespace {

using Block = std::array<Complex, 4>;  // row-major 2x2

Block block_mul(const Block& a, const Block& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
          a[2] * b[1] + a[3] * b[3]};
}

Block block_axpy(const Block& y, Complex s, const Block& k) {
  return {y[0] + s * k[0], y[1] + s * k[1], y[2] + s * k[2], y[3] + s * k[3]};
}

// One classical RK4 step of dY/dt = s(t) B Y from Y = I; returns Y(t + h).
Block rk4_block(const Block& b, double s1, double s2, double s3, double h) {
  const Block id{1.0, 0.0, 0.0, 1.0};
  auto scaled = [&](double s) { return Block{s * b[0], s * b[1], s * b[2], s * b[3]}; };
  const Block m1 = scaled(s1), m2 = scaled(s2), m3 = scaled(s3);
  const Block k1 = m1;
  const Block k2 = block_mul(m2, block_axpy(id, 0.5 * h, k1));
  const Block k3 = block_mul(m2, block_axpy(id, 0.5 * h, k2));
  const Block k4 = block_mul(m3, block_axpy(id, h, k3));
  Block out;
  for (std::size_t i = 0; i < 4; ++i) out[i] = id[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

void apply_block(ComplexMatrix& u, std::size_t top, const Block& r) {
  for (std::size_t c = 0; c < u.dim(); ++c) {
    const Complex a = u(top, c);
    const Complex b = u(top + 1, c);
    u(top, c) = r[0] * a + r[1] * b;
    u(top + 1, c) = r[2] * a + r[3] * b;
  }
}

void record(SimulationTrace& trace, double t, const ComplexMatrix& u) {
  trace.times.push_back(t);
  trace.propagators.push_back(u);
}

void validate_inputs(const PulseSchedule& schedule, const SystemModel& system, const EnsembleState& s0) {
  if (s0.dim() != system.levels())
    throw ArgumentError("initial state has " + std::to_string(s0.dim()) + " levels, system has " +
                        std::to_string(system.levels()));
  for (const auto& p : schedule.pulses)
    if (p.transition < 1 || static_cast<std::size_t>(p.transition) > system.transitions())
      throw ArgumentError("pulse addresses transition " + std::to_string(p.transition) + " outside the system");
}

// d/dt U = -i f(t) K(t) U with K = U_0^dagger D U_0 tridiagonal:
// K(m, m+1) = d_m e^{-i mu_m t}, K(m+1, m) = d_m e^{+i mu_m t}.
void labframe_rhs(const SystemModel& system, double t, double field, const ComplexMatrix& u, ComplexMatrix& out) {
  const std::size_t n = u.dim();
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) out(r, c) = 0.0;
  if (field == 0.0) return;
  const Complex minus_i{0.0, -1.0};
  for (std::size_t m = 0; m + 1 < n; ++m) {
    const double mu = system.transition_frequency(static_cast<int>(m) + 1);
    const Complex up = minus_i * field * system.dipole(static_cast<int>(m) + 1) * std::polar(1.0, -mu * t);
    const Complex down = minus_i * field * system.dipole(static_cast<int>(m) + 1) * std::polar(1.0, mu * t);
    for (std::size_t c = 0; c < n; ++c) {
      out(m, c) += up * u(m + 1, c);
      out(m + 1, c) += down * u(m, c);
    }
  }
}

}  // namespace

EnsembleState SimulationTrace::state_at(std::size_t i, const SystemModel& system) const {
  if (i >= samples()) throw ArgumentError("trace sample index out of range");
  return initial_state.evolved(free_evolution(system, times[i]) * propagators[i]);
}

EnsembleState propagate_piecewise(const DecompositionResult& d, const SystemModel& system,
                                  const EnsembleState& s0, double total_time) {
  if (s0.dim() != system.levels()) throw ArgumentError("initial state dimension does not match the system");
  return s0.evolved(free_evolution(system, total_time) * factor_product(d.factors, system.levels()));
}

SimulationTrace piecewise_trace(const DecompositionResult& d, const SystemModel& system, const EnsembleState& s0,
                                double total_time) {
  if (s0.dim() != system.levels()) throw ArgumentError("initial state dimension does not match the system");
  const std::size_t n = system.levels();
  const std::size_t k = d.factors.size();
  SimulationTrace trace(PropagationMode::piecewise, s0);
  ComplexMatrix u = ComplexMatrix::identity(n);
  record(trace, 0.0, u);
  for (std::size_t i = 0; i < k; ++i) {
    const FactorSpec& f = d.factors[i];
    if (f.transition < 1 || static_cast<std::size_t>(f.transition) >= n)
      throw ArgumentError("factor transition " + std::to_string(f.transition) + " outside the system");
    u = embedded_rotation(n, f.transition, f.angle, f.phase) * u;
    const double t = i + 1 == k ? total_time : total_time * static_cast<double>(i + 1) / static_cast<double>(k);
    record(trace, t, u);
  }
  return trace_metrics(std::move(trace), system);
}

SimulationTrace propagate_rwa(const PulseSchedule& schedule, const SystemModel& system, const EnsembleState& s0,
                              int steps_per_slot) {
  if (steps_per_slot < kMinRwaSteps)
    throw ArgumentError("rwa: steps_per_slot must be at least " + std::to_string(kMinRwaSteps) + ", got " +
                        std::to_string(steps_per_slot));
  validate_inputs(schedule, system, s0);
  SimulationTrace trace(PropagationMode::rwa, s0);
  ComplexMatrix u = ComplexMatrix::identity(system.levels());
  record(trace, 0.0, u);

  const Complex minus_i{0.0, -1.0};
  for (const Pulse& p : schedule.pulses) {
    const Block gen{0.0, minus_i * std::polar(1.0, p.phase), minus_i * std::polar(1.0, -p.phase), 0.0};
    const std::size_t top = static_cast<std::size_t>(p.transition) - 1;
    const auto segs = p.segments();
    for (std::size_t s = 0; s < segs.size(); ++s) {
      const double len = segs[s].end - segs[s].begin;
      const long steps =
          std::max(1L, std::lround(static_cast<double>(steps_per_slot) * len / p.duration));
      const double h = len / static_cast<double>(steps);
      for (long j = 0; j < steps; ++j) {
        const double tau = segs[s].begin + static_cast<double>(j) * h;
        const double s1 = p.dipole * p.segment_envelope(s, tau);
        const double s2 = p.dipole * p.segment_envelope(s, tau + 0.5 * h);
        const double s3 = p.dipole * p.segment_envelope(s, tau + h);
        apply_block(u, top, rk4_block(gen, s1, s2, s3, h));
        const double tau_end = j + 1 == steps ? segs[s].end : tau + h;
        record(trace, p.start + tau_end, u);
      }
    }
  }
  return trace_metrics(std::move(trace), system);
}

SimulationTrace propagate_labframe(const PulseSchedule& schedule, const SystemModel& system,
                                   const EnsembleState& s0, int steps_per_period) {
  if (steps_per_period < kMinStepsPerPeriod)
    throw ArgumentError("labframe: steps_per_period must be at least " + std::to_string(kMinStepsPerPeriod) +
                        ", got " + std::to_string(steps_per_period));
  validate_inputs(schedule, system, s0);
  const auto mu = system.transition_frequencies();
  const double mu_max = *std::max_element(mu.begin(), mu.end());
  const double max_step = 2.0 * std::numbers::pi / (mu_max * static_cast<double>(steps_per_period));

  const std::size_t n = system.levels();
  SimulationTrace trace(PropagationMode::labframe, s0);
  ComplexMatrix u = ComplexMatrix::identity(n);
  record(trace, 0.0, u);
  ComplexMatrix k1(n), k2(n), k3(n), k4(n), tmp(n);

  for (const Pulse& p : schedule.pulses) {
    const auto segs = p.segments();
    for (std::size_t s = 0; s < segs.size(); ++s) {
      const double len = segs[s].end - segs[s].begin;
      const long steps = std::max(1L, static_cast<long>(std::ceil(len / max_step)));
      const double h = len / static_cast<double>(steps);
      auto field = [&](double tau) {
        return 2.0 * p.segment_envelope(s, tau) * std::cos(p.carrier * (p.start + tau) + p.phase);
      };
      for (long j = 0; j < steps; ++j) {
        const double tau = segs[s].begin + static_cast<double>(j) * h;
        const double t = p.start + tau;
        labframe_rhs(system, t, field(tau), u, k1);
        tmp = u + k1 * Complex(0.5 * h);
        labframe_rhs(system, t + 0.5 * h, field(tau + 0.5 * h), tmp, k2);
        tmp = u + k2 * Complex(0.5 * h);
        labframe_rhs(system, t + 0.5 * h, field(tau + 0.5 * h), tmp, k3);
        tmp = u + k3 * Complex(h);
        labframe_rhs(system, t + h, field(tau + h), tmp, k4);
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t c = 0; c < n; ++c)
            u(r, c) += h / 6.0 * (k1(r, c) + 2.0 * k2(r, c) + 2.0 * k3(r, c) + k4(r, c));
        const double tau_end = j + 1 == steps ? segs[s].end : tau + h;
        record(trace, p.start + tau_end, u);
      }
    }
  }
  return trace_metrics(std::move(trace), system);
}

SimulationTrace trace_metrics(SimulationTrace trace, const SystemModel& system, const TraceTargets& targets) {
  const std::size_t n = system.levels();
  if (trace.initial_state.dim() != n) throw ArgumentError("trace_metrics: trace and system dimensions differ");
  if (targets.observable && targets.observable->matrix.dim() != n)
    throw ArgumentError("trace_metrics: observable dimension mismatch");
  if (targets.target_state && targets.target_state->size() != n)
    throw ArgumentError("trace_metrics: target state dimension mismatch");
  if (trace.propagators.size() != trace.times.size())
    throw ArgumentError("trace_metrics: times and propagators differ in length");

  const auto energies = system.energies();
  const auto w = trace.initial_state.weights();
  trace.populations.clear();
  trace.energy.clear();
  if (targets.observable) trace.observable.emplace();
  if (targets.target_state) trace.overlap.emplace();

  for (std::size_t i = 0; i < trace.samples(); ++i) {
    // rho_I = U_I F diag(w) F^dagger U_I^dagger; populations are frame independent
    const ComplexMatrix frame = trace.propagators[i] * trace.initial_state.frame();
    std::vector<double> pop(n, 0.0);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t k = 0; k < n; ++k) pop[r] += w[k] * std::norm(frame(r, k));
    double e = 0.0;
    for (std::size_t r = 0; r < n; ++r) e += energies[r] * pop[r];
    trace.populations.push_back(std::move(pop));
    trace.energy.push_back(e);

    if (targets.observable) trace.observable->push_back(expectation(*targets.observable, trace.state_at(i, system), trace.times[i]));
    if (targets.target_state) {
      double ov = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        if (w[k] == 0.0) continue;
        Complex amp = 0.0;
        for (std::size_t r = 0; r < n; ++r) amp += std::conj((*targets.target_state)[r]) * frame(r, k);
        ov += w[k] * std::norm(amp);
      }
      trace.overlap->push_back(ov);
    }
  }
  trace.energy_bounds = kinematical_bounds(energy_observable(system), trace.initial_state);
  if (!trace.times.empty()) trace.final_state = trace.state_at(trace.samples() - 1, system);
  return trace;
}

double state_infidelity(const EnsembleState& reference, const EnsembleState& other) {
  if (reference.dim() != other.dim()) throw ArgumentError("state_infidelity: dimension mismatch");
  const ComplexMatrix rho = reference.density_matrix();
  const ComplexMatrix sigma = other.density_matrix();
  const double purity = (rho * rho).trace().real();
  return 1.0 - (rho * sigma).trace().real() / purity;
}

double max_unitarity_drift(const SimulationTrace& trace) {
  double worst = 0.0;
  for (const auto& u : trace.propagators) worst = std::max(worst, u.unitarity_defect());
  return worst;
}

}  // namespace liepulse
