#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "liepulse/decomposition.hpp"
#include "liepulse/matrix.hpp"
#include "liepulse/pulses.hpp"
#include "liepulse/system.hpp"

namespace liepulse {

enum class PropagationMode { piecewise, rwa, labframe };

inline constexpr int kDefaultRwaSteps = 1000;
inline constexpr int kMinRwaSteps = 100;
inline constexpr int kDefaultStepsPerPeriod = 60;
inline constexpr int kMinStepsPerPeriod = 40;

/// Sampled run. `propagators[i]` is the interaction-picture propagator
/// U_I(times[i]); the lab-frame state is U_0(t) U_I(t) rho_0 U_I(t)^dagger U_0(t)^dagger.
struct SimulationTrace {
  SimulationTrace(PropagationMode mode, EnsembleState initial)
      : mode(mode), initial_state(initial), final_state(std::move(initial)) {}

  PropagationMode mode;
  std::vector<double> times;
  std::vector<ComplexMatrix> propagators;
  std::vector<std::vector<double>> populations;  // [sample][level]
  std::vector<double> energy;                    // <H_0>
  KinematicalBounds energy_bounds;
  std::optional<std::vector<double>> observable;  // <A(t)>
  std::optional<std::vector<double>> overlap;     // |<Psi_target(t)|psi(t)>|^2, or Tr(P rho)
  EnsembleState initial_state;
  EnsembleState final_state;  // lab frame, at times.back()

  std::size_t samples() const noexcept { return times.size(); }
  /// Lab-frame state at sample i.
  EnsembleState state_at(std::size_t i, const SystemModel& system) const;
};

/// U_0(T) V_K ... V_1 applied to s0: the decomposition's own prediction.
EnsembleState propagate_piecewise(const DecompositionResult& d, const SystemModel& system,
                                  const EnsembleState& s0, double total_time);

/// Same prediction sampled at the K+1 slot boundaries t_k = k T / K.
SimulationTrace piecewise_trace(const DecompositionResult& d, const SystemModel& system, const EnsembleState& s0,
                                double total_time);

/// RK4 on dU_I/dt = A(t) d_m G_m(phi) U_I, stepping each envelope segment
/// separately. Each slot gets about `steps_per_slot` steps. Throws
/// ArgumentError when steps_per_slot < 100.
SimulationTrace propagate_rwa(const PulseSchedule& schedule, const SystemModel& system, const EnsembleState& s0,
                              int steps_per_slot = kDefaultRwaSteps);

/// RK4 on i dU_I/dt = f(t) U_0^dagger D U_0 U_I with the full dipole operator
/// D driven by the real field. Step size resolves the fastest carrier with
/// `steps_per_period` steps. Throws ArgumentError when below 40.
SimulationTrace propagate_labframe(const PulseSchedule& schedule, const SystemModel& system,
                                   const EnsembleState& s0, int steps_per_period = kDefaultStepsPerPeriod);

struct TraceTargets {
  std::optional<Observable> observable;
  /// Target amplitudes in the rotating frame; the lab-frame target is
  /// U_0(t) times this vector, so the overlap reads <psi|rho_I|psi>.
  std::optional<ComplexVector> target_state;
};

/// Fills energy and bounds, plus the observable and overlap series that were
/// requested. Throws ArgumentError on dimension mismatch.
SimulationTrace trace_metrics(SimulationTrace trace, const SystemModel& system, const TraceTargets& targets = {});

/// 1 - Tr(rho rho') / Tr(rho^2), zero iff the states coincide (rho = reference).
double state_infidelity(const EnsembleState& reference, const EnsembleState& other);

/// max_i ||U_I(t_i)^dagger U_I(t_i) - I||_F over the trace.
double max_unitarity_drift(const SimulationTrace& trace);

}  // namespace liepulse
