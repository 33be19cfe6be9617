#include "liepulse/targets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "liepulse/errors.hpp"
#include "liepulse/linalg.hpp"

namespace liepulse {
namespace {

DecompositionResult pi_pulse_sequence(const std::vector<int>& transitions, std::size_t levels,
                                      const std::optional<std::vector<double>>& phases) {
  if (phases && phases->size() != transitions.size())
    throw ArgumentError("expected " + std::to_string(transitions.size()) + " pulse phases, got " +
                        std::to_string(phases->size()));
  DecompositionResult d;
  d.mode = DecompositionMode::mod_phase;
  d.residual_phases.assign(levels, 0.0);
  for (std::size_t k = 0; k < transitions.size(); ++k)
    d.factors.push_back({transitions[k], std::numbers::pi / 2.0, phases ? (*phases)[k] : 0.0});
  return d;
}

}  // namespace

DecompositionResult target_population_transfer(const SystemModel& system,
                                               const std::optional<std::vector<double>>& phases) {
  std::vector<int> seq(system.transitions());
  std::iota(seq.begin(), seq.end(), 1);
  return pi_pulse_sequence(seq, system.levels(), phases);
}

std::vector<int> inversion_sequence(std::size_t levels) {
  std::vector<int> seq;
  for (std::size_t last = levels - 1; last >= 1; --last)
    for (std::size_t m = 1; m <= last; ++m) seq.push_back(static_cast<int>(m));
  return seq;
}

DecompositionResult target_inversion(const SystemModel& system, const std::optional<std::vector<double>>& phases) {
  return pi_pulse_sequence(inversion_sequence(system.levels()), system.levels(), phases);
}

SuperpositionTarget target_superposition(const std::vector<double>& amplitudes, const std::vector<double>& phases,
                                         const SystemModel& system) {
  const std::size_t n = system.levels();
  if (amplitudes.size() != n) throw ArgumentError("superposition: need one amplitude per level");
  if (!phases.empty() && phases.size() != n) throw ArgumentError("superposition: need one phase per level");
  double sum = 0.0;
  for (double r : amplitudes) {
    if (!(r >= 0.0)) throw ArgumentError("superposition: amplitudes must be non-negative");
    sum += r * r;
  }
  if (std::abs(sum - 1.0) > 1e-10) throw ArgumentError("superposition: amplitudes must satisfy sum r_n^2 = 1");

  ComplexMatrix u1;
  if (amplitudes[0] > 1e-12) {
    ComplexMatrix seed = ComplexMatrix::identity(n);
    for (std::size_t k = 0; k < n; ++k) seed(k, 0) = amplitudes[k];
    u1 = gram_schmidt(seed);
  } else {
    // [r | e_2 .. e_N] is singular when r_1 = 0
    const ComplexVector r(amplitudes.begin(), amplitudes.end());
    u1 = complete_to_unitary(r);
  }

  SuperpositionTarget out;
  ComplexVector theta(n, 1.0);
  out.state.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double ph = phases.empty() ? 0.0 : phases[k];
    theta[k] = std::polar(1.0, ph);
    out.state[k] = amplitudes[k] * theta[k];
  }
  out.target = ComplexMatrix::diagonal(theta) * u1;
  out.decomposition = decompose(out.target, DecompositionMode::mod_phase);
  return out;
}

ComplexMatrix target_observable_max(const Observable& obs, const EnsembleState& state) {
  const std::size_t n = state.dim();
  if (obs.matrix.dim() != n) throw ArgumentError("target_observable_max: dimension mismatch");
  if (!state.is_energy_diagonal())
    throw ArgumentError("target_observable_max: initial state must be an ensemble of energy eigenstates");

  const auto eig = hermitian_eigensystem(obs.matrix);
  std::vector<std::size_t> by_weight(n);
  std::iota(by_weight.begin(), by_weight.end(), 0);
  const auto w = state.weights();
  std::stable_sort(by_weight.begin(), by_weight.end(), [&](std::size_t a, std::size_t b) { return w[a] > w[b]; });

  ComplexMatrix u1(n);
  for (std::size_t rank = 0; rank < n; ++rank) u1.set_column(by_weight[rank], eig.eigenvectors.column(rank));
  return u1;
}

}  // namespace liepulse
