#pragma once

#include <optional>
#include <vector>

#include "liepulse/decomposition.hpp"
#include "liepulse/matrix.hpp"
#include "liepulse/system.hpp"

namespace liepulse {

/// |1> -> |N> by N-1 consecutive pi-pulses (C = pi/2) on transitions
/// 1, 2, ..., N-1. The final |N> population does not depend on the phases.
DecompositionResult target_population_transfer(const SystemModel& system,
                                               const std::optional<std::vector<double>>& phases = std::nullopt);

/// Complete reversal of an energy-diagonal ensemble: K = N(N-1)/2 pi-pulses
/// in the nested order 1..N-1, 1..N-2, ..., 1.
DecompositionResult target_inversion(const SystemModel& system,
                                     const std::optional<std::vector<double>>& phases = std::nullopt);

/// Transition sequence of target_inversion for N levels.
std::vector<int> inversion_sequence(std::size_t levels);

struct SuperpositionTarget {
  ComplexMatrix target;               // Theta(0) U_1
  DecompositionResult decomposition;  // mod_phase decomposition of `target`
  ComplexVector state;                // (r_n e^{i theta_n}), rotating-frame amplitudes
};

/// Unitary taking |1> to sum_n r_n e^{i theta_n} |n> (rotating frame). U_1 comes
/// from Gram-Schmidt on [r | e_2 ... e_N]; the target is diag(e^{i theta}) U_1.
/// Throws ArgumentError if r is negative, mis-sized or not normalized (1e-10).
SuperpositionTarget target_superposition(const std::vector<double>& amplitudes, const std::vector<double>& phases,
                                         const SystemModel& system);

/// U_1 whose n-th column is the observable eigenvector paired with w_n: the
/// largest weight meets the largest eigenvalue. Columns carry whatever phase
/// the eigensolver returns. Throws ArgumentError unless the state is an
/// ensemble of energy eigenstates.
ComplexMatrix target_observable_max(const Observable& obs, const EnsembleState& state);

}  // namespace liepulse
