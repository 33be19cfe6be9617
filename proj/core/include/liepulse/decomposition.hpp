#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "liepulse/matrix.hpp"

namespace liepulse {

enum class DecompositionMode {
  mod_phase,  // reduce to a diagonal of phases; valid for energy-diagonal ensembles
  exact,      // additionally eliminate the residual phases
};

/// One factor V = exp[C (sin(phi) x_m - cos(phi) y_m)] on transition m (1-based).
struct FactorSpec {
  int transition = 1;
  double angle = 0.0;  // C, radians
  double phase = 0.0;  // phi, radians

  friend bool operator==(const FactorSpec&, const FactorSpec&) = default;
};

/// U = e^{i global_phase} V_K ... V_1 diag(e^{i theta_n}).
/// `factors` is in time order: factors[0] is V_1, the first pulse applied.
struct DecompositionResult {
  std::vector<FactorSpec> factors;
  std::vector<double> residual_phases;  // theta_n, one per level
  double global_phase = 0.0;            // arg(det U) / N
  DecompositionMode mode = DecompositionMode::mod_phase;

  friend bool operator==(const DecompositionResult&, const DecompositionResult&) = default;
};

/// Factors with |C| at or below this are dropped (no pulse).
inline constexpr double kZeroAngle = 1e-14;

/// Called after each column has been reduced, with the 0-based column index
/// and the working matrix W^(k)...W^(1) e^{-i Gamma/N} U.
using ColumnObserver = std::function<void(std::size_t column, const ComplexMatrix& working)>;

/// Column-by-column reduction by adjacent-transition rotations, last column
/// first. Each emitted angle lies in [0, pi/2]. Throws ArgumentError for
/// non-finite or non-unitary (||U^dagger U - I||_F > 1e-10) input.
DecompositionResult decompose(const ComplexMatrix& u, DecompositionMode mode,
                              const ColumnObserver& observer = {});

/// V_K ... V_1 -- the operator a pulse sequence realizes in the interaction
/// picture.
ComplexMatrix factor_product(std::span<const FactorSpec> factors, std::size_t dim);

/// mod_phase: V_K ... V_1 (equals U up to right diagonal phases).
/// exact:     e^{i global_phase} V_K ... V_1 diag(e^{i theta_n}) (equals U).
ComplexMatrix reconstruct(const DecompositionResult& d, std::size_t dim);

/// Copy of `d` with the phase of factor k (1-based) replaced.
DecompositionResult phase_flip_probe(const DecompositionResult& d, std::size_t k, double new_phase);

}  // namespace liepulse
