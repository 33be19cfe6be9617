#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "liepulse/matrix.hpp"

namespace liepulse {

/// N-level ladder: energies E_1 < ... < E_N (units of hbar*omega0) and
/// adjacent-transition dipoles d_1..d_{N-1} (units of p12).
class SystemModel {
 public:
  /// Throws ModelError unless N >= 2, energies strictly increase, every
  /// dipole is positive and finite. Coincident transition frequencies are
  /// accepted but recorded in warnings(): frequency-selective addressing
  /// cannot tell them apart.
  SystemModel(std::vector<double> energies, std::vector<double> dipoles);

  std::size_t levels() const noexcept { return energies_.size(); }
  std::size_t transitions() const noexcept { return dipoles_.size(); }
  std::span<const double> energies() const noexcept { return energies_; }
  std::span<const double> dipoles() const noexcept { return dipoles_; }
  std::vector<double> transition_frequencies() const;

  // 1-based transition index m: the |m> -> |m+1> line.
  double transition_frequency(int m) const;
  double dipole(int m) const;

  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  ComplexMatrix hamiltonian() const;
  /// sum_m d_m (e_{m,m+1} + e_{m+1,m})
  ComplexMatrix dipole_operator() const;

  friend bool operator==(const SystemModel&, const SystemModel&) = default;

 private:
  std::vector<double> energies_;
  std::vector<double> dipoles_;
  std::vector<std::string> warnings_;
};

/// E_n = omega0 (n - 1/2) [1 - alpha (n - 1/2)],  d_m = p12 sqrt(m).
SystemModel morse_system(int levels, double anharmonicity, double omega0 = 1.0, double p12 = 1.0);

ComplexMatrix free_evolution(const SystemModel& system, double t);

/// Ensemble rho = F diag(w) F^dagger kept as (weights, frame) so that unitary
/// evolution only ever touches the frame. A pure state |psi> is w = (1,0,...)
/// with frame column 1 = |psi>.
class EnsembleState {
 public:
  /// Throws ArgumentError unless 0 <= w_n <= 1, sum w = 1 +- 1e-12 and the
  /// frame is unitary to 1e-10 with matching dimension.
  EnsembleState(std::vector<double> weights, ComplexMatrix frame);

  static EnsembleState diagonal(std::vector<double> weights);
  static EnsembleState ground(std::size_t levels);
  static EnsembleState pure(std::span<const Complex> amplitudes);

  std::size_t dim() const noexcept { return weights_.size(); }
  std::span<const double> weights() const noexcept { return weights_; }
  const ComplexMatrix& frame() const noexcept { return frame_; }

  /// True when the frame is diagonal, i.e. rho is an ensemble of energy
  /// eigenstates.
  bool is_energy_diagonal(double tol = 1e-12) const;

  ComplexMatrix density_matrix() const;
  std::vector<double> populations() const;
  /// U rho U^dagger, i.e. frame -> U * frame. U is not re-checked for
  /// unitarity so integrator drift stays visible instead of throwing.
  EnsembleState evolved(const ComplexMatrix& u) const;

 private:
  struct Unchecked {};
  EnsembleState(Unchecked, std::vector<double> weights, ComplexMatrix frame)
      : weights_(std::move(weights)), frame_(std::move(frame)) {}

  std::vector<double> weights_;
  ComplexMatrix frame_;
};

enum class BoltzmannSign {
  thermal,       // w_n ~ exp[-(E_n - E_1)/(E_N - E_1)], ground state most populated
  anti_thermal,  // w_n ~ exp[+(E_n - E_1)/(E_N - E_1)], top level most populated
};

EnsembleState boltzmann_ensemble(const SystemModel& system, BoltzmannSign sign = BoltzmannSign::thermal);

struct Observable {
  ComplexMatrix matrix;
  /// Evaluate U_0(t) A U_0(t)^dagger instead of A (co-rotating observable).
  bool dynamic = false;
  /// Energies generating U_0(t); required when dynamic.
  std::vector<double> energies;
};

/// Tridiagonal transition-dipole operator, flagged dynamic.
Observable transition_dipole_observable(const SystemModel& system);
/// H_0 as a static observable.
Observable energy_observable(const SystemModel& system);

struct KinematicalBounds {
  double min = 0.0;
  double max = 0.0;
};

/// Extremes of Tr(A U rho U^dagger) over all unitaries U: sorted eigenvalues
/// paired against sorted populations (max) or anti-sorted (min).
KinematicalBounds kinematical_bounds(const Observable& obs, const EnsembleState& state);

/// Tr(A(t) rho) for the lab-frame state. Throws NumericalError when the
/// imaginary part exceeds 1e-8.
double expectation(const Observable& obs, const EnsembleState& state, double t);

}  // namespace liepulse
