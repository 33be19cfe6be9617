#include "liepulse/system.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "liepulse/errors.hpp"
#include "liepulse/linalg.hpp"

namespace liepulse {

SystemModel::SystemModel(std::vector<double> energies, std::vector<double> dipoles)
    : energies_(std::move(energies)), dipoles_(std::move(dipoles)) {
  const std::size_t n = energies_.size();
  if (n < 2) throw ModelError("system needs at least 2 levels");
  if (dipoles_.size() != n - 1) {
    std::ostringstream msg;
    msg << "system with " << n << " levels needs " << n - 1 << " dipoles, got " << dipoles_.size();
    throw ModelError(msg.str());
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(energies_[i])) throw ModelError("energies must be finite");
    if (i > 0 && !(energies_[i] > energies_[i - 1])) {
      std::ostringstream msg;
      msg << "energies must be strictly increasing: E_" << i + 1 << " = " << energies_[i]
          << " <= E_" << i << " = " << energies_[i - 1];
      throw ModelError(msg.str());
    }
  }
  for (std::size_t m = 0; m + 1 < n; ++m) {
    if (!(dipoles_[m] > 0.0) || !std::isfinite(dipoles_[m])) {
      std::ostringstream msg;
      msg << "dipole d_" << m + 1 << " must be positive and finite, got " << dipoles_[m];
      throw ModelError(msg.str());
    }
  }
  const auto mu = transition_frequencies();
  for (std::size_t a = 0; a < mu.size(); ++a) {
    for (std::size_t b = a + 1; b < mu.size(); ++b) {
      if (std::abs(mu[a] - mu[b]) <= 1e-12 * std::max(1.0, std::abs(mu[a]))) {
        std::ostringstream msg;
        msg << "transitions " << a + 1 << " and " << b + 1 << " share frequency " << mu[a]
            << "; frequency-selective addressing is not possible";
        warnings_.push_back(msg.str());
      }
    }
  }
}

std::vector<double> SystemModel::transition_frequencies() const {
  std::vector<double> mu(energies_.size() - 1);
  for (std::size_t m = 0; m < mu.size(); ++m) mu[m] = energies_[m + 1] - energies_[m];
  return mu;
}

double SystemModel::transition_frequency(int m) const {
  if (m < 1 || static_cast<std::size_t>(m) > transitions())
    throw ArgumentError("transition index " + std::to_string(m) + " out of range");
  return energies_[m] - energies_[m - 1];
}

double SystemModel::dipole(int m) const {
  if (m < 1 || static_cast<std::size_t>(m) > transitions())
    throw ArgumentError("transition index " + std::to_string(m) + " out of range");
  return dipoles_[m - 1];
}

ComplexMatrix SystemModel::hamiltonian() const {
  ComplexVector diag(energies_.begin(), energies_.end());
  return ComplexMatrix::diagonal(diag);
}

ComplexMatrix SystemModel::dipole_operator() const {
  ComplexMatrix d(levels());
  for (std::size_t m = 0; m < dipoles_.size(); ++m) {
    d(m, m + 1) = dipoles_[m];
    d(m + 1, m) = dipoles_[m];
  }
  return d;
}

SystemModel morse_system(int levels, double anharmonicity, double omega0, double p12) {
  if (levels < 2) throw ModelError("morse_system: need at least 2 levels");
  if (!(omega0 > 0.0) || !(p12 > 0.0)) throw ModelError("morse_system: omega0 and p12 must be positive");
  std::vector<double> energies(static_cast<std::size_t>(levels));
  std::vector<double> dipoles(static_cast<std::size_t>(levels - 1));
  for (int n = 1; n <= levels; ++n) {
    const double x = n - 0.5;
    energies[static_cast<std::size_t>(n - 1)] = omega0 * x * (1.0 - anharmonicity * x);
  }
  for (int m = 1; m < levels; ++m) dipoles[static_cast<std::size_t>(m - 1)] = p12 * std::sqrt(m);
  return SystemModel(std::move(energies), std::move(dipoles));
}

ComplexMatrix free_evolution(const SystemModel& system, double t) {
  return free_evolution(system.energies(), t);
}

// --- EnsembleState ---------------------------------------------------------

EnsembleState::EnsembleState(std::vector<double> weights, ComplexMatrix frame)
    : weights_(std::move(weights)), frame_(std::move(frame)) {
  if (weights_.empty()) throw ArgumentError("ensemble: no weights");
  if (frame_.dim() != weights_.size()) throw ArgumentError("ensemble: frame dimension mismatch");
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0 && w <= 1.0)) throw ArgumentError("ensemble: weights must lie in [0, 1]");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw ArgumentError("ensemble: weights must sum to 1");
  if (!frame_.is_unitary(1e-10)) throw ArgumentError("ensemble: frame is not unitary");
}

EnsembleState EnsembleState::diagonal(std::vector<double> weights) {
  const std::size_t n = weights.size();
  if (n == 0) throw ArgumentError("ensemble: no weights");
  return EnsembleState(std::move(weights), ComplexMatrix::identity(n));
}

EnsembleState EnsembleState::ground(std::size_t levels) {
  std::vector<double> w(levels, 0.0);
  if (levels == 0) throw ArgumentError("ensemble: no levels");
  w[0] = 1.0;
  return diagonal(std::move(w));
}

EnsembleState EnsembleState::pure(std::span<const Complex> amplitudes) {
  std::vector<double> w(amplitudes.size(), 0.0);
  if (w.empty()) throw ArgumentError("ensemble: empty state vector");
  w[0] = 1.0;
  return EnsembleState(std::move(w), complete_to_unitary(amplitudes));
}

bool EnsembleState::is_energy_diagonal(double tol) const {
  for (std::size_t r = 0; r < dim(); ++r)
    for (std::size_t c = 0; c < dim(); ++c)
      if (r != c && std::abs(frame_(r, c)) > tol) return false;
  return true;
}

ComplexMatrix EnsembleState::density_matrix() const {
  const std::size_t n = dim();
  ComplexMatrix rho(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (weights_[k] == 0.0) continue;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        rho(r, c) += weights_[k] * frame_(r, k) * std::conj(frame_(c, k));
  }
  return rho;
}

std::vector<double> EnsembleState::populations() const {
  const std::size_t n = dim();
  std::vector<double> p(n, 0.0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = 0; k < n; ++k) p[r] += weights_[k] * std::norm(frame_(r, k));
  return p;
}

EnsembleState EnsembleState::evolved(const ComplexMatrix& u) const {
  if (u.dim() != dim()) throw ArgumentError("ensemble: propagator dimension mismatch");
  return EnsembleState(Unchecked{}, weights_, u * frame_);
}

EnsembleState boltzmann_ensemble(const SystemModel& system, BoltzmannSign sign) {
  const auto e = system.energies();
  const double spread = e.back() - e.front();
  const double direction = sign == BoltzmannSign::thermal ? -1.0 : 1.0;
  std::vector<double> w(e.size());
  for (std::size_t n = 0; n < e.size(); ++n) w[n] = std::exp(direction * (e[n] - e.front()) / spread);
  const double z = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& x : w) x /= z;
  return EnsembleState::diagonal(std::move(w));
}

Observable transition_dipole_observable(const SystemModel& system) {
  return Observable{system.dipole_operator(), true, {system.energies().begin(), system.energies().end()}};
}

Observable energy_observable(const SystemModel& system) { return Observable{system.hamiltonian(), false, {}}; }

KinematicalBounds kinematical_bounds(const Observable& obs, const EnsembleState& state) {
  if (obs.matrix.dim() != state.dim()) throw ArgumentError("kinematical_bounds: dimension mismatch");
  const auto eig = hermitian_eigensystem(obs.matrix);  // non-increasing
  std::vector<double> w(state.weights().begin(), state.weights().end());
  std::sort(w.begin(), w.end(), std::greater<>());
  KinematicalBounds b;
  const std::size_t n = w.size();
  for (std::size_t k = 0; k < n; ++k) {
    b.max += w[k] * eig.eigenvalues[k];
    b.min += w[k] * eig.eigenvalues[n - 1 - k];
  }
  return b;
}

double expectation(const Observable& obs, const EnsembleState& state, double t) {
  if (obs.matrix.dim() != state.dim()) throw ArgumentError("expectation: dimension mismatch");
  ComplexMatrix a = obs.matrix;
  if (obs.dynamic) {
    if (obs.energies.size() != a.dim()) throw ArgumentError("expectation: dynamic observable lacks energies");
    const ComplexMatrix u0 = free_evolution(obs.energies, t);
    a = u0 * a * u0.adjoint();
  }
  const Complex value = (a * state.density_matrix()).trace();
  if (std::abs(value.imag()) > 1e-8)
    throw NumericalError("expectation: imaginary part " + std::to_string(value.imag()) + " exceeds 1e-8");
  return value.real();
}

}  // namespace liepulse
