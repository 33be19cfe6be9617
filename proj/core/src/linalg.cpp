#include "liepulse/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "liepulse/errors.hpp"

namespace liepulse {
namespace {

constexpr double kPivotTolerance = 1e-12;

void orthogonalize_against(ComplexVector& v, const std::vector<ComplexVector>& basis) {
  for (const auto& q : basis) {
    const Complex proj = inner_product(q, v);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= proj * q[i];
  }
}

void scale(ComplexVector& v, double s) {
  for (auto& z : v) z *= s;
}

}  // namespace

ComplexMatrix embedded_rotation(std::size_t dim, int transition, double angle, double phase) {
  if (transition < 1 || static_cast<std::size_t>(transition) >= dim)
    throw ArgumentError("embedded_rotation: transition " + std::to_string(transition) +
                        " outside 1.." + std::to_string(dim == 0 ? 0 : dim - 1));
  ComplexMatrix r = ComplexMatrix::identity(dim);
  const std::size_t m = static_cast<std::size_t>(transition) - 1;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const Complex minus_i{0.0, -1.0};
  r(m, m) = c;
  r(m + 1, m + 1) = c;
  r(m, m + 1) = minus_i * std::polar(1.0, phase) * s;
  r(m + 1, m) = minus_i * std::polar(1.0, -phase) * s;
  return r;
}

ComplexMatrix gram_schmidt(const ComplexMatrix& m) {
  const std::size_t n = m.dim();
  std::vector<ComplexVector> basis;
  basis.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    ComplexVector v = m.column(k);
    const double original = norm(v);
    // two passes: the second removes what cancellation left behind
    orthogonalize_against(v, basis);
    orthogonalize_against(v, basis);
    const double pivot = norm(v);
    if (!(pivot > kPivotTolerance * std::max(1.0, original)))
      throw SingularMatrixError("gram_schmidt: column " + std::to_string(k + 1) +
                                    " is linearly dependent on the preceding columns",
                                k + 1);
    scale(v, 1.0 / pivot);
    basis.push_back(std::move(v));
  }
  return ComplexMatrix::from_columns(basis);
}

ComplexMatrix complete_to_unitary(std::span<const Complex> v) {
  const std::size_t n = v.size();
  const double len = norm(v);
  if (n == 0 || !(len > 0.0)) throw ArgumentError("complete_to_unitary: zero vector");
  std::vector<ComplexVector> basis;
  basis.emplace_back(v.begin(), v.end());
  scale(basis.front(), 1.0 / len);
  for (std::size_t k = 0; k < n && basis.size() < n; ++k) {
    ComplexVector e(n);
    e[k] = 1.0;
    orthogonalize_against(e, basis);
    orthogonalize_against(e, basis);
    const double r = norm(e);
    if (r < 1e-6) continue;
    scale(e, 1.0 / r);
    basis.push_back(std::move(e));
  }
  return ComplexMatrix::from_columns(basis);
}

HermitianEigensystem hermitian_eigensystem(const ComplexMatrix& input) {
  const std::size_t n = input.dim();
  if (n == 0) throw ArgumentError("hermitian_eigensystem: empty matrix");
  const double scale_norm = input.frobenius_norm();
  if (input.hermiticity_defect() > 1e-12 * scale_norm)
    throw ArgumentError("hermitian_eigensystem: matrix is not Hermitian");

  ComplexMatrix a = input;
  ComplexMatrix v = ComplexMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i) a(i, i) = a(i, i).real();

  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (std::sqrt(off) <= 1e-16 * scale_norm) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double mag = std::abs(a(p, q));
        if (mag <= 1e-300) continue;
        // Remove the phase of a_pq, then a real symmetric Jacobi rotation.
        const Complex unphase = std::conj(a(p, q)) / mag;  // e^{-i beta}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // J restricted to (p,q): [[c, s], [-s e^{-i beta}, c e^{-i beta}]]
        const Complex jqp = -s * unphase;
        const Complex jqq = c * unphase;
        for (std::size_t r = 0; r < n; ++r) {
          const Complex arp = a(r, p);
          const Complex arq = a(r, q);
          a(r, p) = c * arp + jqp * arq;
          a(r, q) = s * arp + jqq * arq;
          const Complex vrp = v(r, p);
          const Complex vrq = v(r, q);
          v(r, p) = c * vrp + jqp * vrq;
          v(r, q) = s * vrp + jqq * vrq;
        }
        for (std::size_t col = 0; col < n; ++col) {
          const Complex apc = a(p, col);
          const Complex aqc = a(q, col);
          a(p, col) = c * apc + std::conj(jqp) * aqc;
          a(q, col) = s * apc + std::conj(jqq) * aqc;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });

  HermitianEigensystem out;
  out.eigenvalues.resize(n);
  out.eigenvectors = ComplexMatrix(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    out.eigenvectors.set_column(k, v.column(order[k]));
  }
  return out;
}

double unitary_distance(const ComplexMatrix& u1, const ComplexMatrix& u2, PhaseEquivalence mode) {
  if (u1.dim() != u2.dim()) throw ArgumentError("unitary_distance: dimension mismatch");
  const std::size_t n = u1.dim();
  switch (mode) {
    case PhaseEquivalence::exact:
      return (u1 - u2).frobenius_norm();
    case PhaseEquivalence::mod_global_phase: {
      // optimal phase aligns Tr(U1^dagger U2)
      Complex overlap = 0.0;
      for (std::size_t i = 0; i < u1.data().size(); ++i)
        overlap += std::conj(u1.data()[i]) * u2.data()[i];
      const Complex align = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex{1.0};
      return (u1 * align - u2).frobenius_norm();
    }
    case PhaseEquivalence::mod_diagonal_phases: {
      double sum = 0.0;
      for (std::size_t c = 0; c < n; ++c) {
        const ComplexVector a = u1.column(c);
        const ComplexVector b = u2.column(c);
        const Complex overlap = inner_product(a, b);
        const Complex align = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex{1.0};
        for (std::size_t r = 0; r < n; ++r) sum += std::norm(a[r] * align - b[r]);
      }
      return std::sqrt(sum);
    }
  }
  return 0.0;
}

ComplexMatrix free_evolution(std::span<const double> energies, double t) {
  ComplexVector phases(energies.size());
  for (std::size_t i = 0; i < energies.size(); ++i) phases[i] = std::polar(1.0, -energies[i] * t);
  return ComplexMatrix::diagonal(phases);
}

}  // namespace liepulse
