#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "liepulse/matrix.hpp"

namespace liepulse {

/// exp[C (sin(phi) x_m - cos(phi) y_m)] embedded in dimension N, with
/// x_m = e_{m,m+1} - e_{m+1,m} and y_m = i (e_{m,m+1} + e_{m+1,m}).
///
/// The non-trivial block on rows/columns (m, m+1) is
///   [ cos C               -i e^{ i phi} sin C ]
///   [ -i e^{-i phi} sin C  cos C              ]
/// `transition` is 1-based (1 <= m <= N-1).
ComplexMatrix embedded_rotation(std::size_t dim, int transition, double angle, double phase);

/// Modified Gram-Schmidt with one reorthogonalization pass. The first column
/// of the result is the normalized first column of `m` and the span of the
/// leading k columns is preserved for every k (positive R diagonal).
/// Throws SingularMatrixError naming the 1-based column whose pivot collapses.
ComplexMatrix gram_schmidt(const ComplexMatrix& m);

/// Extend a nonzero vector to a unitary whose first column is v/|v|.
ComplexMatrix complete_to_unitary(std::span<const Complex> v);

struct HermitianEigensystem {
  std::vector<double> eigenvalues;  // non-increasing
  ComplexMatrix eigenvectors;       // column n belongs to eigenvalues[n]
};

/// Cyclic complex Jacobi. Degenerate eigenvalues keep the sweep's output
/// order (stable sort).
HermitianEigensystem hermitian_eigensystem(const ComplexMatrix& a);

enum class PhaseEquivalence {
  exact,                // ||U1 - U2||_F
  mod_diagonal_phases,  // min_D ||U1 D - U2||_F, D diagonal unitary
  mod_global_phase,     // min_theta ||e^{i theta} U1 - U2||_F
};

double unitary_distance(const ComplexMatrix& u1, const ComplexMatrix& u2, PhaseEquivalence mode);

/// diag(exp(-i E_n t))
ComplexMatrix free_evolution(std::span<const double> energies, double t);

}  // namespace liepulse
