#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "liepulse/errors.hpp"
#include "liepulse/linalg.hpp"
#include "oracles.hpp"

using namespace liepulse;
constexpr double kPi = std::numbers::pi;

TEST(EmbeddedRotation, MatchesMatrixExponential) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> angle(-4.0, 4.0);
  for (std::size_t n = 2; n <= 6; ++n) {
    for (int m = 1; m < static_cast<int>(n); ++m) {
      for (int rep = 0; rep < 5; ++rep) {
        const double c = angle(rng), phi = angle(rng);
        EXPECT_LT(oracle::max_abs_diff(embedded_rotation(n, m, c, phi), oracle::rotation_expm(n, m, c, phi)), 1e-13)
            << "n=" << n << " m=" << m;
      }
    }
  }
}

TEST(EmbeddedRotation, QuarterTurnWithPhaseHalfPi) {
  const ComplexMatrix expected{{0.0, 1.0}, {-1.0, 0.0}};
  EXPECT_LT(oracle::max_abs_diff(embedded_rotation(2, 1, kPi / 2, kPi / 2), expected), 1e-15);
}

TEST(EmbeddedRotation, QuarterTurnWithZeroPhase) {
  const ComplexMatrix expected{{0.0, Complex(0, -1)}, {Complex(0, -1), 0.0}};
  EXPECT_LT(oracle::max_abs_diff(embedded_rotation(2, 1, kPi / 2, 0.0), expected), 1e-15);
}

TEST(EmbeddedRotation, ZeroAngleIsIdentity) {
  EXPECT_EQ(embedded_rotation(4, 2, 0.0, 1.3), ComplexMatrix::identity(4));
}

TEST(EmbeddedRotation, TransitionOutOfRange) {
  EXPECT_THROW(embedded_rotation(3, 0, 1.0, 0.0), ArgumentError);
  EXPECT_THROW(embedded_rotation(3, 3, 1.0, 0.0), ArgumentError);
}

TEST(GramSchmidt, SuperpositionSeedMatchesClosedForm) {
  ComplexMatrix seed = ComplexMatrix::identity(4);
  for (std::size_t r = 0; r < 4; ++r) seed(r, 0) = 0.5;
  const auto u = gram_schmidt(seed);
  const double s3 = std::sqrt(3.0), s6 = std::sqrt(6.0), s2 = std::sqrt(2.0);
  const ComplexMatrix expected{{0.5, -s3 / 6, -s6 / 6, -s2 / 2},
                               {0.5, s3 / 2, 0.0, 0.0},
                               {0.5, -s3 / 6, s6 / 3, 0.0},
                               {0.5, -s3 / 6, -s6 / 6, s2 / 2}};
  EXPECT_LT(oracle::max_abs_diff(u, expected), 1e-14);
}

TEST(GramSchmidt, PreservesLeadingSpans) {
  std::mt19937_64 rng(2);
  for (std::size_t n = 2; n <= 8; ++n) {
    const auto m = oracle::random_hermitian(n, rng) + ComplexMatrix::identity(n) * Complex(0.1 * n);
    const auto q = gram_schmidt(m);
    EXPECT_LT(q.unitarity_defect(), 1e-12);
    // R = Q^dagger M must be upper triangular with positive diagonal
    const auto r = q.adjoint() * m;
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_GT(r(i, i).real(), 0.0);
      EXPECT_NEAR(r(i, i).imag(), 0.0, 1e-12);
      for (std::size_t j = 0; j < i; ++j) EXPECT_LT(std::abs(r(i, j)), 1e-11);
    }
  }
}

TEST(GramSchmidt, SingularColumnIsReported) {
  ComplexMatrix m{{1.0, 2.0, 0.0}, {1.0, 2.0, 1.0}, {0.0, 0.0, 1.0}};
  try {
    gram_schmidt(m);
    FAIL() << "expected SingularMatrixError";
  } catch (const SingularMatrixError& e) {
    EXPECT_EQ(e.column(), 2u);
  }
}

TEST(CompleteToUnitary, FirstColumnIsNormalizedInput) {
  const std::vector<Complex> v{0.0, Complex(0, 3), 4.0};
  const auto u = complete_to_unitary(v);
  EXPECT_LT(u.unitarity_defect(), 1e-13);
  EXPECT_NEAR(std::abs(u(1, 0) - Complex(0, 0.6)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(u(2, 0) - Complex(0.8)), 0.0, 1e-15);
  EXPECT_THROW(complete_to_unitary(std::vector<Complex>(3, 0.0)), ArgumentError);
}

TEST(HermitianEigensystem, MatchesEigenSolver) {
  std::mt19937_64 rng(4);
  for (std::size_t n = 1; n <= 10; ++n) {
    for (int rep = 0; rep < 5; ++rep) {
      const auto a = oracle::random_hermitian(n, rng);
      const auto eig = hermitian_eigensystem(a);
      Eigen::SelfAdjointEigenSolver<oracle::EMatrix> ref(oracle::to_eigen(a));
      for (std::size_t k = 0; k < n; ++k)
        EXPECT_NEAR(eig.eigenvalues[k], ref.eigenvalues()(static_cast<Eigen::Index>(n - 1 - k)), 1e-12);
      EXPECT_LT(eig.eigenvectors.unitarity_defect(), 1e-12);
      // A V = V diag(lambda)
      const auto av = a * eig.eigenvectors;
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t r = 0; r < n; ++r)
          EXPECT_LT(std::abs(av(r, c) - eig.eigenvalues[c] * eig.eigenvectors(r, c)), 1e-11);
    }
  }
}

TEST(HermitianEigensystem, NonIncreasingOrderWithDegeneracy) {
  const std::vector<Complex> d{1.0, 3.0, 1.0, -2.0};
  const auto eig = hermitian_eigensystem(ComplexMatrix::diagonal(d));
  EXPECT_EQ(eig.eigenvalues, (std::vector<double>{3.0, 1.0, 1.0, -2.0}));
  EXPECT_TRUE(std::is_sorted(eig.eigenvalues.rbegin(), eig.eigenvalues.rend()));
}

TEST(HermitianEigensystem, DipoleOperatorClosedForm) {
  const double s2 = std::sqrt(2.0), s3 = std::sqrt(3.0), s6 = std::sqrt(6.0);
  const ComplexMatrix a{{0.0, 1.0, 0.0, 0.0}, {1.0, 0.0, s2, 0.0}, {0.0, s2, 0.0, s3}, {0.0, 0.0, s3, 0.0}};
  const auto eig = hermitian_eigensystem(a);
  const double l1 = std::sqrt(3 + s6), l2 = std::sqrt(3 - s6);
  EXPECT_NEAR(eig.eigenvalues[0], l1, 1e-14);
  EXPECT_NEAR(eig.eigenvalues[1], l2, 1e-14);
  EXPECT_NEAR(eig.eigenvalues[2], -l2, 1e-14);
  EXPECT_NEAR(eig.eigenvalues[3], -l1, 1e-14);
}

TEST(HermitianEigensystem, RejectsNonHermitian) {
  const ComplexMatrix a{{0.0, 1.0}, {2.0, 0.0}};
  EXPECT_THROW(hermitian_eigensystem(a), ArgumentError);
}

TEST(UnitaryDistance, PhaseEquivalenceClasses) {
  std::mt19937_64 rng(9);
  const auto u = oracle::haar_unitary(4, rng);
  const std::vector<Complex> phases{std::polar(1.0, 0.3), std::polar(1.0, -1.2), std::polar(1.0, 2.0), 1.0};
  const auto ud = u * ComplexMatrix::diagonal(phases);
  const auto ug = u * std::polar(1.0, 0.7);
  EXPECT_GT(unitary_distance(u, ud, PhaseEquivalence::exact), 0.1);
  EXPECT_LT(unitary_distance(u, ud, PhaseEquivalence::mod_diagonal_phases), 1e-13);
  EXPECT_GT(unitary_distance(u, ud, PhaseEquivalence::mod_global_phase), 0.1);
  EXPECT_LT(unitary_distance(u, ug, PhaseEquivalence::mod_global_phase), 1e-13);
  EXPECT_LT(unitary_distance(u, ug, PhaseEquivalence::mod_diagonal_phases), 1e-13);
  EXPECT_THROW(unitary_distance(u, ComplexMatrix::identity(3), PhaseEquivalence::exact), ArgumentError);
}

TEST(UnitaryDistance, DiagonalAlignmentIsOptimal) {
  // brute-force scan of each column phase
  std::mt19937_64 rng(10);
  const auto a = oracle::haar_unitary(2, rng);
  const auto b = oracle::haar_unitary(2, rng);
  double total = 0.0;
  for (std::size_t c = 0; c < 2; ++c) {
    double best = 1e300;
    for (int i = 0; i < 20000; ++i) {
      const double t = 2 * kPi * i / 20000.0;
      double sum = 0.0;
      for (std::size_t r = 0; r < 2; ++r) sum += std::norm(a(r, c) * std::polar(1.0, t) - b(r, c));
      best = std::min(best, sum);
    }
    total += best;
  }
  EXPECT_NEAR(unitary_distance(a, b, PhaseEquivalence::mod_diagonal_phases), std::sqrt(total), 1e-6);
}

TEST(FreeEvolution, DiagonalPhases) {
  const std::vector<double> e{0.5, 1.5};
  const auto u = free_evolution(e, 2.0);
  EXPECT_NEAR(std::abs(u(0, 0) - std::polar(1.0, -1.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(u(1, 1) - std::polar(1.0, -3.0)), 0.0, 1e-15);
  EXPECT_EQ(u(0, 1), Complex(0.0));
}
