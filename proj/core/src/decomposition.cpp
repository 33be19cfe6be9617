#include "liepulse/decomposition.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "liepulse/errors.hpp"
#include "liepulse/linalg.hpp"

namespace liepulse {
namespace {

constexpr double kPi = std::numbers::pi;

double wrap_angle(double a) {
  // into (-pi, pi]
  double w = std::remainder(a, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

// working <- exp[-C G_m(phi)] working, touching rows m-1 and m only.
void apply_inverse_factor(ComplexMatrix& w, const FactorSpec& f) {
  const std::size_t top = static_cast<std::size_t>(f.transition) - 1;
  const double c = std::cos(f.angle);
  const double s = std::sin(f.angle);
  const Complex i_unit{0.0, 1.0};
  const Complex upper = i_unit * std::polar(1.0, f.phase) * s;
  const Complex lower = i_unit * std::polar(1.0, -f.phase) * s;
  for (std::size_t col = 0; col < w.dim(); ++col) {
    const Complex a = w(top, col);
    const Complex b = w(top + 1, col);
    w(top, col) = c * a + upper * b;
    w(top + 1, col) = lower * a + c * b;
  }
}

}  // namespace

DecompositionResult decompose(const ComplexMatrix& u, DecompositionMode mode, const ColumnObserver& observer) {
  const std::size_t n = u.dim();
  if (n == 0) throw ArgumentError("decompose: empty matrix");
  if (!u.all_finite()) throw ArgumentError("decompose: matrix has non-finite entries");
  const double defect = u.unitarity_defect();
  if (defect > 1e-10)
    throw ArgumentError("decompose: matrix is not unitary (||U^dagger U - I||_F = " + std::to_string(defect) + ")");

  DecompositionResult result;
  result.mode = mode;
  result.global_phase = std::arg(u.determinant()) / static_cast<double>(n);

  ComplexMatrix working = u * std::polar(1.0, -result.global_phase);
  // W^(1), W^(2), ... in the order they are applied to the working matrix
  std::vector<FactorSpec> reductions;

  for (std::size_t col = n; col-- > 1;) {
    for (std::size_t row = 0; row < col; ++row) {
      const Complex a = working(row, col);
      const Complex b = working(row + 1, col);
      const double r1 = std::abs(a);
      const double r2 = std::abs(b);
      if (r1 <= kZeroAngle) continue;
      const double alpha1 = std::arg(a);
      const double alpha2 = r2 > kZeroAngle ? std::arg(b) : 0.0;
      FactorSpec f;
      f.transition = static_cast<int>(row) + 1;
      f.angle = r2 > kZeroAngle ? std::atan2(r1, r2) : kPi / 2.0;
      f.phase = wrap_angle(kPi / 2.0 + alpha1 - alpha2);
      apply_inverse_factor(working, f);
      working(row, col) = 0.0;
      reductions.push_back(f);
    }
    if (mode == DecompositionMode::exact) {
      // (0, e^{i theta})^T -> (0, 1)^T on rows (col-1, col)
      const double theta = wrap_angle(std::arg(working(col, col)));
      if (std::abs(theta) > kZeroAngle) {
        const int m = static_cast<int>(col);
        const FactorSpec first{m, kPi / 2.0, wrap_angle(-kPi / 2.0 - theta)};
        const FactorSpec second{m, kPi / 2.0, kPi / 2.0};
        apply_inverse_factor(working, first);
        apply_inverse_factor(working, second);
        working(col - 1, col) = 0.0;
        reductions.push_back(first);
        reductions.push_back(second);
      }
    }
    if (observer) observer(col, working);
  }

  result.residual_phases.resize(n);
  for (std::size_t k = 0; k < n; ++k) result.residual_phases[k] = std::arg(working(k, k));

  // V_k = (W^(K+1-k))^dagger; exp[-C G]^dagger = exp[C G] keeps (C, phi).
  result.factors.assign(reductions.rbegin(), reductions.rend());
  return result;
}

ComplexMatrix factor_product(std::span<const FactorSpec> factors, std::size_t dim) {
  ComplexMatrix p = ComplexMatrix::identity(dim);
  for (const auto& f : factors) {
    if (f.transition < 1 || static_cast<std::size_t>(f.transition) >= dim)
      throw ArgumentError("factor transition " + std::to_string(f.transition) + " invalid for dimension " +
                          std::to_string(dim));
    p = embedded_rotation(dim, f.transition, f.angle, f.phase) * p;
  }
  return p;
}

ComplexMatrix reconstruct(const DecompositionResult& d, std::size_t dim) {
  ComplexMatrix p = factor_product(d.factors, dim);
  if (d.mode == DecompositionMode::mod_phase) return p;
  if (!d.residual_phases.empty()) {
    if (d.residual_phases.size() != dim) throw ArgumentError("reconstruct: residual phase count mismatch");
    ComplexVector diag(dim);
    for (std::size_t k = 0; k < dim; ++k) diag[k] = std::polar(1.0, d.residual_phases[k]);
    p = p * ComplexMatrix::diagonal(diag);
  }
  return p * std::polar(1.0, d.global_phase);
}

DecompositionResult phase_flip_probe(const DecompositionResult& d, std::size_t k, double new_phase) {
  if (k < 1 || k > d.factors.size())
    throw ArgumentError("phase_flip_probe: factor index " + std::to_string(k) + " out of range 1.." +
                        std::to_string(d.factors.size()));
  DecompositionResult out = d;
  out.factors[k - 1].phase = new_phase;
  return out;
}

}  // namespace liepulse
