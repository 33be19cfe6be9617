#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace liepulse {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/// Dense square complex matrix, row-major. Sized for the small (N <= ~16)
/// propagators and targets used throughout the library.
///
/// A default-constructed matrix is empty (dim() == 0) and only serves as a
/// placeholder; every operation producing a matrix yields dim() >= 1.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t dim);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const Complex> entries);
  static ComplexMatrix from_columns(const std::vector<ComplexVector>& columns);

  std::size_t dim() const noexcept { return dim_; }
  bool empty() const noexcept { return dim_ == 0; }

  Complex& operator()(std::size_t row, std::size_t col) { return data_[row * dim_ + col]; }
  const Complex& operator()(std::size_t row, std::size_t col) const {
    return data_[row * dim_ + col];
  }

  std::span<const Complex> data() const noexcept { return data_; }

  ComplexVector column(std::size_t col) const;
  void set_column(std::size_t col, std::span<const Complex> values);

  ComplexMatrix adjoint() const;
  Complex trace() const;
  Complex determinant() const;
  double frobenius_norm() const;
  bool all_finite() const;

  /// ||M^dagger M - I||_F
  double unitarity_defect() const;
  bool is_unitary(double tol) const { return unitarity_defect() <= tol; }
  /// ||M - M^dagger||_F
  double hermiticity_defect() const;

  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(Complex scale);

  friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
  friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
  friend ComplexMatrix operator*(ComplexMatrix lhs, Complex scale) { return lhs *= scale; }
  friend ComplexMatrix operator*(Complex scale, ComplexMatrix rhs) { return rhs *= scale; }
  friend ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);
  friend ComplexVector operator*(const ComplexMatrix& lhs, std::span<const Complex> rhs);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<Complex> data_;
};

double norm(std::span<const Complex> v);
Complex inner_product(std::span<const Complex> lhs, std::span<const Complex> rhs);  // <lhs|rhs>

}  // namespace liepulse
