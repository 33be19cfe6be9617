#include "liepulse/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "liepulse/errors.hpp"

namespace liepulse {

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {
  if (dim == 0) throw ArgumentError("ComplexMatrix: dimension must be at least 1");
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : ComplexMatrix(rows.size()) {
  std::size_t r = 0;
  for (const auto& row : rows) {
    if (row.size() != dim_) throw ArgumentError("ComplexMatrix: rows must form a square matrix");
    std::copy(row.begin(), row.end(), data_.begin() + static_cast<std::ptrdiff_t>(r * dim_));
    ++r;
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> entries) {
  ComplexMatrix m(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
  return m;
}

ComplexMatrix ComplexMatrix::from_columns(const std::vector<ComplexVector>& columns) {
  ComplexMatrix m(columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) m.set_column(c, columns[c]);
  return m;
}

ComplexVector ComplexMatrix::column(std::size_t col) const {
  ComplexVector out(dim_);
  for (std::size_t r = 0; r < dim_; ++r) out[r] = (*this)(r, col);
  return out;
}

void ComplexMatrix::set_column(std::size_t col, std::span<const Complex> values) {
  if (values.size() != dim_) throw ArgumentError("set_column: length does not match dimension");
  for (std::size_t r = 0; r < dim_; ++r) (*this)(r, col) = values[r];
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(dim_);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

Complex ComplexMatrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

Complex ComplexMatrix::determinant() const {
  // LU with partial pivoting on a scratch copy.
  std::vector<Complex> a = data_;
  const std::size_t n = dim_;
  Complex det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    for (std::size_t r = k + 1; r < n; ++r)
      if (std::abs(a[r * n + k]) > std::abs(a[pivot * n + k])) pivot = r;
    if (a[pivot * n + k] == Complex{0.0}) return 0.0;
    if (pivot != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a[k * n + c], a[pivot * n + c]);
      det = -det;
    }
    const Complex p = a[k * n + k];
    det *= p;
    for (std::size_t r = k + 1; r < n; ++r) {
      const Complex f = a[r * n + k] / p;
      for (std::size_t c = k + 1; c < n; ++c) a[r * n + c] -= f * a[k * n + c];
    }
  }
  return det;
}

double ComplexMatrix::frobenius_norm() const { return norm(data_); }

bool ComplexMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

double ComplexMatrix::unitarity_defect() const {
  ComplexMatrix g = adjoint() * (*this);
  for (std::size_t i = 0; i < dim_; ++i) g(i, i) -= 1.0;
  return g.frobenius_norm();
}

double ComplexMatrix::hermiticity_defect() const { return (*this - adjoint()).frobenius_norm(); }

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  if (rhs.dim_ != dim_) throw ArgumentError("matrix sum: dimension mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
  if (rhs.dim_ != dim_) throw ArgumentError("matrix difference: dimension mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
  for (auto& z : data_) z *= scale;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  if (lhs.dim_ != rhs.dim_) throw ArgumentError("matrix product: dimension mismatch");
  const std::size_t n = lhs.dim_;
  ComplexMatrix out(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t k = 0; k < n; ++k) {
      const Complex a = lhs.data_[r * n + k];
      if (a == Complex{0.0}) continue;
      for (std::size_t c = 0; c < n; ++c) out.data_[r * n + c] += a * rhs.data_[k * n + c];
    }
  }
  return out;
}

ComplexVector operator*(const ComplexMatrix& lhs, std::span<const Complex> rhs) {
  if (rhs.size() != lhs.dim_) throw ArgumentError("matrix-vector product: dimension mismatch");
  ComplexVector out(lhs.dim_);
  for (std::size_t r = 0; r < lhs.dim_; ++r) {
    Complex acc = 0.0;
    for (std::size_t c = 0; c < lhs.dim_; ++c) acc += lhs(r, c) * rhs[c];
    out[r] = acc;
  }
  return out;
}

double norm(std::span<const Complex> v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

Complex inner_product(std::span<const Complex> lhs, std::span<const Complex> rhs) {
  if (lhs.size() != rhs.size()) throw ArgumentError("inner_product: length mismatch");
  Complex acc = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i) acc += std::conj(lhs[i]) * rhs[i];
  return acc;
}

}  // namespace liepulse
