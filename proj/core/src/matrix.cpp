#include "doikit/matrix.hpp"

#include <cmath>

#include "doikit/error.hpp"

namespace doikit {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw Error(Errc::DimensionMismatch, "entry count does not match rows*cols");
  }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) {
      throw Error(Errc::DimensionMismatch, "ragged initializer list");
    }
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

ComplexMatrix ComplexMatrix::zeros(std::size_t rows, std::size_t cols) {
  return ComplexMatrix(rows, cols);
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> diag) {
  ComplexMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> diag) {
  ComplexMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

std::vector<Complex> ComplexMatrix::column(std::size_t c) const {
  std::vector<Complex> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

void ComplexMatrix::set_column(std::size_t c, std::span<const Complex> values) {
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = values[r];
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

bool ComplexMatrix::all_finite() const noexcept {
  for (const auto& z : data_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) {
    throw Error(Errc::DimensionMismatch, "matrix sum");
  }
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) {
    throw Error(Errc::DimensionMismatch, "matrix difference");
  }
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scalar) {
  for (auto& z : data_) z *= scalar;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
ComplexMatrix operator*(Complex scalar, ComplexMatrix m) { return m *= scalar; }
ComplexMatrix operator*(ComplexMatrix m, Complex scalar) { return m *= scalar; }

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  if (lhs.cols() != rhs.rows()) {
    throw Error(Errc::DimensionMismatch, "matrix product");
  }
  ComplexMatrix out(lhs.rows(), rhs.cols());
  for (std::size_t i = 0; i < lhs.rows(); ++i) {
    for (std::size_t k = 0; k < lhs.cols(); ++k) {
      const Complex a = lhs(i, k);
      if (a == Complex{}) continue;
      for (std::size_t j = 0; j < rhs.cols(); ++j) out(i, j) += a * rhs(k, j);
    }
  }
  return out;
}

ComplexMatrix hadamard(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols()) {
    throw Error(Errc::DimensionMismatch, "entrywise product");
  }
  ComplexMatrix out(lhs.rows(), lhs.cols());
  auto o = out.data();
  auto a = lhs.data();
  auto b = rhs.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = a[i] * b[i];
  return out;
}

double frobenius_norm(const ComplexMatrix& m) {
  // scaled accumulation keeps tiny and huge entries from under/overflowing
  double scale = 0.0;
  double ssq = 1.0;
  for (const auto& z : m.data()) {
    for (double v : {z.real(), z.imag()}) {
      if (v == 0.0) continue;
      const double a = std::abs(v);
      if (scale < a) {
        ssq = 1.0 + ssq * (scale / a) * (scale / a);
        scale = a;
      } else {
        ssq += (a / scale) * (a / scale);
      }
    }
  }
  return scale * std::sqrt(ssq);
}

double max_abs_entry(const ComplexMatrix& m) {
  double best = 0.0;
  for (const auto& z : m.data()) best = std::max(best, std::abs(z));
  return best;
}

double normality_defect(const ComplexMatrix& m) {
  const ComplexMatrix adj = m.adjoint();
  return frobenius_norm(m * adj - adj * m);
}

double hermitian_defect(const ComplexMatrix& m) {
  if (!m.is_square()) throw Error(Errc::NotSquare, "hermitian_defect");
  return frobenius_norm(m - m.adjoint());
}

double unitarity_defect(const ComplexMatrix& u) {
  return frobenius_norm(u.adjoint() * u - ComplexMatrix::identity(u.cols()));
}

}  // namespace doikit
