#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace doikit {

using Complex = std::complex<double>;

/// Dense row-major complex matrix. All operators in the library are carried
/// by this type; dimensions stay small (a few hundred at most), so every
/// algorithm is written for dense storage.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix zeros(std::size_t rows, std::size_t cols);
  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const Complex> diag);
  static ComplexMatrix diagonal(std::span<const double> diag);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Complex> data() noexcept { return data_; }
  std::span<const Complex> data() const noexcept { return data_; }

  std::vector<Complex> column(std::size_t c) const;
  void set_column(std::size_t c, std::span<const Complex> values);

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  bool all_finite() const noexcept;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scalar);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(Complex scalar, ComplexMatrix m);
ComplexMatrix operator*(ComplexMatrix m, Complex scalar);

/// Entrywise (Schur) product.
ComplexMatrix hadamard(const ComplexMatrix& lhs, const ComplexMatrix& rhs);

double frobenius_norm(const ComplexMatrix& m);
double max_abs_entry(const ComplexMatrix& m);

/// ‖M·M* − M*·M‖_F
double normality_defect(const ComplexMatrix& m);

/// ‖M − M*‖_F
double hermitian_defect(const ComplexMatrix& m);

/// ‖U*·U − I‖_F
double unitarity_defect(const ComplexMatrix& u);

}  // namespace doikit
