#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "doikit/matrix.hpp"

namespace doikit {

struct HermitianEigen {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix basis;              // unitary, columns are eigenvectors
};

/// Discrete spectral measure of a normal matrix: N = basis·diag(eigenvalues)·basis*.
struct SpectralDecomposition {
  std::vector<Complex> eigenvalues;
  ComplexMatrix basis;

  std::size_t size() const noexcept { return eigenvalues.size(); }
  double x(std::size_t j) const { return eigenvalues[j].real(); }
  double y(std::size_t j) const { return eigenvalues[j].imag(); }
  ComplexMatrix reconstruct() const;
};

struct SingularValues {
  std::vector<double> values;  // descending, nonnegative

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t j) const { return values[j]; }
  double largest() const noexcept { return values.empty() ? 0.0 : values.front(); }
};

struct JacobiOptions {
  double off_tolerance = 1e-14;  // relative to ‖H‖_F
  int max_sweeps = 60;
};

/// Cyclic complex Jacobi. Input must be Hermitian up to 1e-10·(1+‖H‖_F);
/// the Hermitian part is what gets diagonalized.
HermitianEigen hermitian_eigen(const ComplexMatrix& h, const JacobiOptions& options = {});

struct NormalOptions {
  double normality_tolerance = 1e-10;
  /// Gap below which eigenvalues of Re N are treated as one cluster,
  /// relative to 1 + ‖Re N‖.
  double cluster_tolerance = 1e-8;
  /// When the cluster route fails its reconstruction check, retry by
  /// diagonalizing Re N + c·Im N for seeded random c.
  bool combination_fallback = true;
  std::uint64_t fallback_seed = 0x6a09e667f3bcc908ULL;
  int fallback_attempts = 8;
};

SpectralDecomposition normal_spectral(const ComplexMatrix& n, const NormalOptions& options = {});

struct RealImagParts {
  ComplexMatrix real;  // A = (N + N*)/2
  ComplexMatrix imag;  // B = (N − N*)/(2i)
};

RealImagParts real_imag_parts(const ComplexMatrix& n);

/// Singular values from the Hermitian eigendecomposition of the smaller Gram
/// matrix; each value is re-measured as ‖T·v_j‖ so that tiny singular values
/// keep absolute accuracy near machine precision.
SingularValues singular_values(const ComplexMatrix& t);

double operator_norm(const ComplexMatrix& t);

/// Schatten quasinorm; pass std::numeric_limits<double>::infinity() for p = ∞.
double schatten_norm(const SingularValues& s, double p);
double schatten_norm(const ComplexMatrix& t, double p);

/// sup_j (1+j)^α s_j, the S_{1/α,∞} quasinorm.
double weak_quasinorm(const SingularValues& s, double alpha);
double weak_quasinorm(const ComplexMatrix& t, double alpha);

ComplexMatrix random_gaussian_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng);

/// Haar-distributed unitary via Gram–Schmidt QR of a complex Gaussian matrix.
ComplexMatrix random_unitary(std::size_t n, std::mt19937_64& rng);

/// Random Hermitian matrix with Gaussian entries (GUE-like).
ComplexMatrix random_hermitian(std::size_t n, std::mt19937_64& rng);

/// U·diag(values)·U*
ComplexMatrix from_spectrum(const ComplexMatrix& basis, std::span<const Complex> values);

}  // namespace doikit
