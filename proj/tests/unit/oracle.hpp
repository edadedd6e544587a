#pragma once

// Independent reference computations backed by Eigen.

#include <algorithm>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "doikit/linalg.hpp"

namespace oracle {

using EMat = Eigen::MatrixXcd;

inline EMat to_eigen(const doikit::ComplexMatrix& m) {
  EMat out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

inline doikit::ComplexMatrix from_eigen(const EMat& m) {
  doikit::ComplexMatrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

// descending
inline std::vector<double> singular_values(const doikit::ComplexMatrix& t) {
  Eigen::JacobiSVD<EMat> svd(to_eigen(t));
  const auto& s = svd.singularValues();
  return std::vector<double>(s.data(), s.data() + s.size());
}

// ascending
inline std::vector<double> hermitian_eigenvalues(const doikit::ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<EMat> es(to_eigen(h));
  const auto& v = es.eigenvalues();
  return std::vector<double>(v.data(), v.data() + v.size());
}

inline std::vector<std::complex<double>> eigenvalues(const doikit::ComplexMatrix& n) {
  Eigen::ComplexEigenSolver<EMat> es(to_eigen(n));
  const auto& v = es.eigenvalues();
  return std::vector<std::complex<double>>(v.data(), v.data() + v.size());
}

inline double spectral_norm(const doikit::ComplexMatrix& t) {
  const auto s = oracle::singular_values(t);
  return s.empty() ? 0.0 : s.front();
}

// Matrix function through Eigen's own eigenvectors (normal input only).
inline doikit::ComplexMatrix apply(const std::function<std::complex<double>(std::complex<double>)>& f,
                                   const doikit::ComplexMatrix& n) {
  Eigen::ComplexSchur<EMat> schur(to_eigen(n));
  // normal ⇒ Schur form is diagonal
  const EMat& u = schur.matrixU();
  const EMat& t = schur.matrixT();
  EMat d = EMat::Zero(t.rows(), t.cols());
  for (Eigen::Index k = 0; k < t.rows(); ++k) d(k, k) = f(t(k, k));
  return from_eigen(u * d * u.adjoint());
}

// Multiset comparison of complex lists after lexicographic sorting.
inline double multiset_distance(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b) {
  auto lex = [](std::complex<double> x, std::complex<double> y) {
    if (std::abs(x.real() - y.real()) > 1e-7) return x.real() < y.real();
    return x.imag() < y.imag();
  };
  std::sort(a.begin(), a.end(), lex);
  std::sort(b.begin(), b.end(), lex);
  if (a.size() != b.size()) return 1e300;
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
  return worst;
}

inline doikit::ComplexMatrix random_normal(std::size_t n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  std::vector<std::complex<double>> lambda(n);
  for (auto& z : lambda) z = {g(rng), g(rng)};
  return doikit::from_spectrum(doikit::random_unitary(n, rng), lambda);
}

}  // namespace oracle
