#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "doikit/error.hpp"
#include "doikit/linalg.hpp"
#include "oracle.hpp"

using namespace doikit;

namespace {

const Complex I1(0.0, 1.0);

void expect_error(Errc code, const std::function<void()>& fn) {
  try {
    fn();
    ADD_FAILURE() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

double reconstruction_error(const ComplexMatrix& n, const SpectralDecomposition& s) {
  return frobenius_norm(n - s.reconstruct());
}

}  // namespace

TEST(HermitianEigen, DiagonalInput) {
  const auto e = hermitian_eigen(ComplexMatrix{{2.0, 0.0}, {0.0, 1.0}});
  ASSERT_EQ(e.eigenvalues.size(), 2u);
  EXPECT_DOUBLE_EQ(e.eigenvalues[0], 1.0);
  EXPECT_DOUBLE_EQ(e.eigenvalues[1], 2.0);
  // a permutation (up to phases)
  EXPECT_NEAR(std::abs(e.basis(1, 0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(e.basis(0, 1)), 1.0, 1e-15);
}

TEST(HermitianEigen, SwapMatrix) {
  const auto e = hermitian_eigen(ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}});
  EXPECT_NEAR(e.eigenvalues[0], -1.0, 1e-15);
  EXPECT_NEAR(e.eigenvalues[1], 1.0, 1e-15);
}

TEST(HermitianEigen, IdentityKeepsBasis) {
  for (std::size_t n : {1u, 3u, 7u}) {
    const auto e = hermitian_eigen(ComplexMatrix::identity(n));
    for (double v : e.eigenvalues) EXPECT_EQ(v, 1.0);
    EXPECT_EQ(e.basis, ComplexMatrix::identity(n));
  }
}

TEST(HermitianEigen, MatchesEigenOracle) {
  std::mt19937_64 rng(11);
  for (std::size_t n : {2u, 5u, 12u, 33u}) {
    const ComplexMatrix h = random_hermitian(n, rng);
    const auto e = hermitian_eigen(h);
    const auto ref = oracle::hermitian_eigenvalues(h);
    for (std::size_t k = 0; k < n; ++k) EXPECT_NEAR(e.eigenvalues[k], ref[k], 1e-11 * (1.0 + std::abs(ref[k])));
    EXPECT_LE(unitarity_defect(e.basis), 1e-12 * n);
    std::vector<Complex> lam(e.eigenvalues.begin(), e.eigenvalues.end());
    EXPECT_LE(frobenius_norm(h - from_spectrum(e.basis, lam)), 1e-10 * (1.0 + frobenius_norm(h)));
  }
}

TEST(HermitianEigen, Errors) {
  expect_error(Errc::NotSquare, [] { hermitian_eigen(ComplexMatrix(2, 3)); });
  expect_error(Errc::NotHermitian, [] { hermitian_eigen(ComplexMatrix{{0.0, 1.0}, {0.0, 0.0}}); });
  expect_error(Errc::NoConvergence, [] {
    std::mt19937_64 rng(3);
    hermitian_eigen(random_hermitian(12, rng), JacobiOptions{1e-14, 0});
  });
}

TEST(NormalSpectral, Diagonal) {
  const auto s = normal_spectral(ComplexMatrix{{1.0 + I1, 0.0}, {0.0, 2.0}});
  EXPECT_LE(oracle::multiset_distance(s.eigenvalues, {1.0 + I1, 2.0}), 1e-15);
  EXPECT_NEAR(std::abs(s.basis(0, 0)) + std::abs(s.basis(1, 1)) + std::abs(s.basis(0, 1)) + std::abs(s.basis(1, 0)),
              2.0, 1e-14);
}

TEST(NormalSpectral, RotationGenerator) {
  const ComplexMatrix n{{0.0, -1.0}, {1.0, 0.0}};
  const auto s = normal_spectral(n);
  EXPECT_LE(oracle::multiset_distance(s.eigenvalues, {I1, -I1}), 1e-14);
  // eigenvector of i is (i,1)/√2 up to phase
  for (std::size_t k = 0; k < 2; ++k) {
    if (std::abs(s.eigenvalues[k] - I1) > 1e-8) continue;
    const Complex v0 = s.basis(0, k), v1 = s.basis(1, k);
    EXPECT_NEAR(std::abs(v0 - I1 * v1), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(v1), 1.0 / std::numbers::sqrt2, 1e-14);
  }
  EXPECT_LE(reconstruction_error(n, s), 1e-14);
}

TEST(NormalSpectral, HermitianMatchesHermitianEigen) {
  std::mt19937_64 rng(5);
  const ComplexMatrix h = random_hermitian(9, rng);
  const auto s = normal_spectral(h);
  const auto e = hermitian_eigen(h);
  std::vector<Complex> ref(e.eigenvalues.begin(), e.eigenvalues.end());
  for (const auto& z : s.eigenvalues) EXPECT_EQ(z.imag(), 0.0);
  EXPECT_LE(oracle::multiset_distance(s.eigenvalues, ref), 1e-10);
}

TEST(NormalSpectral, DegenerateRealPartsAreSeparated) {
  // A = Re N has a triple eigenvalue; B splits it
  std::mt19937_64 rng(17);
  const ComplexMatrix u = random_unitary(5, rng);
  const std::vector<Complex> lam{1.0 + 2.0 * I1, 1.0 - I1, 1.0, 3.0 + I1, -2.0};
  const ComplexMatrix n = from_spectrum(u, lam);
  const auto s = normal_spectral(n);
  EXPECT_LE(oracle::multiset_distance(s.eigenvalues, lam), 1e-12);
  EXPECT_LE(reconstruction_error(n, s), 1e-12 * (1.0 + frobenius_norm(n)));
}

TEST(NormalSpectral, TinyScaleClusters) {
  // every eigenvalue lies inside one cluster window
  std::mt19937_64 rng(23);
  const ComplexMatrix n = oracle::random_normal(6, rng, 1e-10);
  const auto s = normal_spectral(n);
  EXPECT_LE(reconstruction_error(n, s), 1e-10 * (1.0 + frobenius_norm(n)));
  EXPECT_LE(oracle::multiset_distance(s.eigenvalues, oracle::eigenvalues(n)), 1e-18);
}

TEST(NormalSpectral, FallbackDisabledStillHandlesGenericInput) {
  std::mt19937_64 rng(29);
  const ComplexMatrix n = oracle::random_normal(8, rng);
  NormalOptions opts;
  opts.combination_fallback = false;
  const auto s = normal_spectral(n, opts);
  EXPECT_LE(reconstruction_error(n, s), 1e-10 * (1.0 + frobenius_norm(n)));
}

TEST(NormalSpectral, Errors) {
  expect_error(Errc::NotSquare, [] { normal_spectral(ComplexMatrix(1, 2)); });
  expect_error(Errc::NotNormal, [] { normal_spectral(ComplexMatrix{{0.0, 1.0}, {0.0, 0.0}}); });
}

TEST(RealImagParts, Examples) {
  auto p = real_imag_parts(I1 * ComplexMatrix::identity(2));
  EXPECT_EQ(p.real, ComplexMatrix::zeros(2, 2));
  EXPECT_EQ(p.imag, ComplexMatrix::identity(2));

  const ComplexMatrix h{{2.0, 1.0 - I1}, {1.0 + I1, -1.0}};
  p = real_imag_parts(h);
  EXPECT_EQ(p.real, h);
  EXPECT_EQ(p.imag, ComplexMatrix::zeros(2, 2));

  p = real_imag_parts(ComplexMatrix{{1.0 + 2.0 * I1}});
  EXPECT_EQ(p.real(0, 0), Complex(1.0));
  EXPECT_EQ(p.imag(0, 0), Complex(2.0));

  expect_error(Errc::NotSquare, [] { real_imag_parts(ComplexMatrix(2, 1)); });
}

TEST(RealImagParts, RecombineAndHermitian) {
  std::mt19937_64 rng(31);
  const ComplexMatrix n = random_gaussian_matrix(6, 6, rng);
  const auto p = real_imag_parts(n);
  EXPECT_LE(frobenius_norm(p.real + I1 * p.imag - n), 1e-15 * frobenius_norm(n));
  EXPECT_EQ(hermitian_defect(p.real), 0.0);
  EXPECT_EQ(hermitian_defect(p.imag), 0.0);
}

TEST(SingularValues, Examples) {
  auto s = singular_values(ComplexMatrix{{3.0, 0.0}, {0.0, -4.0}});
  ASSERT_EQ(s.size(), 2u);
  EXPECT_NEAR(s[0], 4.0, 1e-15);
  EXPECT_NEAR(s[1], 3.0, 1e-15);

  s = singular_values(ComplexMatrix{{0.0, 2.0}, {0.0, 0.0}});
  EXPECT_NEAR(s[0], 2.0, 1e-15);
  EXPECT_EQ(s[1], 0.0);

  // rank one u·v*
  const std::vector<Complex> u{1.0, 2.0 * I1, -1.0}, v{3.0, I1, 0.0, 1.0};
  ComplexMatrix t(3, 4);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 4; ++j) t(i, j) = u[i] * std::conj(v[j]);
  s = singular_values(t);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_NEAR(s[0], std::sqrt(6.0) * std::sqrt(11.0), 1e-13);
  EXPECT_LE(s[1], 1e-14);
  EXPECT_LE(s[2], 1e-14);
}

TEST(SingularValues, RectangularAgainstOracle) {
  std::mt19937_64 rng(37);
  for (auto [r, c] : {std::pair{3u, 7u}, std::pair{9u, 4u}, std::pair{1u, 5u}}) {
    const ComplexMatrix t = random_gaussian_matrix(r, c, rng);
    const auto s = singular_values(t);
    const auto ref = oracle::singular_values(t);
    ASSERT_EQ(s.size(), ref.size());
    for (std::size_t k = 0; k < ref.size(); ++k) EXPECT_NEAR(s[k], ref[k], 1e-12 * (1.0 + ref[0]));
  }
}

TEST(SingularValues, DescendingNonnegative) {
  std::mt19937_64 rng(41);
  const auto s = singular_values(random_gaussian_matrix(10, 10, rng));
  for (std::size_t k = 0; k + 1 < s.size(); ++k) EXPECT_GE(s[k], s[k + 1]);
  EXPECT_GE(s.values.back(), 0.0);
}

TEST(Schatten, Examples) {
  const ComplexMatrix d{{3.0, 0.0}, {0.0, 4.0}};
  EXPECT_NEAR(schatten_norm(d, 2.0), 5.0, 1e-14);
  EXPECT_NEAR(schatten_norm(d, std::numeric_limits<double>::infinity()), 4.0, 1e-15);
  EXPECT_NEAR(schatten_norm(d, 1.0), 7.0, 1e-14);
  EXPECT_NEAR(schatten_norm(d, 0.5), std::pow(std::sqrt(3.0) + 2.0, 2.0), 1e-12);
  EXPECT_EQ(schatten_norm(ComplexMatrix::zeros(3, 3), 0.5), 0.0);
}

TEST(Schatten, ExtremeMagnitudesDoNotOverflow) {
  const ComplexMatrix d{{1e200, 0.0}, {0.0, 1e200}};
  EXPECT_NEAR(schatten_norm(d, 2.0) / (std::sqrt(2.0) * 1e200), 1.0, 1e-13);
  const ComplexMatrix t{{1e-200, 0.0}, {0.0, 1e-200}};
  EXPECT_NEAR(schatten_norm(t, 4.0) / (std::pow(2.0, 0.25) * 1e-200), 1.0, 1e-13);
}

TEST(Schatten, Errors) {
  const ComplexMatrix d = ComplexMatrix::identity(2);
  expect_error(Errc::InvalidP, [&] { schatten_norm(d, 0.0); });
  expect_error(Errc::InvalidP, [&] { schatten_norm(d, -1.0); });
  expect_error(Errc::InvalidP, [&] { schatten_norm(d, std::nan("")); });
}

TEST(WeakQuasinorm, Examples) {
  EXPECT_EQ(weak_quasinorm(ComplexMatrix::zeros(3, 3), 0.5), 0.0);
  std::vector<double> d(4);
  for (std::size_t j = 0; j < 4; ++j) d[j] = 1.0 / std::sqrt(1.0 + j);
  EXPECT_NEAR(weak_quasinorm(ComplexMatrix::diagonal(std::span<const double>(d)), 0.5), 1.0, 1e-14);
  const std::vector<double> e{1.0, 0.0, 0.0};
  for (double a : {0.1, 0.5, 0.9}) {
    EXPECT_NEAR(weak_quasinorm(ComplexMatrix::diagonal(std::span<const double>(e)), a), 1.0, 1e-15);
  }
  expect_error(Errc::InvalidAlpha, [] { weak_quasinorm(ComplexMatrix::identity(2), 1.0); });
  expect_error(Errc::InvalidAlpha, [] { weak_quasinorm(ComplexMatrix::identity(2), 0.0); });
}

TEST(RandomUnitary, IsUnitaryAndSeeded) {
  std::mt19937_64 a(7), b(7);
  const ComplexMatrix u = random_unitary(16, a);
  EXPECT_LE(unitarity_defect(u), 1e-13);
  EXPECT_EQ(u, random_unitary(16, b));
}

TEST(FromSpectrum, DimensionMismatch) {
  const std::vector<Complex> v{1.0};
  expect_error(Errc::DimensionMismatch, [&] { from_spectrum(ComplexMatrix::identity(2), v); });
}
