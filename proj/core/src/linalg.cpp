#include "doikit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "doikit/error.hpp"

namespace doikit {
namespace {

double off_diagonal_norm(const ComplexMatrix& a) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) sum += std::norm(a(i, j));
  return std::sqrt(sum);
}

// A ← G*·A·G and V ← V·G for the 2×2 unitary G acting on coordinates (p, q).
void apply_rotation(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q,
                    Complex g00, Complex g01, Complex g10, Complex g11) {
  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    a(k, p) = akp * g00 + akq * g10;
    a(k, q) = akp * g01 + akq * g11;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Complex apk = a(p, k);
    const Complex aqk = a(q, k);
    a(p, k) = std::conj(g00) * apk + std::conj(g10) * aqk;
    a(q, k) = std::conj(g01) * apk + std::conj(g11) * aqk;
  }
  for (std::size_t k = 0; k < v.rows(); ++k) {
    const Complex vkp = v(k, p);
    const Complex vkq = v(k, q);
    v(k, p) = vkp * g00 + vkq * g10;
    v(k, q) = vkp * g01 + vkq * g11;
  }
}

ComplexMatrix hermitian_part(const ComplexMatrix& h) {
  ComplexMatrix a = h;
  const std::size_t n = h.rows();
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = h(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex avg = 0.5 * (h(i, j) + std::conj(h(j, i)));
      a(i, j) = avg;
      a(j, i) = std::conj(avg);
    }
  }
  return a;
}

ComplexMatrix select_columns(const ComplexMatrix& m, std::size_t first, std::size_t last) {
  ComplexMatrix out(m.rows(), last - first);
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = first; c < last; ++c) out(r, c - first) = m(r, c);
  return out;
}

// λ_j = u_j*·N·u_j for every column of the basis.
std::vector<Complex> rayleigh_quotients(const ComplexMatrix& n, const ComplexMatrix& basis) {
  const ComplexMatrix nu = n * basis;
  std::vector<Complex> out(basis.cols());
  for (std::size_t j = 0; j < basis.cols(); ++j) {
    Complex acc{};
    for (std::size_t r = 0; r < basis.rows(); ++r) acc += std::conj(basis(r, j)) * nu(r, j);
    out[j] = acc;
  }
  return out;
}

bool decomposition_accurate(const ComplexMatrix& n, const SpectralDecomposition& s) {
  const double dim = static_cast<double>(n.rows());
  const double recon = frobenius_norm(n - s.reconstruct());
  return recon <= 1e-10 * (1.0 + frobenius_norm(n)) &&
         unitarity_defect(s.basis) <= 1e-12 * std::max(1.0, dim);
}

SpectralDecomposition cluster_route(const ComplexMatrix& n, const RealImagParts& parts,
                                    const NormalOptions& options) {
  HermitianEigen ea = hermitian_eigen(parts.real);
  const std::size_t dim = n.rows();
  double a_norm = 0.0;
  for (double v : ea.eigenvalues) a_norm = std::max(a_norm, std::abs(v));
  const double gap_tol = options.cluster_tolerance * (1.0 + a_norm);

  // Inside a cluster Re N is (nearly) scalar. Diagonalizing the compressed
  // Re N + γ·Im N rather than Im N alone also resolves any residual spread
  // of Re N within the cluster.
  constexpr double kMix = 0.7548776662466927;
  const ComplexMatrix mixed = parts.real + kMix * parts.imag;

  ComplexMatrix basis = ea.basis;
  std::size_t start = 0;
  while (start < dim) {
    std::size_t stop = start + 1;
    while (stop < dim && ea.eigenvalues[stop] - ea.eigenvalues[stop - 1] <= gap_tol) ++stop;
    if (stop - start > 1) {
      const ComplexMatrix uc = select_columns(ea.basis, start, stop);
      const ComplexMatrix compressed = hermitian_part(uc.adjoint() * mixed * uc);
      const HermitianEigen inner = hermitian_eigen(compressed);
      const ComplexMatrix rotated = uc * inner.basis;
      for (std::size_t c = start; c < stop; ++c) basis.set_column(c, rotated.column(c - start));
    }
    start = stop;
  }
  return SpectralDecomposition{rayleigh_quotients(n, basis), std::move(basis)};
}

SpectralDecomposition combination_route(const ComplexMatrix& n, const RealImagParts& parts,
                                        double c) {
  HermitianEigen e = hermitian_eigen(hermitian_part(parts.real + c * parts.imag));
  return SpectralDecomposition{rayleigh_quotients(n, e.basis), std::move(e.basis)};
}

}  // namespace

ComplexMatrix SpectralDecomposition::reconstruct() const {
  return from_spectrum(basis, eigenvalues);
}

HermitianEigen hermitian_eigen(const ComplexMatrix& h, const JacobiOptions& options) {
  if (!h.is_square()) throw Error(Errc::NotSquare, "hermitian_eigen needs a square matrix");
  if (!h.all_finite()) throw Error(Errc::NonFiniteValue, "hermitian_eigen input");
  const double h_norm = frobenius_norm(h);
  if (hermitian_defect(h) > 1e-10 * (1.0 + h_norm)) {
    throw Error(Errc::NotHermitian, "‖H − H*‖_F exceeds tolerance");
  }

  const std::size_t n = h.rows();
  ComplexMatrix a = hermitian_part(h);
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double threshold = options.off_tolerance * h_norm;

  bool converged = off_diagonal_norm(a) <= threshold;
  for (int sweep = 0; sweep < options.max_sweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        if (sweep > 3 && std::abs(app) + 100.0 * mag == std::abs(app) &&
            std::abs(aqq) + 100.0 * mag == std::abs(aqq)) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        // Phase e^{-iφ} on coordinate q makes the pivot real; then a real
        // Jacobi rotation annihilates it.
        const Complex phase = std::conj(apq) / mag;
        const double theta = (aqq - app) / (2.0 * mag);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        apply_rotation(a, v, p, q, c, s, -s * phase, c * phase);
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
    converged = off_diagonal_norm(a) <= threshold;
  }
  if (!converged) throw Error(Errc::NoConvergence, "Jacobi sweep cap reached");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });
  HermitianEigen out;
  out.eigenvalues.resize(n);
  out.basis = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t r = 0; r < n; ++r) out.basis(r, k) = v(r, order[k]);
  }
  return out;
}

RealImagParts real_imag_parts(const ComplexMatrix& n) {
  if (!n.is_square()) throw Error(Errc::NotSquare, "real_imag_parts needs a square matrix");
  const std::size_t dim = n.rows();
  RealImagParts parts{ComplexMatrix(dim, dim), ComplexMatrix(dim, dim)};
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      const Complex nij = n(i, j);
      const Complex nji_conj = std::conj(n(j, i));
      parts.real(i, j) = 0.5 * (nij + nji_conj);
      const Complex w = nij - nji_conj;
      parts.imag(i, j) = Complex(0.5 * w.imag(), -0.5 * w.real());  // w / (2i)
    }
  }
  return parts;
}

SpectralDecomposition normal_spectral(const ComplexMatrix& n, const NormalOptions& options) {
  if (!n.is_square()) throw Error(Errc::NotSquare, "normal_spectral needs a square matrix");
  if (!n.all_finite()) throw Error(Errc::NonFiniteValue, "normal_spectral input");
  const double n_norm = frobenius_norm(n);
  const double defect = normality_defect(n);
  if (defect > options.normality_tolerance * (1.0 + n_norm * n_norm)) {
    throw Error(Errc::NotNormal, "commutator defect " + std::to_string(defect));
  }
  if (n.rows() == 0) return {};

  const RealImagParts parts = real_imag_parts(n);
  if (max_abs_entry(parts.imag) == 0.0) {
    // Hermitian input keeps a real spectrum
    HermitianEigen e = hermitian_eigen(parts.real);
    return {std::vector<Complex>(e.eigenvalues.begin(), e.eigenvalues.end()), std::move(e.basis)};
  }
  SpectralDecomposition s = cluster_route(n, parts, options);
  if (decomposition_accurate(n, s) || !options.combination_fallback) return s;

  std::mt19937_64 rng(options.fallback_seed);
  std::uniform_real_distribution<double> coeff(0.5, 2.0);
  for (int attempt = 0; attempt < options.fallback_attempts; ++attempt) {
    SpectralDecomposition candidate = combination_route(n, parts, coeff(rng));
    if (decomposition_accurate(n, candidate)) return candidate;
  }
  throw Error(Errc::NoConvergence, "normal decomposition failed reconstruction check");
}

SingularValues singular_values(const ComplexMatrix& t) {
  if (!t.all_finite()) throw Error(Errc::NonFiniteValue, "singular_values input");
  const bool tall = t.rows() >= t.cols();
  // work on T/‖T‖_max so that T*T neither overflows nor underflows
  const double scale = max_abs_entry(t);
  ComplexMatrix op = tall ? t : t.adjoint();
  if (scale > 0.0) op *= Complex(1.0 / scale);
  const HermitianEigen e = hermitian_eigen(op.adjoint() * op);
  const ComplexMatrix image = op * e.basis;
  SingularValues s;
  s.values.resize(e.basis.cols());
  for (std::size_t j = 0; j < e.basis.cols(); ++j) {
    double sq = 0.0;
    for (std::size_t r = 0; r < image.rows(); ++r) sq += std::norm(image(r, j));
    s.values[j] = scale * std::sqrt(std::max(sq, 0.0));
  }
  std::sort(s.values.begin(), s.values.end(), std::greater<>());
  return s;
}

double operator_norm(const ComplexMatrix& t) { return singular_values(t).largest(); }

double schatten_norm(const SingularValues& s, double p) {
  if (std::isnan(p) || p <= 0.0) throw Error(Errc::InvalidP, "Schatten exponent must be positive");
  const double top = s.largest();
  if (std::isinf(p) || top == 0.0) return top;
  double sum = 0.0;
  for (double v : s.values) sum += std::pow(v / top, p);
  return top * std::pow(sum, 1.0 / p);
}

double schatten_norm(const ComplexMatrix& t, double p) {
  if (std::isnan(p) || p <= 0.0) throw Error(Errc::InvalidP, "Schatten exponent must be positive");
  return schatten_norm(singular_values(t), p);
}

double weak_quasinorm(const SingularValues& s, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(Errc::InvalidAlpha, "alpha must lie in (0,1)");
  double best = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    best = std::max(best, std::pow(1.0 + static_cast<double>(j), alpha) * s[j]);
  }
  return best;
}

double weak_quasinorm(const ComplexMatrix& t, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(Errc::InvalidAlpha, "alpha must lie in (0,1)");
  return weak_quasinorm(singular_values(t), alpha);
}

ComplexMatrix random_gaussian_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (auto& z : m.data()) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    z = Complex(re, im) * M_SQRT1_2;
  }
  return m;
}

ComplexMatrix random_unitary(std::size_t n, std::mt19937_64& rng) {
  ComplexMatrix q = random_gaussian_matrix(n, n, rng);
  // Modified Gram–Schmidt, two passes. The positive diagonal of R makes the
  // distribution exactly Haar.
  for (std::size_t j = 0; j < n; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        Complex proj{};
        for (std::size_t r = 0; r < n; ++r) proj += std::conj(q(r, k)) * q(r, j);
        for (std::size_t r = 0; r < n; ++r) q(r, j) -= proj * q(r, k);
      }
    }
    double norm = 0.0;
    for (std::size_t r = 0; r < n; ++r) norm += std::norm(q(r, j));
    norm = std::sqrt(norm);
    for (std::size_t r = 0; r < n; ++r) q(r, j) /= norm;
  }
  return q;
}

ComplexMatrix random_hermitian(std::size_t n, std::mt19937_64& rng) {
  const ComplexMatrix g = random_gaussian_matrix(n, n, rng);
  return hermitian_part(g);
}

ComplexMatrix from_spectrum(const ComplexMatrix& basis, std::span<const Complex> values) {
  if (basis.cols() != values.size()) throw Error(Errc::DimensionMismatch, "from_spectrum");
  ComplexMatrix scaled = basis;
  for (std::size_t r = 0; r < scaled.rows(); ++r)
    for (std::size_t c = 0; c < scaled.cols(); ++c) scaled(r, c) *= values[c];
  return scaled * basis.adjoint();
}

}  // namespace doikit
