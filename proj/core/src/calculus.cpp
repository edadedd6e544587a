#include "doikit/calculus.hpp"

#include <algorithm>
#include <cmath>

#include "doikit/error.hpp"

namespace doikit {
namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

Complex divided_difference_y(const ScalarField2D& f, Complex z1, Complex z2,
                             const DividedDifferenceOptions& options) {
  const double x1 = z1.real(), y1 = z1.imag(), y2 = z2.imag();
  const double gap = y1 - y2;
  if (std::abs(gap) <= options.delta * options.scale) {
    if (options.convention == Coincidence::Derivative && f.d_dy) return f.d_dy(Complex(x1, y1));
    return 0.0;
  }
  return (f(Complex(x1, y1)) - f(Complex(x1, y2))) / gap;
}

Complex divided_difference_x(const ScalarField2D& f, Complex z1, Complex z2,
                             const DividedDifferenceOptions& options) {
  const double x1 = z1.real(), x2 = z2.real(), y2 = z2.imag();
  const double gap = x1 - x2;
  if (std::abs(gap) <= options.delta * options.scale) {
    if (options.convention == Coincidence::Derivative && f.d_dx) return f.d_dx(Complex(x1, y2));
    return 0.0;
  }
  return (f(Complex(x1, y2)) - f(Complex(x2, y2))) / gap;
}

void check_square_pair(const ComplexMatrix& n1, const ComplexMatrix& n2) {
  if (!n1.is_square() || !n2.is_square()) throw Error(Errc::NotSquare, "operators must be square");
}

// Σ over both axes of ∬ DD_axis dE₁ (middle_axis) dE₂
ComplexMatrix two_kernel_integral(const ScalarField2D& f, const SpectralDecomposition& s1,
                                  const SpectralDecomposition& s2, const ComplexMatrix& middle_x,
                                  const ComplexMatrix& middle_y, const RepresentationOptions& options) {
  DividedDifferenceOptions dd{spectral_diameter(s1, s2), options.delta, options.convention};
  const ComplexMatrix y_part =
      double_operator_integral(divided_difference_kernel(f, Axis::Y, dd), s1, middle_y, s2);
  const ComplexMatrix x_part =
      double_operator_integral(divided_difference_kernel(f, Axis::X, dd), s1, middle_x, s2);
  return y_part + x_part;
}

}  // namespace

Complex divided_difference(const ScalarField2D& f, Axis axis, Complex z1, Complex z2,
                           const DividedDifferenceOptions& options) {
  return axis == Axis::Y ? divided_difference_y(f, z1, z2, options)
                         : divided_difference_x(f, z1, z2, options);
}

MultiplierKernel divided_difference_kernel(const ScalarField2D& f, Axis axis,
                                           const DividedDifferenceOptions& options) {
  MultiplierKernel k;
  k.name = std::string(axis == Axis::Y ? "DD_y[" : "DD_x[") + f.name + "]";
  k.eval = [f, axis, options](Complex z1, Complex z2) { return divided_difference(f, axis, z1, z2, options); };
  return k;
}

MultiplierMatrix multiplier_matrix(const MultiplierKernel& phi, const SpectralDecomposition& s1,
                                   const SpectralDecomposition& s2) {
  MultiplierMatrix m{ComplexMatrix(s1.size(), s2.size())};
  for (std::size_t j = 0; j < s1.size(); ++j) {
    for (std::size_t k = 0; k < s2.size(); ++k) {
      const Complex v = phi.eval(s1.eigenvalues[j], s2.eigenvalues[k]);
      if (!finite(v)) throw Error(Errc::NonFiniteValue, "kernel " + phi.name + " is not finite");
      m.entries(j, k) = v;
    }
  }
  return m;
}

ComplexMatrix double_operator_integral(const MultiplierMatrix& m, const SpectralDecomposition& s1,
                                       const ComplexMatrix& t, const SpectralDecomposition& s2) {
  if (t.rows() != s1.size() || t.cols() != s2.size() || m.entries.rows() != s1.size() ||
      m.entries.cols() != s2.size()) {
    throw Error(Errc::DimensionMismatch, "double operator integral");
  }
  const ComplexMatrix coords = s1.basis.adjoint() * t * s2.basis;
  return s1.basis * hadamard(m.entries, coords) * s2.basis.adjoint();
}

ComplexMatrix double_operator_integral(const MultiplierKernel& phi, const SpectralDecomposition& s1,
                                       const ComplexMatrix& t, const SpectralDecomposition& s2) {
  if (t.rows() != s1.size() || t.cols() != s2.size()) {
    throw Error(Errc::DimensionMismatch, "double operator integral");
  }
  return double_operator_integral(multiplier_matrix(phi, s1, s2), s1, t, s2);
}

ComplexMatrix apply_function(const ScalarField2D& f, const SpectralDecomposition& s) {
  std::vector<Complex> values(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) {
    values[j] = f(s.eigenvalues[j]);
    if (!finite(values[j])) throw Error(Errc::NonFiniteValue, f.name + " at a spectral point");
  }
  return from_spectrum(s.basis, values);
}

ComplexMatrix apply_function(const ScalarField2D& f, const ComplexMatrix& n, const NormalOptions& options) {
  return apply_function(f, normal_spectral(n, options));
}

double spectral_diameter(const SpectralDecomposition& s1, const SpectralDecomposition& s2) {
  std::vector<Complex> all = s1.eigenvalues;
  all.insert(all.end(), s2.eigenvalues.begin(), s2.eigenvalues.end());
  if (all.empty()) return 1.0;
  const Box box = bounding_box(all, 0.0);
  const double side = 2.0 * box.half_width;
  return side > 0.0 ? side : 1.0;
}

Representation representation_difference(const ScalarField2D& f, const ComplexMatrix& n1,
                                         const ComplexMatrix& n2, const RepresentationOptions& options) {
  check_square_pair(n1, n2);
  if (n1.rows() != n2.rows()) throw Error(Errc::DimensionMismatch, "N₁ and N₂ must have the same size");
  const SpectralDecomposition s1 = normal_spectral(n1, options.normal);
  const SpectralDecomposition s2 = normal_spectral(n2, options.normal);
  return representation_difference(f, n1, s1, n2, s2, options);
}

Representation representation_difference(const ScalarField2D& f, const ComplexMatrix& n1,
                                         const SpectralDecomposition& s1, const ComplexMatrix& n2,
                                         const SpectralDecomposition& s2,
                                         const RepresentationOptions& options) {
  check_square_pair(n1, n2);
  if (n1.rows() != n2.rows() || s1.size() != n1.rows() || s2.size() != n2.rows()) {
    throw Error(Errc::DimensionMismatch, "N₁ and N₂ must have the same size");
  }
  const RealImagParts p1 = real_imag_parts(n1);
  const RealImagParts p2 = real_imag_parts(n2);

  Representation out;
  out.lhs = apply_function(f, s1) - apply_function(f, s2);
  out.rhs = two_kernel_integral(f, s1, s2, p1.real - p2.real, p1.imag - p2.imag, options);
  out.defect = frobenius_norm(out.lhs - out.rhs);
  return out;
}

Representation quasicommutator_representation(const ScalarField2D& f, const ComplexMatrix& n1,
                                              const ComplexMatrix& n2, const ComplexMatrix& q,
                                              const RepresentationOptions& options) {
  check_square_pair(n1, n2);
  if (q.rows() != n1.rows() || q.cols() != n2.rows()) {
    throw Error(Errc::DimensionMismatch, "Q must be dim(N₁) × dim(N₂)");
  }
  const SpectralDecomposition s1 = normal_spectral(n1, options.normal);
  const SpectralDecomposition s2 = normal_spectral(n2, options.normal);
  return quasicommutator_representation(f, n1, s1, n2, s2, q, options);
}

Representation quasicommutator_representation(const ScalarField2D& f, const ComplexMatrix& n1,
                                              const SpectralDecomposition& s1,
                                              const ComplexMatrix& n2,
                                              const SpectralDecomposition& s2,
                                              const ComplexMatrix& q,
                                              const RepresentationOptions& options) {
  check_square_pair(n1, n2);
  if (q.rows() != n1.rows() || q.cols() != n2.rows() || s1.size() != n1.rows() ||
      s2.size() != n2.rows()) {
    throw Error(Errc::DimensionMismatch, "Q must be dim(N₁) × dim(N₂)");
  }
  const ComplexMatrix direct = n1 * q - q * n2;                       // N₁Q − QN₂
  const ComplexMatrix adjoint = n1.adjoint() * q - q * n2.adjoint();  // N₁*Q − QN₂*

  // A₁Q − QA₂ = (direct + adjoint)/2,  B₁Q − QB₂ = (direct − adjoint)/(2i)
  ComplexMatrix middle_x(q.rows(), q.cols());
  ComplexMatrix middle_y(q.rows(), q.cols());
  for (std::size_t i = 0; i < q.rows(); ++i) {
    for (std::size_t j = 0; j < q.cols(); ++j) {
      const Complex d = direct(i, j), a = adjoint(i, j);
      middle_x(i, j) = 0.5 * (d + a);
      const Complex w = d - a;
      middle_y(i, j) = Complex(0.5 * w.imag(), -0.5 * w.real());
    }
  }

  Representation out;
  out.lhs = apply_function(f, s1) * q - q * apply_function(f, s2);
  out.rhs = two_kernel_integral(f, s1, s2, middle_x, middle_y, options);
  out.defect = frobenius_norm(out.lhs - out.rhs);
  return out;
}

}  // namespace doikit
