#pragma once

#include <functional>
#include <string>

#include "doikit/funcspace.hpp"
#include "doikit/linalg.hpp"

namespace doikit {

enum class Axis { X, Y };

/// What a divided difference returns when its two arguments coincide along
/// the axis. On discrete spectra the choice never changes
/// f(N₁)−f(N₂): such entries are multiplied by vanishing middle factors.
enum class Coincidence { Derivative, Zero };

struct DividedDifferenceOptions {
  double scale = 1.0;   // spectral diameter
  double delta = 1e-9;  // coincidence threshold relative to scale
  Coincidence convention = Coincidence::Derivative;
};

/// Axis y: (f(x₁,y₁) − f(x₁,y₂)) / (y₁ − y₂).
/// Axis x: (f(x₁,y₂) − f(x₂,y₂)) / (x₁ − x₂).
/// Total: at coincidence it returns the partial derivative at (x₁,y₁) resp.
/// (x₁,y₂) when f has one and the convention asks for it, otherwise 0.
Complex divided_difference(const ScalarField2D& f, Axis axis, Complex z1, Complex z2,
                           const DividedDifferenceOptions& options = {});

struct MultiplierKernel {
  std::string name;
  std::function<Complex(Complex, Complex)> eval;
};

MultiplierKernel divided_difference_kernel(const ScalarField2D& f, Axis axis,
                                           const DividedDifferenceOptions& options = {});

/// M[j][k] = Φ(λ_j, μ_k)
struct MultiplierMatrix {
  ComplexMatrix entries;
};

MultiplierMatrix multiplier_matrix(const MultiplierKernel& phi, const SpectralDecomposition& s1,
                                   const SpectralDecomposition& s2);

/// ∬ Φ(z₁,z₂) dE₁(z₁) T dE₂(z₂) = U₁·(M ∘ (U₁*·T·U₂))·U₂*
ComplexMatrix double_operator_integral(const MultiplierMatrix& m, const SpectralDecomposition& s1,
                                       const ComplexMatrix& t, const SpectralDecomposition& s2);
ComplexMatrix double_operator_integral(const MultiplierKernel& phi, const SpectralDecomposition& s1,
                                       const ComplexMatrix& t, const SpectralDecomposition& s2);

/// f(N) = U·diag(f(λ_j))·U*
ComplexMatrix apply_function(const ScalarField2D& f, const SpectralDecomposition& s);
ComplexMatrix apply_function(const ScalarField2D& f, const ComplexMatrix& n,
                             const NormalOptions& options = {});

/// Largest side of the bounding box of the union of both spectra (1 when
/// every eigenvalue coincides).
double spectral_diameter(const SpectralDecomposition& s1, const SpectralDecomposition& s2);

struct Representation {
  ComplexMatrix lhs;
  ComplexMatrix rhs;
  double defect = 0.0;  // ‖lhs − rhs‖_F
};

struct RepresentationOptions {
  Coincidence convention = Coincidence::Derivative;
  double delta = 1e-9;
  NormalOptions normal;
};

/// lhs = f(N₁) − f(N₂);
/// rhs = ∬ DD_y dE₁ (B₁−B₂) dE₂ + ∬ DD_x dE₁ (A₁−A₂) dE₂.
Representation representation_difference(const ScalarField2D& f, const ComplexMatrix& n1,
                                         const ComplexMatrix& n2,
                                         const RepresentationOptions& options = {});
Representation representation_difference(const ScalarField2D& f, const ComplexMatrix& n1,
                                         const SpectralDecomposition& s1, const ComplexMatrix& n2,
                                         const SpectralDecomposition& s2,
                                         const RepresentationOptions& options = {});

/// lhs = f(N₁)·Q − Q·f(N₂);
/// rhs = ∬ DD_y dE₁ (B₁Q−QB₂) dE₂ + ∬ DD_x dE₁ (A₁Q−QA₂) dE₂, where the
/// middle factors are assembled from N₁Q−QN₂ and N₁*Q−QN₂*. N₁ and N₂ may
/// have different sizes; Q is then rectangular.
Representation quasicommutator_representation(const ScalarField2D& f, const ComplexMatrix& n1,
                                              const ComplexMatrix& n2, const ComplexMatrix& q,
                                              const RepresentationOptions& options = {});
Representation quasicommutator_representation(const ScalarField2D& f, const ComplexMatrix& n1,
                                              const SpectralDecomposition& s1,
                                              const ComplexMatrix& n2,
                                              const SpectralDecomposition& s2,
                                              const ComplexMatrix& q,
                                              const RepresentationOptions& options = {});

}  // namespace doikit
