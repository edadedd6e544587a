#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "doikit/matrix.hpp"

namespace doikit {

class TrigPoly2D;

/// A symbol f: ℂ → ℂ, with ℂ identified with ℝ² via z = x + iy.
struct ScalarField2D {
  std::string name;
  std::function<Complex(Complex)> value;
  std::function<Complex(Complex)> d_dx;  // empty when no derivative is known
  std::function<Complex(Complex)> d_dy;
  std::shared_ptr<const TrigPoly2D> trig;  // set when f has exact finite Fourier support

  Complex operator()(Complex z) const { return value(z); }
  bool has_gradient() const noexcept { return static_cast<bool>(d_dx) && static_cast<bool>(d_dy); }
  bool band_limited() const noexcept { return trig != nullptr; }
};

struct Frequency {
  double a = 0.0;
  double b = 0.0;

  double length() const noexcept;
  friend auto operator<=>(const Frequency&, const Frequency&) = default;
};

struct TrigTerm {
  Frequency nu;
  Complex coef;
};

/// f(z) = Σ_k c_k · exp(i(a_k x + b_k y)), frequencies pairwise distinct.
class TrigPoly2D {
 public:
  TrigPoly2D() = default;
  explicit TrigPoly2D(std::vector<TrigTerm> terms);

  static TrigPoly2D constant(Complex c);
  static TrigPoly2D exponential(Frequency nu, Complex coef = 1.0);

  const std::vector<TrigTerm>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }

  Complex operator()(Complex z) const;
  Complex d_dx(Complex z) const;
  Complex d_dy(Complex z) const;

  TrigPoly2D scaled(Complex c) const;
  std::optional<Complex> coefficient(Frequency nu) const;

  ScalarField2D field(std::string name = "trig") const;

 private:
  std::vector<TrigTerm> terms_;
};

/// σ = max_k |ν_k|; the Fourier transform of f lives in the disc of radius σ.
double band_radius(const TrigPoly2D& f);

/// Axis-aligned square: center ± half_width in both coordinates.
struct Box {
  Complex center{};
  double half_width = 1.0;
};

/// Smallest square containing every point, grown by `margin` on each side.
Box bounding_box(std::span<const Complex> points, double margin = 1.0);

struct SupNormEstimate {
  double value = 0.0;
  std::size_t grid = 0;  // cells per side at the final refinement
  int refinements = 0;
};

/// Lower-bound estimate of sup |f| on the box: grid maximum starting at 64×64,
/// doubling until the relative change is ≤ 1e-4 or the grid reaches 4096².
SupNormEstimate sup_norm(const ScalarField2D& f, const Box& box);

// --- Littlewood–Paley ----------------------------------------------------

/// Dyadic window w(t) = ψ(log₂ t): a normalized C^∞ bump supported in
/// [1/2, 2] with w(1) = 1 and Σ_n w(t/2ⁿ) = 1 for t > 0.
double lp_window(double t);

struct LadderPiece {
  int band = 0;
  TrigPoly2D piece;
};

struct BesovLadder {
  std::optional<TrigPoly2D> low;  // zero-frequency term, if any
  std::vector<LadderPiece> pieces;  // ascending band index
  std::string window = "log2-bump";

  TrigPoly2D sum() const;
};

BesovLadder lp_pieces(const TrigPoly2D& f);

struct BesovOptions {
  /// Box used for multi-term pieces; single-term pieces are unimodular up to
  /// their coefficient and need no sampling.
  Box box{Complex{}, 8.0};
};

/// Σ_n 2^{ns}·‖piece_n‖_∞ + ‖low‖_∞ (the B^s_{∞,1} norm for the window above).
double besov_norm(const TrigPoly2D& f, double s, const BesovOptions& options = {});
double besov_norm(const ScalarField2D& f, double s, const BesovOptions& options = {});

// --- moduli of continuity --------------------------------------------------

class ModulusOfContinuity {
 public:
  enum class Kind { Power, CappedLinear, Table, Custom };

  static ModulusOfContinuity power(double alpha);
  static ModulusOfContinuity capped_linear();
  /// Piecewise linear through (t_k, ω_k); linear through the origin below the
  /// first sample and constant past the last.
  static ModulusOfContinuity table(std::vector<std::pair<double, double>> samples);
  static ModulusOfContinuity custom(std::string name, std::function<double(double)> fn);

  double operator()(double t) const;

  Kind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }
  std::optional<double> power_exponent() const noexcept;
  const std::vector<std::pair<double, double>>& samples() const noexcept { return samples_; }

  /// Checks ω > 0, ω nondecreasing and ω(t)/t nonincreasing on a log grid
  /// over [1e-6, 1e6]. Throws InvalidModulus.
  void validate() const;

 private:
  Kind kind_ = Kind::Custom;
  std::string name_;
  double alpha_ = 1.0;
  std::vector<std::pair<double, double>> samples_;
  std::function<double(double)> fn_;
};

/// ω_*(x) = x·∫_x^∞ ω(t)/t² dt. Uses the closed form x^α/(1−α) for power
/// moduli and omega_star_quadrature otherwise.
double omega_star(const ModulusOfContinuity& omega, double x);

/// Always integrates numerically (after t = x·e^u the integrand is
/// ω(x·e^u)·e^{−u}), with a local-power tail correction. Throws DivergentTail
/// when the tail does not settle below the cutoff cap.
double omega_star_quadrature(const ModulusOfContinuity& omega, double x);

// --- seminorm estimators -----------------------------------------------------

struct SeminormOptions {
  Box box;
  std::size_t budget = 4096;  // random pairs
  std::uint64_t seed = 1;
  /// Points always included as candidates (for example the spectra in play).
  std::vector<Complex> anchors;
};

struct SeminormEstimate {
  double value = 0.0;
  Complex z1{};
  Complex z2{};
  std::size_t budget = 0;
  std::uint64_t seed = 0;
};

/// Lower bound for sup |f(z₁)−f(z₂)| / ω(|z₁−z₂|) over pairs in the box. The
/// value is a running sup over a fixed pair sequence, so raising the budget
/// never lowers it.
SeminormEstimate lambda_omega_seminorm(const ScalarField2D& f, const ModulusOfContinuity& omega,
                                       const SeminormOptions& options);

/// Λ_α seminorm; the ω(t) = t^α case of lambda_omega_seminorm.
SeminormEstimate holder_seminorm(const ScalarField2D& f, double alpha, const SeminormOptions& options);

}  // namespace doikit
