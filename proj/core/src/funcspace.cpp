#include "doikit/funcspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "doikit/error.hpp"

namespace doikit {
namespace {

constexpr Complex kI{0.0, 1.0};

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// exp(−1/(1−u²)) on (−1, 1), zero elsewhere.
double bump(double u) {
  const double d = 1.0 - u * u;
  if (d <= 0.0) return 0.0;
  return std::exp(-1.0 / d);
}

// ψ(u) = φ(u) / Σ_n φ(u − n)
double normalized_bump(double u) {
  const double num = bump(u);
  if (num == 0.0) return 0.0;
  const double frac = u - std::floor(u);
  const double denom = bump(frac) + bump(frac - 1.0);
  return num / denom;
}

}  // namespace

double Frequency::length() const noexcept { return std::hypot(a, b); }

TrigPoly2D::TrigPoly2D(std::vector<TrigTerm> terms) : terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (!std::isfinite(t.nu.a) || !std::isfinite(t.nu.b) || !finite(t.coef)) {
      throw Error(Errc::NonFiniteValue, "trig polynomial term");
    }
  }
  std::vector<Frequency> seen;
  seen.reserve(terms_.size());
  for (const auto& t : terms_) seen.push_back(t.nu);
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
    throw Error(Errc::DuplicateFrequency, "frequencies must be pairwise distinct");
  }
}

TrigPoly2D TrigPoly2D::constant(Complex c) { return TrigPoly2D({TrigTerm{{0.0, 0.0}, c}}); }

TrigPoly2D TrigPoly2D::exponential(Frequency nu, Complex coef) {
  return TrigPoly2D({TrigTerm{nu, coef}});
}

Complex TrigPoly2D::operator()(Complex z) const {
  Complex acc{};
  for (const auto& t : terms_) acc += t.coef * std::exp(kI * (t.nu.a * z.real() + t.nu.b * z.imag()));
  return acc;
}

Complex TrigPoly2D::d_dx(Complex z) const {
  Complex acc{};
  for (const auto& t : terms_)
    acc += kI * t.nu.a * t.coef * std::exp(kI * (t.nu.a * z.real() + t.nu.b * z.imag()));
  return acc;
}

Complex TrigPoly2D::d_dy(Complex z) const {
  Complex acc{};
  for (const auto& t : terms_)
    acc += kI * t.nu.b * t.coef * std::exp(kI * (t.nu.a * z.real() + t.nu.b * z.imag()));
  return acc;
}

TrigPoly2D TrigPoly2D::scaled(Complex c) const {
  std::vector<TrigTerm> out = terms_;
  for (auto& t : out) t.coef *= c;
  return TrigPoly2D(std::move(out));
}

std::optional<Complex> TrigPoly2D::coefficient(Frequency nu) const {
  for (const auto& t : terms_)
    if (t.nu == nu) return t.coef;
  return std::nullopt;
}

ScalarField2D TrigPoly2D::field(std::string name) const {
  auto self = std::make_shared<const TrigPoly2D>(*this);
  ScalarField2D f;
  f.name = std::move(name);
  f.value = [self](Complex z) { return (*self)(z); };
  f.d_dx = [self](Complex z) { return self->d_dx(z); };
  f.d_dy = [self](Complex z) { return self->d_dy(z); };
  f.trig = self;
  return f;
}

double band_radius(const TrigPoly2D& f) {
  if (f.empty()) throw Error(Errc::EmptySymbol, "band_radius of an empty symbol");
  double sigma = 0.0;
  for (const auto& t : f.terms()) sigma = std::max(sigma, t.nu.length());
  return sigma;
}

Box bounding_box(std::span<const Complex> points, double margin) {
  if (points.empty()) return Box{Complex{}, std::max(margin, 1.0)};
  double xmin = points[0].real(), xmax = xmin, ymin = points[0].imag(), ymax = ymin;
  for (const auto& z : points) {
    xmin = std::min(xmin, z.real());
    xmax = std::max(xmax, z.real());
    ymin = std::min(ymin, z.imag());
    ymax = std::max(ymax, z.imag());
  }
  const double half = 0.5 * std::max(xmax - xmin, ymax - ymin) + margin;
  return Box{Complex(0.5 * (xmin + xmax), 0.5 * (ymin + ymax)), half};
}

SupNormEstimate sup_norm(const ScalarField2D& f, const Box& box) {
  if (!(box.half_width > 0.0)) throw Error(Errc::InvalidArgument, "box half-width must be positive");
  if (f.trig && f.trig->terms().size() <= 1) {
    const double v = f.trig->empty() ? 0.0 : std::abs(f.trig->terms().front().coef);
    return SupNormEstimate{v, 0, 0};
  }

  auto sample = [&](std::size_t n, std::size_t i, std::size_t j) {
    const double step = 2.0 * box.half_width / static_cast<double>(n);
    const Complex z(box.center.real() - box.half_width + step * static_cast<double>(i),
                    box.center.imag() - box.half_width + step * static_cast<double>(j));
    const Complex v = f(z);
    if (!finite(v)) throw Error(Errc::NonFiniteValue, "symbol returned a non-finite value");
    return std::abs(v);
  };

  constexpr std::size_t kStart = 64;
  constexpr std::size_t kCap = 4096;
  std::size_t n = kStart;
  double best = 0.0;
  for (std::size_t i = 0; i <= n; ++i)
    for (std::size_t j = 0; j <= n; ++j) best = std::max(best, sample(n, i, j));

  int refinements = 0;
  while (n < kCap) {
    const std::size_t m = 2 * n;
    double refined = best;
    // nested grids: only nodes with an odd index are new
    for (std::size_t i = 0; i <= m; ++i)
      for (std::size_t j = (i % 2 == 0 ? 1 : 0); j <= m; j += (i % 2 == 0 ? 2 : 1))
        refined = std::max(refined, sample(m, i, j));
    ++refinements;
    n = m;
    const double change = refined - best;
    best = refined;
    if (change <= 1e-4 * best) break;
  }
  return SupNormEstimate{best, n, refinements};
}

// --- Littlewood–Paley ----------------------------------------------------

double lp_window(double t) {
  if (!(t > 0.0)) return 0.0;
  return normalized_bump(std::log2(t));
}

TrigPoly2D BesovLadder::sum() const {
  std::map<Frequency, Complex> acc;
  if (low) {
    for (const auto& t : low->terms()) acc[t.nu] += t.coef;
  }
  for (const auto& p : pieces)
    for (const auto& t : p.piece.terms()) acc[t.nu] += t.coef;
  std::vector<TrigTerm> terms;
  terms.reserve(acc.size());
  for (const auto& [nu, c] : acc) terms.push_back({nu, c});
  return TrigPoly2D(std::move(terms));
}

BesovLadder lp_pieces(const TrigPoly2D& f) {
  BesovLadder ladder;
  std::vector<TrigTerm> low_terms;
  std::map<int, std::vector<TrigTerm>> bands;
  for (const auto& t : f.terms()) {
    const double r = t.nu.length();
    if (r == 0.0) {
      low_terms.push_back(t);
      continue;
    }
    const double u = std::log2(r);
    const int base = static_cast<int>(std::floor(u));
    for (int n = base; n <= base + 1; ++n) {
      const double w = normalized_bump(u - static_cast<double>(n));
      if (w > 0.0) bands[n].push_back(TrigTerm{t.nu, t.coef * w});
    }
  }
  if (!low_terms.empty()) ladder.low = TrigPoly2D(std::move(low_terms));
  for (auto& [n, terms] : bands) ladder.pieces.push_back({n, TrigPoly2D(std::move(terms))});
  return ladder;
}

double besov_norm(const TrigPoly2D& f, double s, const BesovOptions& options) {
  if (!(s > 0.0)) throw Error(Errc::InvalidArgument, "Besov smoothness must be positive");
  const BesovLadder ladder = lp_pieces(f);
  double total = 0.0;
  if (ladder.low) total += sup_norm(ladder.low->field(), options.box).value;
  for (const auto& p : ladder.pieces) {
    total += std::pow(2.0, static_cast<double>(p.band) * s) * sup_norm(p.piece.field(), options.box).value;
  }
  return total;
}

double besov_norm(const ScalarField2D& f, double s, const BesovOptions& options) {
  if (!f.trig) {
    throw Error(Errc::InvalidArgument, "Besov norms are computed for band-limited symbols only");
  }
  return besov_norm(*f.trig, s, options);
}

// --- moduli of continuity --------------------------------------------------

ModulusOfContinuity ModulusOfContinuity::power(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(Errc::InvalidAlpha, "power modulus needs α in (0,1]");
  ModulusOfContinuity m;
  m.kind_ = Kind::Power;
  m.alpha_ = alpha;
  m.name_ = "t^" + std::to_string(alpha);
  return m;
}

ModulusOfContinuity ModulusOfContinuity::capped_linear() {
  ModulusOfContinuity m;
  m.kind_ = Kind::CappedLinear;
  m.name_ = "min(t,1)";
  return m;
}

ModulusOfContinuity ModulusOfContinuity::table(std::vector<std::pair<double, double>> samples) {
  if (samples.empty()) throw Error(Errc::InvalidModulus, "empty table");
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto [t, w] = samples[k];
    if (!(t > 0.0) || !(w > 0.0) || !std::isfinite(t) || !std::isfinite(w)) {
      throw Error(Errc::InvalidModulus, "table samples must be positive and finite");
    }
    if (k > 0 && !(t > samples[k - 1].first)) {
      throw Error(Errc::InvalidModulus, "table abscissae must increase strictly");
    }
  }
  ModulusOfContinuity m;
  m.kind_ = Kind::Table;
  m.name_ = "table";
  m.samples_ = std::move(samples);
  return m;
}

ModulusOfContinuity ModulusOfContinuity::custom(std::string name, std::function<double(double)> fn) {
  ModulusOfContinuity m;
  m.kind_ = Kind::Custom;
  m.name_ = std::move(name);
  m.fn_ = std::move(fn);
  return m;
}

double ModulusOfContinuity::operator()(double t) const {
  switch (kind_) {
    case Kind::Power:
      return std::pow(t, alpha_);
    case Kind::CappedLinear:
      return std::min(t, 1.0);
    case Kind::Table: {
      const auto& s = samples_;
      if (t <= s.front().first) return s.front().second * t / s.front().first;
      if (t >= s.back().first) return s.back().second;
      const auto it = std::upper_bound(s.begin(), s.end(), t,
                                       [](double v, const auto& p) { return v < p.first; });
      const auto& hi = *it;
      const auto& lo = *(it - 1);
      const double lambda = (t - lo.first) / (hi.first - lo.first);
      return lo.second + lambda * (hi.second - lo.second);
    }
    case Kind::Custom:
      return fn_(t);
  }
  return 0.0;
}

std::optional<double> ModulusOfContinuity::power_exponent() const noexcept {
  if (kind_ == Kind::Power) return alpha_;
  return std::nullopt;
}

void ModulusOfContinuity::validate() const {
  constexpr int kPoints = 241;
  double prev_t = 0.0, prev_w = 0.0;
  for (int k = 0; k < kPoints; ++k) {
    const double t = std::pow(10.0, -6.0 + 12.0 * k / (kPoints - 1));
    const double w = (*this)(t);
    if (!(w > 0.0) || !std::isfinite(w)) throw Error(Errc::InvalidModulus, name_ + ": ω must be positive");
    if (k > 0) {
      if (w < prev_w * (1.0 - 1e-12)) throw Error(Errc::InvalidModulus, name_ + ": ω decreases");
      if (w / t > (prev_w / prev_t) * (1.0 + 1e-12)) {
        throw Error(Errc::InvalidModulus, name_ + ": ω(t)/t increases");
      }
    }
    prev_t = t;
    prev_w = w;
  }
}

double omega_star(const ModulusOfContinuity& omega, double x) {
  if (!(x > 0.0)) throw Error(Errc::InvalidArgument, "ω_* needs x > 0");
  if (auto alpha = omega.power_exponent()) {
    if (*alpha >= 1.0) throw Error(Errc::DivergentTail, "∫ t^{α−2} diverges for α ≥ 1");
    return std::pow(x, *alpha) / (1.0 - *alpha);
  }
  return omega_star_quadrature(omega, x);
}

double omega_star_quadrature(const ModulusOfContinuity& omega, double x) {
  if (!(x > 0.0)) throw Error(Errc::InvalidArgument, "ω_* needs x > 0");
  using boost::math::quadrature::gauss_kronrod;

  auto integrand = [&](double u) {
    const double w = omega(x * std::exp(u));
    if (!std::isfinite(w)) throw Error(Errc::NonFiniteValue, "ω returned a non-finite value");
    return w * std::exp(-u);
  };
  // local growth rate d ln ω / du, used to extrapolate the tail as a power
  auto log_slope = [&](double u) {
    const double hi = omega(x * std::exp(u));
    const double lo = omega(x * std::exp(u - 1.0));
    return std::log(hi / lo);
  };

  constexpr double kSegment = 0.5;
  const double u_cap = std::log(1e280 / x);
  double upper = 0.0;
  double integral = 0.0;
  double target = 16.0;
  while (true) {
    target = std::min(target, u_cap);
    while (upper < target) {
      const double next = std::min(upper + kSegment, target);
      double err = 0.0;
      integral += gauss_kronrod<double, 31>::integrate(integrand, upper, next, 12, 1e-13, &err);
      upper = next;
    }
    const double beta = log_slope(upper);
    const double edge = integrand(upper);
    if (beta < 1.0 - 1e-9) {
      const double tail = edge / (1.0 - beta);
      if (tail <= 1e-9 * integral) return integral + tail;
      if (upper >= u_cap && tail <= 1e-7 * integral) return integral + tail;
    }
    if (upper >= u_cap) {
      throw Error(Errc::DivergentTail, "ω(t)/t² tail does not settle within the cutoff cap");
    }
    target = 2.0 * upper;
  }
}

// --- seminorm estimators -----------------------------------------------------

namespace {

class PairObjective {
 public:
  PairObjective(const ScalarField2D& f, const ModulusOfContinuity& omega, const Box& box)
      : f_(f), omega_(omega), box_(box) {}

  // negative when the pair is degenerate
  double operator()(Complex z1, Complex z2) const {
    const double d = std::abs(z1 - z2);
    if (!(d > 0.0)) return -1.0;
    const double w = omega_(d);
    if (!(w > 0.0)) return -1.0;
    const Complex f1 = f_(z1);
    const Complex f2 = f_(z2);
    if (!finite(f1) || !finite(f2)) throw Error(Errc::NonFiniteValue, "symbol returned a non-finite value");
    return std::abs(f1 - f2) / w;
  }

  Complex clamp(Complex z) const {
    const double lox = box_.center.real() - box_.half_width, hix = box_.center.real() + box_.half_width;
    const double loy = box_.center.imag() - box_.half_width, hiy = box_.center.imag() + box_.half_width;
    return {std::clamp(z.real(), lox, hix), std::clamp(z.imag(), loy, hiy)};
  }

  // Deterministic compass search over (x₁, y₁, x₂, y₂).
  double climb(Complex& z1, Complex& z2, double start) const {
    double best = start;
    double step = 0.25 * box_.half_width;
    const double floor = 1e-13 * (box_.half_width + std::abs(box_.center));
    int evaluations = 0;
    constexpr int kMaxEvaluations = 4000;
    while (step > floor && evaluations < kMaxEvaluations) {
      bool improved = false;
      for (int coord = 0; coord < 4 && !improved; ++coord) {
        for (double sign : {1.0, -1.0}) {
          Complex c1 = z1, c2 = z2;
          const Complex delta = (coord % 2 == 0) ? Complex(sign * step, 0.0) : Complex(0.0, sign * step);
          if (coord < 2) c1 = clamp(c1 + delta); else c2 = clamp(c2 + delta);
          const double r = (*this)(c1, c2);
          ++evaluations;
          if (r > best) {
            best = r;
            z1 = c1;
            z2 = c2;
            improved = true;
            break;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    return best;
  }

 private:
  const ScalarField2D& f_;
  const ModulusOfContinuity& omega_;
  const Box& box_;
};

}  // namespace

SeminormEstimate lambda_omega_seminorm(const ScalarField2D& f, const ModulusOfContinuity& omega,
                                       const SeminormOptions& options) {
  if (!(options.box.half_width > 0.0)) throw Error(Errc::InvalidArgument, "box half-width must be positive");
  omega.validate();
  const Box& box = options.box;
  PairObjective objective(f, omega, box);

  SeminormEstimate est;
  est.budget = options.budget;
  est.seed = options.seed;
  auto consider = [&](Complex z1, Complex z2, double r) {
    if (r > est.value) {
      est.value = r;
      est.z1 = z1;
      est.z2 = z2;
    }
  };

  // structured candidates: anchors, center, corners, edge midpoints
  std::vector<Complex> points = options.anchors;
  const double h = box.half_width;
  for (double dx : {-1.0, 0.0, 1.0})
    for (double dy : {-1.0, 0.0, 1.0}) points.push_back(box.center + Complex(dx * h, dy * h));
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) consider(points[i], points[j], objective(points[i], points[j]));
  if (est.value > 0.0) {
    Complex z1 = est.z1, z2 = est.z2;
    const double climbed = objective.climb(z1, z2, est.value);
    consider(z1, z2, climbed);
  }

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  double record = -1.0;
  for (std::size_t k = 0; k < options.budget; ++k) {
    const double a = coord(rng), b = coord(rng), c = coord(rng), d = coord(rng);
    Complex z1 = box.center + h * Complex(a, b);
    Complex z2 = box.center + h * Complex(c, d);
    const double r = objective(z1, z2);
    consider(z1, z2, r);
    if (r > record) {
      record = r;
      const double climbed = objective.climb(z1, z2, r);
      consider(z1, z2, climbed);
    }
  }
  return est;
}

SeminormEstimate holder_seminorm(const ScalarField2D& f, double alpha, const SeminormOptions& options) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(Errc::InvalidAlpha, "Hölder order must lie in (0,1)");
  return lambda_omega_seminorm(f, ModulusOfContinuity::power(alpha), options);
}

}  // namespace doikit
