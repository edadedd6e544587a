#include "doikit/symbols.hpp"

#include <cmath>
#include <random>
#include <set>

#include "doikit/error.hpp"

namespace doikit::symbols {
namespace {

constexpr Complex kI{0.0, 1.0};

ScalarField2D make(std::string name, std::function<Complex(Complex)> value,
                   std::function<Complex(Complex)> dx = {}, std::function<Complex(Complex)> dy = {}) {
  ScalarField2D f;
  f.name = std::move(name);
  f.value = std::move(value);
  f.d_dx = std::move(dx);
  f.d_dy = std::move(dy);
  return f;
}

}  // namespace

ScalarField2D identity() {
  return make("z", [](Complex z) { return z; }, [](Complex) { return Complex(1.0); },
              [](Complex) { return kI; });
}

ScalarField2D conjugate() {
  return make("conj", [](Complex z) { return std::conj(z); }, [](Complex) { return Complex(1.0); },
              [](Complex) { return -kI; });
}

ScalarField2D real_part() {
  return make("re", [](Complex z) { return Complex(z.real()); }, [](Complex) { return Complex(1.0); },
              [](Complex) { return Complex(0.0); });
}

ScalarField2D imag_part() {
  return make("im", [](Complex z) { return Complex(z.imag()); }, [](Complex) { return Complex(0.0); },
              [](Complex) { return Complex(1.0); });
}

ScalarField2D abs_squared() {
  return make("abs_sq", [](Complex z) { return Complex(std::norm(z)); },
              [](Complex z) { return Complex(2.0 * z.real()); },
              [](Complex z) { return Complex(2.0 * z.imag()); });
}

ScalarField2D abs_power(double alpha) {
  if (!(alpha > 0.0)) throw Error(Errc::InvalidAlpha, "|z|^α needs α > 0");
  // the gradient blows up at the origin for α < 1; report 0 there
  auto grad = [alpha](Complex z, double component) {
    const double r = std::abs(z);
    if (r == 0.0) return Complex(0.0);
    return Complex(alpha * std::pow(r, alpha - 2.0) * component);
  };
  return make("abs_pow(" + std::to_string(alpha) + ")",
              [alpha](Complex z) { return Complex(std::pow(std::abs(z), alpha)); },
              [grad](Complex z) { return grad(z, z.real()); },
              [grad](Complex z) { return grad(z, z.imag()); });
}

ScalarField2D capped_abs() {
  auto grad = [](Complex z, double component) {
    const double r = std::abs(z);
    if (r == 0.0 || r >= 1.0) return Complex(0.0);
    return Complex(component / r);
  };
  return make("capped_abs", [](Complex z) { return Complex(std::min(std::abs(z), 1.0)); },
              [grad](Complex z) { return grad(z, z.real()); },
              [grad](Complex z) { return grad(z, z.imag()); });
}

ScalarField2D complex_power(int k) {
  if (k < 0) throw Error(Errc::InvalidArgument, "z^k needs k ≥ 0");
  auto ipow = [](Complex z, int n) {
    Complex acc(1.0);
    for (int i = 0; i < n; ++i) acc *= z;
    return acc;
  };
  auto deriv = [k, ipow](Complex z) {
    return k == 0 ? Complex(0.0) : static_cast<double>(k) * ipow(z, k - 1);
  };
  return make("z^" + std::to_string(k), [k, ipow](Complex z) { return ipow(z, k); }, deriv,
              [deriv](Complex z) { return kI * deriv(z); });
}

ScalarField2D exponential(Frequency nu, Complex coef) {
  return TrigPoly2D::exponential(nu, coef).field("exp(" + std::to_string(nu.a) + "," + std::to_string(nu.b) + ")");
}

ScalarField2D piecewise_smooth() {
  return make("piecewise", [](Complex z) {
    const double x = z.real(), y = z.imag();
    if (x >= 0.0) return Complex(x * x - y, std::sin(x + y));
    if (y >= 0.0) return Complex(std::cos(y) + 1.0, x);
    return Complex(std::abs(x + y), 0.5);
  });
}

TrigPoly2D random_trig_poly(std::uint64_t seed, int terms, double max_frequency) {
  if (terms < 1) throw Error(Errc::InvalidArgument, "need at least one term");
  if (!(max_frequency > 0.0)) throw Error(Errc::InvalidArgument, "max_frequency must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<TrigTerm> out;
  std::set<Frequency> seen;
  while (static_cast<int>(out.size()) < terms) {
    const double a = unit(rng), b = unit(rng);
    if (a * a + b * b > 1.0) continue;
    const Frequency nu{a * max_frequency, b * max_frequency};
    if (!seen.insert(nu).second) continue;
    const double re = gauss(rng), im = gauss(rng);
    out.push_back({nu, Complex(re, im)});
  }
  return TrigPoly2D(std::move(out));
}

ScalarField2D product(const ScalarField2D& f, const ScalarField2D& g) {
  ScalarField2D h;
  h.name = f.name + "*" + g.name;
  h.value = [f, g](Complex z) { return f(z) * g(z); };
  if (f.has_gradient() && g.has_gradient()) {
    h.d_dx = [f, g](Complex z) { return f.d_dx(z) * g(z) + f(z) * g.d_dx(z); };
    h.d_dy = [f, g](Complex z) { return f.d_dy(z) * g(z) + f(z) * g.d_dy(z); };
  }
  return h;
}

}  // namespace doikit::symbols
