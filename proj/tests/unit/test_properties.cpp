// Randomized invariants, seeded so failures reproduce.
#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "doikit/calculus.hpp"
#include "doikit/symbols.hpp"
#include "doikit/theorems.hpp"
#include "oracle.hpp"

using namespace doikit;

namespace {

const Complex I1(0.0, 1.0);

double rel(const ComplexMatrix& a, const ComplexMatrix& b) {
  return frobenius_norm(a - b) / (1.0 + frobenius_norm(b));
}

ComplexMatrix conj_by(const ComplexMatrix& w, const ComplexMatrix& m) { return w * m * w.adjoint(); }

std::vector<ScalarField2D> symbol_pool(std::uint64_t seed) {
  return {symbols::random_trig_poly(seed, 5, 3.0).field("trig"), symbols::abs_power(0.5), symbols::abs_power(0.3),
          symbols::complex_power(2),  symbols::complex_power(3), symbols::piecewise_smooth(),
          symbols::abs_squared(),     symbols::capped_abs()};
}

}  // namespace

TEST(LinalgProperty, SchattenUnitaryInvariance) {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng() % 16;
    const ComplexMatrix t = random_gaussian_matrix(n, n, rng);
    const ComplexMatrix u = random_unitary(n, rng), v = random_unitary(n, rng);
    for (double p : {0.5, 1.0, 2.0, 3.0, std::numeric_limits<double>::infinity()}) {
      const double a = schatten_norm(t, p), b = schatten_norm(u * t * v, p);
      EXPECT_NEAR(a, b, 1e-8 * a) << n << " " << p;
    }
  }
}

TEST(LinalgProperty, SingularValuesMatchHermitianDilation) {
  std::mt19937_64 rng(102);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t r = 1 + rng() % 9, c = 1 + rng() % 9;
    const ComplexMatrix t = random_gaussian_matrix(r, c, rng);
    ComplexMatrix dil = ComplexMatrix::zeros(r + c, r + c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) {
        dil(i, r + j) = t(i, j);
        dil(r + j, i) = std::conj(t(i, j));
      }
    auto ev = oracle::hermitian_eigenvalues(dil);
    std::sort(ev.rbegin(), ev.rend());
    const auto s = singular_values(t);
    for (std::size_t k = 0; k < s.size(); ++k) EXPECT_NEAR(s[k], ev[k], 1e-8);
  }
}

TEST(LinalgProperty, NormalReconstructionToDim64) {
  std::mt19937_64 rng(103);
  for (std::size_t n : {1u, 2u, 7u, 16u, 31u, 64u}) {
    const ComplexMatrix m = oracle::random_normal(n, rng);
    const auto s = normal_spectral(m);
    EXPECT_LE(frobenius_norm(m - s.reconstruct()), 1e-10 * (1.0 + frobenius_norm(m)));
    EXPECT_LE(unitarity_defect(s.basis), 1e-12 * n);
    EXPECT_LE(oracle::multiset_distance(s.eigenvalues, oracle::eigenvalues(m)), 1e-9);
  }
}

TEST(LinalgProperty, HermitianSpectraAgree) {
  std::mt19937_64 rng(104);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix h = random_hermitian(2 + rng() % 12, rng);
    const auto s = normal_spectral(h);
    const auto e = hermitian_eigen(h);
    std::vector<Complex> ref(e.eigenvalues.begin(), e.eigenvalues.end());
    EXPECT_LE(oracle::multiset_distance(s.eigenvalues, ref), 1e-10);
  }
}

TEST(FuncspaceProperty, BesovScaling) {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const TrigPoly2D f = symbols::random_trig_poly(seed, 4, 6.0);
    const Complex c(std::cos(seed), 3.0 * std::sin(seed));
    for (double s : {0.5, 1.0}) {
      EXPECT_NEAR(besov_norm(f.scaled(c), s) / (std::abs(c) * besov_norm(f, s)), 1.0, 1e-10);
    }
  }
}

TEST(FuncspaceProperty, BesovMonotoneInSmoothness) {
  // every frequency is zero or has length ≥ 1, so no band index is negative
  std::mt19937_64 rng(105);
  std::uniform_real_distribution<double> radius(1.0, 20.0), angle(0.0, 2.0 * std::numbers::pi);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<TrigTerm> terms{{{0.0, 0.0}, Complex(g(rng), g(rng))}};
    for (int k = 0; k < 4; ++k) {
      const double r = radius(rng), a = angle(rng);
      terms.push_back({{r * std::cos(a), r * std::sin(a)}, Complex(g(rng), g(rng))});
    }
    const TrigPoly2D f(terms);
    double last = 0.0;
    for (double s : {0.1, 0.3, 0.5, 0.8, 1.0, 1.5}) {
      const double b = besov_norm(f, s);
      EXPECT_GE(b, last * (1 - 1e-12));
      last = b;
    }
  }
}

TEST(FuncspaceProperty, SeminormMonotoneInBudget) {
  SeminormOptions o;
  o.box = Box{Complex(0.3, -0.2), 2.0};
  o.seed = 7;
  for (const auto& f : {symbols::abs_power(0.4), symbols::piecewise_smooth(), symbols::capped_abs()}) {
    double last = 0.0;
    for (std::size_t budget : {1u, 2u, 8u, 64u, 512u, 4096u}) {
      o.budget = budget;
      const double v = holder_seminorm(f, 0.4, o).value;
      EXPECT_GE(v, last) << f.name << " " << budget;
      last = v;
    }
  }
}

TEST(CalculusProperty, DoiLinearity) {
  std::mt19937_64 rng(106);
  const auto s1 = normal_spectral(oracle::random_normal(6, rng));
  const auto s2 = normal_spectral(oracle::random_normal(6, rng));
  const auto phi = divided_difference_kernel(symbols::abs_power(0.5), Axis::Y, {});
  const ComplexMatrix t = random_gaussian_matrix(6, 6, rng), u = random_gaussian_matrix(6, 6, rng);
  const Complex a(0.3, -1.2), b(2.0, 0.5);
  EXPECT_LE(rel(double_operator_integral(phi, s1, a * t + b * u, s2),
                a * double_operator_integral(phi, s1, t, s2) + b * double_operator_integral(phi, s1, u, s2)),
            1e-10);
}

TEST(CalculusProperty, DoiAdjointSymmetry) {
  std::mt19937_64 rng(107);
  const auto s1 = normal_spectral(oracle::random_normal(5, rng));
  const auto s2 = normal_spectral(oracle::random_normal(4, rng));
  const auto f = symbols::random_trig_poly(3, 3, 2.0).field();
  const auto phi = divided_difference_kernel(f, Axis::X, {});
  MultiplierKernel tilde{"tilde", [phi](Complex z1, Complex z2) { return std::conj(phi.eval(z2, z1)); }};
  const ComplexMatrix t = random_gaussian_matrix(5, 4, rng);
  EXPECT_LE(rel(double_operator_integral(phi, s1, t, s2).adjoint(), double_operator_integral(tilde, s2, t.adjoint(), s1)),
            1e-10);
}

TEST(CalculusProperty, Multiplicativity) {
  std::mt19937_64 rng(108);
  for (int trial = 0; trial < 5; ++trial) {
    const ComplexMatrix n = oracle::random_normal(2 + trial * 3, rng);
    const auto f = symbols::abs_power(0.5), g = symbols::random_trig_poly(trial, 3, 2.0).field();
    const auto fg = apply_function(symbols::product(f, g), n);
    const auto prod = apply_function(f, n) * apply_function(g, n);
    EXPECT_LE(frobenius_norm(fg - prod), 1e-9 * (1.0 + frobenius_norm(fg)));
  }
}

TEST(CalculusProperty, ExactRepresentation) {
  std::mt19937_64 rng(109);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + rng() % 15;
    const auto pool = symbol_pool(rng());
    const auto& f = pool[trial % pool.size()];
    const ComplexMatrix n1 = oracle::random_normal(n, rng), n2 = oracle::random_normal(n, rng);
    const auto rep = representation_difference(f, n1, n2);
    EXPECT_LE(rep.defect, 1e-8 * (1.0 + frobenius_norm(rep.lhs))) << f.name << " dim " << n;
  }
}

TEST(CalculusProperty, ConventionIndependence) {
  std::mt19937_64 rng(110);
  // pairs sharing eigenvalue coordinates exercise the coincidence branch
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 3 + trial % 4;
    const ComplexMatrix u = random_unitary(n, rng), v = random_unitary(n, rng);
    std::vector<Complex> l(n), m(n);
    std::normal_distribution<double> g;
    for (std::size_t k = 0; k < n; ++k) {
      l[k] = Complex(g(rng), g(rng));
      m[k] = k % 2 ? Complex(l[k].real(), g(rng)) : Complex(g(rng), l[k].imag());
    }
    const ComplexMatrix n1 = from_spectrum(u, l), n2 = from_spectrum(v, m);
    const auto f = symbol_pool(trial)[trial % 8];
    RepresentationOptions zero;
    zero.convention = Coincidence::Zero;
    const auto a = representation_difference(f, n1, n2);
    const auto b = representation_difference(f, n1, n2, zero);
    EXPECT_LE(std::abs(a.defect - b.defect), 1e-12) << f.name;
  }
}

TEST(TheoremProperty, HolderScaleInvariance) {
  for (double a : {0.25, 0.5, 0.75}) {
    const auto pair = random_normal_pair({4, PairMode::Independent, 0.3, 111});
    RatioParams p;
    p.alpha = a;
    p.symbol_norm_override = 1.0;  // exact Hölder seminorm of |z|^α
    const auto base = theorem_ratio(TheoremTag::Holder, symbols::abs_power(a), pair.n1, pair.n2, p);
    for (double c : {1e-3, 0.5, 7.0, 1e4}) {
      const auto scaled = theorem_ratio(TheoremTag::Holder, symbols::abs_power(a), c * pair.n1, c * pair.n2, p);
      EXPECT_NEAR(scaled.ratio, base.ratio, 1e-9 * base.ratio);
    }
  }
}

TEST(TheoremProperty, UnitaryInvariance) {
  std::mt19937_64 rng(112);
  const auto pair = random_normal_pair({4, PairMode::Independent, 0.2, 112});
  const ComplexMatrix w = random_unitary(4, rng);
  const ComplexMatrix m1 = conj_by(w, pair.n1), m2 = conj_by(w, pair.n2);
  RatioParams p;
  p.alpha = 0.5;
  p.p = 2.0;
  p.omega = ModulusOfContinuity::capped_linear();
  p.seminorm_budget = 256;
  const auto f = symbols::abs_power(0.5);
  const auto trig = symbols::random_trig_poly(2, 4, 2.0).field();
  struct Case {
    TheoremTag tag;
    const ScalarField2D* f;
  };
  for (Case c : {Case{TheoremTag::Holder, &f}, Case{TheoremTag::SchattenP, &f}, Case{TheoremTag::Omega, &trig},
                 Case{TheoremTag::KeyIneq, &trig}, Case{TheoremTag::LipBesov, &trig}, Case{TheoremTag::TraceBesov, &trig},
                 Case{TheoremTag::BesovAlphaS1, &trig}}) {
    const double a = theorem_ratio(c.tag, *c.f, pair.n1, pair.n2, p).ratio;
    const double b = theorem_ratio(c.tag, *c.f, m1, m2, p).ratio;
    EXPECT_NEAR(a, b, 1e-9 * a) << to_string(c.tag);
  }
  const ComplexMatrix q = random_gaussian_matrix(4, 4, rng);
  const double a = quasicommutator_ratio(f, pair.n1, pair.n2, q, 0.5, p).ratio;
  const double b = quasicommutator_ratio(f, m1, m2, conj_by(w, q), 0.5, p).ratio;
  EXPECT_NEAR(a, b, 1e-9 * a);
}

TEST(TheoremProperty, WeakBelowStrong) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto pair = random_normal_pair({2 + seed % 7, PairMode::Independent, 0.5, seed});
    for (double a : {0.2, 0.5, 0.8}) {
      const auto w = weak_singular_check(symbols::abs_power(a), a, pair.n1, pair.n2);
      EXPECT_LE(w.quasinorm, w.schatten_quasinorm * (1 + 1e-10));
    }
  }
}

TEST(TheoremProperty, HolderSearchFloor) {
  for (double a : {0.25, 0.5, 0.75}) {
    SearchParams sp;
    sp.symbol = symbols::abs_power(a);
    sp.ratio.alpha = a;
    sp.ratio.seminorm_budget = 64;
    sp.max_dim = 3;
    sp.ascent_rounds = 1;
    EXPECT_GE(adversarial_search(TheoremTag::Holder, sp, 4, 13).best_ratio, 1.0 - 1e-9);
  }
}
