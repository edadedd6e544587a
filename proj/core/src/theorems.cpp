#include "doikit/theorems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "doikit/error.hpp"

namespace doikit {
namespace {

constexpr Complex kI{0.0, 1.0};

std::vector<Complex> gaussian_spectrum(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Complex> out(n);
  for (auto& z : out) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    z = Complex(re, im);
  }
  return out;
}

Complex unimodular(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  return std::polar(1.0, angle(rng));
}

void check_spec(const NormalPairSpec& spec) {
  if (spec.dim < 1) throw Error(Errc::InvalidArgument, "pair dimension must be ≥ 1");
  if (!(spec.eps > 0.0) || !std::isfinite(spec.eps)) throw Error(Errc::InvalidArgument, "ε must be positive");
}

NormalPair conjugated_pair(const NormalPairSpec& spec, std::mt19937_64& rng) {
  const ComplexMatrix u = random_unitary(spec.dim, rng);
  ComplexMatrix n1 = from_spectrum(u, gaussian_spectrum(spec.dim, rng));
  ComplexMatrix h = random_hermitian(spec.dim, rng);
  const double h_norm = operator_norm(h);
  if (h_norm == 0.0) throw Error(Errc::ScaleUnreachable, "degenerate generator");
  h *= 1.0 / h_norm;
  const HermitianEigen eh = hermitian_eigen(h);

  auto conjugate_by = [&](const ComplexMatrix& n, double theta) {
    std::vector<Complex> phases(eh.eigenvalues.size());
    for (std::size_t k = 0; k < phases.size(); ++k) phases[k] = std::exp(kI * theta * eh.eigenvalues[k]);
    const ComplexMatrix v = from_spectrum(eh.basis, phases);
    return v * n * v.adjoint();
  };
  auto gap = [&](const ComplexMatrix& n, double theta) { return operator_norm(n - conjugate_by(n, theta)); };

  constexpr int kGrid = 32;
  std::vector<double> thetas(kGrid + 1), values(kGrid + 1, 0.0);
  double gmax = 0.0;
  for (int k = 1; k <= kGrid; ++k) {
    thetas[k] = std::numbers::pi * k / kGrid;
    values[k] = gap(n1, thetas[k]);
    gmax = std::max(gmax, values[k]);
  }
  if (gmax <= 1e-12 * (1.0 + frobenius_norm(n1))) {
    throw Error(Errc::ScaleUnreachable, "conjugation cannot move a scalar operator");
  }
  if (spec.eps > 0.5 * gmax) {
    const double scale = spec.eps / (0.5 * gmax);
    n1 *= scale;
    for (auto& v : values) v *= scale;
  }
  int k = 1;
  while (values[k] < spec.eps) ++k;
  double lo = thetas[k - 1], hi = thetas[k];
  double theta = hi;
  double g = values[k];
  for (int it = 0; it < 200 && std::abs(g - spec.eps) > 1e-9 * spec.eps; ++it) {
    theta = 0.5 * (lo + hi);
    g = gap(n1, theta);
    if (g < spec.eps) lo = theta; else hi = theta;
  }
  NormalPair out;
  out.n2 = conjugate_by(n1, theta);
  out.n1 = std::move(n1);
  out.eps_achieved = operator_norm(out.n1 - out.n2);
  return out;
}

double require_alpha(const RatioParams& params, TheoremTag tag) {
  if (!params.alpha) throw Error(Errc::TagParamMismatch, std::string(to_string(tag)) + " needs α");
  const double a = *params.alpha;
  if (!(a > 0.0 && a < 1.0)) throw Error(Errc::InvalidAlpha, "α must lie in (0,1)");
  return a;
}

const TrigPoly2D& require_trig(const ScalarField2D& f, TheoremTag tag) {
  if (!f.trig) {
    throw Error(Errc::TagParamMismatch,
                std::string(to_string(tag)) + " needs a band-limited (trigonometric) symbol");
  }
  return *f.trig;
}

PairDigest digest(const PreparedPair& pair, double eps) {
  return PairDigest{pair.n1.rows(), pair.s1.eigenvalues, pair.s2.eigenvalues, eps};
}

void finish(RatioReport& r) {
  if (!(r.denominator > 0.0) || !std::isfinite(r.denominator)) {
    throw Error(Errc::ZeroDenominator, std::string(to_string(r.tag)) + " denominator vanishes");
  }
  r.ratio = r.numerator / r.denominator;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::string_view to_string(PairMode mode) noexcept {
  switch (mode) {
    case PairMode::SharedBasis: return "shared_basis";
    case PairMode::Independent: return "independent";
    case PairMode::Conjugated: return "conjugated";
  }
  return "unknown";
}

PairMode pair_mode_from_string(std::string_view name) {
  if (name == "shared_basis") return PairMode::SharedBasis;
  if (name == "independent") return PairMode::Independent;
  if (name == "conjugated") return PairMode::Conjugated;
  throw Error(Errc::InvalidArgument, "unknown pair mode '" + std::string(name) + "'");
}

std::string_view to_string(TheoremTag tag) noexcept {
  switch (tag) {
    case TheoremTag::KeyIneq: return "key_ineq";
    case TheoremTag::LipBesov: return "lip_besov";
    case TheoremTag::TraceBesov: return "trace_besov";
    case TheoremTag::Holder: return "holder";
    case TheoremTag::Omega: return "omega";
    case TheoremTag::SchattenP: return "schatten_p";
    case TheoremTag::BesovAlphaS1: return "besov_alpha_s1";
    case TheoremTag::Quasicommutator: return "quasicommutator";
  }
  return "unknown";
}

TheoremTag theorem_tag_from_string(std::string_view name) {
  for (auto tag : {TheoremTag::KeyIneq, TheoremTag::LipBesov, TheoremTag::TraceBesov, TheoremTag::Holder,
                   TheoremTag::Omega, TheoremTag::SchattenP, TheoremTag::BesovAlphaS1,
                   TheoremTag::Quasicommutator}) {
    if (to_string(tag) == name) return tag;
  }
  throw Error(Errc::InvalidArgument, "unknown theorem tag '" + std::string(name) + "'");
}

NormalPair random_normal_pair(const NormalPairSpec& spec) {
  check_spec(spec);
  std::mt19937_64 rng(spec.seed);
  switch (spec.mode) {
    case PairMode::SharedBasis: {
      const ComplexMatrix u = random_unitary(spec.dim, rng);
      const std::vector<Complex> lambda = gaussian_spectrum(spec.dim, rng);
      std::vector<Complex> delta = gaussian_spectrum(spec.dim, rng);
      double largest = 0.0;
      for (const auto& d : delta) largest = std::max(largest, std::abs(d));
      if (largest == 0.0) throw Error(Errc::ScaleUnreachable, "zero perturbation drawn");
      std::vector<Complex> mu(spec.dim);
      for (std::size_t j = 0; j < spec.dim; ++j) mu[j] = lambda[j] + delta[j] * (spec.eps / largest);
      NormalPair out{from_spectrum(u, lambda), from_spectrum(u, mu), 0.0};
      out.eps_achieved = operator_norm(out.n1 - out.n2);
      return out;
    }
    case PairMode::Independent: {
      const ComplexMatrix u = random_unitary(spec.dim, rng);
      const std::vector<Complex> lambda = gaussian_spectrum(spec.dim, rng);
      const ComplexMatrix v = random_unitary(spec.dim, rng);
      const std::vector<Complex> mu = gaussian_spectrum(spec.dim, rng);
      ComplexMatrix n1 = from_spectrum(u, lambda);
      ComplexMatrix n2 = from_spectrum(v, mu);
      const double d = operator_norm(n1 - n2);
      if (!(d > 0.0)) throw Error(Errc::ScaleUnreachable, "independent draw produced equal operators");
      n1 *= spec.eps / d;
      n2 *= spec.eps / d;
      NormalPair out{std::move(n1), std::move(n2), 0.0};
      out.eps_achieved = operator_norm(out.n1 - out.n2);
      return out;
    }
    case PairMode::Conjugated:
      if (spec.dim < 2) throw Error(Errc::ScaleUnreachable, "conjugation cannot move a 1×1 operator");
      return conjugated_pair(spec, rng);
  }
  throw Error(Errc::InvalidArgument, "unknown pair mode");
}

NormalPair rank_one_normal_pair(std::size_t dim, double eps, std::uint64_t seed) {
  check_spec(NormalPairSpec{dim, PairMode::SharedBasis, eps, seed});
  std::mt19937_64 rng(seed);
  const ComplexMatrix u = random_unitary(dim, rng);
  const std::vector<Complex> lambda = gaussian_spectrum(dim, rng);
  std::vector<Complex> mu = lambda;
  std::uniform_int_distribution<std::size_t> pick(0, dim - 1);
  mu[pick(rng)] += eps * unimodular(rng);
  NormalPair out{from_spectrum(u, lambda), from_spectrum(u, mu), 0.0};
  out.eps_achieved = operator_norm(out.n1 - out.n2);
  return out;
}

PreparedPair prepare_pair(const ComplexMatrix& n1, const ComplexMatrix& n2, const NormalOptions& options) {
  if (!n1.is_square() || !n2.is_square()) throw Error(Errc::NotSquare, "operators must be square");
  return PreparedPair{n1, n2, normal_spectral(n1, options), normal_spectral(n2, options)};
}

SeminormOptions spectral_seminorm_options(const PreparedPair& pair, std::size_t budget, std::uint64_t seed) {
  SeminormOptions opts;
  opts.anchors = pair.s1.eigenvalues;
  opts.anchors.insert(opts.anchors.end(), pair.s2.eigenvalues.begin(), pair.s2.eigenvalues.end());
  opts.box = bounding_box(opts.anchors, 1.0);
  opts.budget = budget;
  opts.seed = seed;
  return opts;
}

RatioReport theorem_ratio(TheoremTag tag, const ScalarField2D& f, const PreparedPair& pair,
                          const RatioParams& params) {
  if (pair.n1.rows() != pair.n2.rows()) throw Error(Errc::DimensionMismatch, "N₁ and N₂ must have the same size");
  if (tag == TheoremTag::Quasicommutator) {
    throw Error(Errc::TagParamMismatch, "quasicommutator ratios need Q; use quasicommutator_ratio");
  }
  const ComplexMatrix diff = pair.n1 - pair.n2;
  const ComplexMatrix fdiff = apply_function(f, pair.s1) - apply_function(f, pair.s2);
  const SingularValues s_diff = singular_values(diff);
  const SingularValues s_fdiff = singular_values(fdiff);
  const SeminormOptions sem_opts = spectral_seminorm_options(pair, params.seminorm_budget, params.seed);

  RatioReport r;
  r.tag = tag;
  r.symbol = f.name;
  r.pair = digest(pair, s_diff.largest());
  r.seed = params.seed;
  r.alpha = params.alpha;

  auto symbol_norm = [&](auto&& compute) { return params.symbol_norm_override ? *params.symbol_norm_override : compute(); };

  switch (tag) {
    case TheoremTag::KeyIneq: {
      const TrigPoly2D& trig = require_trig(f, tag);
      const double sigma = band_radius(trig);
      const double sup = symbol_norm([&] { return sup_norm(f, sem_opts.box).value; });
      r.numerator = s_fdiff.largest();
      r.denominator = sigma * sup * s_diff.largest();
      r.extras["sigma"] = sigma;
      r.extras["symbol_norm"] = sup;
      break;
    }
    case TheoremTag::LipBesov:
    case TheoremTag::TraceBesov: {
      const TrigPoly2D& trig = require_trig(f, tag);
      const double besov = symbol_norm([&] { return besov_norm(trig, 1.0, BesovOptions{sem_opts.box}); });
      const bool trace = tag == TheoremTag::TraceBesov;
      r.numerator = trace ? schatten_norm(s_fdiff, 1.0) : s_fdiff.largest();
      r.denominator = besov * (trace ? schatten_norm(s_diff, 1.0) : s_diff.largest());
      r.extras["symbol_norm"] = besov;
      break;
    }
    case TheoremTag::Holder: {
      const double alpha = require_alpha(params, tag);
      const double sem = symbol_norm([&] { return holder_seminorm(f, alpha, sem_opts).value; });
      r.numerator = s_fdiff.largest();
      r.denominator = sem * std::pow(s_diff.largest(), alpha);
      r.extras["symbol_norm"] = sem;
      finish(r);
      r.extras["normalized_ratio"] = r.ratio * (1.0 - alpha);
      return r;
    }
    case TheoremTag::Omega: {
      if (!params.omega) throw Error(Errc::TagParamMismatch, "omega needs a modulus of continuity");
      const ModulusOfContinuity& omega = *params.omega;
      const double sem = symbol_norm([&] { return lambda_omega_seminorm(f, omega, sem_opts).value; });
      const double x = s_diff.largest();
      const double ostar = omega_star(omega, x);
      r.numerator = s_fdiff.largest();
      r.denominator = sem * ostar;
      r.extras["symbol_norm"] = sem;
      r.extras["omega_star"] = ostar;
      r.extras["omega"] = omega(x);
      r.extras["omega_star_over_omega"] = ostar / omega(x);
      finish(r);
      r.extras["omega_ratio"] = r.numerator / (sem * omega(x));
      return r;
    }
    case TheoremTag::SchattenP: {
      const double alpha = require_alpha(params, tag);
      if (!params.p) throw Error(Errc::TagParamMismatch, "schatten_p needs p");
      const double p = *params.p;
      if (!(p > 1.0) || !std::isfinite(p)) throw Error(Errc::TagParamMismatch, "schatten_p needs 1 < p < ∞");
      const double sem = symbol_norm([&] { return holder_seminorm(f, alpha, sem_opts).value; });
      r.p = p;
      r.numerator = schatten_norm(s_fdiff, p / alpha);
      r.denominator = sem * std::pow(schatten_norm(s_diff, p), alpha);
      r.extras["symbol_norm"] = sem;
      break;
    }
    case TheoremTag::BesovAlphaS1: {
      const double alpha = require_alpha(params, tag);
      const TrigPoly2D& trig = require_trig(f, tag);
      const double besov = symbol_norm([&] { return besov_norm(trig, alpha, BesovOptions{sem_opts.box}); });
      r.p = 1.0;
      r.numerator = schatten_norm(s_fdiff, 1.0 / alpha);
      r.denominator = besov * std::pow(schatten_norm(s_diff, 1.0), alpha);
      r.extras["symbol_norm"] = besov;
      break;
    }
    case TheoremTag::Quasicommutator:
      break;
  }
  finish(r);
  return r;
}

RatioReport theorem_ratio(TheoremTag tag, const ScalarField2D& f, const ComplexMatrix& n1,
                          const ComplexMatrix& n2, const RatioParams& params) {
  return theorem_ratio(tag, f, prepare_pair(n1, n2), params);
}

WeakCheck weak_singular_check(const ScalarField2D& f, double alpha, const PreparedPair& pair) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(Errc::InvalidAlpha, "α must lie in (0,1)");
  const SingularValues s = singular_values(apply_function(f, pair.s1) - apply_function(f, pair.s2));
  WeakCheck out;
  out.table.reserve(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) {
    const double weighted = std::pow(1.0 + static_cast<double>(j), alpha) * s[j];
    out.table.push_back({j, s[j], weighted});
  }
  out.quasinorm = weak_quasinorm(s, alpha);
  out.schatten_quasinorm = schatten_norm(s, 1.0 / alpha);
  return out;
}

WeakCheck weak_singular_check(const ScalarField2D& f, double alpha, const ComplexMatrix& n1,
                              const ComplexMatrix& n2) {
  return weak_singular_check(f, alpha, prepare_pair(n1, n2));
}

PartialSumCheck partial_sum_check(const ScalarField2D& f, double alpha, double p, const PreparedPair& pair,
                                  const RatioParams& params) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(Errc::InvalidAlpha, "α must lie in (0,1)");
  if (!(p > 1.0) || !std::isfinite(p)) throw Error(Errc::InvalidP, "partial sums need 1 < p < ∞");
  const SingularValues s_f = singular_values(apply_function(f, pair.s1) - apply_function(f, pair.s2));
  const SingularValues s_n = singular_values(pair.n1 - pair.n2);

  PartialSumCheck out;
  out.seminorm = params.symbol_norm_override
                     ? *params.symbol_norm_override
                     : holder_seminorm(f, alpha, spectral_seminorm_options(pair, params.seminorm_budget, params.seed)).value;
  const double scale = std::pow(out.seminorm, p / alpha);
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t l = 0; l < s_f.size(); ++l) {
    // s_j(|T|^{1/α}) = s_j(T)^{1/α}
    lhs += std::pow(s_f[l], p / alpha);
    rhs += std::pow(s_n[l], p);
    PartialSumRow row{l, lhs, rhs, 0.0, false};
    const double denom = scale * rhs;
    if (denom > 0.0) {
      row.ratio = lhs / denom;
    } else {
      row.ratio = std::numeric_limits<double>::quiet_NaN();
      row.zero_denominator = true;
    }
    out.rows.push_back(row);
  }
  return out;
}

PartialSumCheck partial_sum_check(const ScalarField2D& f, double alpha, double p, const ComplexMatrix& n1,
                                  const ComplexMatrix& n2, const RatioParams& params) {
  return partial_sum_check(f, alpha, p, prepare_pair(n1, n2), params);
}

RatioReport quasicommutator_ratio(const ScalarField2D& f, const PreparedPair& pair, const ComplexMatrix& q,
                                  double alpha, const RatioParams& params) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(Errc::InvalidAlpha, "α must lie in (0,1]");
  if (q.rows() != pair.n1.rows() || q.cols() != pair.n2.rows()) {
    throw Error(Errc::DimensionMismatch, "Q must be dim(N₁) × dim(N₂)");
  }
  const ComplexMatrix lhs = apply_function(f, pair.s1) * q - q * apply_function(f, pair.s2);
  const double direct = operator_norm(pair.n1 * q - q * pair.n2);
  const double adjoint = operator_norm(pair.n1.adjoint() * q - q * pair.n2.adjoint());
  const double q_norm = operator_norm(q);
  const SeminormOptions sem_opts = spectral_seminorm_options(pair, params.seminorm_budget, params.seed);
  const double sem = params.symbol_norm_override
                         ? *params.symbol_norm_override
                         : lambda_omega_seminorm(f, ModulusOfContinuity::power(alpha), sem_opts).value;

  RatioReport r;
  r.tag = TheoremTag::Quasicommutator;
  r.symbol = f.name;
  r.pair = digest(pair, std::max(direct, adjoint));
  r.seed = params.seed;
  r.alpha = alpha;
  r.numerator = operator_norm(lhs);
  r.denominator = sem * std::pow(std::max(direct, adjoint), alpha) * std::pow(q_norm, 1.0 - alpha);
  r.extras["symbol_norm"] = sem;
  r.extras["direct_defect"] = direct;
  r.extras["adjoint_defect"] = adjoint;
  r.extras["q_norm"] = q_norm;
  r.note = "denominator = ‖f‖_Λα · max(‖N1Q−QN2‖, ‖N1*Q−QN2*‖)^α · ‖Q‖^(1−α)";
  finish(r);
  return r;
}

RatioReport quasicommutator_ratio(const ScalarField2D& f, const ComplexMatrix& n1, const ComplexMatrix& n2,
                                  const ComplexMatrix& q, double alpha, const RatioParams& params) {
  return quasicommutator_ratio(f, prepare_pair(n1, n2), q, alpha, params);
}

// --- constant search ---------------------------------------------------------

namespace {

struct Candidate {
  ComplexMatrix n1;
  SpectralDecomposition s1;
  SpectralDecomposition s2;  // N₂ = s2.basis·diag(s2.eigenvalues)·s2.basis*
  ComplexMatrix q;
  PairMode mode = PairMode::SharedBasis;
  double eps = 1.0;
};

RatioReport evaluate(TheoremTag tag, const SearchParams& params, const Candidate& c) {
  PreparedPair pair{c.n1, c.s2.reconstruct(), c.s1, c.s2};
  if (tag == TheoremTag::Quasicommutator) {
    if (!params.ratio.alpha) throw Error(Errc::TagParamMismatch, "quasicommutator search needs α");
    return quasicommutator_ratio(params.symbol, pair, c.q, *params.ratio.alpha, params.ratio);
  }
  return theorem_ratio(tag, params.symbol, pair, params.ratio);
}

// ZeroDenominator at a probe just means the move is not useful.
std::optional<RatioReport> try_evaluate(TheoremTag tag, const SearchParams& params, const Candidate& c) {
  try {
    return evaluate(tag, params, c);
  } catch (const Error& e) {
    if (e.code() == Errc::ZeroDenominator) return std::nullopt;
    throw;
  }
}

void givens(SpectralDecomposition& s, std::size_t p, std::size_t q, double theta) {
  const double c = std::cos(theta), sn = std::sin(theta);
  ComplexMatrix& u = s.basis;
  for (std::size_t k = 0; k < u.cols(); ++k) {
    const Complex up = u(p, k), uq = u(q, k);
    u(p, k) = c * up - sn * uq;
    u(q, k) = sn * up + c * uq;
  }
}

}  // namespace

ConstantEstimate adversarial_search(TheoremTag tag, const SearchParams& params, std::size_t budget,
                                    std::uint64_t seed) {
  if (budget < 1) throw Error(Errc::InvalidArgument, "search budget must be ≥ 1");
  if (params.max_dim < 1 || params.modes.empty() || params.eps_values.empty()) {
    throw Error(Errc::InvalidArgument, "search needs dims, modes and ε values");
  }
  ConstantEstimate est;
  est.tag = tag;
  est.budget = budget;
  est.seed = seed;
  bool have = false;
  auto record = [&](const RatioReport& r) {
    ++est.evaluations;
    if (!have || r.ratio > est.best_ratio) {
      est.best_ratio = r.ratio;
      est.witness = r;
      have = true;
    }
  };

  {
    Candidate scalar;
    scalar.eps = params.eps_values.front();
    scalar.n1 = ComplexMatrix{{0.0}};
    scalar.s1 = SpectralDecomposition{{0.0}, ComplexMatrix::identity(1)};
    scalar.s2 = SpectralDecomposition{{Complex(scalar.eps)}, ComplexMatrix::identity(1)};
    scalar.q = ComplexMatrix::identity(1);
    if (auto r = try_evaluate(tag, params, scalar)) record(*r); else ++est.skipped;
  }

  for (std::size_t k = 1; k < budget; ++k) {
    std::mt19937_64 rng(derive_seed(seed, k));
    std::uniform_int_distribution<std::size_t> dim_pick(1, params.max_dim);
    std::uniform_int_distribution<std::size_t> eps_pick(0, params.eps_values.size() - 1);
    NormalPairSpec spec;
    spec.dim = dim_pick(rng);
    spec.mode = params.modes[k % params.modes.size()];
    spec.eps = params.eps_values[eps_pick(rng)];
    spec.seed = rng();
    if (spec.mode == PairMode::Conjugated && spec.dim == 1) spec.mode = PairMode::SharedBasis;

    Candidate c;
    try {
      NormalPair pair = random_normal_pair(spec);
      c.n1 = pair.n1;
      c.s1 = normal_spectral(pair.n1);
      c.s2 = normal_spectral(pair.n2);
    } catch (const Error& e) {
      if (e.code() != Errc::ScaleUnreachable) throw;
      ++est.skipped;
      continue;
    }
    c.mode = spec.mode;
    c.eps = spec.eps;
    c.q = random_gaussian_matrix(spec.dim, spec.dim, rng);

    auto current = try_evaluate(tag, params, c);
    if (!current) {
      ++est.skipped;
      continue;
    }
    record(*current);

    const double angle_scale = c.eps / std::max(c.eps, operator_norm(c.n1));
    for (int round = 0; round < params.ascent_rounds; ++round) {
      const double step = std::pow(0.5, round);
      if (c.mode == PairMode::Conjugated) {
        for (std::size_t p = 0; p + 1 < spec.dim; ++p) {
          for (std::size_t q = p + 1; q < spec.dim; ++q) {
            for (double sign : {1.0, -1.0}) {
              Candidate trial = c;
              givens(trial.s2, p, q, sign * step * angle_scale);
              auto r = try_evaluate(tag, params, trial);
              if (!r) continue;
              ++est.evaluations;
              if (r->ratio > current->ratio) {
                c = std::move(trial);
                current = std::move(r);
                break;
              }
            }
          }
        }
      } else {
        for (std::size_t j = 0; j < spec.dim; ++j) {
          for (Complex dir : {Complex(1.0), Complex(-1.0), kI, -kI}) {
            Candidate trial = c;
            trial.s2.eigenvalues[j] += step * c.eps * dir;
            auto r = try_evaluate(tag, params, trial);
            if (!r) continue;
            ++est.evaluations;
            if (r->ratio > current->ratio) {
              c = std::move(trial);
              current = std::move(r);
              break;
            }
          }
        }
      }
    }
    if (current->ratio > est.best_ratio) {
      est.best_ratio = current->ratio;
      est.witness = *current;
    }
  }
  return est;
}

}  // namespace doikit
