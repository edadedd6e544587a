#include "doikit/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "doikit/calculus.hpp"
#include "doikit/error.hpp"
#include "doikit/io.hpp"
#include "doikit/symbols.hpp"

namespace doikit::cli {
namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& what) { throw Error(Errc::ConfigInvalid, what); }

constexpr double kIdentityTolerance = 1e-8;
constexpr double kCrossCheckTolerance = 1e-10;
constexpr double kScalarWitnessTolerance = 1e-9;
constexpr double kOmegaOracleTolerance = 1e-6;
constexpr double kBesovOracleTolerance = 1e-10;
constexpr double kPartialSumTolerance = 1e-9;
constexpr double kWeakTolerance = 1e-10;
constexpr double kKeyAngle = std::numbers::pi / 6.0;

bool suite_uses_alpha(Suite s) {
  return s == Suite::Holder || s == Suite::Schatten || s == Suite::Weak || s == Suite::PartialSum ||
         s == Suite::Quasicommutator || s == Suite::Search;
}

// --- config parsing ----------------------------------------------------------

std::vector<double> number_list(const json& v, const char* key) {
  std::vector<double> out;
  if (v.is_number()) {
    out.push_back(v.get<double>());
  } else if (v.is_array() && !v.empty()) {
    for (const auto& x : v) {
      if (!x.is_number()) invalid(std::string("'") + key + "' must contain numbers");
      out.push_back(x.get<double>());
    }
  } else {
    invalid(std::string("'") + key + "' must be a number or a non-empty list");
  }
  return out;
}

std::size_t positive_count(const json& v, const char* key) {
  if (!v.is_number_integer() || v.get<long long>() < 1) invalid(std::string("'") + key + "' must be a positive integer");
  return v.get<std::size_t>();
}

double number_param(const json& spec, const char* key, double fallback) {
  if (!spec.contains(key)) return fallback;
  if (!spec.at(key).is_number()) invalid(std::string("symbol parameter '") + key + "' must be numeric");
  return spec.at(key).get<double>();
}

ScalarField2D builtin_symbol(const std::string& name, const json& params, std::optional<double> default_alpha) {
  if (name == "identity") return symbols::identity();
  if (name == "conjugate") return symbols::conjugate();
  if (name == "real_part") return symbols::real_part();
  if (name == "imag_part") return symbols::imag_part();
  if (name == "abs_squared") return symbols::abs_squared();
  if (name == "capped_abs") return symbols::capped_abs();
  if (name == "piecewise_smooth") return symbols::piecewise_smooth();
  if (name == "abs_power") {
    const double alpha = number_param(params, "alpha", default_alpha.value_or(0.5));
    if (!(alpha > 0.0 && alpha <= 1.0)) invalid("abs_power needs 0 < alpha ≤ 1");
    return symbols::abs_power(alpha);
  }
  if (name == "complex_power") {
    const double k = number_param(params, "k", 2.0);
    if (k < 0.0 || k > 64.0 || k != std::floor(k)) invalid("complex_power needs an integer 0 ≤ k ≤ 64");
    return symbols::complex_power(static_cast<int>(k));
  }
  if (name == "exponential") {
    const Frequency nu{number_param(params, "a", 1.0), number_param(params, "b", 0.0)};
    const Complex c(number_param(params, "re", 1.0), number_param(params, "im", 0.0));
    if (!std::isfinite(nu.a) || !std::isfinite(nu.b)) invalid("exponential frequency must be finite");
    return symbols::exponential(nu, c);
  }
  if (name == "random_trig") {
    const double seed = number_param(params, "seed", 1.0);
    const double terms = number_param(params, "terms", 4.0);
    const double radius = number_param(params, "max_frequency", 4.0);
    if (seed < 0.0 || terms < 1.0 || terms > 256.0 || !(radius > 0.0)) {
      invalid("random_trig needs seed ≥ 0, 1 ≤ terms ≤ 256, max_frequency > 0");
    }
    return symbols::random_trig_poly(static_cast<std::uint64_t>(seed), static_cast<int>(terms), radius)
        .field("random_trig");
  }
  invalid("unknown builtin symbol '" + name + "'");
}

// --- report rows -------------------------------------------------------------

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json spectrum_json(const std::vector<Complex>& spectrum) {
  json out = json::array();
  for (const auto& z : spectrum) out.push_back(json::array({z.real(), z.imag()}));
  return out;
}

struct Row {
  std::string tag;
  std::size_t dim = 0;
  std::string mode;
  double eps = 0.0;
  std::optional<double> alpha;
  std::optional<double> p;
  std::optional<std::size_t> l;
  double ratio = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;
  std::uint64_t seed = 0;
  json detail = json::object();
};

Row row_from(const RatioReport& r, const std::string& mode, double eps) {
  Row row;
  row.tag = std::string(to_string(r.tag));
  row.dim = r.pair.dim;
  row.mode = mode;
  row.eps = eps;
  row.alpha = r.alpha;
  row.p = r.p;
  row.l = r.l;
  row.ratio = r.ratio;
  row.numerator = r.numerator;
  row.denominator = r.denominator;
  row.seed = r.seed;
  row.detail["symbol"] = r.symbol;
  row.detail["eps_achieved"] = r.pair.eps;
  row.detail["extras"] = r.extras;
  if (!r.note.empty()) row.detail["note"] = r.note;
  row.detail["spectrum1"] = spectrum_json(r.pair.spectrum1);
  row.detail["spectrum2"] = spectrum_json(r.pair.spectrum2);
  return row;
}

json row_json(const Row& row) {
  json j = row.detail;
  j["tag"] = row.tag;
  j["dim"] = row.dim;
  j["mode"] = row.mode;
  j["eps"] = row.eps;
  j["alpha"] = optional_number(row.alpha);
  j["p"] = optional_number(row.p);
  j["l"] = row.l ? json(*row.l) : json(nullptr);
  j["ratio"] = row.ratio;
  j["numerator"] = row.numerator;
  j["denominator"] = row.denominator;
  j["seed"] = row.seed;
  return j;
}

std::string optional_field(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::string csv_line(const Row& row) {
  std::ostringstream out;
  out << row.tag << ',' << row.dim << ',' << row.mode << ',' << format_double(row.eps) << ','
      << optional_field(row.alpha) << ',' << optional_field(row.p) << ','
      << (row.l ? std::to_string(*row.l) : std::string()) << ',' << format_double(row.ratio) << ','
      << format_double(row.numerator) << ',' << format_double(row.denominator) << ',' << row.seed << '\n';
  return out.str();
}

// --- trials ------------------------------------------------------------------

struct TrialOutput {
  std::vector<Row> rows;
  std::vector<CheckResult> checks;
  std::vector<json> weak_tables;
  std::vector<json> estimates;
  std::optional<std::string> skipped;
  std::optional<double> defect;  // relative identity defect
};

using Trial = std::function<TrialOutput()>;

struct Cell {
  std::size_t dim = 1;
  PairMode mode = PairMode::SharedBasis;
  double eps = 1.0;
  std::uint64_t pair_seed = 0;   // shared by every ε of the same (dim, mode, repeat)
  std::uint64_t trial_seed = 0;  // unique per cell
  std::string label() const {
    std::ostringstream s;
    s << "dim=" << dim << " mode=" << to_string(mode) << " eps=" << format_double(eps);
    return s.str();
  }
};

std::vector<Cell> grid(const ExperimentConfig& cfg, std::uint64_t seed, std::uint64_t salt) {
  std::vector<Cell> cells;
  const std::size_t nd = cfg.dims.size(), nm = cfg.modes.size();
  for (std::size_t di = 0; di < nd; ++di) {
    for (std::size_t mi = 0; mi < nm; ++mi) {
      for (std::size_t rep = 0; rep < cfg.repeats; ++rep) {
        const std::uint64_t pair_seed = derive_seed(seed, (rep * nd + di) * nm + mi);
        for (std::size_t ei = 0; ei < cfg.eps.size(); ++ei) {
          Cell c{cfg.dims[di], cfg.modes[mi], cfg.eps[ei], pair_seed, derive_seed(pair_seed ^ salt, ei)};
          cells.push_back(c);
        }
      }
    }
  }
  return cells;
}

std::optional<NormalPair> make_pair(const Cell& c, TrialOutput& out) {
  try {
    return random_normal_pair(NormalPairSpec{c.dim, c.mode, c.eps, c.pair_seed});
  } catch (const Error& e) {
    if (e.code() != Errc::ScaleUnreachable) throw;
    out.skipped = c.label() + ": " + e.what();
    return std::nullopt;
  }
}

// A ratio whose denominator vanishes is not a failure; the row is dropped.
template <class F>
void soft(TrialOutput& out, const std::string& where, F&& compute) {
  try {
    compute();
  } catch (const Error& e) {
    if (e.code() != Errc::ZeroDenominator) throw;
    out.skipped = where + ": " + e.what();
  }
}

void check(TrialOutput& out, std::string name, double value, double threshold) {
  const bool ok = std::isfinite(value) && value <= threshold;
  out.checks.push_back({std::move(name), value, threshold, ok});
}

std::vector<ScalarField2D> symbol_library(std::uint64_t seed) {
  return {
      symbols::identity(),
      symbols::conjugate(),
      symbols::real_part(),
      symbols::imag_part(),
      symbols::abs_squared(),
      symbols::abs_power(0.5),
      symbols::capped_abs(),
      symbols::complex_power(3),
      symbols::exponential({1.0, -0.5}, Complex(0.5, 1.0)),
      symbols::random_trig_poly(seed, 4, 3.0).field("random_trig"),
      symbols::piecewise_smooth(),
  };
}

struct Resolved {
  const ExperimentConfig& cfg;
  std::uint64_t seed;

  std::optional<ScalarField2D> configured(std::optional<double> alpha) const {
    if (!cfg.symbol) return std::nullopt;
    return make_symbol(*cfg.symbol, cfg.base_dir, alpha);
  }
  ModulusOfContinuity omega() const {
    return cfg.omega ? io::modulus_from_json(*cfg.omega) : ModulusOfContinuity::capped_linear();
  }
};

// identity and quasicommutator ------------------------------------------------

std::vector<Trial> identity_trials(const Resolved& env, bool quasi) {
  std::vector<Trial> trials;
  const auto cells = grid(env.cfg, env.seed, quasi ? 0x71 : 0x1d);
  const auto fixed = env.configured(env.cfg.alphas.front());
  for (std::size_t index = 0; index < cells.size(); ++index) {
    const Cell cell = cells[index];
    trials.push_back([cell, index, fixed, quasi, &env]() {
      TrialOutput out;
      auto pair = make_pair(cell, out);
      if (!pair) return out;
      const ScalarField2D f = fixed ? *fixed : [&] {
        auto lib = symbol_library(cell.trial_seed);
        return lib[index % lib.size()];
      }();
      const PreparedPair prepared = prepare_pair(pair->n1, pair->n2);
      const std::string mode(to_string(cell.mode));

      auto defect_row = [&](const std::string& tag, const Representation& rep) {
        const double scale = 1.0 + frobenius_norm(rep.lhs);
        Row row;
        row.tag = tag;
        row.dim = cell.dim;
        row.mode = mode;
        row.eps = cell.eps;
        row.numerator = rep.defect;
        row.denominator = scale;
        row.ratio = rep.defect / scale;
        row.seed = cell.pair_seed;
        row.detail["symbol"] = f.name;
        row.detail["eps_achieved"] = pair->eps_achieved;
        out.rows.push_back(row);
        out.defect = std::max(out.defect.value_or(0.0), row.ratio);
        check(out, tag + " " + f.name + " " + cell.label(), row.ratio, kIdentityTolerance);
      };

      if (!quasi) {
        defect_row("identity", representation_difference(f, prepared.n1, prepared.s1, prepared.n2, prepared.s2));
        return out;
      }

      std::mt19937_64 rng(cell.trial_seed);
      const ComplexMatrix q = random_gaussian_matrix(cell.dim, cell.dim, rng);
      defect_row("quasicommutator_identity",
                 quasicommutator_representation(f, prepared.n1, prepared.s1, prepared.n2, prepared.s2, q));

      // Q = I must reproduce the plain representation.
      const ComplexMatrix eye = ComplexMatrix::identity(cell.dim);
      const Representation with_eye =
          quasicommutator_representation(f, prepared.n1, prepared.s1, prepared.n2, prepared.s2, eye);
      const Representation plain =
          representation_difference(f, prepared.n1, prepared.s1, prepared.n2, prepared.s2);
      const double scale = 1.0 + frobenius_norm(plain.lhs);
      check(out, "q_identity_rhs " + f.name + " " + cell.label(), frobenius_norm(with_eye.rhs - plain.rhs) / scale,
            kCrossCheckTolerance);

      const double alpha = env.cfg.alphas.front();
      soft(out, cell.label(), [&] {
        RatioParams params;
        params.seminorm_budget = env.cfg.seminorm_budget;
        params.seed = cell.trial_seed;
        const RatioReport r = quasicommutator_ratio(f, prepared, q, alpha, params);
        out.rows.push_back(row_from(r, mode, cell.eps));
        const RatioReport r_eye = quasicommutator_ratio(f, prepared, eye, alpha, params);
        const double direct = operator_norm(plain.lhs);
        check(out, "q_identity_numerator " + f.name + " " + cell.label(),
              std::abs(r_eye.numerator - direct) / (1.0 + direct), kCrossCheckTolerance);
      });
      return out;
    });
  }
  return trials;
}

// ratio sweeps ----------------------------------------------------------------

RatioParams base_params(const ExperimentConfig& cfg, std::uint64_t seed) {
  RatioParams params;
  params.seminorm_budget = cfg.seminorm_budget;
  params.seed = seed;
  return params;
}

std::vector<Trial> key_ineq_trials(const Resolved& env) {
  std::vector<Trial> trials;
  const auto fixed = env.configured(std::nullopt);
  const std::vector<double> sigmas = fixed ? std::vector<double>{0.0} : env.cfg.sigmas;
  for (double sigma : sigmas) {
    const ScalarField2D f = fixed ? *fixed
                                  : symbols::exponential({sigma * std::cos(kKeyAngle), sigma * std::sin(kKeyAngle)});
    for (const Cell& cell : grid(env.cfg, env.seed, 0x2e)) {
      trials.push_back([cell, f, &env]() {
        TrialOutput out;
        auto pair = make_pair(cell, out);
        if (!pair) return out;
        soft(out, cell.label(), [&] {
          const RatioReport r =
              theorem_ratio(TheoremTag::KeyIneq, f, pair->n1, pair->n2, base_params(env.cfg, cell.trial_seed));
          out.rows.push_back(row_from(r, std::string(to_string(cell.mode)), cell.eps));
        });
        return out;
      });
    }
  }
  return trials;
}

std::vector<Trial> lipschitz_trials(const Resolved& env) {
  std::vector<Trial> trials;
  const auto fixed = env.configured(std::nullopt);

  // closed-form Besov oracle on single exponentials, |ν| = 2^m
  trials.push_back([] {
    TrialOutput out;
    const Complex c(0.75, -0.5);
    for (int m = -2; m <= 6; ++m) {
      const double radius = std::ldexp(1.0, m);
      const TrigPoly2D f = TrigPoly2D::exponential(
          {radius * std::cos(std::numbers::pi / 5.0), radius * std::sin(std::numbers::pi / 5.0)}, c);
      const double expected = radius * std::abs(c);
      check(out, "besov_closed_form m=" + std::to_string(m), std::abs(besov_norm(f, 1.0) - expected) / expected,
            kBesovOracleTolerance);
    }
    return out;
  });

  for (const Cell& cell : grid(env.cfg, env.seed, 0x3f)) {
    trials.push_back([cell, fixed, &env]() {
      TrialOutput out;
      auto pair = make_pair(cell, out);
      if (!pair) return out;
      const ScalarField2D f =
          fixed ? *fixed : symbols::random_trig_poly(cell.pair_seed, 4, 4.0).field("random_trig");
      const PreparedPair prepared = prepare_pair(pair->n1, pair->n2);
      for (TheoremTag tag : {TheoremTag::LipBesov, TheoremTag::TraceBesov}) {
        soft(out, cell.label(), [&] {
          const RatioReport r = theorem_ratio(tag, f, prepared, base_params(env.cfg, cell.trial_seed));
          out.rows.push_back(row_from(r, std::string(to_string(cell.mode)), cell.eps));
        });
      }
      return out;
    });
  }
  return trials;
}

bool is_abs_power(const ScalarField2D& f, double alpha) { return f.name == symbols::abs_power(alpha).name; }

std::vector<Trial> holder_trials(const Resolved& env) {
  std::vector<Trial> trials;
  for (double alpha : env.cfg.alphas) {
    const auto fixed = env.configured(alpha);
    const ScalarField2D f = fixed ? *fixed : symbols::abs_power(alpha);

    if (std::find(env.cfg.dims.begin(), env.cfg.dims.end(), 1) != env.cfg.dims.end()) {
      for (double eps : env.cfg.eps) {
        trials.push_back([alpha, eps, f, &env]() {
          TrialOutput out;
          RatioParams params = base_params(env.cfg, env.seed);
          params.alpha = alpha;
          const RatioReport r = theorem_ratio(TheoremTag::Holder, f, ComplexMatrix{{0.0}}, ComplexMatrix{{eps}}, params);
          out.rows.push_back(row_from(r, "scalar_witness", eps));
          if (is_abs_power(f, alpha)) {
            check(out, "scalar_witness alpha=" + format_double(alpha) + " eps=" + format_double(eps),
                  std::abs(r.ratio - 1.0), kScalarWitnessTolerance);
          }
          return out;
        });
      }
    }
    for (const Cell& cell : grid(env.cfg, env.seed, 0x4a)) {
      if (cell.dim == 1) continue;
      trials.push_back([cell, alpha, f, &env]() {
        TrialOutput out;
        auto pair = make_pair(cell, out);
        if (!pair) return out;
        soft(out, cell.label(), [&] {
          RatioParams params = base_params(env.cfg, cell.trial_seed);
          params.alpha = alpha;
          const RatioReport r = theorem_ratio(TheoremTag::Holder, f, pair->n1, pair->n2, params);
          out.rows.push_back(row_from(r, std::string(to_string(cell.mode)), cell.eps));
        });
        return out;
      });
    }
  }
  return trials;
}

double capped_linear_star(double x) { return x < 1.0 ? x * (1.0 - std::log(x)) : 1.0; }

std::vector<Trial> omega_trials(const Resolved& env) {
  std::vector<Trial> trials;
  const ModulusOfContinuity omega = env.omega();
  const auto fixed = env.configured(std::nullopt);
  const ScalarField2D f = fixed ? *fixed : symbols::capped_abs();

  trials.push_back([omega, &env] {
    TrialOutput out;
    std::set<double> xs{1e-3, 0.5, 1.0, 2.0, 10.0};
    xs.insert(env.cfg.eps.begin(), env.cfg.eps.end());
    for (double x : xs) {
      std::optional<double> expected;
      if (auto a = omega.power_exponent()) expected = std::pow(x, *a) / (1.0 - *a);
      if (omega.kind() == ModulusOfContinuity::Kind::CappedLinear) expected = capped_linear_star(x);
      if (!expected) continue;
      const double got = omega_star_quadrature(omega, x);
      check(out, "omega_star " + omega.name() + " x=" + format_double(x), std::abs(got - *expected) / *expected,
            kOmegaOracleTolerance);
    }
    return out;
  });

  for (const Cell& cell : grid(env.cfg, env.seed, 0x5b)) {
    trials.push_back([cell, f, omega, &env]() {
      TrialOutput out;
      auto pair = make_pair(cell, out);
      if (!pair) return out;
      soft(out, cell.label(), [&] {
        RatioParams params = base_params(env.cfg, cell.trial_seed);
        params.omega = omega;
        const RatioReport r = theorem_ratio(TheoremTag::Omega, f, pair->n1, pair->n2, params);
        out.rows.push_back(row_from(r, std::string(to_string(cell.mode)), cell.eps));
      });
      return out;
    });
  }
  return trials;
}

std::vector<Trial> schatten_trials(const Resolved& env, bool partial_only) {
  std::vector<Trial> trials;
  for (double alpha : env.cfg.alphas) {
    const auto fixed = env.configured(alpha);
    const ScalarField2D f = fixed ? *fixed : symbols::abs_power(alpha);
    for (double p : env.cfg.ps) {
      for (const Cell& cell : grid(env.cfg, env.seed, 0x6c)) {
        trials.push_back([cell, alpha, p, f, partial_only, &env]() {
          TrialOutput out;
          auto pair = make_pair(cell, out);
          if (!pair) return out;
          const PreparedPair prepared = prepare_pair(pair->n1, pair->n2);
          const std::string mode(to_string(cell.mode));
          RatioParams params = base_params(env.cfg, cell.trial_seed);
          params.alpha = alpha;
          params.p = p;
          soft(out, cell.label(), [&] {
            const RatioReport r = theorem_ratio(TheoremTag::SchattenP, f, prepared, params);
            if (!partial_only) out.rows.push_back(row_from(r, mode, cell.eps));

            RatioParams same = params;
            same.symbol_norm_override = r.extras.at("symbol_norm");
            const PartialSumCheck partial = partial_sum_check(f, alpha, p, prepared, same);
            for (const auto& pr : partial.rows) {
              Row row;
              row.tag = "partial_sum";
              row.dim = cell.dim;
              row.mode = mode;
              row.eps = cell.eps;
              row.alpha = alpha;
              row.p = p;
              row.l = pr.l;
              row.ratio = pr.ratio;
              row.numerator = pr.lhs;
              row.denominator = std::pow(partial.seminorm, p / alpha) * pr.rhs;
              row.seed = cell.trial_seed;
              row.detail["symbol"] = f.name;
              row.detail["zero_denominator"] = pr.zero_denominator;
              out.rows.push_back(row);
            }
            const double expected = std::pow(r.ratio, p / alpha);
            check(out, "partial_sum_full alpha=" + format_double(alpha) + " p=" + format_double(p) + " " + cell.label(),
                  std::abs(partial.rows.back().ratio - expected) / expected, kPartialSumTolerance);
          });
          if (!partial_only && f.band_limited()) {
            soft(out, cell.label(), [&] {
              out.rows.push_back(row_from(theorem_ratio(TheoremTag::BesovAlphaS1, f, prepared, params), mode, cell.eps));
            });
          }
          return out;
        });
      }
    }
  }
  return trials;
}

std::vector<Trial> weak_trials(const Resolved& env) {
  std::vector<Trial> trials;
  std::size_t case_index = 0;
  for (double alpha : env.cfg.alphas) {
    const auto fixed = env.configured(alpha);
    const ScalarField2D f = fixed ? *fixed : symbols::abs_power(alpha);
    for (const Cell& cell : grid(env.cfg, env.seed, 0x7d)) {
      if (cell.mode != env.cfg.modes.front()) continue;  // rank-one pairs have a single construction
      const std::size_t id = case_index++;
      trials.push_back([cell, alpha, f, id]() {
        TrialOutput out;
        const NormalPair pair = rank_one_normal_pair(cell.dim, cell.eps, cell.pair_seed);
        const WeakCheck w = weak_singular_check(f, alpha, pair.n1, pair.n2);
        Row row;
        row.tag = "weak";
        row.dim = cell.dim;
        row.mode = "rank_one";
        row.eps = cell.eps;
        row.alpha = alpha;
        row.numerator = w.quasinorm;
        row.denominator = w.schatten_quasinorm;
        row.ratio = w.schatten_quasinorm > 0.0 ? w.quasinorm / w.schatten_quasinorm : 0.0;
        row.seed = cell.pair_seed;
        row.detail["symbol"] = f.name;
        row.detail["eps_achieved"] = pair.eps_achieved;
        out.rows.push_back(row);

        json table = json::array();
        for (const auto& t : w.table) table.push_back({{"j", t.j}, {"s", t.singular_value}, {"w", t.weighted}});
        out.weak_tables.push_back({{"case", id},
                                   {"alpha", alpha},
                                   {"dim", cell.dim},
                                   {"eps", cell.eps},
                                   {"seed", cell.pair_seed},
                                   {"quasinorm", w.quasinorm},
                                   {"schatten_quasinorm", w.schatten_quasinorm},
                                   {"rows", std::move(table)}});
        const double excess = w.quasinorm - w.schatten_quasinorm;
        check(out, "weak_le_strong case=" + std::to_string(id),
              w.schatten_quasinorm > 0.0 ? excess / w.schatten_quasinorm : excess, kWeakTolerance);
        return out;
      });
    }
  }
  return trials;
}

ScalarField2D search_default_symbol(TheoremTag tag, double alpha, std::uint64_t seed) {
  switch (tag) {
    case TheoremTag::Omega: return symbols::capped_abs();
    case TheoremTag::KeyIneq:
      return symbols::exponential({std::cos(kKeyAngle), std::sin(kKeyAngle)});
    case TheoremTag::LipBesov:
    case TheoremTag::TraceBesov:
    case TheoremTag::BesovAlphaS1:
      return symbols::random_trig_poly(seed, 4, 2.0).field("random_trig");
    default: return symbols::abs_power(alpha);
  }
}

std::vector<Trial> search_trials(const Resolved& env) {
  std::vector<Trial> trials;
  const TheoremTag tag = *env.cfg.tag;
  const bool uses_alpha = tag == TheoremTag::Holder || tag == TheoremTag::SchattenP ||
                          tag == TheoremTag::BesovAlphaS1 || tag == TheoremTag::Quasicommutator;
  const std::vector<double> alphas = uses_alpha ? env.cfg.alphas : std::vector<double>{env.cfg.alphas.front()};
  for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
    const double alpha = alphas[ai];
    trials.push_back([tag, alpha, uses_alpha, &env]() {
      TrialOutput out;
      const auto fixed = env.configured(alpha);
      SearchParams sp;
      sp.symbol = fixed ? *fixed : search_default_symbol(tag, alpha, env.seed);
      sp.ratio = base_params(env.cfg, env.seed);
      if (uses_alpha) sp.ratio.alpha = alpha;
      if (tag == TheoremTag::SchattenP) sp.ratio.p = env.cfg.ps.front();
      if (tag == TheoremTag::Omega) sp.ratio.omega = env.omega();
      sp.max_dim = *std::max_element(env.cfg.dims.begin(), env.cfg.dims.end());
      sp.modes = env.cfg.modes;
      sp.eps_values = env.cfg.eps;
      const ConstantEstimate est = adversarial_search(tag, sp, env.cfg.budget, env.seed);
      Row witness = row_from(est.witness, "search", est.witness.pair.eps);
      out.rows.push_back(witness);
      out.estimates.push_back({{"tag", std::string(to_string(tag))},
                               {"symbol", sp.symbol.name},
                               {"alpha", uses_alpha ? json(alpha) : json(nullptr)},
                               {"best_ratio", est.best_ratio},
                               {"budget", est.budget},
                               {"seed", est.seed},
                               {"evaluations", est.evaluations},
                               {"skipped", est.skipped},
                               {"witness", row_json(witness)}});
      if (tag == TheoremTag::Holder && is_abs_power(sp.symbol, alpha)) {
        check(out, "holder_floor alpha=" + format_double(alpha), 1.0 - est.best_ratio, kScalarWitnessTolerance);
      }
      return out;
    });
  }
  return trials;
}

std::vector<TrialOutput> run_trials(const std::vector<Trial>& trials, unsigned jobs) {
  std::vector<TrialOutput> results(trials.size());
  std::vector<std::exception_ptr> errors(trials.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < trials.size(); i = next++) {
      try {
        results[i] = trials[i]();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(trials.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

const char* kCsvHeader = "tag,dim,mode,eps,alpha,p,l,ratio,numerator,denominator,seed\n";

}  // namespace

std::string_view to_string(Suite suite) noexcept {
  switch (suite) {
    case Suite::Identity: return "identity";
    case Suite::KeyIneq: return "key_ineq";
    case Suite::Lipschitz: return "lipschitz";
    case Suite::Holder: return "holder";
    case Suite::Omega: return "omega";
    case Suite::Schatten: return "schatten";
    case Suite::Weak: return "weak";
    case Suite::PartialSum: return "partial_sum";
    case Suite::Quasicommutator: return "quasicommutator";
    case Suite::Search: return "search";
  }
  return "unknown";
}

std::optional<Suite> suite_from_string(std::string_view name) noexcept {
  for (auto s : {Suite::Identity, Suite::KeyIneq, Suite::Lipschitz, Suite::Holder, Suite::Omega, Suite::Schatten,
                 Suite::Weak, Suite::PartialSum, Suite::Quasicommutator, Suite::Search}) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

ScalarField2D make_symbol(const json& spec, const std::filesystem::path& base_dir,
                          std::optional<double> default_alpha) {
  if (spec.is_string()) return builtin_symbol(spec.get<std::string>(), json::object(), default_alpha);
  if (!spec.is_object()) invalid("symbol must be a name or an object");
  if (spec.contains("file")) {
    if (!spec.at("file").is_string()) invalid("symbol 'file' must be a path");
    std::filesystem::path file = spec.at("file").get<std::string>();
    if (file.is_relative()) file = base_dir / file;
    if (!std::filesystem::exists(file)) invalid("symbol file not found: " + file.string());
    try {
      return io::read_trig_file(file).field(file.stem().string());
    } catch (const Error& e) {
      invalid("symbol file " + file.string() + ": " + e.what());
    }
  }
  if (!spec.contains("builtin") || !spec.at("builtin").is_string()) invalid("symbol object needs 'builtin' or 'file'");
  try {
    return builtin_symbol(spec.at("builtin").get<std::string>(), spec, default_alpha);
  } catch (const Error& e) {
    if (e.code() == Errc::ConfigInvalid) throw;
    invalid(std::string("symbol: ") + e.what());
  }
}

ExperimentConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) invalid("config must be a JSON object");
  static const std::set<std::string> known{"suite", "symbol", "dims",    "modes", "eps",  "alpha",
                                           "p",     "sigmas", "omega",   "repeats", "seminorm_budget",
                                           "budget", "tag",   "seed",    "output"};
  for (const auto& [key, value] : doc.items()) {
    if (!known.count(key)) invalid("unknown config key '" + key + "'");
  }
  ExperimentConfig cfg;
  cfg.base_dir = base_dir;

  if (!doc.contains("suite") || !doc.at("suite").is_string()) invalid("'suite' is required");
  const auto suite = suite_from_string(doc.at("suite").get<std::string>());
  if (!suite) invalid("unknown suite '" + doc.at("suite").get<std::string>() + "'");
  cfg.suite = *suite;

  if (doc.contains("dims")) {
    const json& d = doc.at("dims");
    if (!d.is_array() || d.empty()) invalid("'dims' must be a non-empty list");
    cfg.dims.clear();
    for (const auto& v : d) {
      if (!v.is_number_integer() || v.get<long long>() < 1 || v.get<long long>() > 128) {
        invalid("'dims' entries must be integers in [1, 128]");
      }
      cfg.dims.push_back(v.get<std::size_t>());
    }
  }
  if (doc.contains("modes")) {
    const json& m = doc.at("modes");
    if (!m.is_array() || m.empty()) invalid("'modes' must be a non-empty list");
    cfg.modes.clear();
    for (const auto& v : m) {
      if (!v.is_string()) invalid("'modes' entries must be strings");
      try {
        cfg.modes.push_back(pair_mode_from_string(v.get<std::string>()));
      } catch (const Error& e) {
        invalid(e.what());
      }
    }
  }
  if (doc.contains("eps")) cfg.eps = number_list(doc.at("eps"), "eps");
  for (double e : cfg.eps) {
    if (!(e > 0.0) || !std::isfinite(e)) invalid("'eps' values must be positive and finite");
  }
  if (doc.contains("alpha")) cfg.alphas = number_list(doc.at("alpha"), "alpha");
  const double alpha_max = cfg.suite == Suite::Quasicommutator ? 1.0 : std::nextafter(1.0, 0.0);
  for (double a : cfg.alphas) {
    if (!(a > 0.0 && a <= alpha_max)) {
      invalid(cfg.suite == Suite::Quasicommutator ? "'alpha' must lie in (0, 1]" : "'alpha' must lie in (0, 1)");
    }
  }
  if (doc.contains("p")) cfg.ps = number_list(doc.at("p"), "p");
  for (double p : cfg.ps) {
    if (!(p > 1.0) || !std::isfinite(p)) invalid("'p' values must satisfy 1 < p < ∞");
  }
  if (doc.contains("sigmas")) cfg.sigmas = number_list(doc.at("sigmas"), "sigmas");
  for (double s : cfg.sigmas) {
    if (!(s > 0.0) || !std::isfinite(s)) invalid("'sigmas' must be positive");
  }
  if (doc.contains("repeats")) cfg.repeats = positive_count(doc.at("repeats"), "repeats");
  if (doc.contains("seminorm_budget")) cfg.seminorm_budget = positive_count(doc.at("seminorm_budget"), "seminorm_budget");
  if (doc.contains("budget")) cfg.budget = positive_count(doc.at("budget"), "budget");
  if (doc.contains("seed")) {
    const json& s = doc.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
      invalid("'seed' must be a non-negative integer");
    }
    cfg.seed = s.get<std::uint64_t>();
  }
  if (doc.contains("output")) {
    if (!doc.at("output").is_string() || doc.at("output").get<std::string>().empty()) invalid("'output' must be a path");
    cfg.output = doc.at("output").get<std::string>();
  }
  if (doc.contains("tag")) {
    if (!doc.at("tag").is_string()) invalid("'tag' must be a string");
    try {
      cfg.tag = theorem_tag_from_string(doc.at("tag").get<std::string>());
    } catch (const Error& e) {
      invalid(e.what());
    }
  }
  if (cfg.suite == Suite::Search && !cfg.tag) invalid("search needs a 'tag'");
  if (cfg.suite != Suite::Search && cfg.tag) invalid("'tag' only applies to the search suite");

  if (doc.contains("omega")) {
    try {
      const ModulusOfContinuity omega = io::modulus_from_json(doc.at("omega"));
      omega.validate();
      if (auto a = omega.power_exponent(); a && *a >= 1.0) invalid("ω(t) = t^α needs α < 1 for ω_* to converge");
    } catch (const Error& e) {
      if (e.code() == Errc::ConfigInvalid) throw;
      invalid(std::string("omega: ") + e.what());
    }
    cfg.omega = doc.at("omega");
  }

  if (doc.contains("symbol")) {
    cfg.symbol = doc.at("symbol");
    std::vector<double> alphas = suite_uses_alpha(cfg.suite) ? cfg.alphas : std::vector<double>{cfg.alphas.front()};
    for (double a : alphas) {
      const ScalarField2D f = make_symbol(*cfg.symbol, base_dir, a);
      const bool needs_trig = cfg.suite == Suite::KeyIneq || cfg.suite == Suite::Lipschitz ||
                              (cfg.tag && (*cfg.tag == TheoremTag::KeyIneq || *cfg.tag == TheoremTag::LipBesov ||
                                           *cfg.tag == TheoremTag::TraceBesov || *cfg.tag == TheoremTag::BesovAlphaS1));
      if (needs_trig && !f.band_limited()) invalid("this suite needs a trigonometric-polynomial symbol");
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
  json doc;
  try {
    doc = io::read_json_file(file);
  } catch (const Error& e) {
    // an unreadable or malformed config is a configuration problem
    invalid(e.what());
  }
  return parse_config(doc, file.parent_path());
}

json config_to_json(const ExperimentConfig& cfg) {
  json modes = json::array();
  for (auto m : cfg.modes) modes.push_back(std::string(to_string(m)));
  json j{{"suite", std::string(to_string(cfg.suite))},
         {"dims", cfg.dims},
         {"modes", std::move(modes)},
         {"eps", cfg.eps},
         {"alpha", cfg.alphas},
         {"p", cfg.ps},
         {"sigmas", cfg.sigmas},
         {"repeats", cfg.repeats},
         {"seminorm_budget", cfg.seminorm_budget},
         {"budget", cfg.budget},
         {"seed", cfg.seed},
         {"output", cfg.output.generic_string()}};
  if (cfg.symbol) j["symbol"] = *cfg.symbol;
  if (cfg.omega) j["omega"] = *cfg.omega;
  if (cfg.tag) j["tag"] = std::string(to_string(*cfg.tag));
  return j;
}

bool RunManifest::passed() const noexcept {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteSummary& s) { return s.passed; });
}

json manifest_to_json(const RunManifest& m) {
  json suites = json::array();
  for (const auto& s : m.suites) {
    json j{{"suite", s.suite},
           {"passed", s.passed},
           {"trials", s.trials},
           {"skipped", s.skipped},
           {"checks", s.checks},
           {"failed_checks", s.failed_checks}};
    j["max_defect"] = optional_number(s.max_defect);
    suites.push_back(std::move(j));
  }
  return json{{"config_digest", m.config_digest},
              {"tool_version", m.tool_version},
              {"started_at", m.started_at},
              {"finished_at", m.finished_at},
              {"suites", std::move(suites)},
              {"files", m.files},
              {"exit_code", m.exit_code()}};
}

RunOutput execute(const ExperimentConfig& config, const RunOptions& options) {
  RunOutput result;
  result.manifest.started_at = utc_now();
  ExperimentConfig cfg = config;
  if (options.seed) cfg.seed = *options.seed;
  if (options.output) cfg.output = *options.output;
  const Resolved env{cfg, cfg.seed};

  std::vector<Trial> trials;
  switch (cfg.suite) {
    case Suite::Identity: trials = identity_trials(env, false); break;
    case Suite::Quasicommutator: trials = identity_trials(env, true); break;
    case Suite::KeyIneq: trials = key_ineq_trials(env); break;
    case Suite::Lipschitz: trials = lipschitz_trials(env); break;
    case Suite::Holder: trials = holder_trials(env); break;
    case Suite::Omega: trials = omega_trials(env); break;
    case Suite::Schatten: trials = schatten_trials(env, false); break;
    case Suite::PartialSum: trials = schatten_trials(env, true); break;
    case Suite::Weak: trials = weak_trials(env); break;
    case Suite::Search: trials = search_trials(env); break;
  }
  const std::vector<TrialOutput> outputs = run_trials(trials, options.jobs);

  json config_json = config_to_json(cfg);
  config_json.erase("output");  // where the files go is not part of the experiment
  const std::string digest = fnv1a_hex(config_json.dump());

  SuiteSummary summary;
  summary.suite = std::string(to_string(cfg.suite));
  summary.trials = outputs.size();
  json reports = json::array(), checks = json::array(), weak = json::array(), estimates = json::array();
  json skipped = json::array();
  std::string csv = kCsvHeader;
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    const TrialOutput& out = outputs[i];
    for (const Row& row : out.rows) {
      json j = row_json(row);
      j["trial"] = i;
      reports.push_back(std::move(j));
      csv += csv_line(row);
    }
    for (const auto& c : out.checks) {
      checks.push_back({{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"passed", c.passed}, {"trial", i}});
      ++summary.checks;
      if (!c.passed) {
        ++summary.failed_checks;
        summary.passed = false;
      }
    }
    for (const auto& w : out.weak_tables) weak.push_back(w);
    for (const auto& e : out.estimates) estimates.push_back(e);
    if (out.skipped) {
      ++summary.skipped;
      skipped.push_back({{"trial", i}, {"reason", *out.skipped}});
    }
    if (out.defect) summary.max_defect = std::max(summary.max_defect.value_or(0.0), *out.defect);
  }

  result.report = json{{"suite", summary.suite},
                       {"seed", cfg.seed},
                       {"config", std::move(config_json)},
                       {"config_digest", digest},
                       {"tool_version", std::string(kToolVersion)},
                       {"reports", std::move(reports)},
                       {"estimates", std::move(estimates)},
                       {"weak_tables", std::move(weak)},
                       {"checks", std::move(checks)},
                       {"skipped", std::move(skipped)}};
  result.csv = std::move(csv);
  result.manifest.config_digest = digest;
  result.manifest.suites.push_back(summary);
  result.manifest.files = {"report.json", "report.csv", "manifest.json"};
  result.manifest.finished_at = utc_now();
  return result;
}

RunManifest run(const ExperimentConfig& config, const RunOptions& options) {
  RunOutput out = execute(config, options);
  const std::filesystem::path dir = options.output.value_or(config.output);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(Errc::IoError, "cannot create " + dir.string() + ": " + ec.message());
  io::write_text_file(dir / "report.json", out.report.dump(2) + "\n");
  io::write_text_file(dir / "report.csv", out.csv);
  io::write_text_file(dir / "manifest.json", manifest_to_json(out.manifest).dump(2) + "\n");
  return out.manifest;
}

std::string plotdata_csv(const json& report) {
  std::string csv = "series,tag,case,alpha,p,x,y,w\n";
  if (!report.is_object()) return csv;

  auto num = [](const json& j, const char* key) -> std::optional<double> {
    if (!j.contains(key) || !j.at(key).is_number()) return std::nullopt;
    return j.at(key).get<double>();
  };
  // std::nullopt sorts before any value
  using Key = std::tuple<std::string, std::optional<double>, std::optional<double>>;
  std::map<Key, std::map<double, double, std::greater<>>> by_eps;
  std::map<std::tuple<std::string, std::optional<double>>, std::map<double, double>> by_alpha;

  if (report.contains("reports") && report.at("reports").is_array()) {
    for (const auto& r : report.at("reports")) {
      if (!r.is_object() || !r.contains("tag") || !r.at("tag").is_string()) continue;
      if (r.contains("l") && !r.at("l").is_null()) continue;  // partial sums are their own table
      const auto eps = num(r, "eps");
      const auto ratio = num(r, "ratio");
      if (!eps || !ratio || !std::isfinite(*ratio)) continue;
      const std::string tag = r.at("tag").get<std::string>();
      const auto alpha = num(r, "alpha");
      const auto p = num(r, "p");
      auto& cell = by_eps[{tag, alpha, p}];
      auto [it, fresh] = cell.emplace(*eps, *ratio);
      if (!fresh) it->second = std::max(it->second, *ratio);
      if (alpha) {
        auto& a = by_alpha[{tag, p}];
        auto [ia, new_alpha] = a.emplace(*alpha, *ratio);
        if (!new_alpha) ia->second = std::max(ia->second, *ratio);
      }
    }
  }
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  for (const auto& [key, series] : by_eps) {
    const auto& [tag, alpha, p] = key;
    for (const auto& [eps, ratio] : series) {
      csv += "ratio_vs_eps," + tag + ",," + opt(alpha) + "," + opt(p) + "," + format_double(eps) + "," +
             format_double(ratio) + ",\n";
    }
  }
  for (const auto& [key, series] : by_alpha) {
    const auto& [tag, p] = key;
    for (const auto& [alpha, ratio] : series) {
      csv += "ratio_vs_alpha," + tag + ",," + format_double(alpha) + "," + opt(p) + "," + format_double(alpha) +
             "," + format_double(ratio) + ",\n";
    }
  }
  if (report.contains("weak_tables") && report.at("weak_tables").is_array()) {
    for (const auto& t : report.at("weak_tables")) {
      if (!t.is_object() || !t.contains("rows")) continue;
      const std::string id = t.contains("case") ? t.at("case").dump() : std::string();
      const auto alpha = num(t, "alpha");
      for (const auto& row : t.at("rows")) {
        const auto j = num(row, "j"), s = num(row, "s"), w = num(row, "w");
        if (!j || !s || !w) continue;
        csv += "sj_decay,weak," + id + "," + opt(alpha) + ",," + format_double(*j) + "," + format_double(*s) + "," +
               format_double(*w) + "\n";
      }
    }
  }
  return csv;
}

void emit_plotdata(const std::filesystem::path& report_file, const std::filesystem::path& out_csv) {
  if (!std::filesystem::exists(report_file)) throw Error(Errc::IoError, "report not found: " + report_file.string());
  json report;
  try {
    report = io::read_json_file(report_file);
  } catch (const Error& e) {
    throw Error(Errc::IoError, e.what());
  }
  io::write_text_file(out_csv, plotdata_csv(report));
}

}  // namespace doikit::cli
