#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "doikit/funcspace.hpp"
#include "doikit/theorems.hpp"

namespace doikit::cli {

inline constexpr std::string_view kToolVersion = "0.3.0";

enum class Suite {
  Identity,
  KeyIneq,
  Lipschitz,
  Holder,
  Omega,
  Schatten,
  Weak,
  PartialSum,
  Quasicommutator,
  Search,
};

std::string_view to_string(Suite suite) noexcept;
std::optional<Suite> suite_from_string(std::string_view name) noexcept;

// Exit codes of `doictl run`.
inline constexpr int kExitOk = 0;
inline constexpr int kExitAssertion = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;

/// One JSON document per run. Keys:
///   suite (required), symbol, dims, modes, eps, alpha, p, sigmas, omega,
///   repeats, seminorm_budget, budget, tag, seed, output.
/// `alpha`, `p` and `eps` accept a number or a list. `symbol` is a builtin
/// name ("abs_power"), an object {"builtin": name, ...parameters} or
/// {"file": "poly.json"} relative to the config file.
struct ExperimentConfig {
  Suite suite = Suite::Identity;
  std::optional<nlohmann::json> symbol;
  std::vector<std::size_t> dims{2, 4, 8};
  std::vector<PairMode> modes{PairMode::SharedBasis, PairMode::Independent, PairMode::Conjugated};
  std::vector<double> eps{1.0, 1e-2, 1e-4};
  std::vector<double> alphas{0.5};
  std::vector<double> ps{2.0};
  std::vector<double> sigmas{1.0, 2.0, 8.0};
  std::optional<nlohmann::json> omega;  // modulus file format
  std::size_t repeats = 1;
  std::size_t seminorm_budget = 1024;
  std::size_t budget = 64;
  std::optional<TheoremTag> tag;
  std::uint64_t seed = 1;
  std::filesystem::path output = "doictl-out";
  std::filesystem::path base_dir;  // relative symbol files resolve here
};

/// Throws Error(ConfigInvalid) with the first problem found. Every symbol
/// and modulus is resolved here, so run() never fails on configuration.
ExperimentConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& file);

/// Canonical JSON form; the manifest digest is computed from it.
nlohmann::json config_to_json(const ExperimentConfig& config);

/// Builtins: identity, conjugate, real_part, imag_part, abs_squared,
/// abs_power{alpha}, capped_abs, complex_power{k}, exponential{a,b,re,im},
/// random_trig{seed,terms,max_frequency}, piecewise_smooth.
ScalarField2D make_symbol(const nlohmann::json& spec, const std::filesystem::path& base_dir = {},
                          std::optional<double> default_alpha = std::nullopt);

struct RunOptions {
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  std::optional<std::filesystem::path> output;
};

struct CheckResult {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = true;
};

struct SuiteSummary {
  std::string suite;
  bool passed = true;
  std::size_t trials = 0;
  std::size_t skipped = 0;
  std::size_t checks = 0;
  std::size_t failed_checks = 0;
  std::optional<double> max_defect;  // identity-type suites, relative
};

struct RunManifest {
  std::string config_digest;
  std::string tool_version{kToolVersion};
  std::string started_at;
  std::string finished_at;
  std::vector<SuiteSummary> suites;
  std::vector<std::string> files;

  bool passed() const noexcept;
  int exit_code() const noexcept { return passed() ? kExitOk : kExitAssertion; }
};

nlohmann::json manifest_to_json(const RunManifest& manifest);

struct RunOutput {
  nlohmann::json report;
  std::string csv;
  RunManifest manifest;
};

/// Executes the suite in memory. Trials run on `jobs` threads and are merged
/// by trial index, so the report does not depend on the thread count.
RunOutput execute(const ExperimentConfig& config, const RunOptions& options = {});

/// execute() followed by writing report.json, report.csv and manifest.json
/// into the output directory (IoError on failure).
RunManifest run(const ExperimentConfig& config, const RunOptions& options = {});

/// Long-format CSV with header `series,tag,case,alpha,p,x,y,w`:
///   ratio_vs_eps   max ratio per (tag, α, p, ε); ε descending within a group
///   ratio_vs_alpha max ratio per (tag, p, α); α ascending
///   sj_decay       x = j, y = s_j, w = (1+j)^α·s_j for each weak table
std::string plotdata_csv(const nlohmann::json& report);
void emit_plotdata(const std::filesystem::path& report_file, const std::filesystem::path& out_csv);

/// Shortest round-trip rendering used in every CSV.
std::string format_double(double v);

}  // namespace doikit::cli
