#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "doikit/calculus.hpp"
#include "doikit/funcspace.hpp"
#include "doikit/linalg.hpp"

namespace doikit {

/// Mixes a base seed with a trial index (splitmix64) so that trials can run
/// in any order and still see the same random stream.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept;

enum class PairMode { SharedBasis, Independent, Conjugated };

std::string_view to_string(PairMode mode) noexcept;
PairMode pair_mode_from_string(std::string_view name);

struct NormalPairSpec {
  std::size_t dim = 1;
  PairMode mode = PairMode::SharedBasis;
  double eps = 1.0;  // target ‖N₁ − N₂‖
  std::uint64_t seed = 1;
};

struct NormalPair {
  ComplexMatrix n1;
  ComplexMatrix n2;
  double eps_achieved = 0.0;  // operator norm of N₁ − N₂
};

/// shared_basis: one Haar unitary, eigenvalues perturbed by a vector whose
///   largest entry has modulus ε.
/// independent: independent unitaries and spectra, both operators scaled so
///   that ‖N₁ − N₂‖ = ε.
/// conjugated: N₂ = V·N₁·V* with V = exp(iθH), θ solved so ‖N₁ − N₂‖ = ε;
///   N₁ is scaled up first when ε is beyond the reachable range.
NormalPair random_normal_pair(const NormalPairSpec& spec);

/// Shared basis with a single eigenvalue moved by ε, so N₁ − N₂ has rank one.
NormalPair rank_one_normal_pair(std::size_t dim, double eps, std::uint64_t seed);

enum class TheoremTag {
  KeyIneq,       // band-limited symbols, linear in σ
  LipBesov,      // B¹_{∞,1} ⇒ operator Lipschitz
  TraceBesov,    // B¹_{∞,1}, trace-class perturbations
  Holder,        // Λ_α ⇒ operator Hölder
  Omega,         // Λ_ω with ω_*
  SchattenP,     // S_p perturbations ⇒ S_{p/α}
  BesovAlphaS1,  // B^α_{∞,1}, S₁ ⇒ S_{1/α}
  Quasicommutator,
};

std::string_view to_string(TheoremTag tag) noexcept;
TheoremTag theorem_tag_from_string(std::string_view name);

struct RatioParams {
  std::optional<double> alpha;
  std::optional<double> p;
  std::optional<ModulusOfContinuity> omega;
  std::size_t seminorm_budget = 1024;
  std::uint64_t seed = 1;
  /// Replaces the estimated seminorm/Besov norm in the denominator.
  std::optional<double> symbol_norm_override;
};

struct PairDigest {
  std::size_t dim = 0;
  std::vector<Complex> spectrum1;
  std::vector<Complex> spectrum2;
  double eps = 0.0;
};

struct RatioReport {
  TheoremTag tag = TheoremTag::Holder;
  double ratio = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;
  std::string symbol;
  PairDigest pair;
  std::uint64_t seed = 0;
  std::optional<double> alpha;
  std::optional<double> p;
  std::optional<std::size_t> l;
  /// Secondary quantities: the symbol norm used, (1−α)-normalized ratio,
  /// ω-instead-of-ω_* ratio, and so on.
  std::map<std::string, double> extras;
  std::string note;
};

/// Normal pair with both spectral decompositions computed once.
struct PreparedPair {
  ComplexMatrix n1;
  ComplexMatrix n2;
  SpectralDecomposition s1;
  SpectralDecomposition s2;
};

PreparedPair prepare_pair(const ComplexMatrix& n1, const ComplexMatrix& n2,
                          const NormalOptions& options = {});

/// Box and anchors used for every symbol-norm estimate: the bounding square
/// of both spectra grown by one unit, with the eigenvalues as anchors.
SeminormOptions spectral_seminorm_options(const PreparedPair& pair, std::size_t budget,
                                          std::uint64_t seed);

RatioReport theorem_ratio(TheoremTag tag, const ScalarField2D& f, const PreparedPair& pair,
                          const RatioParams& params);
RatioReport theorem_ratio(TheoremTag tag, const ScalarField2D& f, const ComplexMatrix& n1,
                          const ComplexMatrix& n2, const RatioParams& params);

struct WeakRow {
  std::size_t j = 0;
  double singular_value = 0.0;
  double weighted = 0.0;  // (1+j)^α·s_j
};

struct WeakCheck {
  double quasinorm = 0.0;           // sup_j (1+j)^α s_j
  double schatten_quasinorm = 0.0;  // ‖T‖_{S_{1/α}}
  std::vector<WeakRow> table;
};

WeakCheck weak_singular_check(const ScalarField2D& f, double alpha, const PreparedPair& pair);
WeakCheck weak_singular_check(const ScalarField2D& f, double alpha, const ComplexMatrix& n1,
                              const ComplexMatrix& n2);

struct PartialSumRow {
  std::size_t l = 0;
  double lhs = 0.0;    // Σ_{j≤l} s_j(T)^{p/α}
  double rhs = 0.0;    // Σ_{j≤l} s_j(N₁−N₂)^p
  double ratio = 0.0;  // lhs / (‖f‖_{Λ_α}^{p/α}·rhs); NaN when the denominator vanishes
  bool zero_denominator = false;
};

struct PartialSumCheck {
  double seminorm = 0.0;
  std::vector<PartialSumRow> rows;  // l = 0 … dim−1
};

PartialSumCheck partial_sum_check(const ScalarField2D& f, double alpha, double p,
                                  const PreparedPair& pair, const RatioParams& params = {});
PartialSumCheck partial_sum_check(const ScalarField2D& f, double alpha, double p,
                                  const ComplexMatrix& n1, const ComplexMatrix& n2,
                                  const RatioParams& params = {});

/// ‖f(N₁)Q − Qf(N₂)‖ / (‖f‖_{Λ_α}·max(‖N₁Q−QN₂‖, ‖N₁*Q−QN₂*‖)^α·‖Q‖^{1−α}).
/// α = 1 uses the Lipschitz seminorm. The normalization is recorded in the
/// report note.
RatioReport quasicommutator_ratio(const ScalarField2D& f, const PreparedPair& pair,
                                  const ComplexMatrix& q, double alpha, const RatioParams& params = {});
RatioReport quasicommutator_ratio(const ScalarField2D& f, const ComplexMatrix& n1,
                                  const ComplexMatrix& n2, const ComplexMatrix& q, double alpha,
                                  const RatioParams& params = {});

struct SearchParams {
  ScalarField2D symbol;
  RatioParams ratio;
  std::size_t max_dim = 4;
  std::vector<PairMode> modes{PairMode::SharedBasis, PairMode::Independent, PairMode::Conjugated};
  std::vector<double> eps_values{1.0, 1e-1, 1e-2};
  int ascent_rounds = 4;
};

struct ConstantEstimate {
  TheoremTag tag = TheoremTag::Holder;
  double best_ratio = 0.0;
  RatioReport witness;
  std::size_t budget = 0;
  std::uint64_t seed = 0;
  std::size_t evaluations = 0;
  std::size_t skipped = 0;  // candidates whose pair could not be generated
};

/// Candidate 0 is the scalar witness N₁ = [0], N₂ = [ε₀]; candidates 1…budget−1
/// are seeded random pairs refined by greedy ascent (eigenvalue moves for
/// shared/independent pairs, Givens rotations of N₂'s basis for conjugated
/// pairs, step 0.5^k). The result for budget B is a prefix of the run for any
/// larger budget.
ConstantEstimate adversarial_search(TheoremTag tag, const SearchParams& params, std::size_t budget,
                                    std::uint64_t seed);

}  // namespace doikit
