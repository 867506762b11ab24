#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qcompat/hermit.hpp"
#include "qcompat/norms.hpp"

namespace qcompat {

/// g dichotomic measurements {E_i, I − E_i} on C^d.
class EffectTuple {
public:
  EffectTuple() = default;
  /// Throws NotAnEffectTuple if some E_i has spectrum outside [0, 1] (beyond tol_psd).
  explicit EffectTuple(std::vector<HermitianMatrix> effects);

  int g() const noexcept { return static_cast<int>(effects_.size()); }
  int d() const noexcept { return effects_.empty() ? 0 : effects_.front().dim(); }
  const HermitianMatrix& operator[](int i) const { return effects_.at(static_cast<std::size_t>(i)); }
  const std::vector<HermitianMatrix>& effects() const noexcept { return effects_; }

private:
  std::vector<HermitianMatrix> effects_;
};

/// g POVMs, the i-th with k_i outcomes.
class GeneralPovmFamily {
public:
  GeneralPovmFamily() = default;
  /// Throws InvalidInput unless every effect is PSD and each POVM sums to I within 1e-9.
  explicit GeneralPovmFamily(std::vector<std::vector<HermitianMatrix>> povms);
  static GeneralPovmFamily from_effects(const EffectTuple& e);

  int g() const noexcept { return static_cast<int>(povms_.size()); }
  int d() const noexcept { return povms_.empty() ? 0 : povms_.front().front().dim(); }
  std::vector<int> outcome_counts() const;
  const std::vector<HermitianMatrix>& operator[](int i) const { return povms_.at(static_cast<std::size_t>(i)); }
  const std::vector<std::vector<HermitianMatrix>>& povms() const noexcept { return povms_; }

private:
  std::vector<std::vector<HermitianMatrix>> povms_;
};

enum class JointLabelKind {
  /// Entries of each label are in {−1, 0, +1}; 0 marks the noise slack.
  Signs,
  /// Entries are outcome indices j_i ∈ [0, k_i).
  Outcomes,
};

const char* to_string(JointLabelKind kind);

struct JointPovm {
  JointLabelKind kind = JointLabelKind::Signs;
  std::vector<std::vector<int>> labels;
  std::vector<HermitianMatrix> operators;

  int d() const { return operators.empty() ? 0 : operators.front().dim(); }
  /// ‖Σ_l R_l − I‖_∞
  double sum_error() const;
  /// Most negative eigenvalue over all operators (0 if all PSD).
  double min_eigenvalue() const;
};

/// p(outcome | measurement i, joint label l), stored as probabilities[i][l][outcome].
struct PostProcessing {
  std::vector<std::vector<std::vector<double>>> probabilities;

  /// Sign labels: p(+|i,l) = (1 + z_l(i))/2, outcome 0 is "+".
  /// Outcome labels: p(o|i,l) = [o = l_i].
  static PostProcessing canonical(const JointPovm& joint, std::span<const int> outcome_counts);

  /// Marginal POVMs Σ_l p(o|i,l) R_l.
  std::vector<std::vector<HermitianMatrix>> apply(const JointPovm& joint) const;
};

/// max over i, o of ‖marginal_{i,o} − F_{i,o}‖_∞.
double marginal_error(const JointPovm& joint, const PostProcessing& post, const GeneralPovmFamily& family);

/// A_i = 2E_i − I.
ObservableTuple to_tensor(const EffectTuple& e);

/// E_i = (A_i + I)/2. Throws NotAnEffectTuple when some ‖A_i‖_∞ > 1 + tol.
EffectTuple from_tensor(const ObservableTuple& a, double tol = 1e-9);

struct CompatibilityResult {
  bool compatible = false;
  double value = 0.0;
  /// 1 − value
  double margin = 0.0;
  std::optional<JointPovm> joint;
  std::optional<PostProcessing> post;
  std::optional<WitnessCertificate> witness;
  SolverStats stats;
};

/// Decides compatibility through ‖2E − I‖_c ≤ 1 + tol. Compatible verdicts carry a joint POVM
/// with sign labels (the last operator is the slack, label all zeros); incompatible ones carry
/// the dual witness.
CompatibilityResult is_compatible(const EffectTuple& e, double tol = 1e-7, const NormOptions& options = {});

/// Spreads the slack operator of a sign-labeled joint evenly over all 2^g sign labels, giving a
/// joint POVM whose labels are exactly the sign vectors.
JointPovm spread_slack(const JointPovm& joint);

struct MarginalFormResult {
  bool compatible = false;
  /// Smallest μ such that R_j ⪰ −μI admits the marginal constraints; compatible iff μ ≤ tol.
  double shift = 0.0;
  std::optional<JointPovm> joint;
  SolverStats stats;
};

inline constexpr long long kMarginalFormMaxOutcomes = 10000;

/// Feasibility of R_j ⪰ 0 (j over ∏[k_i]) with Σ_{j: j_i = v} R_j = E^{(i)}_v.
/// Throws TooLarge if ∏ k_i exceeds kMarginalFormMaxOutcomes.
MarginalFormResult is_compatible_marginal_form(const GeneralPovmFamily& family, double tol = 1e-7,
                                               const NormOptions& options = {});

/// E'_i = s_i E_i + (1 − s_i) I/2.
EffectTuple add_white_noise(const EffectTuple& e, std::span<const double> s);

/// Boundary classified compatible when the norm is at most this.
inline constexpr double kCompatibleBoundary = 1.0 + 1e-7;

/// sup{t ∈ [0, 1] : t·direction-noisy E is compatible}, by bisection to width ≤ tol.
double robustness(const EffectTuple& e, std::span<const double> direction, double tol = 1e-5,
                  const NormOptions& options = {});

EffectTuple random_effect_tuple(int g, int d, std::mt19937_64& rng);
EffectTuple random_effect_tuple(int g, int d, std::uint64_t seed);
/// Rank-⌊d/2⌋..d−1 projectors in random bases.
EffectTuple random_projective_tuple(int g, int d, std::mt19937_64& rng);
/// Each POVM has k_i outcomes, S^{-1/2} P_j S^{-1/2} from Wishart P_j.
GeneralPovmFamily random_povm_family(std::span<const int> outcome_counts, int d, std::uint64_t seed);

} // namespace qcompat
