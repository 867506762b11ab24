#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qcompat/hermit.hpp"
#include "qcompat/sdp.hpp"

namespace qcompat {

/// Element of Rᵍ ⊗ Herm_d, stored as g Hermitian components of equal dimension.
class ObservableTuple {
public:
  ObservableTuple() = default;
  explicit ObservableTuple(std::vector<HermitianMatrix> components);
  static ObservableTuple zero(int g, int d);

  int g() const noexcept { return static_cast<int>(components_.size()); }
  int d() const noexcept { return components_.empty() ? 0 : components_.front().dim(); }
  const HermitianMatrix& operator[](int i) const { return components_.at(static_cast<std::size_t>(i)); }
  const std::vector<HermitianMatrix>& components() const noexcept { return components_; }
  bool is_zero() const;

  /// Componentwise scaling (s_i A_i).
  ObservableTuple scaled(std::span<const double> s) const;

  ObservableTuple& operator+=(const ObservableTuple& o);
  ObservableTuple& operator*=(double s);
  friend ObservableTuple operator+(ObservableTuple a, const ObservableTuple& b) { return a += b; }
  friend ObservableTuple operator-(ObservableTuple a, const ObservableTuple& b) { return a += b * -1.0; }
  friend ObservableTuple operator*(ObservableTuple a, double s) { return a *= s; }
  friend ObservableTuple operator*(double s, ObservableTuple a) { return a *= s; }

private:
  std::vector<HermitianMatrix> components_;
};

/// Σ_i Tr[φ_i A_i].
double pairing(const ObservableTuple& phi, const ObservableTuple& a);

/// All of {±1}ᵍ in lexicographic order, +1 before −1: (+,…,+), (+,…,+,−), …
std::vector<std::vector<int>> sign_vectors(int g);

/// Σ_i ε_i X_i.
HermitianMatrix signed_sum(const ObservableTuple& x, std::span<const int> signs);

struct NormOptions {
  int g_max = 8;
  sdp::SdpOptions solver;
};

struct SolverStats {
  sdp::SdpStatus status = sdp::SdpStatus::Optimal;
  int iterations = 0;
  double gap = 0.0;
};

/// A = Σ_l ε_l ⊗ K_l with K_l ⪰ 0; `value` = λ_max(Σ_l K_l).
struct CompatDecomposition {
  std::vector<std::vector<int>> signs;
  std::vector<HermitianMatrix> blocks;
  double value = 0.0;

  ObservableTuple reconstruct() const;
};

/// Dual certificate: ρ − Σ_i ε_i φ_i ⪰ 0 for every sign vector ε; `value` = ⟨φ, A⟩.
struct WitnessCertificate {
  DensityMatrix state = DensityMatrix::maximally_mixed(1);
  ObservableTuple components;
  double value = 0.0;

  /// min over ε of λ_min(ρ − Σ ε_i φ_i).
  double feasibility_margin() const;
};

struct CompatNormResult {
  double value = 0.0;
  CompatDecomposition primal;
  WitnessCertificate dual;
  SolverStats stats;
};

/// ‖A‖_c: minimize λ s.t. A = Σ_l ε_l ⊗ K_l, K_l ⪰ 0, Σ_l K_l ⪯ λI.
/// Throws TooManyMeasurements when g > g_max, NumericalLimit if the solver stalls.
CompatNormResult compat_norm(const ObservableTuple& a, const NormOptions& options = {});

struct CompatDualNormResult {
  double value = 0.0;
  /// ρ/Tr ρ for the optimal ρ (maximally mixed when φ = 0).
  DensityMatrix state = DensityMatrix::maximally_mixed(1);
  SolverStats stats;
};

/// ‖φ‖_c* = inf{Tr ρ : ρ ⪰ Σ_i ε_i φ_i for all ε}.
CompatDualNormResult compat_dual_norm(const ObservableTuple& phi, const NormOptions& options = {});

/// X_i = P_i − N_i with P_i, N_i ⪰ 0; `value` = λ_max(Σ_i (P_i + N_i)).
struct L1MinDecomposition {
  std::vector<HermitianMatrix> positives;
  std::vector<HermitianMatrix> negatives;
  double value = 0.0;

  ObservableTuple reconstruct() const;
};

struct WitNormResult {
  double value = 0.0;
  L1MinDecomposition decomposition;
  SolverStats stats;
};

/// ‖X‖_wit = sup_ρ Σ_i ‖ρ^{1/2} X_i ρ^{1/2}‖_1, computed as the minimal λ over
/// decompositions X_i = P_i − N_i with Σ_i (P_i + N_i) ⪯ λI.
WitNormResult wit_norm(const ObservableTuple& x, const NormOptions& options = {});

/// Σ_i ‖ρ^{1/2} X_i ρ^{1/2}‖_1 for one state.
double wit_objective(const ObservableTuple& x, const HermitianMatrix& rho);

/// Lower bound on ‖X‖_wit: maximum of wit_objective over I/d, the eigenprojectors
/// of every component, and `n_samples` seeded random states (alternating
/// Hilbert–Schmidt and pure).
double wit_norm_sample_lb(const ObservableTuple& x, int n_samples, std::uint64_t seed);

/// max_ε ‖Σ_i ε_i X_i‖_∞ (ℓ1ᵍ ⊗_ε S_∞ᵈ). g ≤ 30.
double inj_norm_l1(const ObservableTuple& x);

/// Σ_i ‖X_i‖_1 (ℓ1ᵍ ⊗_π S_1ᵈ).
double proj_norm_l1(const ObservableTuple& x);

/// max_i ‖A_i‖_∞ (ℓ∞ᵍ ⊗_ε S_∞ᵈ).
double inj_norm_linf(const ObservableTuple& a);

} // namespace qcompat
