#pragma once

#include "qcompat/measure.hpp"
#include "qcompat/norms.hpp"

namespace qcompat {

enum class WitnessKind { EffectWitness, IncompatibilityWitness, StrictIncompatibilityWitness, NotAWitness };

const char* to_string(WitnessKind kind);

struct WitnessClass {
  WitnessKind kind = WitnessKind::NotAWitness;
  /// Σ_i ‖φ_i‖_1
  double proj_l1 = 0.0;
  /// ‖φ‖_c*
  double c_star = 0.0;
  /// |proj_l1 − 1| ≤ tol
  bool borderline_effect = false;
  /// |c_star − 1| ≤ tol
  bool borderline_incompatibility = false;
  SolverStats stats;

  /// In the incompatibility-witness ball: effect, plain or strict witness.
  bool in_incompatibility_ball() const { return kind != WitnessKind::NotAWitness; }
};

/// Zero φ and φ with c_star > 1 + tol are NotAWitness. Otherwise proj_l1 > 1 + tol is strict,
/// proj_l1 < 1 − tol is an effect witness, and the band in between is a plain
/// incompatibility witness on the effect-witness boundary.
WitnessClass classify(const ObservableTuple& phi, double tol = 1e-7, const NormOptions& options = {});

/// φ_i = ρ^{1/2} X_i ρ^{1/2}. Throws InvalidInput unless inj_norm_l1(X) ≤ 1 + tol.
ObservableTuple witness_from_pair(const ObservableTuple& x, const DensityMatrix& rho, double tol = 1e-9);

/// X_i = ρ^{-1/2} φ_i ρ^{-1/2} on the support of ρ (eigenvalues above rel_threshold·λ_max),
/// zero on the kernel.
ObservableTuple reconstruct_from_state(const ObservableTuple& phi, const DensityMatrix& rho,
                                       double rel_threshold = 1e-12);

struct Violation {
  /// Σ_i ‖φ_i‖_1
  double value = 0.0;
  /// E_i = projector onto the nonnegative eigenspace of φ_i.
  EffectTuple maximizer;
};

/// max over effect tuples E of Σ_i Tr[φ_i (2E_i − I)].
Violation max_violation(const ObservableTuple& phi);

} // namespace qcompat
