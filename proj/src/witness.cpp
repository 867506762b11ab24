#include "qcompat/witness.hpp"

#include <cmath>

namespace qcompat {

const char* to_string(WitnessKind kind) {
  switch (kind) {
  case WitnessKind::EffectWitness: return "EffectWitness";
  case WitnessKind::IncompatibilityWitness: return "IncompatibilityWitness";
  case WitnessKind::StrictIncompatibilityWitness: return "StrictIncompatibilityWitness";
  case WitnessKind::NotAWitness: return "NotAWitness";
  }
  return "Unknown";
}

WitnessClass classify(const ObservableTuple& phi, double tol, const NormOptions& options) {
  WitnessClass out;
  out.proj_l1 = proj_norm_l1(phi);
  if (phi.is_zero()) return out;

  const CompatDualNormResult dual = compat_dual_norm(phi, options);
  out.c_star = dual.value;
  out.stats = dual.stats;
  out.borderline_effect = std::abs(out.proj_l1 - 1.0) <= tol;
  out.borderline_incompatibility = std::abs(out.c_star - 1.0) <= tol;

  if (out.c_star > 1.0 + tol)
    out.kind = WitnessKind::NotAWitness;
  else if (out.proj_l1 > 1.0 + tol)
    out.kind = WitnessKind::StrictIncompatibilityWitness;
  else if (out.proj_l1 < 1.0 - tol)
    out.kind = WitnessKind::EffectWitness;
  else
    out.kind = WitnessKind::IncompatibilityWitness;
  return out;
}

ObservableTuple witness_from_pair(const ObservableTuple& x, const DensityMatrix& rho, double tol) {
  if (rho.dim() != x.d()) throw InvalidInput("state dimension differs from tuple dimension");
  const double n = inj_norm_l1(x);
  if (n > 1.0 + tol) throw InvalidInput("tuple is outside the injective unit ball (norm " + std::to_string(n) + ")");
  const HermitianMatrix root = psd_sqrt(rho.matrix());
  std::vector<HermitianMatrix> phi;
  for (const auto& xi : x.components()) phi.push_back(congruence(root, xi));
  return ObservableTuple(std::move(phi));
}

ObservableTuple reconstruct_from_state(const ObservableTuple& phi, const DensityMatrix& rho, double rel_threshold) {
  if (rho.dim() != phi.d()) throw InvalidInput("state dimension differs from tuple dimension");
  const Spectrum s = eig(rho.matrix());
  const double cut = rel_threshold * std::max(s.eigenvalues.maxCoeff(), 0.0);
  RealVector inv_root(s.eigenvalues.size());
  for (Eigen::Index i = 0; i < inv_root.size(); ++i)
    inv_root(i) = s.eigenvalues(i) > cut ? 1.0 / std::sqrt(s.eigenvalues(i)) : 0.0;
  const HermitianMatrix t = HermitianMatrix::symmetrized(s.eigenvectors * inv_root.cast<Complex>().asDiagonal() *
                                                        s.eigenvectors.adjoint());
  std::vector<HermitianMatrix> x;
  for (const auto& p : phi.components()) x.push_back(congruence(t, p));
  return ObservableTuple(std::move(x));
}

Violation max_violation(const ObservableTuple& phi) {
  std::vector<HermitianMatrix> e;
  for (const auto& p : phi.components()) e.push_back(nonnegative_projector(p));
  return {proj_norm_l1(phi), EffectTuple(std::move(e))};
}

} // namespace qcompat
