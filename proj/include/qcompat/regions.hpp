#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qcompat/measure.hpp"

namespace qcompat {

/// Σ s_i² ≤ 1 (up to 1e-12 rounding slack). Entries must lie in [0, 1].
bool qc_contains(std::span<const double> s);

/// Σ s_i ≤ 1 (up to 1e-12 rounding slack). Entries must lie in [0, 1].
bool simplex_contains(std::span<const double> s);

struct TauStar {
  int d = 0;
  boost::multiprecision::cpp_rational exact;
  double value = 0.0;
  /// √(2/(πd))
  double asymptotic = 0.0;

  /// "p/q", or "p" when the denominator is 1.
  std::string fraction() const;
};

/// 4^{-n} C(2n, n) with n = ⌊d/2⌋, exactly.
TauStar tau_star(int d);

enum class RegionShape { EuclideanBall, Cube };

const char* to_string(RegionShape shape);

/// Γ(g, d) when known in closed form: the nonnegative part of the Euclidean unit ball for g = 1,
/// g = 2, (3, 2) and d ≥ 2^{⌈(g−1)/2⌉}; the full cube when d = 1.
std::optional<RegionShape> known_gamma(int g, int d);

enum class PhaseClass { QcExact, QcStrictlyContained, Unresolved };

const char* to_string(PhaseClass c);

struct PhaseCell {
  int g = 0;
  int d = 0;
  PhaseClass classification = PhaseClass::Unresolved;
  double tau_star = 0.0;
  /// g·τ*(d)²; above 1 means τ*(d)·(1,…,1) lies in Γ but outside the quarter ball.
  double g_tau_sq = 0.0;
};

/// Cells for 1 ≤ g ≤ g_max, 1 ≤ d ≤ d_max, g-major.
std::vector<PhaseCell> phase_diagram(int g_max, int d_max);

/// Header `g,d,classification,tau_star,g_tau_sq`, one row per cell.
void write_phase_csv(const std::vector<PhaseCell>& cells, std::ostream& os);

/// The 2n + 1 mutually anticommuting Hermitian unitaries on n qubits (Jordan–Wigner); X, Y, Z for n = 1.
std::vector<HermitianMatrix> anticommuting_family(int n_qubits);

/// A_i = Γ_i ⊕ 0 from the first g members of the largest anticommuting family fitting in C^d.
/// Throws InvalidInput when that family has fewer than g members.
ObservableTuple anticommuting_tuple(int g, int d);

struct ProbeResult {
  bool counterexample_found = false;
  /// The un-noised tuple E whose s-noisy version is incompatible.
  std::optional<EffectTuple> counterexample;
  int sample_index = -1;
  double norm = 0.0;
  int samples = 0;
};

/// Norm above which a sample counts as a counterexample.
inline constexpr double kProbeThreshold = 1.0 + 1e-6;

/// Samples effect tuples and tests the s-noisy versions. Sample 0 is built from an anticommuting
/// family; the rest cycle through random Clifford combinations, random projective tuples and random
/// effects, each from derive_seed(seed, index). Finding nothing is not a proof that s ∈ Γ.
ProbeResult gamma_probe(int g, int d, std::span<const double> s, int n_samples, std::uint64_t seed,
                        unsigned threads = 0, const NormOptions& options = {});

} // namespace qcompat
