#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <random>

#include <Eigen/Dense>

#include "qcompat/error.hpp"

namespace qcompat {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Relative tolerance on ‖H − H*‖ accepted by the checked constructor.
inline constexpr double kHermiticityTol = 1e-12;

/// Complex Hermitian d×d matrix.
///
/// The checked constructor rejects inputs further than `rel_tol · max(1, ‖H‖)`
/// from Hermitian and then replaces H by (H + H*)/2, so every stored value is
/// exactly Hermitian. Default-constructed objects are 0×0 placeholders.
class HermitianMatrix {
public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const ComplexMatrix& m, double rel_tol = kHermiticityTol);

  /// (M + M*)/2 without any closeness check.
  static HermitianMatrix symmetrized(const ComplexMatrix& m);
  static HermitianMatrix zero(int d);
  static HermitianMatrix identity(int d);
  static HermitianMatrix diagonal(const RealVector& diag);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const ComplexMatrix& matrix() const noexcept { return m_; }
  Complex operator()(int r, int c) const { return m_(r, c); }
  double trace() const { return m_.trace().real(); }
  bool is_zero() const { return m_.isZero(0.0); }

  HermitianMatrix& operator+=(const HermitianMatrix& o);
  HermitianMatrix& operator-=(const HermitianMatrix& o);
  HermitianMatrix& operator*=(double s);

  friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { return a += b; }
  friend HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) { return a -= b; }
  friend HermitianMatrix operator*(HermitianMatrix a, double s) { return a *= s; }
  friend HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }
  friend HermitianMatrix operator/(HermitianMatrix a, double s) { return a *= 1.0 / s; }
  HermitianMatrix operator-() const { return HermitianMatrix::symmetrized(-m_); }

private:
  ComplexMatrix m_;
};

/// Eigen-decomposition with eigenvalues ascending and orthonormal eigenvector columns.
struct Spectrum {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;
};

enum class SchattenP { One, Two, Infinity };

/// Eigenvalues (ascending) of a Hermitian Eigen expression.
template <typename Derived>
RealVector hermitian_eigenvalues(const Eigen::MatrixBase<Derived>& h) {
  using Plain = typename Derived::PlainObject;
  Eigen::SelfAdjointEigenSolver<Plain> solver(h.eval(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

template <typename Derived>
double schatten_norm(const Eigen::MatrixBase<Derived>& h, SchattenP p) {
  const RealVector ev = hermitian_eigenvalues(h);
  switch (p) {
  case SchattenP::One: return ev.cwiseAbs().sum();
  case SchattenP::Two: return ev.norm();
  case SchattenP::Infinity: return ev.size() == 0 ? 0.0 : ev.cwiseAbs().maxCoeff();
  }
  return 0.0;
}

Spectrum eig(const HermitianMatrix& h);
double lambda_max(const HermitianMatrix& h);
double lambda_min(const HermitianMatrix& h);

double schatten_norm(const HermitianMatrix& h, SchattenP p);
/// p must be 1, 2 or +infinity; anything else throws InvalidInput.
double schatten_norm(const HermitianMatrix& h, double p);
inline double operator_norm(const HermitianMatrix& h) { return schatten_norm(h, SchattenP::Infinity); }
inline double trace_norm(const HermitianMatrix& h) { return schatten_norm(h, SchattenP::One); }

/// 1e-9 · max(1, ‖H‖_∞).
double psd_tolerance(const HermitianMatrix& h);
bool is_psd(const HermitianMatrix& h);
bool is_psd(const HermitianMatrix& h, double tol);

/// Real part of Tr[A B].
double trace_product(const HermitianMatrix& a, const HermitianMatrix& b);

/// Square root of a PSD matrix; eigenvalues in [−tol_psd, 0) are clamped to 0.
HermitianMatrix psd_sqrt(const HermitianMatrix& h);

/// S H S*, for Hermitian S.
HermitianMatrix congruence(const HermitianMatrix& s, const HermitianMatrix& h);

/// Projector onto the span of eigenvectors with eigenvalue ≥ 0.
HermitianMatrix nonnegative_projector(const HermitianMatrix& h);

/// Spectral clamp of H onto the PSD cone.
HermitianMatrix psd_part(const HermitianMatrix& h);

/// Density matrix: PSD (within tol_psd) with unit trace (within 1e-10).
class DensityMatrix {
public:
  explicit DensityMatrix(HermitianMatrix rho);
  static DensityMatrix maximally_mixed(int d);

  int dim() const noexcept { return rho_.dim(); }
  const HermitianMatrix& matrix() const noexcept { return rho_; }

private:
  HermitianMatrix rho_;
};

enum class RandomKind { Effect, DensityHs, HermitianGaussian, PureState };

/// Seeded random instance. Deterministic per (kind, d, seed).
HermitianMatrix random_instance(RandomKind kind, int d, std::uint64_t seed);

/// Generator-based variants used when drawing many instances from one stream.
HermitianMatrix random_instance(RandomKind kind, int d, std::mt19937_64& rng);
ComplexMatrix haar_unitary(int d, std::mt19937_64& rng);
ComplexVector random_unit_vector(int d, std::mt19937_64& rng);

/// SplitMix64 step; used to derive independent per-sample seeds from a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

} // namespace qcompat
