#include "qcompat/hermit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qcompat {

const char* to_string(ErrorCode code) {
  switch (code) {
  case ErrorCode::InvalidInput: return "InvalidInput";
  case ErrorCode::NotPsd: return "NotPsd";
  case ErrorCode::TooManyMeasurements: return "TooManyMeasurements";
  case ErrorCode::NotAnEffectTuple: return "NotAnEffectTuple";
  case ErrorCode::TooLarge: return "TooLarge";
  case ErrorCode::NumericalLimit: return "NumericalLimit";
  }
  return "Unknown";
}

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m, double rel_tol) {
  if (m.rows() != m.cols())
    throw InvalidInput("matrix is not square");
  if (m.rows() == 0)
    throw InvalidInput("matrix dimension must be at least 1");
  if (!m.allFinite())
    throw InvalidInput("matrix has non-finite entries");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > rel_tol * scale) {
    std::ostringstream os;
    os << "matrix is not Hermitian (max |H - H*| = " << asym << ")";
    throw InvalidInput(os.str());
  }
  m_ = 0.5 * (m + m.adjoint());
}

HermitianMatrix HermitianMatrix::symmetrized(const ComplexMatrix& m) {
  HermitianMatrix h;
  h.m_ = 0.5 * (m + m.adjoint());
  return h;
}

HermitianMatrix HermitianMatrix::zero(int d) {
  if (d < 1) throw InvalidInput("dimension must be at least 1");
  HermitianMatrix h;
  h.m_ = ComplexMatrix::Zero(d, d);
  return h;
}

HermitianMatrix HermitianMatrix::identity(int d) {
  if (d < 1) throw InvalidInput("dimension must be at least 1");
  HermitianMatrix h;
  h.m_ = ComplexMatrix::Identity(d, d);
  return h;
}

HermitianMatrix HermitianMatrix::diagonal(const RealVector& diag) {
  if (diag.size() < 1) throw InvalidInput("dimension must be at least 1");
  HermitianMatrix h;
  h.m_ = diag.cast<Complex>().asDiagonal();
  return h;
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& o) {
  if (o.dim() != dim()) throw InvalidInput("dimension mismatch in matrix sum");
  m_ += o.m_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator-=(const HermitianMatrix& o) {
  if (o.dim() != dim()) throw InvalidInput("dimension mismatch in matrix difference");
  m_ -= o.m_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator*=(double s) {
  m_ *= s;
  return *this;
}

Spectrum eig(const HermitianMatrix& h) {
  if (h.dim() == 0) throw InvalidInput("empty matrix");
  if (!h.matrix().allFinite()) throw InvalidInput("matrix has non-finite entries");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.matrix());
  if (solver.info() != Eigen::Success) throw NumericalLimit("eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double lambda_max(const HermitianMatrix& h) { return hermitian_eigenvalues(h.matrix()).maxCoeff(); }
double lambda_min(const HermitianMatrix& h) { return hermitian_eigenvalues(h.matrix()).minCoeff(); }

double schatten_norm(const HermitianMatrix& h, SchattenP p) { return schatten_norm(h.matrix(), p); }

double schatten_norm(const HermitianMatrix& h, double p) {
  if (p == 1.0) return schatten_norm(h, SchattenP::One);
  if (p == 2.0) return schatten_norm(h, SchattenP::Two);
  if (std::isinf(p) && p > 0) return schatten_norm(h, SchattenP::Infinity);
  throw InvalidInput("unsupported Schatten exponent (expected 1, 2 or inf)");
}

double psd_tolerance(const HermitianMatrix& h) { return 1e-9 * std::max(1.0, operator_norm(h)); }

bool is_psd(const HermitianMatrix& h) { return is_psd(h, psd_tolerance(h)); }

bool is_psd(const HermitianMatrix& h, double tol) { return lambda_min(h) >= -tol; }

double trace_product(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) throw InvalidInput("dimension mismatch in trace product");
  // Tr[AB] = Σ_ij A_ij B_ji = Σ_ij A_ij conj(B_ij) for Hermitian B.
  return a.matrix().cwiseProduct(b.matrix().conjugate()).sum().real();
}

HermitianMatrix psd_sqrt(const HermitianMatrix& h) {
  const Spectrum s = eig(h);
  const double tol = psd_tolerance(h);
  if (s.eigenvalues(0) < -tol)
    throw NotPsd("matrix is not positive semidefinite", s.eigenvalues(0));
  const RealVector root = s.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  return HermitianMatrix::symmetrized(s.eigenvectors * root.cast<Complex>().asDiagonal() *
                                      s.eigenvectors.adjoint());
}

HermitianMatrix congruence(const HermitianMatrix& s, const HermitianMatrix& h) {
  if (s.dim() != h.dim()) throw InvalidInput("dimension mismatch in congruence");
  return HermitianMatrix::symmetrized(s.matrix() * h.matrix() * s.matrix().adjoint());
}

HermitianMatrix nonnegative_projector(const HermitianMatrix& h) {
  const Spectrum s = eig(h);
  RealVector mask(s.eigenvalues.size());
  for (Eigen::Index i = 0; i < mask.size(); ++i) mask(i) = s.eigenvalues(i) >= 0.0 ? 1.0 : 0.0;
  return HermitianMatrix::symmetrized(s.eigenvectors * mask.cast<Complex>().asDiagonal() *
                                      s.eigenvectors.adjoint());
}

HermitianMatrix psd_part(const HermitianMatrix& h) {
  const Spectrum s = eig(h);
  return HermitianMatrix::symmetrized(s.eigenvectors *
                                      s.eigenvalues.cwiseMax(0.0).cast<Complex>().asDiagonal() *
                                      s.eigenvectors.adjoint());
}

DensityMatrix::DensityMatrix(HermitianMatrix rho) : rho_(std::move(rho)) {
  if (rho_.dim() == 0) throw InvalidInput("empty density matrix");
  if (std::abs(rho_.trace() - 1.0) > 1e-10)
    throw InvalidInput("density matrix trace differs from 1");
  const double lmin = lambda_min(rho_);
  if (lmin < -psd_tolerance(rho_))
    throw NotPsd("density matrix is not positive semidefinite", lmin);
}

DensityMatrix DensityMatrix::maximally_mixed(int d) {
  return DensityMatrix(HermitianMatrix::identity(d) / static_cast<double>(d));
}

namespace {

ComplexMatrix ginibre(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  // Column-major fill order fixed for reproducibility.
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(r, c) = Complex(re, im);
    }
  return g;
}

} // namespace

ComplexMatrix haar_unitary(int d, std::mt19937_64& rng) {
  const ComplexMatrix g = ginibre(d, d, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i) {
    const double a = std::abs(r(i, i));
    if (a > 0) q.col(i) *= r(i, i) / a;
  }
  return q;
}

ComplexVector random_unit_vector(int d, std::mt19937_64& rng) {
  ComplexVector v = ginibre(d, 1, rng).col(0);
  return v / v.norm();
}

HermitianMatrix random_instance(RandomKind kind, int d, std::mt19937_64& rng) {
  if (d < 1) throw InvalidInput("dimension must be at least 1");
  switch (kind) {
  case RandomKind::Effect: {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    RealVector ev(d);
    for (int i = 0; i < d; ++i) ev(i) = unif(rng);
    const ComplexMatrix u = haar_unitary(d, rng);
    return HermitianMatrix::symmetrized(u * ev.cast<Complex>().asDiagonal() * u.adjoint());
  }
  case RandomKind::DensityHs: {
    const ComplexMatrix g = ginibre(d, d, rng);
    const ComplexMatrix w = g * g.adjoint();
    return HermitianMatrix::symmetrized(w / w.trace().real());
  }
  case RandomKind::HermitianGaussian: {
    const ComplexMatrix g = ginibre(d, d, rng);
    return HermitianMatrix::symmetrized(g);
  }
  case RandomKind::PureState: {
    const ComplexVector v = random_unit_vector(d, rng);
    return HermitianMatrix::symmetrized(v * v.adjoint());
  }
  }
  throw InvalidInput("unknown random kind");
}

HermitianMatrix random_instance(RandomKind kind, int d, std::uint64_t seed) {
  if (d < 1) throw InvalidInput("dimension must be at least 1");
  std::mt19937_64 rng(seed);
  return random_instance(kind, d, rng);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

} // namespace qcompat
