#include "qcompat/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace qcompat::sdp {

// ---------------------------------------------------------------------------
// SparseHermitian

SparseHermitian::SparseHermitian(const HermitianMatrix& dense) : dim_(dense.dim()) {
  const ComplexMatrix& m = dense.matrix();
  for (int c = 0; c < dim_; ++c)
    for (int r = 0; r < dim_; ++r)
      if (m(r, c) != Complex(0.0, 0.0)) entries_.push_back({r, c, m(r, c)});
}

SparseHermitian::SparseHermitian(int dim, std::vector<MatrixEntry> entries) : dim_(dim) {
  if (dim < 1) throw InvalidInput("sparse matrix dimension must be at least 1");
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  for (const auto& e : entries) {
    if (e.row < 0 || e.row >= dim || e.col < 0 || e.col >= dim)
      throw InvalidInput("sparse entry index out of range");
    m(e.row, e.col) += e.value;
  }
  *this = SparseHermitian(HermitianMatrix(m));
}

HermitianMatrix SparseHermitian::to_dense() const {
  ComplexMatrix m = ComplexMatrix::Zero(dim_, dim_);
  for (const auto& e : entries_) m(e.row, e.col) += e.value;
  return HermitianMatrix::symmetrized(m);
}

double SparseHermitian::inner(const ComplexMatrix& y) const {
  Complex s(0.0, 0.0);
  for (const auto& e : entries_) s += e.value * y(e.col, e.row);
  return s.real();
}

void SparseHermitian::add_to(ComplexMatrix& target, double scale) const {
  for (const auto& e : entries_) target(e.row, e.col) += scale * e.value;
}

double SparseHermitian::frobenius_norm() const {
  double s = 0.0;
  for (const auto& e : entries_) s += std::norm(e.value);
  return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// SdpProblem

void SdpProblem::validate() const {
  if (block_dims.empty()) throw InvalidInput("SDP has no blocks");
  if (objective.size() != block_dims.size())
    throw InvalidInput("objective must have one matrix per block");
  for (std::size_t b = 0; b < block_dims.size(); ++b) {
    if (block_dims[b] < 1) throw InvalidInput("block " + std::to_string(b) + " has dimension < 1");
    if (objective[b].dim() != block_dims[b])
      throw InvalidInput("objective block " + std::to_string(b) + " has wrong dimension");
    if (!objective[b].matrix().allFinite())
      throw InvalidInput("objective block " + std::to_string(b) + " is not finite");
  }
  for (std::size_t j = 0; j < constraints.size(); ++j) {
    const Constraint& c = constraints[j];
    if (!std::isfinite(c.rhs)) throw InvalidInput("constraint " + std::to_string(j) + " has non-finite rhs");
    for (const auto& t : c.terms) {
      if (t.block < 0 || t.block >= static_cast<int>(block_dims.size()))
        throw InvalidInput("constraint " + std::to_string(j) + " references unknown block");
      if (t.coefficient.dim() != block_dims[static_cast<std::size_t>(t.block)])
        throw InvalidInput("constraint " + std::to_string(j) + " has a coefficient of wrong dimension");
    }
  }
}

int SdpProblem::total_dim() const {
  int n = 0;
  for (int d : block_dims) n += d;
  return n;
}

const char* to_string(SdpStatus status) {
  switch (status) {
  case SdpStatus::Optimal: return "Optimal";
  case SdpStatus::PrimalInfeasible: return "PrimalInfeasible";
  case SdpStatus::DualInfeasible: return "DualInfeasible";
  case SdpStatus::NumericalLimit: return "NumericalLimit";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// Interior point

namespace {

using Blocks = std::vector<ComplexMatrix>;

ComplexMatrix hsym(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

double inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  // Re Tr[A* B]
  return a.conjugate().cwiseProduct(b).sum().real();
}

double min_eig(const ComplexMatrix& m) {
  return hermitian_eigenvalues(hsym(m)).minCoeff();
}

/// Largest α with X + α dX ⪰ 0 (infinity if unbounded); 0 if X is not PD.
double max_step(const ComplexMatrix& x, const ComplexMatrix& dx) {
  Eigen::LLT<ComplexMatrix> llt(x);
  if (llt.info() != Eigen::Success) return 0.0;
  ComplexMatrix t = llt.matrixL().solve(dx);
  t = llt.matrixL().solve(t.adjoint().eval());
  const double lmin = min_eig(t);
  if (lmin >= 0.0) return std::numeric_limits<double>::infinity();
  return -1.0 / lmin;
}

struct Term {
  int row;
  const SparseHermitian* a;
};

class InteriorPoint {
public:
  InteriorPoint(const SdpProblem& p, std::vector<int> rows, const SdpOptions& o)
      : problem_(p), rows_(std::move(rows)), opt_(o) {
    nb_ = static_cast<int>(p.block_dims.size());
    m_ = static_cast<int>(rows_.size());
    n_ = p.total_dim();
    terms_.resize(static_cast<std::size_t>(nb_));
    b_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      const Constraint& c = p.constraints[static_cast<std::size_t>(rows_[static_cast<std::size_t>(i)])];
      b_(i) = c.rhs;
      for (const auto& t : c.terms)
        if (!t.coefficient.empty()) terms_[static_cast<std::size_t>(t.block)].push_back({i, &t.coefficient});
    }
    for (int k = 0; k < nb_; ++k) c_.push_back(p.objective[static_cast<std::size_t>(k)].matrix());
  }

  SdpSolution run();

private:
  RealVector apply(const Blocks& y) const {
    RealVector out = RealVector::Zero(m_);
    for (int k = 0; k < nb_; ++k)
      for (const Term& t : terms_[static_cast<std::size_t>(k)]) out(t.row) += t.a->inner(y[static_cast<std::size_t>(k)]);
    return out;
  }

  Blocks adjoint(const RealVector& y) const {
    Blocks out;
    for (int k = 0; k < nb_; ++k) {
      const int d = problem_.block_dims[static_cast<std::size_t>(k)];
      ComplexMatrix s = ComplexMatrix::Zero(d, d);
      for (const Term& t : terms_[static_cast<std::size_t>(k)]) t.a->add_to(s, y(t.row));
      out.push_back(s);
    }
    return out;
  }

  void initial_point();
  bool build_schur();
  void direction(const Blocks& rc, Blocks& dx, RealVector& dy, Blocks& dz) const;
  SdpSolution package(SdpStatus status) const;

  const SdpProblem& problem_;
  std::vector<int> rows_;
  SdpOptions opt_;
  int nb_ = 0, m_ = 0, n_ = 0;
  std::vector<std::vector<Term>> terms_;
  RealVector b_;
  Blocks c_;

  Blocks x_, z_, rd_;
  RealVector y_, rp_;
  using Wide = long double;
  using WideMatrix = Eigen::Matrix<Wide, Eigen::Dynamic, Eigen::Dynamic>;
  using WideVector = Eigen::Matrix<Wide, Eigen::Dynamic, 1>;
  using WideComplexMatrix = Eigen::Matrix<std::complex<Wide>, Eigen::Dynamic, Eigen::Dynamic>;
  WideMatrix schur_matrix_;
  Eigen::LLT<WideMatrix> schur_;
  std::vector<WideComplexMatrix> zinv_wide_;
  int iter_ = 0;
  double pinf_ = 0, dinf_ = 0, pobj_ = 0, dobj_ = 0, gap_ = 0;
};

void InteriorPoint::initial_point() {
  x_.clear();
  z_.clear();
  for (int k = 0; k < nb_; ++k) {
    const int d = problem_.block_dims[static_cast<std::size_t>(k)];
    double norm_a = 0.0, max_a = 0.0;
    for (const Term& t : terms_[static_cast<std::size_t>(k)]) {
      const double fa = t.a->frobenius_norm();
      norm_a = std::max(norm_a, (1.0 + std::abs(b_(t.row))) / (1.0 + fa));
      max_a = std::max(max_a, fa);
    }
    const double sq = std::sqrt(static_cast<double>(d));
    const double xi = std::max({10.0, sq, d * norm_a});
    const double eta = std::max({10.0, sq, max_a, c_[static_cast<std::size_t>(k)].norm()});
    x_.push_back(xi * ComplexMatrix::Identity(d, d));
    z_.push_back(eta * ComplexMatrix::Identity(d, d));
  }
  y_ = RealVector::Zero(m_);
}

bool InteriorPoint::build_schur() {
  // Formed and factored in extended precision: near the optimum the Schur complement has
  // condition numbers around 1/μ², which exhausts double precision before the gap closes.
  WideMatrix schur = WideMatrix::Zero(m_, m_);
  for (int k = 0; k < nb_; ++k) {
    const auto& terms = terms_[static_cast<std::size_t>(k)];
    const WideComplexMatrix x = x_[static_cast<std::size_t>(k)].cast<std::complex<Wide>>();
    const WideComplexMatrix& w = zinv_wide_[static_cast<std::size_t>(k)];
    // M_ij += Re Tr[A_i X A_j W] = Re Σ a_rc X_cp a'_pq W_qr
    for (std::size_t ti = 0; ti < terms.size(); ++ti) {
      const auto& ei = terms[ti].a->entries();
      for (std::size_t tj = ti; tj < terms.size(); ++tj) {
        const auto& ej = terms[tj].a->entries();
        std::complex<Wide> s(0.0L, 0.0L);
        for (const auto& a : ei)
          for (const auto& a2 : ej)
            s += std::complex<Wide>(a.value) * x(a.col, a2.row) * std::complex<Wide>(a2.value) * w(a2.col, a.row);
        const int i = terms[ti].row, j = terms[tj].row;
        schur(i, j) += s.real();
        if (ti != tj) schur(j, i) += s.real();
      }
    }
  }
  schur_matrix_ = schur;
  schur_.compute(schur);
  if (schur_.info() == Eigen::Success) return true;
  const Wide scale = std::max<Wide>(1.0L, schur.diagonal().cwiseAbs().maxCoeff());
  for (Wide reg = 1e-18L; reg <= 1e-8L; reg *= 100.0L) {
    schur_.compute(schur + reg * scale * WideMatrix::Identity(m_, m_));
    if (schur_.info() == Eigen::Success) return true;
  }
  return false;
}

void InteriorPoint::direction(const Blocks& rc, Blocks& dx, RealVector& dy, Blocks& dz) const {
  using WC = std::complex<Wide>;
  auto wide = [](const ComplexMatrix& m) { return WideComplexMatrix(m.cast<WC>()); };
  auto apply_wide = [&](const std::vector<WideComplexMatrix>& blocks) {
    WideVector out = WideVector::Zero(m_);
    for (int k = 0; k < nb_; ++k)
      for (const Term& t : terms_[static_cast<std::size_t>(k)]) {
        const auto& b = blocks[static_cast<std::size_t>(k)];
        WC sum(0.0L, 0.0L);
        for (const auto& e : t.a->entries()) sum += WC(e.value) * b(e.col, e.row);
        out(t.row) += sum.real();
      }
    return out;
  };
  auto adjoint_wide = [&](const WideVector& y) {
    std::vector<WideComplexMatrix> out;
    for (int k = 0; k < nb_; ++k) {
      const int d = problem_.block_dims[static_cast<std::size_t>(k)];
      WideComplexMatrix s = WideComplexMatrix::Zero(d, d);
      for (const Term& t : terms_[static_cast<std::size_t>(k)])
        for (const auto& e : t.a->entries()) s(e.row, e.col) += WC(e.value) * y(t.row);
      out.push_back(s);
    }
    return out;
  };
  auto herm = [](const WideComplexMatrix& m) { return WideComplexMatrix(0.5L * (m + m.adjoint())); };

  std::vector<WideComplexMatrix> xw, t1, t2;
  for (int k = 0; k < nb_; ++k) {
    const auto ks = static_cast<std::size_t>(k);
    xw.push_back(wide(x_[ks]));
    t1.push_back(wide(rc[ks]) * zinv_wide_[ks]);
    t2.push_back(xw[ks] * wide(rd_[ks]) * zinv_wide_[ks]);
  }
  const WideVector rhs = rp_.cast<Wide>() - apply_wide(t1) + apply_wide(t2);
  WideVector dyw = schur_.solve(rhs);
  for (int pass = 0; pass < 2; ++pass) dyw += schur_.solve(rhs - schur_matrix_ * dyw);
  const auto aty = adjoint_wide(dyw);
  dy = dyw.cast<double>();
  dx.clear();
  dz.clear();
  for (int k = 0; k < nb_; ++k) {
    const auto ks = static_cast<std::size_t>(k);
    const WideComplexMatrix dzw = herm(wide(rd_[ks]) - aty[ks]);
    dz.push_back(dzw.cast<Complex>());
    dx.push_back(herm(wide(rc[ks]) * zinv_wide_[ks] - xw[ks] * dzw * zinv_wide_[ks]).cast<Complex>());
  }
}

SdpSolution InteriorPoint::package(SdpStatus status) const {
  SdpSolution s;
  s.status = status;
  s.iterations = iter_;
  s.dual_multipliers = RealVector::Zero(static_cast<Eigen::Index>(problem_.constraints.size()));
  for (int i = 0; i < m_; ++i) s.dual_multipliers(rows_[static_cast<std::size_t>(i)]) = y_(i);
  for (int k = 0; k < nb_; ++k) s.primal_blocks.push_back(HermitianMatrix::symmetrized(x_[static_cast<std::size_t>(k)]));
  const Blocks aty = adjoint(y_);
  for (int k = 0; k < nb_; ++k)
    s.dual_slacks.push_back(HermitianMatrix::symmetrized(c_[static_cast<std::size_t>(k)] - aty[static_cast<std::size_t>(k)]));
  s.primal_value = pobj_;
  s.dual_value = dobj_;
  s.gap = gap_;
  s.primal_infeasibility = pinf_;
  s.dual_infeasibility = dinf_;
  return s;
}

SdpSolution InteriorPoint::run() {
  initial_point();
  const double normb = b_.norm();
  double normc = 0.0;
  for (const auto& c : c_) normc += c.squaredNorm();
  normc = std::sqrt(normc);

  struct Snapshot {
    Blocks x, z;
    RealVector y;
    double merit = std::numeric_limits<double>::infinity();
    int iter = 0;
    double pinf = 0, dinf = 0, pobj = 0, dobj = 0, gap = 0;
  } best;

  for (iter_ = 0;; ++iter_) {
    rp_ = b_ - apply(x_);
    const Blocks aty = adjoint(y_);
    rd_.clear();
    pobj_ = 0.0;
    double rdn = 0.0, xz = 0.0;
    for (int k = 0; k < nb_; ++k) {
      const auto ks = static_cast<std::size_t>(k);
      rd_.push_back(c_[ks] - aty[ks] - z_[ks]);
      rdn += rd_[ks].squaredNorm();
      pobj_ += inner(c_[ks], x_[ks]);
      xz += inner(x_[ks], z_[ks]);
    }
    dobj_ = b_.dot(y_);
    pinf_ = rp_.norm() / (1.0 + normb);
    dinf_ = std::sqrt(rdn) / (1.0 + normc);
    gap_ = std::abs(pobj_ - dobj_) / std::max(1.0, std::abs(pobj_));
    const double mu = xz / n_;

    const double merit = std::max({pinf_ / opt_.tol_feas, dinf_ / opt_.tol_feas, gap_ / opt_.tol_gap});
    if (merit < best.merit) best = {x_, z_, y_, merit, iter_, pinf_, dinf_, pobj_, dobj_, gap_};

    if (pinf_ <= opt_.tol_feas && dinf_ <= opt_.tol_feas && gap_ <= opt_.tol_gap)
      return package(SdpStatus::Optimal);

    // Farkas ray for the primal: bᵀỹ = 1, −Aᵀỹ ⪰ 0.
    if (dobj_ > 0.0) {
      const RealVector ray = y_ / dobj_;
      const Blocks s = adjoint(ray);
      double worst = 0.0;
      for (const auto& sk : s) worst = std::max(worst, -min_eig(-sk));
      if (worst <= opt_.tol_feas) {
        SdpSolution out = package(SdpStatus::PrimalInfeasible);
        out.dual_ray = RealVector::Zero(static_cast<Eigen::Index>(problem_.constraints.size()));
        for (int i = 0; i < m_; ++i) out.dual_ray(rows_[static_cast<std::size_t>(i)]) = ray(i);
        out.certificate_residual = worst;
        return out;
      }
    }
    // Improving ray for the dual: X ⪰ 0, Tr CX = −1, A(X) ≈ 0.
    if (pobj_ < 0.0) {
      const double scale = -1.0 / pobj_;
      Blocks ray;
      for (const auto& xk : x_) ray.push_back(scale * xk);
      const double res = apply(ray).norm();
      if (res <= opt_.tol_feas) {
        SdpSolution out = package(SdpStatus::DualInfeasible);
        for (const auto& r : ray) out.primal_ray.push_back(HermitianMatrix::symmetrized(r));
        out.certificate_residual = res;
        return out;
      }
    }
    if (iter_ >= opt_.max_iter) break;

    zinv_wide_.clear();
    bool ok = true;
    for (const auto& zk : z_) {
      Eigen::LLT<WideComplexMatrix> llt(zk.cast<std::complex<Wide>>());
      if (llt.info() != Eigen::Success) {
        ok = false;
        break;
      }
      const WideComplexMatrix inv = llt.solve(WideComplexMatrix::Identity(zk.rows(), zk.cols()));
      zinv_wide_.push_back(0.5L * (inv + inv.adjoint()));
    }
    if (!ok || !build_schur()) break;

    // Predictor.
    Blocks rc, dx, dz;
    RealVector dy;
    for (int k = 0; k < nb_; ++k) rc.push_back(-x_[static_cast<std::size_t>(k)] * z_[static_cast<std::size_t>(k)]);
    direction(rc, dx, dy, dz);
    double ap = 1.0, ad = 1.0;
    for (int k = 0; k < nb_; ++k) {
      const auto ks = static_cast<std::size_t>(k);
      ap = std::min(ap, max_step(x_[ks], dx[ks]));
      ad = std::min(ad, max_step(z_[ks], dz[ks]));
    }
    double xz_aff = 0.0;
    for (int k = 0; k < nb_; ++k) {
      const auto ks = static_cast<std::size_t>(k);
      xz_aff += inner(x_[ks] + ap * dx[ks], z_[ks] + ad * dz[ks]);
    }
    const double mu_aff = xz_aff / n_;
    const double expon = std::max(1.0, 3.0 * std::min(ap, ad) * std::min(ap, ad));
    const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, expon), 0.0, 1.0);

    // Corrector.
    for (int k = 0; k < nb_; ++k) {
      const auto ks = static_cast<std::size_t>(k);
      const auto d = x_[ks].rows();
      rc[ks] = sigma * mu * ComplexMatrix::Identity(d, d) - x_[ks] * z_[ks] - dx[ks] * dz[ks];
    }
    const double gamma = 0.9 + 0.09 * std::min(ap, ad);
    direction(rc, dx, dy, dz);
    ap = std::numeric_limits<double>::infinity();
    ad = ap;
    for (int k = 0; k < nb_; ++k) {
      const auto ks = static_cast<std::size_t>(k);
      ap = std::min(ap, max_step(x_[ks], dx[ks]));
      ad = std::min(ad, max_step(z_[ks], dz[ks]));
    }
    ap = std::min(1.0, gamma * ap);
    ad = std::min(1.0, gamma * ad);
    if (!(ap > 0.0) || !(ad > 0.0) || !dy.allFinite()) break;

    for (int k = 0; k < nb_; ++k) {
      const auto ks = static_cast<std::size_t>(k);
      x_[ks] = hsym(x_[ks] + ap * dx[ks]);
      z_[ks] = hsym(z_[ks] + ad * dz[ks]);
    }
    y_ += ad * dy;
  }

  x_ = best.x;
  z_ = best.z;
  y_ = best.y;
  pinf_ = best.pinf;
  dinf_ = best.dinf;
  pobj_ = best.pobj;
  dobj_ = best.dobj;
  gap_ = best.gap;
  return package(SdpStatus::NumericalLimit);
}

// Problems without (independent) constraints: minimize Σ Tr[C_b X_b] over the cone.
SdpSolution solve_unconstrained(const SdpProblem& p) {
  SdpSolution s;
  s.dual_multipliers = RealVector::Zero(static_cast<Eigen::Index>(p.constraints.size()));
  for (std::size_t k = 0; k < p.block_dims.size(); ++k) {
    s.primal_blocks.push_back(HermitianMatrix::zero(p.block_dims[k]));
    s.dual_slacks.push_back(p.objective[k]);
  }
  for (std::size_t k = 0; k < p.block_dims.size(); ++k) {
    const Spectrum sp = eig(p.objective[k]);
    if (sp.eigenvalues(0) < -psd_tolerance(p.objective[k])) {
      s.status = SdpStatus::DualInfeasible;
      for (std::size_t j = 0; j < p.block_dims.size(); ++j)
        s.primal_ray.push_back(HermitianMatrix::zero(p.block_dims[j]));
      const ComplexVector v = sp.eigenvectors.col(0);
      s.primal_ray[k] = HermitianMatrix::symmetrized(v * v.adjoint() / -sp.eigenvalues(0));
      return s;
    }
  }
  s.status = SdpStatus::Optimal;
  return s;
}

} // namespace

SdpSolution solve(const SdpProblem& problem, const SdpOptions& options) {
  problem.validate();
  if (!(options.tol_gap > 0.0)) throw InvalidInput("tol_gap must be positive");
  if (!(options.tol_feas > 0.0)) throw InvalidInput("tol_feas must be positive");
  if (options.max_iter < 1) throw InvalidInput("max_iter must be positive");

  const int m = static_cast<int>(problem.constraints.size());
  if (m == 0) return solve_unconstrained(problem);

  // Gram matrix of the constraint functionals; its pivoted QR exposes dependent rows.
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(m, m);
  {
    std::vector<std::vector<Term>> by_block(problem.block_dims.size());
    for (int j = 0; j < m; ++j)
      for (const auto& t : problem.constraints[static_cast<std::size_t>(j)].terms)
        if (!t.coefficient.empty()) by_block[static_cast<std::size_t>(t.block)].push_back({j, &t.coefficient});
    for (const auto& terms : by_block)
      for (std::size_t a = 0; a < terms.size(); ++a)
        for (std::size_t c = a; c < terms.size(); ++c) {
          Complex s(0.0, 0.0);
          for (const auto& e1 : terms[a].a->entries())
            for (const auto& e2 : terms[c].a->entries())
              if (e1.row == e2.row && e1.col == e2.col) s += std::conj(e1.value) * e2.value;
          const int i = terms[a].row, j = terms[c].row;
          gram(i, j) += s.real();
          if (a != c) gram(j, i) += s.real();
        }
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(gram);
  qr.setThreshold(1e-10);
  const int rank = static_cast<int>(qr.rank());

  std::vector<int> kept;
  std::vector<std::string> warnings;
  if (rank == m) {
    for (int j = 0; j < m; ++j) kept.push_back(j);
  } else {
    std::vector<bool> is_kept(static_cast<std::size_t>(m), false);
    for (int i = 0; i < rank; ++i) is_kept[static_cast<std::size_t>(qr.colsPermutation().indices()(i))] = true;
    for (int j = 0; j < m; ++j)
      if (is_kept[static_cast<std::size_t>(j)]) kept.push_back(j);
    const auto r = static_cast<Eigen::Index>(kept.size());
    Eigen::MatrixXd gss(r, r);
    RealVector bs(r);
    for (Eigen::Index a = 0; a < r; ++a) {
      bs(a) = problem.constraints[static_cast<std::size_t>(kept[static_cast<std::size_t>(a)])].rhs;
      for (Eigen::Index c = 0; c < r; ++c) gss(a, c) = gram(kept[static_cast<std::size_t>(a)], kept[static_cast<std::size_t>(c)]);
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(gss);
    for (int j = 0; j < m; ++j) {
      if (is_kept[static_cast<std::size_t>(j)]) continue;
      RealVector gsj(r);
      for (Eigen::Index a = 0; a < r; ++a) gsj(a) = gram(kept[static_cast<std::size_t>(a)], j);
      const RealVector coef = ldlt.solve(gsj);
      const double bj = problem.constraints[static_cast<std::size_t>(j)].rhs;
      const double delta = bj - coef.dot(bs);
      if (std::abs(delta) <= 1e-9 * (1.0 + std::abs(bj) + coef.norm() * bs.norm())) {
        warnings.push_back("dropped redundant constraint " + std::to_string(j));
        continue;
      }
      // Inconsistent: y = (e_j − Σ coef e_S)/delta has Aᵀy ≈ 0 and bᵀy = 1.
      SdpSolution s;
      s.status = SdpStatus::PrimalInfeasible;
      s.warnings = warnings;
      s.warnings.push_back("constraint " + std::to_string(j) + " is inconsistent with the others");
      s.dual_multipliers = RealVector::Zero(m);
      s.dual_ray = RealVector::Zero(m);
      s.dual_ray(j) = 1.0 / delta;
      for (Eigen::Index a = 0; a < r; ++a) s.dual_ray(kept[static_cast<std::size_t>(a)]) = -coef(a) / delta;
      const double resid2 = gram(j, j) - 2.0 * coef.dot(gsj) + coef.dot(gss * coef);
      s.certificate_residual = std::sqrt(std::max(0.0, resid2)) / std::abs(delta);
      for (std::size_t k = 0; k < problem.block_dims.size(); ++k) {
        s.primal_blocks.push_back(HermitianMatrix::zero(problem.block_dims[k]));
        s.dual_slacks.push_back(problem.objective[k]);
      }
      return s;
    }
  }
  if (kept.empty()) {
    SdpSolution s = solve_unconstrained(problem);
    s.warnings = warnings;
    return s;
  }
  InteriorPoint ipm(problem, kept, options);
  SdpSolution s = ipm.run();
  s.warnings.insert(s.warnings.begin(), warnings.begin(), warnings.end());
  return s;
}

SdpSolution solve(const SdpProblem& problem, double tol_gap, int max_iter) {
  SdpOptions o;
  o.tol_gap = tol_gap;
  o.max_iter = max_iter;
  return solve(problem, o);
}

void dump_problem_json(const SdpProblem& problem, std::ostream& os) {
  using nlohmann::json;
  auto dense = [](const HermitianMatrix& h) {
    json re = json::array(), im = json::array();
    for (int r = 0; r < h.dim(); ++r) {
      json rr = json::array(), ri = json::array();
      for (int c = 0; c < h.dim(); ++c) {
        rr.push_back(h(r, c).real());
        ri.push_back(h(r, c).imag());
      }
      re.push_back(rr);
      im.push_back(ri);
    }
    return json{{"d", h.dim()}, {"re", re}, {"im", im}};
  };
  json j;
  j["format"] = "qcompat-sdp-v1";
  j["sense"] = "minimize";
  j["blocks"] = problem.block_dims;
  j["objective"] = json::array();
  for (std::size_t b = 0; b < problem.objective.size(); ++b)
    if (!problem.objective[b].is_zero()) j["objective"].push_back({{"block", b}, {"matrix", dense(problem.objective[b])}});
  j["constraints"] = json::array();
  for (const auto& c : problem.constraints) {
    json terms = json::array();
    for (const auto& t : c.terms) {
      json entries = json::array();
      for (const auto& e : t.coefficient.entries()) entries.push_back({e.row, e.col, e.value.real(), e.value.imag()});
      terms.push_back({{"block", t.block}, {"entries", entries}});
    }
    j["constraints"].push_back({{"rhs", c.rhs}, {"terms", terms}});
  }
  os << j.dump(2) << '\n';
}

} // namespace qcompat::sdp
