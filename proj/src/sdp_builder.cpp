#include "qcompat/sdp.hpp"

#include <cmath>

namespace qcompat::sdp {

MatrixExpr::MatrixExpr(int dim) : dim_(dim), constant_(HermitianMatrix::zero(dim)) {}

MatrixExpr MatrixExpr::variable(BlockId block, int dim, double coef) {
  MatrixExpr e(dim);
  e.blocks_.push_back({block, coef});
  return e;
}

MatrixExpr MatrixExpr::scalar_times(BlockId scalar_block, const HermitianMatrix& m) {
  MatrixExpr e(m.dim());
  e.scalars_.push_back({scalar_block, m});
  return e;
}

MatrixExpr MatrixExpr::constant(const HermitianMatrix& m) {
  MatrixExpr e(m.dim());
  e.constant_ = m;
  return e;
}

bool MatrixExpr::is_zero() const {
  for (const auto& t : blocks_)
    if (t.coef != 0.0) return false;
  for (const auto& t : scalars_)
    if (!t.matrix.is_zero()) return false;
  return constant_.is_zero();
}

std::optional<BlockId> MatrixExpr::as_single_variable() const {
  if (blocks_.size() != 1 || blocks_[0].coef != 1.0) return std::nullopt;
  for (const auto& t : scalars_)
    if (!t.matrix.is_zero()) return std::nullopt;
  if (!constant_.is_zero()) return std::nullopt;
  return blocks_[0].block;
}

MatrixExpr& MatrixExpr::operator+=(const MatrixExpr& o) {
  if (o.dim_ != dim_) throw InvalidInput("dimension mismatch in matrix expression");
  for (const auto& t : o.blocks_) {
    bool merged = false;
    for (auto& mine : blocks_)
      if (mine.block == t.block) {
        mine.coef += t.coef;
        merged = true;
        break;
      }
    if (!merged) blocks_.push_back(t);
  }
  for (const auto& t : o.scalars_) {
    bool merged = false;
    for (auto& mine : scalars_)
      if (mine.block == t.block) {
        mine.matrix += t.matrix;
        merged = true;
        break;
      }
    if (!merged) scalars_.push_back(t);
  }
  constant_ += o.constant_;
  return *this;
}

MatrixExpr& MatrixExpr::operator-=(const MatrixExpr& o) { return *this += o * -1.0; }

MatrixExpr& MatrixExpr::operator*=(double s) {
  for (auto& t : blocks_) t.coef *= s;
  for (auto& t : scalars_) t.matrix *= s;
  constant_ *= s;
  return *this;
}

BlockId SdpBuilder::add_block(int dim) {
  if (dim < 1) throw InvalidInput("block dimension must be at least 1");
  problem_.block_dims.push_back(dim);
  problem_.objective.push_back(HermitianMatrix::zero(dim));
  return BlockId{static_cast<int>(problem_.block_dims.size()) - 1};
}

int SdpBuilder::block_dim(BlockId b) const {
  if (b.index < 0 || b.index >= num_blocks()) throw InvalidInput("unknown block");
  return problem_.block_dims[static_cast<std::size_t>(b.index)];
}

MatrixExpr SdpBuilder::var(BlockId b, double coef) const {
  return MatrixExpr::variable(b, block_dim(b), coef);
}

void SdpBuilder::set_objective(BlockId b, const HermitianMatrix& c) {
  if (c.dim() != block_dim(b)) throw InvalidInput("objective dimension does not match block");
  problem_.objective[static_cast<std::size_t>(b.index)] = c;
}

void SdpBuilder::set_objective(BlockId scalar, double c) {
  if (block_dim(scalar) != 1) throw InvalidInput("scalar objective on a non-scalar block");
  problem_.objective[static_cast<std::size_t>(scalar.index)] =
      HermitianMatrix::diagonal(RealVector::Constant(1, c));
}

void SdpBuilder::add_constraint(Constraint c) {
  for (const auto& t : c.terms)
    if (t.coefficient.dim() != block_dim(BlockId{t.block}))
      throw InvalidInput("constraint coefficient dimension does not match block");
  problem_.constraints.push_back(std::move(c));
}

namespace {

enum class RowKind { Diagonal, Real, Imag };

struct RowBasis {
  RowKind kind;
  int p;
  int q;
};

std::vector<RowBasis> row_bases(int d) {
  std::vector<RowBasis> rows;
  rows.reserve(static_cast<std::size_t>(d * d));
  for (int p = 0; p < d; ++p)
    for (int q = p; q < d; ++q) {
      if (p == q) {
        rows.push_back({RowKind::Diagonal, p, p});
      } else {
        rows.push_back({RowKind::Real, p, q});
        rows.push_back({RowKind::Imag, p, q});
      }
    }
  return rows;
}

// Tr[M_row Y] for Hermitian Y.
double row_functional(const RowBasis& r, const HermitianMatrix& y) {
  switch (r.kind) {
  case RowKind::Diagonal: return y(r.p, r.p).real();
  case RowKind::Real: return y(r.p, r.q).real();
  case RowKind::Imag: return y(r.p, r.q).imag();
  }
  return 0.0;
}

SparseHermitian row_matrix(const RowBasis& r, int d, double coef) {
  switch (r.kind) {
  case RowKind::Diagonal: return SparseHermitian(d, {{r.p, r.p, Complex(coef, 0.0)}});
  case RowKind::Real:
    return SparseHermitian(d, {{r.p, r.q, Complex(0.5 * coef, 0.0)},
                               {r.q, r.p, Complex(0.5 * coef, 0.0)}});
  case RowKind::Imag:
    return SparseHermitian(d, {{r.p, r.q, Complex(0.0, 0.5 * coef)},
                               {r.q, r.p, Complex(0.0, -0.5 * coef)}});
  }
  return {};
}

} // namespace

EquationHandle SdpBuilder::add_equality(const MatrixExpr& lhs, const MatrixExpr& rhs) {
  const MatrixExpr e = lhs - rhs;
  const int d = e.dim();
  for (const auto& t : e.block_terms())
    if (block_dim(t.block) != d) throw InvalidInput("block dimension does not match equation");
  for (const auto& t : e.scalar_terms())
    if (block_dim(t.block) != 1) throw InvalidInput("scalar term on a non-scalar block");

  EquationHandle handle{num_constraints(), d};
  for (const RowBasis& r : row_bases(d)) {
    Constraint c;
    for (const auto& t : e.block_terms())
      if (t.coef != 0.0) c.terms.push_back({t.block.index, row_matrix(r, d, t.coef)});
    for (const auto& t : e.scalar_terms()) {
      const double v = row_functional(r, t.matrix);
      if (v != 0.0) c.terms.push_back({t.block.index, SparseHermitian(1, {{0, 0, Complex(v, 0.0)}})});
    }
    c.rhs = -row_functional(r, e.constant_term());
    problem_.constraints.push_back(std::move(c));
  }
  return handle;
}

InequalityHandle SdpBuilder::add_inequality(const MatrixExpr& lhs, const MatrixExpr& rhs) {
  if (lhs.dim() != rhs.dim()) throw InvalidInput("dimension mismatch in inequality");
  if (lhs.is_zero())
    if (auto b = rhs.as_single_variable()) return {*b, std::nullopt};
  const BlockId slack = add_block(lhs.dim());
  const EquationHandle eq = add_equality(rhs - lhs - var(slack), MatrixExpr(lhs.dim()));
  return {slack, eq};
}

HermitianMatrix equation_multiplier(const RealVector& y, const EquationHandle& eq) {
  const int d = eq.dim;
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  int row = eq.first_row;
  for (const RowBasis& r : row_bases(d)) {
    if (row >= y.size()) throw InvalidInput("multiplier vector too short for equation");
    const double v = y(row++);
    switch (r.kind) {
    case RowKind::Diagonal: m(r.p, r.p) += v; break;
    case RowKind::Real:
      m(r.p, r.q) += 0.5 * v;
      m(r.q, r.p) += 0.5 * v;
      break;
    case RowKind::Imag:
      m(r.p, r.q) += Complex(0.0, 0.5 * v);
      m(r.q, r.p) += Complex(0.0, -0.5 * v);
      break;
    }
  }
  return HermitianMatrix::symmetrized(m);
}

HermitianMatrix equation_multiplier(const SdpSolution& solution, const EquationHandle& eq) {
  return equation_multiplier(solution.dual_multipliers, eq);
}

} // namespace qcompat::sdp
