#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qcompat/hermit.hpp"

namespace qcompat::sdp {

/// One stored entry of a sparse Hermitian matrix. Both (r, c) and (c, r) are stored.
struct MatrixEntry {
  int row;
  int col;
  Complex value;
};

/// Sparse Hermitian coefficient matrix.
class SparseHermitian {
public:
  SparseHermitian() = default;
  explicit SparseHermitian(const HermitianMatrix& dense);
  SparseHermitian(int dim, std::vector<MatrixEntry> entries);

  int dim() const noexcept { return dim_; }
  const std::vector<MatrixEntry>& entries() const noexcept { return entries_; }
  bool empty() const noexcept { return entries_.empty(); }

  HermitianMatrix to_dense() const;
  /// Re Tr[A Y]; Y need not be Hermitian.
  double inner(const ComplexMatrix& y) const;
  /// target += scale · A
  void add_to(ComplexMatrix& target, double scale) const;
  double frobenius_norm() const;

private:
  int dim_ = 0;
  std::vector<MatrixEntry> entries_;
};

struct ConstraintTerm {
  int block;
  SparseHermitian coefficient;
};

/// Σ_b Tr[A_b X_b] = rhs. Blocks not listed have zero coefficient.
struct Constraint {
  std::vector<ConstraintTerm> terms;
  double rhs = 0.0;
};

/// minimize Σ_b Tr[C_b X_b]  s.t.  Σ_b Tr[A_{j,b} X_b] = b_j,  X_b ⪰ 0.
///
/// Dual: maximize bᵀy  s.t.  S_b = C_b − Σ_j y_j A_{j,b} ⪰ 0.
struct SdpProblem {
  std::vector<int> block_dims;
  std::vector<HermitianMatrix> objective;
  std::vector<Constraint> constraints;

  /// Throws InvalidInput on inconsistent dimensions or block indices.
  void validate() const;
  int total_dim() const;
};

enum class SdpStatus { Optimal, PrimalInfeasible, DualInfeasible, NumericalLimit };

const char* to_string(SdpStatus status);

struct SdpOptions {
  double tol_gap = 1e-8;
  double tol_feas = 1e-9;
  int max_iter = 200;
};

struct SdpSolution {
  SdpStatus status = SdpStatus::NumericalLimit;
  std::vector<HermitianMatrix> primal_blocks;
  RealVector dual_multipliers;
  /// C_b − Σ_j y_j A_{j,b}, recomputed from the returned multipliers.
  std::vector<HermitianMatrix> dual_slacks;
  double primal_value = 0.0;
  double dual_value = 0.0;
  /// |primal − dual| / max(1, |primal|)
  double gap = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;
  std::vector<std::string> warnings;

  /// PrimalInfeasible: y with bᵀy = 1 and −Σ_j y_j A_j ⪰ 0 (up to certificate_residual).
  RealVector dual_ray;
  /// DualInfeasible: X ⪰ 0 with Σ Tr[C X] = −1 and ‖A(X)‖ ≤ certificate_residual.
  std::vector<HermitianMatrix> primal_ray;
  double certificate_residual = 0.0;
};

SdpSolution solve(const SdpProblem& problem, const SdpOptions& options = {});
SdpSolution solve(const SdpProblem& problem, double tol_gap, int max_iter);

/// Writes a self-describing JSON dump of the problem (see docs/sdp_dump.md).
void dump_problem_json(const SdpProblem& problem, std::ostream& os);

// ---------------------------------------------------------------------------
// Builder for matrix-valued constraints.

struct BlockId {
  int index = -1;
  friend bool operator==(BlockId, BlockId) = default;
};

/// Affine Hermitian-matrix expression in the block variables:
///   Σ coef · X_b   (blocks of the expression dimension)
/// + Σ x_s · M_s    (1×1 blocks times fixed matrices)
/// + constant
class MatrixExpr {
public:
  explicit MatrixExpr(int dim);

  static MatrixExpr variable(BlockId block, int dim, double coef = 1.0);
  static MatrixExpr scalar_times(BlockId scalar_block, const HermitianMatrix& m);
  static MatrixExpr constant(const HermitianMatrix& m);

  int dim() const noexcept { return dim_; }
  bool is_zero() const;
  /// True when the expression is exactly 1·X_b for one block.
  std::optional<BlockId> as_single_variable() const;

  MatrixExpr& operator+=(const MatrixExpr& o);
  MatrixExpr& operator-=(const MatrixExpr& o);
  MatrixExpr& operator*=(double s);

  friend MatrixExpr operator+(MatrixExpr a, const MatrixExpr& b) { return a += b; }
  friend MatrixExpr operator-(MatrixExpr a, const MatrixExpr& b) { return a -= b; }
  friend MatrixExpr operator*(MatrixExpr a, double s) { return a *= s; }
  friend MatrixExpr operator*(double s, MatrixExpr a) { return a *= s; }

  struct BlockTerm {
    BlockId block;
    double coef;
  };
  struct ScalarTerm {
    BlockId block;
    HermitianMatrix matrix;
  };

  const std::vector<BlockTerm>& block_terms() const noexcept { return blocks_; }
  const std::vector<ScalarTerm>& scalar_terms() const noexcept { return scalars_; }
  const HermitianMatrix& constant_term() const noexcept { return constant_; }

private:
  int dim_;
  std::vector<BlockTerm> blocks_;
  std::vector<ScalarTerm> scalars_;
  HermitianMatrix constant_;
};

/// Rows generated by one matrix equation: d² real equalities starting at `first_row`,
/// ordered by (p ≤ q): the diagonal entry, or the real then imaginary part.
struct EquationHandle {
  int first_row = 0;
  int dim = 0;
  int rows() const { return dim * dim; }
};

struct InequalityHandle {
  /// PSD slack block, absent when the inequality is a bare 0 ⪯ X_b.
  std::optional<BlockId> slack;
  std::optional<EquationHandle> equation;
};

class SdpBuilder {
public:
  BlockId add_block(int dim);
  /// 1×1 block, i.e. a nonnegative scalar variable.
  BlockId add_scalar() { return add_block(1); }

  int block_dim(BlockId b) const;
  int num_blocks() const { return static_cast<int>(problem_.block_dims.size()); }
  int num_constraints() const { return static_cast<int>(problem_.constraints.size()); }

  MatrixExpr var(BlockId b, double coef = 1.0) const;

  void set_objective(BlockId b, const HermitianMatrix& c);
  void set_objective(BlockId scalar, double c);

  void add_constraint(Constraint c);
  /// lhs = rhs, entrywise.
  EquationHandle add_equality(const MatrixExpr& lhs, const MatrixExpr& rhs);
  /// lhs ⪯ rhs. Adds a slack block S with rhs − lhs − S = 0 unless lhs = 0 and rhs = X_b.
  InequalityHandle add_inequality(const MatrixExpr& lhs, const MatrixExpr& rhs);

  const SdpProblem& problem() const noexcept { return problem_; }

private:
  SdpProblem problem_;
};

/// Σ_rows y_row · M_row for an equation: the Hermitian multiplier of that matrix equality.
HermitianMatrix equation_multiplier(const SdpSolution& solution, const EquationHandle& eq);
/// Same as above for a primal ray or an arbitrary multiplier vector.
HermitianMatrix equation_multiplier(const RealVector& y, const EquationHandle& eq);

} // namespace qcompat::sdp
