#include "qcompat/norms.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace qcompat {

using sdp::MatrixExpr;
using sdp::SdpBuilder;
using sdp::SdpStatus;

ObservableTuple::ObservableTuple(std::vector<HermitianMatrix> components)
    : components_(std::move(components)) {
  if (components_.empty()) throw InvalidInput("tuple must have at least one component");
  const int d = components_.front().dim();
  if (d < 1) throw InvalidInput("tuple components must have dimension at least 1");
  for (const auto& c : components_)
    if (c.dim() != d) throw InvalidInput("tuple components have different dimensions");
}

ObservableTuple ObservableTuple::zero(int g, int d) {
  if (g < 1) throw InvalidInput("g must be at least 1");
  return ObservableTuple(std::vector<HermitianMatrix>(static_cast<std::size_t>(g), HermitianMatrix::zero(d)));
}

bool ObservableTuple::is_zero() const {
  return std::all_of(components_.begin(), components_.end(), [](const auto& c) { return c.is_zero(); });
}

ObservableTuple ObservableTuple::scaled(std::span<const double> s) const {
  if (static_cast<int>(s.size()) != g()) throw InvalidInput("scaling vector length differs from g");
  ObservableTuple out = *this;
  for (std::size_t i = 0; i < s.size(); ++i) out.components_[i] *= s[i];
  return out;
}

ObservableTuple& ObservableTuple::operator+=(const ObservableTuple& o) {
  if (o.g() != g() || o.d() != d()) throw InvalidInput("tuple shape mismatch");
  for (std::size_t i = 0; i < components_.size(); ++i) components_[i] += o.components_[i];
  return *this;
}

ObservableTuple& ObservableTuple::operator*=(double s) {
  for (auto& c : components_) c *= s;
  return *this;
}

double pairing(const ObservableTuple& phi, const ObservableTuple& a) {
  if (phi.g() != a.g() || phi.d() != a.d()) throw InvalidInput("tuple shape mismatch in pairing");
  double s = 0.0;
  for (int i = 0; i < a.g(); ++i) s += trace_product(phi[i], a[i]);
  return s;
}

std::vector<std::vector<int>> sign_vectors(int g) {
  if (g < 1 || g > 30) throw InvalidInput("sign enumeration needs 1 <= g <= 30");
  const std::size_t count = std::size_t{1} << g;
  std::vector<std::vector<int>> out(count, std::vector<int>(static_cast<std::size_t>(g)));
  for (std::size_t l = 0; l < count; ++l)
    for (int i = 0; i < g; ++i) out[l][static_cast<std::size_t>(i)] = ((l >> (g - 1 - i)) & 1U) ? -1 : 1;
  return out;
}

HermitianMatrix signed_sum(const ObservableTuple& x, std::span<const int> signs) {
  if (static_cast<int>(signs.size()) != x.g()) throw InvalidInput("sign vector length differs from g");
  ComplexMatrix m = ComplexMatrix::Zero(x.d(), x.d());
  for (int i = 0; i < x.g(); ++i) m += static_cast<double>(signs[static_cast<std::size_t>(i)]) * x[i].matrix();
  return HermitianMatrix::symmetrized(m);
}

ObservableTuple CompatDecomposition::reconstruct() const {
  if (blocks.empty()) throw InvalidInput("empty decomposition");
  const int g = static_cast<int>(signs.front().size());
  const int d = blocks.front().dim();
  ObservableTuple out = ObservableTuple::zero(g, d);
  std::vector<HermitianMatrix> comps = out.components();
  for (std::size_t l = 0; l < blocks.size(); ++l)
    for (int i = 0; i < g; ++i) comps[static_cast<std::size_t>(i)] += static_cast<double>(signs[l][static_cast<std::size_t>(i)]) * blocks[l];
  return ObservableTuple(std::move(comps));
}

double WitnessCertificate::feasibility_margin() const {
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& eps : sign_vectors(components.g()))
    margin = std::min(margin, lambda_min(state.matrix() - signed_sum(components, eps)));
  return margin;
}

ObservableTuple L1MinDecomposition::reconstruct() const {
  std::vector<HermitianMatrix> comps;
  for (std::size_t i = 0; i < positives.size(); ++i) comps.push_back(positives[i] - negatives[i]);
  return ObservableTuple(std::move(comps));
}

namespace {

SolverStats stats_of(const sdp::SdpSolution& s) { return {s.status, s.iterations, s.gap}; }

void require_optimal(const sdp::SdpSolution& s, const char* what) {
  if (s.status != SdpStatus::Optimal)
    throw NumericalLimit(std::string(what) + ": solver returned " + sdp::to_string(s.status) +
                         " after " + std::to_string(s.iterations) + " iterations");
}

void check_g(int g, int g_max) {
  if (g < 1) throw InvalidInput("g must be at least 1");
  if (g > g_max) throw TooManyMeasurements(g, g_max);
}

double min_signed_margin(const HermitianMatrix& rho, const ObservableTuple& phi,
                         const std::vector<std::vector<int>>& signs) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& eps : signs) m = std::min(m, lambda_min(rho - signed_sum(phi, eps)));
  return m;
}

// Turns an approximate dual point (ρ, φ) with Tr ρ ≲ 1 into an exactly feasible
// certificate: unit trace and ρ − Σ ε φ ⪰ 0 for all ε.
WitnessCertificate repair_certificate(HermitianMatrix rho, ObservableTuple phi, const ObservableTuple& a,
                                      const std::vector<std::vector<int>>& signs) {
  const int d = rho.dim();
  const double tr = rho.trace();
  if (tr <= 1.0) {
    rho += HermitianMatrix::identity(d) * ((1.0 - tr) / d);
  } else {
    rho *= 1.0 / tr;
    phi *= 1.0 / tr;
  }
  const double m = min_signed_margin(rho, phi, signs);
  if (m < 0.0) {
    const double shrink = 1.0 / (1.0 + d * (-m));
    rho = (rho + HermitianMatrix::identity(d) * (-m)) * shrink;
    phi *= shrink;
  }
  // Unit trace up to rounding; renormalize so the DensityMatrix invariant holds exactly.
  rho *= 1.0 / rho.trace();
  WitnessCertificate cert;
  cert.state = DensityMatrix(rho);
  cert.value = pairing(phi, a);
  cert.components = std::move(phi);
  return cert;
}

} // namespace

CompatNormResult compat_norm(const ObservableTuple& a, const NormOptions& options) {
  check_g(a.g(), options.g_max);
  const int g = a.g();
  const int d = a.d();
  const auto signs = sign_vectors(g);

  CompatNormResult out;
  if (a.is_zero()) {
    out.primal.signs = signs;
    out.primal.blocks.assign(signs.size(), HermitianMatrix::zero(d));
    out.dual.state = DensityMatrix::maximally_mixed(d);
    out.dual.components = ObservableTuple::zero(g, d);
    return out;
  }

  SdpBuilder b;
  std::vector<sdp::BlockId> k;
  for (std::size_t l = 0; l < signs.size(); ++l) k.push_back(b.add_block(d));
  const sdp::BlockId lambda = b.add_scalar();
  b.set_objective(lambda, 1.0);

  std::vector<sdp::EquationHandle> tuple_eqs;
  for (int i = 0; i < g; ++i) {
    MatrixExpr lhs(d);
    for (std::size_t l = 0; l < signs.size(); ++l) lhs += b.var(k[l], signs[l][static_cast<std::size_t>(i)]);
    tuple_eqs.push_back(b.add_equality(lhs, MatrixExpr::constant(a[i])));
  }
  MatrixExpr total(d);
  for (const auto& kl : k) total += b.var(kl);
  const auto bound = b.add_inequality(total, MatrixExpr::scalar_times(lambda, HermitianMatrix::identity(d)));

  const sdp::SdpSolution sol = sdp::solve(b.problem(), options.solver);
  require_optimal(sol, "compatibility norm");

  out.stats = stats_of(sol);
  out.primal.signs = signs;
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (const auto& kl : k) {
    out.primal.blocks.push_back(sol.primal_blocks[static_cast<std::size_t>(kl.index)]);
    sum += out.primal.blocks.back().matrix();
  }
  out.primal.value = lambda_max(HermitianMatrix::symmetrized(sum));
  out.value = out.primal.value;

  std::vector<HermitianMatrix> phi;
  for (const auto& eq : tuple_eqs) phi.push_back(sdp::equation_multiplier(sol, eq));
  const HermitianMatrix rho = sdp::equation_multiplier(sol, *bound.equation);
  out.dual = repair_certificate(rho, ObservableTuple(std::move(phi)), a, signs);
  return out;
}

CompatDualNormResult compat_dual_norm(const ObservableTuple& phi, const NormOptions& options) {
  check_g(phi.g(), options.g_max);
  const int d = phi.d();
  const auto signs = sign_vectors(phi.g());

  CompatDualNormResult out;
  out.state = DensityMatrix::maximally_mixed(d);
  if (phi.is_zero()) return out;

  // minimize −Σ_l Tr[(Σ_i ε_l(i) φ_i) X_l]  s.t.  Σ_l X_l = I; the multiplier of the
  // equality is −ρ.
  SdpBuilder b;
  MatrixExpr total(d);
  for (const auto& eps : signs) {
    const sdp::BlockId x = b.add_block(d);
    b.set_objective(x, -signed_sum(phi, eps));
    total += b.var(x);
  }
  const auto eq = b.add_equality(total, MatrixExpr::constant(HermitianMatrix::identity(d)));
  const sdp::SdpSolution sol = sdp::solve(b.problem(), options.solver);
  require_optimal(sol, "dual compatibility norm");

  HermitianMatrix rho = -sdp::equation_multiplier(sol, eq);
  const double m = min_signed_margin(rho, phi, signs);
  if (m < 0.0) rho += HermitianMatrix::identity(d) * (-m);
  out.value = rho.trace();
  out.stats = stats_of(sol);
  if (out.value > 0.0) {
    HermitianMatrix unit = rho * (1.0 / out.value);
    unit *= 1.0 / unit.trace();
    out.state = DensityMatrix(psd_part(unit) * (1.0 / psd_part(unit).trace()));
  }
  return out;
}

WitNormResult wit_norm(const ObservableTuple& x, const NormOptions& options) {
  if (x.g() < 1) throw InvalidInput("g must be at least 1");
  const int g = x.g();
  const int d = x.d();

  WitNormResult out;
  if (x.is_zero()) {
    out.decomposition.positives.assign(static_cast<std::size_t>(g), HermitianMatrix::zero(d));
    out.decomposition.negatives = out.decomposition.positives;
    return out;
  }

  SdpBuilder b;
  std::vector<sdp::BlockId> pos, neg;
  MatrixExpr total(d);
  for (int i = 0; i < g; ++i) {
    pos.push_back(b.add_block(d));
    neg.push_back(b.add_block(d));
    b.add_equality(b.var(pos.back()) - b.var(neg.back()), MatrixExpr::constant(x[i]));
    total += b.var(pos.back()) + b.var(neg.back());
  }
  const sdp::BlockId lambda = b.add_scalar();
  b.set_objective(lambda, 1.0);
  b.add_inequality(total, MatrixExpr::scalar_times(lambda, HermitianMatrix::identity(d)));

  const sdp::SdpSolution sol = sdp::solve(b.problem(), options.solver);
  require_optimal(sol, "witness norm");

  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (int i = 0; i < g; ++i) {
    out.decomposition.positives.push_back(sol.primal_blocks[static_cast<std::size_t>(pos[static_cast<std::size_t>(i)].index)]);
    out.decomposition.negatives.push_back(sol.primal_blocks[static_cast<std::size_t>(neg[static_cast<std::size_t>(i)].index)]);
    sum += out.decomposition.positives.back().matrix() + out.decomposition.negatives.back().matrix();
  }
  out.decomposition.value = lambda_max(HermitianMatrix::symmetrized(sum));
  out.value = out.decomposition.value;
  out.stats = stats_of(sol);
  return out;
}

double wit_objective(const ObservableTuple& x, const HermitianMatrix& rho) {
  const HermitianMatrix root = psd_sqrt(rho);
  double s = 0.0;
  for (const auto& xi : x.components()) s += trace_norm(congruence(root, xi));
  return s;
}

double wit_norm_sample_lb(const ObservableTuple& x, int n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw InvalidInput("n_samples must be at least 1");
  const int d = x.d();
  double best = wit_objective(x, HermitianMatrix::identity(d) / static_cast<double>(d));
  for (const auto& xi : x.components()) {
    const Spectrum s = eig(xi);
    for (int c = 0; c < d; ++c) {
      const ComplexVector v = s.eigenvectors.col(c);
      best = std::max(best, wit_objective(x, HermitianMatrix::symmetrized(v * v.adjoint())));
    }
  }
  std::mt19937_64 rng(seed);
  for (int k = 0; k < n_samples; ++k) {
    const RandomKind kind = (k % 2 == 0) ? RandomKind::DensityHs : RandomKind::PureState;
    best = std::max(best, wit_objective(x, random_instance(kind, d, rng)));
  }
  return best;
}

double inj_norm_l1(const ObservableTuple& x) {
  if (x.g() > 30) throw TooManyMeasurements(x.g(), 30);
  const int g = x.g();
  // ε and −ε give the same norm; fix ε_0 = +1.
  const std::size_t count = std::size_t{1} << (g - 1);
  std::vector<int> eps(static_cast<std::size_t>(g), 1);
  double best = 0.0;
  for (std::size_t l = 0; l < count; ++l) {
    for (int i = 1; i < g; ++i) eps[static_cast<std::size_t>(i)] = ((l >> (g - 1 - i)) & 1U) ? -1 : 1;
    best = std::max(best, operator_norm(signed_sum(x, eps)));
  }
  return best;
}

double proj_norm_l1(const ObservableTuple& x) {
  double s = 0.0;
  for (const auto& xi : x.components()) s += trace_norm(xi);
  return s;
}

double inj_norm_linf(const ObservableTuple& a) {
  double m = 0.0;
  for (const auto& ai : a.components()) m = std::max(m, operator_norm(ai));
  return m;
}

} // namespace qcompat
