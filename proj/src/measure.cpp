#include "qcompat/measure.hpp"

#include <algorithm>
#include <cmath>

namespace qcompat {

using sdp::MatrixExpr;
using sdp::SdpBuilder;

EffectTuple::EffectTuple(std::vector<HermitianMatrix> effects) : effects_(std::move(effects)) {
  if (effects_.empty()) throw InvalidInput("effect tuple must have at least one effect");
  const int d = effects_.front().dim();
  for (std::size_t i = 0; i < effects_.size(); ++i) {
    const HermitianMatrix& e = effects_[i];
    if (e.dim() != d) throw InvalidInput("effects have different dimensions");
    const RealVector ev = eig(e).eigenvalues;
    const double tol = psd_tolerance(e);
    if (ev(0) < -tol) throw NotAnEffectTuple(static_cast<int>(i), ev(0));
    if (ev(d - 1) > 1.0 + tol) throw NotAnEffectTuple(static_cast<int>(i), ev(d - 1));
  }
}

GeneralPovmFamily::GeneralPovmFamily(std::vector<std::vector<HermitianMatrix>> povms)
    : povms_(std::move(povms)) {
  if (povms_.empty()) throw InvalidInput("POVM family must contain at least one POVM");
  if (povms_.front().empty()) throw InvalidInput("povms[0] has no outcomes");
  const int d = povms_.front().front().dim();
  for (std::size_t i = 0; i < povms_.size(); ++i) {
    const auto& p = povms_[i];
    if (p.empty()) throw InvalidInput("povms[" + std::to_string(i) + "] has no outcomes");
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (p[j].dim() != d) throw InvalidInput("povms[" + std::to_string(i) + "] has mixed dimensions");
      if (!is_psd(p[j]))
        throw InvalidInput("povms[" + std::to_string(i) + "][" + std::to_string(j) + "] is not PSD");
      sum += p[j].matrix();
    }
    const double err = (sum - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
    if (err > 1e-9) throw InvalidInput("povms[" + std::to_string(i) + "] does not sum to the identity");
  }
}

GeneralPovmFamily GeneralPovmFamily::from_effects(const EffectTuple& e) {
  std::vector<std::vector<HermitianMatrix>> povms;
  for (const auto& ei : e.effects()) povms.push_back({ei, HermitianMatrix::identity(e.d()) - ei});
  return GeneralPovmFamily(std::move(povms));
}

std::vector<int> GeneralPovmFamily::outcome_counts() const {
  std::vector<int> k;
  for (const auto& p : povms_) k.push_back(static_cast<int>(p.size()));
  return k;
}

const char* to_string(JointLabelKind kind) {
  switch (kind) {
  case JointLabelKind::Signs: return "signs";
  case JointLabelKind::Outcomes: return "outcomes";
  }
  return "unknown";
}

double JointPovm::sum_error() const {
  if (operators.empty()) return std::numeric_limits<double>::infinity();
  ComplexMatrix sum = ComplexMatrix::Zero(d(), d());
  for (const auto& r : operators) sum += r.matrix();
  return operator_norm(HermitianMatrix::symmetrized(sum - ComplexMatrix::Identity(d(), d())));
}

double JointPovm::min_eigenvalue() const {
  double m = 0.0;
  for (const auto& r : operators) m = std::min(m, lambda_min(r));
  return m;
}

PostProcessing PostProcessing::canonical(const JointPovm& joint, std::span<const int> outcome_counts) {
  PostProcessing p;
  const std::size_t g = outcome_counts.size();
  p.probabilities.resize(g);
  for (std::size_t i = 0; i < g; ++i) {
    const int k = outcome_counts[i];
    for (const auto& label : joint.labels) {
      if (label.size() != g) throw InvalidInput("joint label length differs from g");
      std::vector<double> row(static_cast<std::size_t>(k), 0.0);
      if (joint.kind == JointLabelKind::Signs) {
        if (k != 2) throw InvalidInput("sign labels require dichotomic measurements");
        row[0] = 0.5 * (1.0 + label[i]);
        row[1] = 0.5 * (1.0 - label[i]);
      } else {
        if (label[i] < 0 || label[i] >= k) throw InvalidInput("joint outcome label out of range");
        row[static_cast<std::size_t>(label[i])] = 1.0;
      }
      p.probabilities[i].push_back(std::move(row));
    }
  }
  return p;
}

std::vector<std::vector<HermitianMatrix>> PostProcessing::apply(const JointPovm& joint) const {
  const int d = joint.d();
  std::vector<std::vector<HermitianMatrix>> out;
  for (const auto& per_label : probabilities) {
    if (per_label.size() != joint.operators.size())
      throw InvalidInput("post-processing and joint POVM have different label counts");
    const std::size_t k = per_label.empty() ? 0 : per_label.front().size();
    std::vector<ComplexMatrix> acc(k, ComplexMatrix::Zero(d, d));
    for (std::size_t l = 0; l < per_label.size(); ++l)
      for (std::size_t o = 0; o < k; ++o)
        if (per_label[l][o] != 0.0) acc[o] += per_label[l][o] * joint.operators[l].matrix();
    std::vector<HermitianMatrix> povm;
    for (const auto& m : acc) povm.push_back(HermitianMatrix::symmetrized(m));
    out.push_back(std::move(povm));
  }
  return out;
}

double marginal_error(const JointPovm& joint, const PostProcessing& post, const GeneralPovmFamily& family) {
  const auto marginals = post.apply(joint);
  if (static_cast<int>(marginals.size()) != family.g()) throw InvalidInput("marginal count differs from g");
  double err = 0.0;
  for (int i = 0; i < family.g(); ++i) {
    if (marginals[static_cast<std::size_t>(i)].size() != family[i].size())
      throw InvalidInput("outcome count mismatch in marginal comparison");
    for (std::size_t o = 0; o < family[i].size(); ++o)
      err = std::max(err, operator_norm(marginals[static_cast<std::size_t>(i)][o] - family[i][o]));
  }
  return err;
}

ObservableTuple to_tensor(const EffectTuple& e) {
  std::vector<HermitianMatrix> a;
  for (const auto& ei : e.effects()) a.push_back(ei * 2.0 - HermitianMatrix::identity(e.d()));
  return ObservableTuple(std::move(a));
}

EffectTuple from_tensor(const ObservableTuple& a, double tol) {
  std::vector<HermitianMatrix> e;
  for (int i = 0; i < a.g(); ++i) {
    const RealVector ev = eig(a[i]).eigenvalues;
    if (ev(0) < -1.0 - tol) throw NotAnEffectTuple(i, ev(0));
    if (ev(ev.size() - 1) > 1.0 + tol) throw NotAnEffectTuple(i, ev(ev.size() - 1));
    e.push_back((a[i] + HermitianMatrix::identity(a.d())) * 0.5);
  }
  return EffectTuple(std::move(e));
}

namespace {

SolverStats stats_of(const sdp::SdpSolution& s) { return {s.status, s.iterations, s.gap}; }

JointPovm joint_from_decomposition(const CompatDecomposition& dec, int d) {
  JointPovm joint;
  joint.kind = JointLabelKind::Signs;
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (const auto& k : dec.blocks) {
    joint.operators.push_back(psd_part(k));
    sum += joint.operators.back().matrix();
  }
  const double c = lambda_max(HermitianMatrix::symmetrized(sum));
  if (c > 1.0) {
    for (auto& k : joint.operators) k *= 1.0 / c;
    sum /= c;
  }
  joint.labels = dec.signs;
  joint.operators.push_back(HermitianMatrix::symmetrized(ComplexMatrix::Identity(d, d) - sum));
  joint.labels.emplace_back(dec.signs.front().size(), 0);
  return joint;
}

} // namespace

CompatibilityResult is_compatible(const EffectTuple& e, double tol, const NormOptions& options) {
  const ObservableTuple a = to_tensor(e);
  const CompatNormResult norm = compat_norm(a, options);
  CompatibilityResult out;
  out.value = norm.value;
  out.margin = 1.0 - norm.value;
  out.compatible = norm.value <= 1.0 + tol;
  out.stats = norm.stats;
  if (out.compatible) {
    out.joint = joint_from_decomposition(norm.primal, e.d());
    const std::vector<int> counts(static_cast<std::size_t>(e.g()), 2);
    out.post = PostProcessing::canonical(*out.joint, counts);
  } else {
    out.witness = norm.dual;
  }
  return out;
}

JointPovm spread_slack(const JointPovm& joint) {
  if (joint.kind != JointLabelKind::Signs) throw InvalidInput("spread_slack needs a sign-labeled joint POVM");
  if (joint.labels.empty()) throw InvalidInput("empty joint POVM");
  const int g = static_cast<int>(joint.labels.front().size());
  const auto signs = sign_vectors(g);
  JointPovm out;
  out.kind = JointLabelKind::Signs;
  out.labels = signs;
  out.operators.assign(signs.size(), HermitianMatrix::zero(joint.d()));
  const double share = 1.0 / static_cast<double>(signs.size());
  for (std::size_t l = 0; l < joint.labels.size(); ++l) {
    const auto& label = joint.labels[l];
    if (std::all_of(label.begin(), label.end(), [](int z) { return z == 0; })) {
      for (auto& op : out.operators) op += joint.operators[l] * share;
      continue;
    }
    const auto it = std::find(signs.begin(), signs.end(), label);
    if (it == signs.end()) throw InvalidInput("joint label is neither a sign vector nor the slack");
    out.operators[static_cast<std::size_t>(it - signs.begin())] += joint.operators[l];
  }
  return out;
}

MarginalFormResult is_compatible_marginal_form(const GeneralPovmFamily& family, double tol,
                                               const NormOptions& options) {
  const std::vector<int> k = family.outcome_counts();
  const int g = family.g();
  const int d = family.d();
  long long n = 1;
  for (int ki : k) {
    n *= ki;
    if (n > kMarginalFormMaxOutcomes)
      throw TooLarge("joint outcome count exceeds " + std::to_string(kMarginalFormMaxOutcomes));
  }

  std::vector<std::vector<int>> labels;
  std::vector<int> idx(static_cast<std::size_t>(g), 0);
  for (long long j = 0; j < n; ++j) {
    labels.push_back(idx);
    for (int i = g - 1; i >= 0; --i) {
      if (++idx[static_cast<std::size_t>(i)] < k[static_cast<std::size_t>(i)]) break;
      idx[static_cast<std::size_t>(i)] = 0;
    }
  }

  // Q_j = R_j + μI with ν = μ + 1/N, so the program is strictly feasible for any input.
  SdpBuilder b;
  std::vector<sdp::BlockId> q;
  for (long long j = 0; j < n; ++j) q.push_back(b.add_block(d));
  const sdp::BlockId nu = b.add_scalar();
  b.set_objective(nu, 1.0);
  const HermitianMatrix id = HermitianMatrix::identity(d);
  const double nd = static_cast<double>(n);

  for (int i = 0; i < g; ++i) {
    const int ki = k[static_cast<std::size_t>(i)];
    for (int v = 0; v + 1 < ki; ++v) {
      MatrixExpr lhs(d);
      for (long long j = 0; j < n; ++j)
        if (labels[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] == v) lhs += b.var(q[static_cast<std::size_t>(j)]);
      lhs -= MatrixExpr::scalar_times(nu, id * (nd / ki));
      b.add_equality(lhs, MatrixExpr::constant(family[i][static_cast<std::size_t>(v)] - id / ki));
    }
  }
  MatrixExpr total(d);
  for (const auto& qj : q) total += b.var(qj);
  total -= MatrixExpr::scalar_times(nu, id * nd);
  b.add_equality(total, MatrixExpr(d));

  const sdp::SdpSolution sol = sdp::solve(b.problem(), options.solver);
  if (sol.status != sdp::SdpStatus::Optimal)
    throw NumericalLimit(std::string("marginal-form feasibility: solver returned ") + sdp::to_string(sol.status));

  MarginalFormResult out;
  out.stats = stats_of(sol);
  const double nu_value = sol.primal_blocks[static_cast<std::size_t>(nu.index)](0, 0).real();
  out.shift = nu_value - 1.0 / nd;
  out.compatible = out.shift <= tol;
  if (!out.compatible) return out;

  JointPovm joint;
  joint.kind = JointLabelKind::Outcomes;
  joint.labels = labels;
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (const auto& qj : q) {
    joint.operators.push_back(psd_part(sol.primal_blocks[static_cast<std::size_t>(qj.index)] - id * out.shift));
    sum += joint.operators.back().matrix();
  }
  const HermitianMatrix s = HermitianMatrix::symmetrized(sum);
  const Spectrum sp = eig(s);
  if (sp.eigenvalues(0) <= 0.0) throw NumericalLimit("marginal-form joint POVM has singular sum");
  const RealVector inv_root = sp.eigenvalues.cwiseSqrt().cwiseInverse();
  const HermitianMatrix t = HermitianMatrix::symmetrized(sp.eigenvectors * inv_root.cast<Complex>().asDiagonal() *
                                                        sp.eigenvectors.adjoint());
  for (auto& r : joint.operators) r = congruence(t, r);
  out.joint = std::move(joint);
  return out;
}

EffectTuple add_white_noise(const EffectTuple& e, std::span<const double> s) {
  if (static_cast<int>(s.size()) != e.g()) throw InvalidInput("noise vector length differs from g");
  std::vector<HermitianMatrix> out;
  const HermitianMatrix half = HermitianMatrix::identity(e.d()) * 0.5;
  for (int i = 0; i < e.g(); ++i) {
    const double si = s[static_cast<std::size_t>(i)];
    if (!(si >= 0.0 && si <= 1.0)) throw InvalidInput("noise parameters must lie in [0, 1]");
    out.push_back(e[i] * si + half * (1.0 - si));
  }
  return EffectTuple(std::move(out));
}

double robustness(const EffectTuple& e, std::span<const double> direction, double tol, const NormOptions& options) {
  if (static_cast<int>(direction.size()) != e.g()) throw InvalidInput("direction length differs from g");
  if (!(tol > 0.0)) throw InvalidInput("bisection tolerance must be positive");
  bool nonzero = false;
  for (double v : direction) {
    if (!(v >= 0.0 && v <= 1.0)) throw InvalidInput("direction entries must lie in [0, 1]");
    nonzero = nonzero || v > 0.0;
  }
  if (!nonzero) throw InvalidInput("direction must be nonzero");

  const ObservableTuple a = to_tensor(e);
  std::vector<double> s(direction.begin(), direction.end());
  auto compatible_at = [&](double t) {
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = t * direction[i];
    return compat_norm(a.scaled(s), options).value <= kCompatibleBoundary;
  };
  if (compatible_at(1.0)) return 1.0;
  double lo = 0.0, hi = 1.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (compatible_at(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

EffectTuple random_effect_tuple(int g, int d, std::mt19937_64& rng) {
  if (g < 1) throw InvalidInput("g must be at least 1");
  std::vector<HermitianMatrix> e;
  for (int i = 0; i < g; ++i) e.push_back(random_instance(RandomKind::Effect, d, rng));
  return EffectTuple(std::move(e));
}

EffectTuple random_effect_tuple(int g, int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_effect_tuple(g, d, rng);
}

EffectTuple random_projective_tuple(int g, int d, std::mt19937_64& rng) {
  if (g < 1) throw InvalidInput("g must be at least 1");
  if (d < 1) throw InvalidInput("dimension must be at least 1");
  std::vector<HermitianMatrix> e;
  for (int i = 0; i < g; ++i) {
    const int lo = d == 1 ? 0 : 1;
    const int hi = d == 1 ? 1 : d - 1;
    const int rank = std::uniform_int_distribution<int>(lo, hi)(rng);
    const ComplexMatrix u = haar_unitary(d, rng);
    const ComplexMatrix cols = u.leftCols(rank);
    e.push_back(HermitianMatrix::symmetrized(cols * cols.adjoint()));
  }
  return EffectTuple(std::move(e));
}

GeneralPovmFamily random_povm_family(std::span<const int> outcome_counts, int d, std::uint64_t seed) {
  if (outcome_counts.empty()) throw InvalidInput("need at least one POVM");
  std::mt19937_64 rng(seed);
  std::vector<std::vector<HermitianMatrix>> povms;
  for (int k : outcome_counts) {
    if (k < 1) throw InvalidInput("outcome counts must be at least 1");
    std::vector<HermitianMatrix> p;
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (int j = 0; j < k; ++j) {
      p.push_back(random_instance(RandomKind::DensityHs, d, rng));
      sum += p.back().matrix();
    }
    const Spectrum sp = eig(HermitianMatrix::symmetrized(sum));
    const RealVector inv_root = sp.eigenvalues.cwiseSqrt().cwiseInverse();
    const HermitianMatrix t = HermitianMatrix::symmetrized(sp.eigenvectors * inv_root.cast<Complex>().asDiagonal() *
                                                          sp.eigenvectors.adjoint());
    ComplexMatrix acc = ComplexMatrix::Zero(d, d);
    for (int j = 0; j + 1 < k; ++j) {
      p[static_cast<std::size_t>(j)] = congruence(t, p[static_cast<std::size_t>(j)]);
      acc += p[static_cast<std::size_t>(j)].matrix();
    }
    // Last outcome takes the exact complement so the POVM sums to I to rounding.
    p.back() = HermitianMatrix::symmetrized(ComplexMatrix::Identity(d, d) - acc);
    povms.push_back(std::move(p));
  }
  return GeneralPovmFamily(std::move(povms));
}

} // namespace qcompat
