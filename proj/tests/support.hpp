#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "qcompat/measure.hpp"
#include "qcompat/norms.hpp"

namespace testing {

using namespace qcompat;

inline HermitianMatrix sx() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return HermitianMatrix(m);
}

inline HermitianMatrix sy() {
  ComplexMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return HermitianMatrix(m);
}

inline HermitianMatrix sz() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return HermitianMatrix(m);
}

inline HermitianMatrix id(int d) { return HermitianMatrix::identity(d); }

inline HermitianMatrix diag(std::initializer_list<double> v) {
  RealVector r(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) r(i++) = x;
  return HermitianMatrix::diagonal(r);
}

/// Zero-pads a tuple into dimension d.
inline ObservableTuple pad(const ObservableTuple& a, int d) {
  std::vector<HermitianMatrix> out;
  for (const auto& c : a.components()) {
    ComplexMatrix m = ComplexMatrix::Zero(d, d);
    m.topLeftCorner(c.dim(), c.dim()) = c.matrix();
    out.push_back(HermitianMatrix::symmetrized(m));
  }
  return ObservableTuple(std::move(out));
}

inline EffectTuple pauli_pair() { return from_tensor(ObservableTuple({sx(), sz()})); }
inline EffectTuple pauli_triple() { return from_tensor(ObservableTuple({sx(), sy(), sz()})); }

inline ObservableTuple random_tuple(int g, int d, std::mt19937_64& rng) {
  std::vector<HermitianMatrix> c;
  for (int i = 0; i < g; ++i) c.push_back(random_instance(RandomKind::HermitianGaussian, d, rng));
  return ObservableTuple(std::move(c));
}

inline double max_abs_diff(const HermitianMatrix& a, const HermitianMatrix& b) {
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const ObservableTuple& a, const ObservableTuple& b) {
  double m = 0.0;
  for (int i = 0; i < a.g(); ++i) m = std::max(m, max_abs_diff(a[i], b[i]));
  return m;
}

/// sup{t ∈ [0, t_max] : (tA + I)/2 passes the marginal-form test}, by bisection. Uses only the
/// marginal-form pathway, so 1/result is an independent estimate of the compatibility norm.
inline double marginal_threshold(const ObservableTuple& a, double width = 1e-6) {
  double hi = 1.0 / inj_norm_linf(a);
  auto ok = [&](double t) {
    return is_compatible_marginal_form(GeneralPovmFamily::from_effects(from_tensor(a * t, 1e-12))).compatible;
  };
  if (ok(hi)) return hi;
  double lo = 0.0;
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

} // namespace testing
