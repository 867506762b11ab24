#include "qcompat/regions.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <ostream>
#include <thread>

namespace qcompat {

namespace {

void check_unit_box(std::span<const double> s) {
  if (s.empty()) throw InvalidInput("noise vector is empty");
  for (double v : s)
    if (!(v >= 0.0 && v <= 1.0)) throw InvalidInput("noise parameters must lie in [0, 1]");
}

constexpr double kBoundarySlack = 1e-12;

} // namespace

bool qc_contains(std::span<const double> s) {
  check_unit_box(s);
  double sq = 0.0;
  for (double v : s) sq += v * v;
  return sq <= 1.0 + kBoundarySlack;
}

bool simplex_contains(std::span<const double> s) {
  check_unit_box(s);
  double sum = 0.0;
  for (double v : s) sum += v;
  return sum <= 1.0 + kBoundarySlack;
}

std::string TauStar::fraction() const {
  const auto num = boost::multiprecision::numerator(exact);
  const auto den = boost::multiprecision::denominator(exact);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

TauStar tau_star(int d) {
  if (d < 1) throw InvalidInput("d must be at least 1");
  using boost::multiprecision::cpp_int;
  const int n = d / 2;
  cpp_int binom = 1;
  for (int k = 1; k <= n; ++k) binom = binom * (n + k) / k;
  const cpp_int four_n = cpp_int(1) << (2 * n);
  TauStar t;
  t.d = d;
  t.exact = boost::multiprecision::cpp_rational(binom, four_n);
  t.value = t.exact.convert_to<double>();
  t.asymptotic = std::sqrt(2.0 / (std::numbers::pi * d));
  return t;
}

const char* to_string(RegionShape shape) {
  switch (shape) {
  case RegionShape::EuclideanBall: return "EuclideanBall";
  case RegionShape::Cube: return "Cube";
  }
  return "Unknown";
}

std::optional<RegionShape> known_gamma(int g, int d) {
  if (g < 1 || d < 1) throw InvalidInput("g and d must be at least 1");
  if (g == 1) return RegionShape::EuclideanBall;
  if (d == 1) return RegionShape::Cube;
  if (g == 2 || (g == 3 && d == 2)) return RegionShape::EuclideanBall;
  const int exponent = g / 2; // ⌈(g−1)/2⌉
  if (exponent < 31 && d >= (1 << exponent)) return RegionShape::EuclideanBall;
  return std::nullopt;
}

const char* to_string(PhaseClass c) {
  switch (c) {
  case PhaseClass::QcExact: return "QcExact";
  case PhaseClass::QcStrictlyContained: return "QcStrictlyContained";
  case PhaseClass::Unresolved: return "Unresolved";
  }
  return "Unknown";
}

std::vector<PhaseCell> phase_diagram(int g_max, int d_max) {
  if (g_max < 1 || d_max < 1) throw InvalidInput("g_max and d_max must be at least 1");
  std::vector<PhaseCell> cells;
  for (int g = 1; g <= g_max; ++g)
    for (int d = 1; d <= d_max; ++d) {
      PhaseCell c;
      c.g = g;
      c.d = d;
      c.tau_star = tau_star(d).value;
      c.g_tau_sq = g * c.tau_star * c.tau_star;
      if (known_gamma(g, d) == RegionShape::EuclideanBall)
        c.classification = PhaseClass::QcExact;
      else if (c.g_tau_sq > 1.0)
        c.classification = PhaseClass::QcStrictlyContained;
      else
        c.classification = PhaseClass::Unresolved;
      cells.push_back(c);
    }
  return cells;
}

void write_phase_csv(const std::vector<PhaseCell>& cells, std::ostream& os) {
  const auto old = os.precision(12);
  os << "g,d,classification,tau_star,g_tau_sq\n";
  for (const auto& c : cells)
    os << c.g << ',' << c.d << ',' << to_string(c.classification) << ',' << c.tau_star << ',' << c.g_tau_sq << '\n';
  os.precision(old);
}

std::vector<HermitianMatrix> anticommuting_family(int n_qubits) {
  if (n_qubits < 0 || n_qubits > 10) throw InvalidInput("qubit count out of range");
  Eigen::Matrix2cd x, y, z, id;
  x << 0, 1, 1, 0;
  y << 0, Complex(0, -1), Complex(0, 1), 0;
  z << 1, 0, 0, -1;
  id.setIdentity();
  auto kron_chain = [&](const std::vector<const Eigen::Matrix2cd*>& factors) {
    ComplexMatrix m = ComplexMatrix::Ones(1, 1);
    for (const auto* f : factors) {
      ComplexMatrix next(m.rows() * 2, m.cols() * 2);
      for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) next.block<2, 2>(2 * r, 2 * c) = m(r, c) * *f;
      m = std::move(next);
    }
    return m;
  };
  std::vector<HermitianMatrix> out;
  for (int k = 0; k < n_qubits; ++k)
    for (const auto* p : {&x, &y}) {
      std::vector<const Eigen::Matrix2cd*> f;
      for (int j = 0; j < n_qubits; ++j) f.push_back(j < k ? &z : (j == k ? p : &id));
      out.push_back(HermitianMatrix::symmetrized(kron_chain(f)));
    }
  out.push_back(HermitianMatrix::symmetrized(kron_chain(std::vector<const Eigen::Matrix2cd*>(static_cast<std::size_t>(n_qubits), &z))));
  return out;
}

namespace {

HermitianMatrix embed(const HermitianMatrix& a, int d) {
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  m.topLeftCorner(a.dim(), a.dim()) = a.matrix();
  return HermitianMatrix::symmetrized(m);
}

int qubits_fitting(int d) {
  int n = 0;
  while ((2 << n) <= d) ++n;
  return n;
}

EffectTuple clifford_tuple(int g, int d, bool canonical, std::mt19937_64& rng) {
  const int n = qubits_fitting(d);
  const auto family = anticommuting_family(n);
  const int m = static_cast<int>(family.size());
  const HermitianMatrix id = HermitianMatrix::identity(d);
  std::normal_distribution<double> normal;
  std::vector<HermitianMatrix> effects;
  for (int i = 0; i < g; ++i) {
    HermitianMatrix a = HermitianMatrix::zero(family.front().dim());
    if (canonical && g <= m) {
      a = family[static_cast<std::size_t>(i)];
    } else {
      RealVector v(m);
      for (int k = 0; k < m; ++k) v(k) = normal(rng);
      v /= v.norm();
      for (int k = 0; k < m; ++k) a += family[static_cast<std::size_t>(k)] * v(k);
    }
    effects.push_back((embed(a, d) + id) * 0.5);
  }
  return EffectTuple(std::move(effects));
}

EffectTuple probe_sample(int g, int d, int index, std::uint64_t seed) {
  std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(index)));
  if (index == 0) return clifford_tuple(g, d, true, rng);
  switch (index % 3) {
  case 1: return clifford_tuple(g, d, false, rng);
  case 2: return random_projective_tuple(g, d, rng);
  default: return random_effect_tuple(g, d, rng);
  }
}

} // namespace

ObservableTuple anticommuting_tuple(int g, int d) {
  if (g < 1 || d < 1) throw InvalidInput("g and d must be at least 1");
  const auto family = anticommuting_family(qubits_fitting(d));
  if (static_cast<int>(family.size()) < g)
    throw InvalidInput("no " + std::to_string(g) + " anticommuting observables fit in dimension " + std::to_string(d));
  std::vector<HermitianMatrix> a;
  for (int i = 0; i < g; ++i) a.push_back(embed(family[static_cast<std::size_t>(i)], d));
  return ObservableTuple(std::move(a));
}

ProbeResult gamma_probe(int g, int d, std::span<const double> s, int n_samples, std::uint64_t seed,
                        unsigned threads, const NormOptions& options) {
  if (g < 1 || d < 1) throw InvalidInput("g and d must be at least 1");
  if (static_cast<int>(s.size()) != g) throw InvalidInput("noise vector length differs from g");
  check_unit_box(s);
  if (n_samples < 1) throw InvalidInput("n_samples must be at least 1");
  if (g > options.g_max) throw TooManyMeasurements(g, options.g_max);

  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(n_samples));

  std::atomic<int> next{0};
  std::atomic<int> best{n_samples};
  std::vector<double> norms(static_cast<std::size_t>(n_samples), 0.0);
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const int k = next.fetch_add(1);
      if (k >= n_samples || k > best.load()) return;
      try {
        const EffectTuple e = probe_sample(g, d, k, seed);
        const double v = compat_norm(to_tensor(e).scaled(s), options).value;
        norms[static_cast<std::size_t>(k)] = v;
        if (v > kProbeThreshold) {
          int cur = best.load();
          while (k < cur && !best.compare_exchange_weak(cur, k)) {
          }
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        best.store(-1);
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  ProbeResult out;
  const int k = best.load();
  if (k < n_samples) {
    out.counterexample_found = true;
    out.sample_index = k;
    out.norm = norms[static_cast<std::size_t>(k)];
    out.counterexample = probe_sample(g, d, k, seed);
    out.samples = k + 1;
  } else {
    out.samples = n_samples;
    out.norm = *std::max_element(norms.begin(), norms.end());
  }
  return out;
}

} // namespace qcompat
