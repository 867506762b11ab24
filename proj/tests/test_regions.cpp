#include <doctest.h>

#include <sstream>

#include "qcompat/regions.hpp"
#include "support.hpp"

using namespace testing;

namespace {

// Binomial centre term by floating point, independent of the rational implementation.
double tau_oracle(int d) {
  const int n = d / 2;
  double t = 1.0;
  for (int k = 1; k <= n; ++k) t *= (2.0 * k - 1.0) / (2.0 * k);
  return t;
}

double anticommuting_threshold(int g, int d) {
  const ObservableTuple a = anticommuting_tuple(g, d);
  return 1.0 / compat_norm(a).value;
}

} // namespace

TEST_CASE("qc and simplex membership") {
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(qc_contains(std::vector<double>{r, r}));
  CHECK_FALSE(qc_contains(std::vector<double>{0.8, 0.8}));
  CHECK(qc_contains(std::vector<double>{1.0, 0.0, 0.0}));
  CHECK(simplex_contains(std::vector<double>{0.5, 0.5}));
  CHECK_FALSE(simplex_contains(std::vector<double>{r, r}));
  CHECK_THROWS_AS(qc_contains(std::vector<double>{1.5}), InvalidInput);
  CHECK_THROWS_AS(simplex_contains(std::vector<double>{-0.1}), InvalidInput);
}

TEST_CASE("tau_star examples") {
  CHECK(tau_star(1).fraction() == "1");
  CHECK(tau_star(2).fraction() == "1/2");
  CHECK(tau_star(3).value == 0.5);
  CHECK(tau_star(4).fraction() == "3/8");
  CHECK(tau_star(5).fraction() == "3/8");
  CHECK(tau_star(6).fraction() == "5/16");
  const TauStar big = tau_star(100);
  CHECK(std::abs(big.value - big.asymptotic) / big.value < 0.05);
  CHECK_THROWS_AS(tau_star(0), InvalidInput);
  for (int d = 1; d <= 60; ++d) CHECK(tau_star(d).value == doctest::Approx(tau_oracle(d)).epsilon(1e-13));
}

TEST_CASE("known_gamma cells") {
  CHECK(known_gamma(1, 7) == RegionShape::EuclideanBall);
  CHECK(known_gamma(3, 1) == RegionShape::Cube);
  CHECK(known_gamma(2, 3) == RegionShape::EuclideanBall);
  CHECK(known_gamma(3, 2) == RegionShape::EuclideanBall);
  CHECK(known_gamma(4, 2) == std::nullopt);
  CHECK(known_gamma(4, 4) == RegionShape::EuclideanBall);
  CHECK(known_gamma(5, 2) == std::nullopt);
  CHECK(known_gamma(5, 4) == RegionShape::EuclideanBall);
  CHECK(known_gamma(4, 3) == std::nullopt);
}

TEST_CASE("phase diagram examples") {
  const auto cells = phase_diagram(6, 4);
  REQUIRE(cells.size() == 24);
  auto at = [&](int g, int d) { return cells[static_cast<std::size_t>((g - 1) * 4 + (d - 1))]; };
  CHECK(at(2, 3).classification == PhaseClass::QcExact);
  CHECK(at(3, 2).classification == PhaseClass::QcExact);
  CHECK(at(5, 2).classification == PhaseClass::QcStrictlyContained);
  CHECK(at(5, 2).g_tau_sq == doctest::Approx(1.25));
  CHECK(at(4, 2).classification == PhaseClass::Unresolved);
  CHECK(at(4, 3).classification == PhaseClass::Unresolved);
  CHECK(at(6, 4).classification == PhaseClass::Unresolved);
  CHECK(at(6, 2).classification == PhaseClass::QcStrictlyContained);
  CHECK(at(4, 4).classification == PhaseClass::QcExact);
  CHECK_THROWS_AS(phase_diagram(0, 3), InvalidInput);
}

TEST_CASE("phase CSV layout") {
  std::ostringstream os;
  write_phase_csv(phase_diagram(2, 2), os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "g,d,classification,tau_star,g_tau_sq");
  int rows = 0;
  while (std::getline(is, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 4);
}

TEST_CASE("anticommuting family") {
  for (int n = 1; n <= 3; ++n) {
    const auto f = anticommuting_family(n);
    REQUIRE(f.size() == static_cast<std::size_t>(2 * n + 1));
    const int d = 1 << n;
    for (std::size_t i = 0; i < f.size(); ++i)
      for (std::size_t j = 0; j < f.size(); ++j) {
        const ComplexMatrix ac = f[i].matrix() * f[j].matrix() + f[j].matrix() * f[i].matrix();
        const ComplexMatrix want = i == j ? ComplexMatrix(2.0 * ComplexMatrix::Identity(d, d)) : ComplexMatrix::Zero(d, d);
        CHECK((ac - want).cwiseAbs().maxCoeff() < 1e-12);
      }
  }
  const auto q = anticommuting_family(1);
  CHECK(max_abs_diff(q[0], sx()) == 0.0);
  CHECK(max_abs_diff(q[1], sy()) == 0.0);
  CHECK(max_abs_diff(q[2], sz()) == 0.0);
  CHECK_THROWS_AS(anticommuting_tuple(4, 2), InvalidInput);
}

TEST_CASE("gamma_probe examples") {
  const double over = 0.8;
  const ProbeResult a = gamma_probe(2, 2, std::vector<double>{over, over}, 20, 1);
  CHECK(a.counterexample_found);
  CHECK(a.sample_index == 0);
  REQUIRE(a.counterexample);
  CHECK(compat_norm(to_tensor(add_white_noise(*a.counterexample, std::vector<double>{over, over}))).value > kProbeThreshold);

  const double r = 1.0 / std::sqrt(2.0);
  const ProbeResult b = gamma_probe(2, 2, std::vector<double>{r * 0.999, r * 0.999}, 30, 1);
  CHECK_FALSE(b.counterexample_found);
  CHECK(b.samples == 30);
  CHECK(b.norm <= kProbeThreshold);

  CHECK_THROWS_AS(gamma_probe(2, 2, std::vector<double>{0.5}, 10, 1), InvalidInput);
}

TEST_CASE("gamma_probe consistency with the quarter ball") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 6; ++k) {
    const int g = 2 + k % 2;
    std::vector<double> s(static_cast<std::size_t>(g));
    double n2 = 0.0;
    for (auto& v : s) n2 += (v = u(rng)) * v;
    for (auto& v : s) v *= 0.999 / std::sqrt(n2);
    CHECK_FALSE(gamma_probe(g, 2, s, 15, static_cast<std::uint64_t>(k)).counterexample_found);
  }
}

TEST_CASE("gamma_probe is deterministic across thread counts") {
  const std::vector<double> s{0.75, 0.75, 0.3};
  const ProbeResult a = gamma_probe(3, 2, s, 24, 42, 1);
  const ProbeResult b = gamma_probe(3, 2, s, 24, 42, 4);
  CHECK(a.counterexample_found == b.counterexample_found);
  CHECK(a.sample_index == b.sample_index);
  CHECK(a.norm == b.norm);
}

TEST_CASE("tau_star lower-bounds the diagonal of gamma at qubits") {
  for (int g = 2; g <= 4; ++g) {
    const double t = tau_star(2).value;
    std::vector<double> s(static_cast<std::size_t>(g), t * (1.0 - 1e-6));
    CHECK_FALSE(gamma_probe(g, 2, s, 60, static_cast<std::uint64_t>(g)).counterexample_found);
  }
}

TEST_CASE("anticommuting tuples meet the quarter ball exactly where it is known to be sharp") {
  for (const auto& [g, d] : std::vector<std::pair<int, int>>{{2, 2}, {3, 2}, {2, 4}, {4, 4}, {5, 4}}) {
    const double t = anticommuting_threshold(g, d);
    CHECK(t == doctest::Approx(1.0 / std::sqrt(static_cast<double>(g))).epsilon(1e-6));
  }
}

TEST_CASE("wit_norm bisection along the scaled qubit pair") {
  const ObservableTuple base = ObservableTuple({sx(), sz()}) * (1.0 / std::sqrt(2.0));
  double lo = 0.0, hi = 2.0;
  while (hi - lo > 1e-7) {
    const double mid = 0.5 * (lo + hi);
    (wit_norm(base * mid).value <= 1.0 ? lo : hi) = mid;
  }
  CHECK(lo == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-6));
  CHECK(lo == doctest::Approx(robustness(pauli_pair(), std::vector<double>{1, 1})).epsilon(1e-4));
}
