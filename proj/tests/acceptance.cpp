// Acceptance checks. One PASS/FAIL line per criterion; exits nonzero if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <sstream>
#include <string>

#include "qcompat/regions.hpp"
#include "qcompat/witness.hpp"
#include "support.hpp"

using namespace testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  Outcome() { detail << std::setprecision(10); }

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " FAILED(" << what << ")";
    }
  }
};

int failures = 0;

void criterion(int n, const char* title, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = Clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " exception: " << e.what();
  }
  const double t = seconds_since(t0);
  std::printf("[%s] %2d %s:%s (%.2f s)\n", o.pass ? "PASS" : "FAIL", n, title, o.detail.str().c_str(), t);
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::vector<double> uniform_direction(int g) { return std::vector<double>(static_cast<std::size_t>(g), 1.0); }

struct Instance {
  EffectTuple e;
  ObservableTuple a;
  double norm = 0.0;
  double pairing_value = 0.0;
  WitnessCertificate dual;
  SolverStats stats;
};

// Noisy random effect tuples with g ∈ {2, 3}, d ∈ {2, 3, 4}. The noise level spreads the set
// across both sides of the compatibility boundary.
std::vector<Instance> make_instances() {
  std::vector<Instance> out;
  std::mt19937_64 rng(20240617);
  std::uniform_real_distribution<double> level(0.45, 1.0);
  for (int k = 0; k < 100; ++k) {
    const int g = 2 + k % 2;
    const int d = 2 + (k / 2) % 3;
    const EffectTuple base = k % 4 < 2 ? random_projective_tuple(g, d, rng) : random_effect_tuple(g, d, rng);
    std::vector<double> s(static_cast<std::size_t>(g));
    for (auto& v : s) v = level(rng);
    Instance inst;
    inst.e = add_white_noise(base, s);
    inst.a = to_tensor(inst.e);
    out.push_back(std::move(inst));
  }
  return out;
}

} // namespace

int main() {
  criterion(1, "qubit pair robustness along (1,1)", [](Outcome& o) {
    const double want = 1.0 / std::sqrt(2.0);
    auto t0 = Clock::now();
    const double r2 = robustness(pauli_pair(), uniform_direction(2));
    const double t2 = seconds_since(t0);
    t0 = Clock::now();
    const double r3 = robustness(from_tensor(pad(to_tensor(pauli_pair()), 3)), uniform_direction(2));
    const double t3 = seconds_since(t0);
    o.detail << " d=2 " << r2 << " in " << t2 << " s, d=3 " << r3 << " in " << t3 << " s";
    o.require(std::abs(r2 - want) <= 1e-4, "d=2 value");
    o.require(std::abs(r3 - want) <= 1e-4, "d=3 value");
    o.require(t2 < 5.0 && t3 < 5.0, "runtime");
  });

  criterion(2, "Pauli triple robustness", [](Outcome& o) {
    const auto t0 = Clock::now();
    const double a = robustness(pauli_triple(), std::vector<double>{1, 1, 1});
    const double b = robustness(pauli_triple(), std::vector<double>{1, 1, 0});
    const double t = seconds_since(t0);
    o.detail << " (1,1,1) " << a << ", (1,1,0) " << b;
    o.require(std::abs(a - 1.0 / std::sqrt(3.0)) <= 1e-4, "(1,1,1)");
    o.require(std::abs(b - 1.0 / std::sqrt(2.0)) <= 1e-4, "(1,1,0)");
    o.require(t < 10.0, "runtime");
  });

  criterion(3, "tau_star table", [](Outcome& o) {
    const TauStar t2 = tau_star(2), t3 = tau_star(3), t4 = tau_star(4), t5 = tau_star(5), t100 = tau_star(100);
    const double rel = std::abs(t100.value - std::sqrt(2.0 / (100.0 * std::numbers::pi))) / t100.value;
    o.detail << " tau(2)=" << t2.fraction() << " tau(3)=" << t3.fraction() << " tau(4)=" << t4.fraction()
             << " tau(5)=" << t5.fraction() << " asymptotic rel err at 100 " << rel;
    o.require(t2.exact == boost::multiprecision::cpp_rational(1, 2) && t2.fraction() == "1/2", "tau(2)");
    o.require(t3.value == 0.5, "tau(3)");
    o.require(t4.value == 0.375 && t5.value == 0.375, "tau(4), tau(5)");
    o.require(rel < 0.05, "asymptotics");
  });

  std::vector<Instance> instances = make_instances();

  criterion(4, "strong duality on 100 random tuples", [&](Outcome& o) {
    double worst = 0.0;
    int limits = 0;
    for (auto& inst : instances) {
      try {
        const CompatNormResult r = compat_norm(inst.a);
        inst.norm = r.value;
        inst.dual = r.dual;
        inst.stats = r.stats;
        inst.pairing_value = pairing(r.dual.components, inst.a);
        worst = std::max(worst, std::abs(r.value - inst.pairing_value) / std::max(1.0, r.value));
        o.require(r.dual.feasibility_margin() >= -1e-9, "dual feasibility");
      } catch (const NumericalLimit&) {
        ++limits;
      }
    }
    o.detail << " max relative gap " << worst << ", NumericalLimit " << limits;
    o.require(worst <= 1e-6, "gap");
    o.require(limits == 0, "NumericalLimit");
  });

  std::vector<CompatibilityResult> verdicts;
  criterion(5, "agreement with the marginal-form test", [&](Outcome& o) {
    const auto t0 = Clock::now();
    int compared = 0, skipped = 0, disagreements = 0, compatible = 0;
    for (const auto& inst : instances) {
      verdicts.push_back(is_compatible(inst.e));
      if (std::abs(inst.norm - 1.0) < 1e-4) {
        ++skipped;
        continue;
      }
      ++compared;
      compatible += verdicts.back().compatible ? 1 : 0;
      const bool other = is_compatible_marginal_form(GeneralPovmFamily::from_effects(inst.e)).compatible;
      if (other != verdicts.back().compatible) ++disagreements;
    }
    const double t = seconds_since(t0);
    o.detail << " compared " << compared << " (" << compatible << " compatible), skipped " << skipped
             << ", disagreements " << disagreements;
    o.require(disagreements == 0, "agreement");
    o.require(t < 300.0, "runtime");
  });

  criterion(6, "certificate validity", [&](Outcome& o) {
    double worst_marginal = 0.0, worst_sum = 0.0, weakest_witness = std::numeric_limits<double>::infinity();
    int joints = 0, witnesses = 0;
    for (std::size_t k = 0; k < instances.size(); ++k) {
      const CompatibilityResult& r = verdicts.at(k);
      if (r.compatible) {
        o.require(r.joint && r.post, "missing joint");
        if (!r.joint || !r.post) continue;
        ++joints;
        worst_marginal = std::max(worst_marginal, marginal_error(*r.joint, *r.post, GeneralPovmFamily::from_effects(instances[k].e)));
        worst_sum = std::max(worst_sum, r.joint->sum_error());
      } else {
        o.require(r.witness.has_value(), "missing witness");
        if (!r.witness) continue;
        ++witnesses;
        weakest_witness = std::min(weakest_witness, pairing(r.witness->components, instances[k].a));
      }
    }
    o.detail << " joints " << joints << " (marginal err " << worst_marginal << ", sum err " << worst_sum << "), witnesses "
             << witnesses << " (min pairing " << weakest_witness << ")";
    o.require(worst_marginal <= 1e-7, "marginal error");
    o.require(worst_sum <= 1e-8, "sum error");
    o.require(witnesses == 0 || weakest_witness > 1.0 + 1e-7, "witness pairing");
  });

  criterion(7, "crossnorm sandwich", [](Outcome& o) {
    std::mt19937_64 rng(7);
    double worst = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < 200; ++k) {
      const ObservableTuple a = random_tuple(1 + k % 4, 1 + (k / 4) % 4, rng);
      worst = std::max(worst, inj_norm_linf(a) - compat_norm(a).value);
    }
    double worst_pure = 0.0;
    std::normal_distribution<double> normal;
    for (int k = 0; k < 50; ++k) {
      const int g = 1 + k % 4, d = 1 + (k / 4) % 4;
      const HermitianMatrix h = random_instance(RandomKind::HermitianGaussian, d, rng);
      std::vector<HermitianMatrix> c;
      double zmax = 0.0;
      for (int i = 0; i < g; ++i) {
        const double z = normal(rng);
        zmax = std::max(zmax, std::abs(z));
        c.push_back(h * z);
      }
      const double want = zmax * operator_norm(h);
      worst_pure = std::max(worst_pure, std::abs(compat_norm(ObservableTuple(c)).value - want));
    }
    o.detail << " max(inj_linf - compat) " << worst << ", pure tensor max err " << worst_pure;
    o.require(worst <= 1e-7, "lower crossnorm bound");
    o.require(worst_pure <= 1e-6, "pure tensors");
  });

  criterion(8, "witness norm consistency", [](Outcome& o) {
    std::mt19937_64 rng(8);
    double worst = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < 50; ++k) {
      const ObservableTuple x = random_tuple(1 + k % 3, 2 + k % 2, rng);
      worst = std::max(worst, wit_norm_sample_lb(x, 1000, static_cast<std::uint64_t>(k)) - wit_norm(x).value);
    }
    double worst_g1 = 0.0;
    for (int k = 0; k < 20; ++k) {
      const ObservableTuple x = random_tuple(1, 1 + k % 5, rng);
      worst_g1 = std::max(worst_g1, std::abs(wit_norm(x).value - operator_norm(x[0])));
    }
    const double xz = wit_norm(ObservableTuple({sx(), sz()})).value;
    o.detail << " max(lb - wit) " << worst << ", g=1 max err " << worst_g1 << ", wit(sx, sz) " << xz;
    o.require(worst <= 1e-7, "sample lower bound");
    o.require(worst_g1 <= 1e-6, "g=1");
    o.require(std::abs(xz - 2.0) <= 1e-5, "qubit pair");
  });

  criterion(9, "witness-norm threshold of the scaled qubit pair", [](Outcome& o) {
    const ObservableTuple base = ObservableTuple({sx(), sz()}) * (1.0 / std::sqrt(2.0));
    double lo = 0.0, hi = 2.0;
    while (hi - lo > 1e-7) {
      const double mid = 0.5 * (lo + hi);
      (wit_norm(base * mid).value <= 1.0 ? lo : hi) = mid;
    }
    const double t = 0.5 * (lo + hi);
    const double r = robustness(pauli_pair(), uniform_direction(2));
    o.detail << " threshold " << t << ", robustness " << r;
    o.require(std::abs(t - 1.0 / std::sqrt(2.0)) <= 1e-4, "threshold");
    o.require(std::abs(t - r) <= 1e-4, "matches robustness");
  });

  criterion(10, "quarter-ball noise is compatible", [](Outcome& o) {
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      const int g = 1 + k % 3, d = 1 + (k / 3) % 3;
      const EffectTuple e = k % 2 == 0 ? random_effect_tuple(g, d, rng) : random_projective_tuple(g, d, rng);
      std::vector<double> s(static_cast<std::size_t>(g));
      double n2 = 0.0;
      for (auto& v : s) n2 += (v = u(rng)) * v;
      for (auto& v : s) v = std::min(1.0, v / std::sqrt(n2));
      worst = std::max(worst, compat_norm(to_tensor(add_white_noise(e, s))).value);
    }
    o.detail << " max norm " << worst;
    o.require(worst <= 1.0 + 1e-6, "norm");
  });

  criterion(11, "witness pipeline", [&](Outcome& o) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
      const int g = 1 + k % 3, d = 1 + (k / 3) % 4;
      ObservableTuple x = random_tuple(g, d, rng);
      x *= u(rng) / inj_norm_l1(x);
      const DensityMatrix rho(random_instance(RandomKind::DensityHs, d, rng));
      worst = std::max(worst, compat_dual_norm(witness_from_pair(x, rho)).value);
    }
    int classified = 0, outside = 0;
    double worst_c = 0.0;
    for (const auto& inst : instances) {
      if (inst.dual.components.g() == 0) continue;
      const WitnessClass w = classify(inst.dual.components);
      ++classified;
      worst_c = std::max(worst_c, w.c_star);
      if (!w.in_incompatibility_ball() || w.c_star > 1.0 + 1e-6) ++outside;
    }
    o.detail << " max dual norm of built witnesses " << worst << ", dual certificates classified " << classified
             << " (outside the ball " << outside << ", max c* " << worst_c << ")";
    o.require(worst <= 1.0 + 1e-6, "built witnesses");
    o.require(classified == static_cast<int>(instances.size()), "all certificates present");
    o.require(outside == 0, "classification");
  });

  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
