#include <doctest.h>

#include "support.hpp"

using namespace testing;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

void check_joint(const EffectTuple& e, const CompatibilityResult& r) {
  REQUIRE(r.joint);
  REQUIRE(r.post);
  CHECK(marginal_error(*r.joint, *r.post, GeneralPovmFamily::from_effects(e)) <= 1e-7);
  CHECK(r.joint->sum_error() <= 1e-8);
  CHECK(r.joint->min_eigenvalue() >= -1e-9);
  for (const auto& per_label : r.post->probabilities)
    for (const auto& p : per_label) {
      CHECK(p[0] >= 0.0);
      CHECK(p[1] >= 0.0);
      CHECK(p[0] + p[1] == doctest::Approx(1.0));
    }
}

} // namespace

TEST_CASE("to_tensor examples") {
  CHECK(to_tensor(EffectTuple({id(2) * 0.5, id(2) * 0.5})).is_zero());
  const ObservableTuple a = to_tensor(pauli_pair());
  CHECK(max_abs_diff(a, ObservableTuple({sx(), sz()})) < 1e-15);
  const ObservableTuple b = to_tensor(EffectTuple({id(2), HermitianMatrix::zero(2)}));
  CHECK(max_abs_diff(b, ObservableTuple({id(2), id(2) * -1.0})) == 0.0);
}

TEST_CASE("from_tensor examples") {
  const EffectTuple e = from_tensor(ObservableTuple({sx(), sz()}));
  CHECK(max_abs_diff(e[0], (id(2) + sx()) * 0.5) == 0.0);
  CHECK(max_abs_diff(e[1], (id(2) + sz()) * 0.5) == 0.0);
  const EffectTuple half = from_tensor(ObservableTuple::zero(3, 2));
  for (const auto& h : half.effects()) CHECK(max_abs_diff(h, id(2) * 0.5) == 0.0);
  try {
    from_tensor(ObservableTuple({sz() * 2.0}));
    FAIL("expected NotAnEffectTuple");
  } catch (const NotAnEffectTuple& err) {
    CHECK(err.index() == 0);
    CHECK(std::abs(err.eigenvalue()) == doctest::Approx(2.0));
  }
}

TEST_CASE("effect tuple validation") {
  CHECK_THROWS_AS(EffectTuple({sz()}), NotAnEffectTuple);
  CHECK_THROWS_AS(EffectTuple({id(2) * 1.5}), NotAnEffectTuple);
  CHECK_THROWS_AS(EffectTuple({id(2), id(3)}), InvalidInput);
}

TEST_CASE("is_compatible examples") {
  const EffectTuple same({(id(2) + sz()) * 0.5, (id(2) + sz()) * 0.5});
  const CompatibilityResult a = is_compatible(same);
  CHECK(a.compatible);
  CHECK(a.value == doctest::Approx(1.0).epsilon(1e-7));
  check_joint(same, a);

  const CompatibilityResult b = is_compatible(pauli_pair());
  CHECK_FALSE(b.compatible);
  CHECK(b.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-7));
  REQUIRE(b.witness);
  CHECK(pairing(b.witness->components, to_tensor(pauli_pair())) > 1.0 + 1e-7);
  CHECK(b.witness->feasibility_margin() >= -1e-9);

  const EffectTuple boundary({(id(2) + sx() * kInvSqrt2) * 0.5, (id(2) + sz() * kInvSqrt2) * 0.5});
  const CompatibilityResult c = is_compatible(boundary);
  CHECK(c.compatible);
  CHECK(c.value == doctest::Approx(1.0).epsilon(1e-5));
  check_joint(boundary, c);
}

TEST_CASE("spread joint has pure sign labels and the same marginals") {
  const EffectTuple e = add_white_noise(pauli_triple(), std::vector<double>{0.5, 0.5, 0.5});
  const CompatibilityResult r = is_compatible(e);
  REQUIRE(r.joint);
  const JointPovm spread = spread_slack(*r.joint);
  CHECK(spread.labels == sign_vectors(3));
  const auto post = PostProcessing::canonical(spread, std::vector<int>{2, 2, 2});
  CHECK(marginal_error(spread, post, GeneralPovmFamily::from_effects(e)) <= 1e-7);
  CHECK(spread.sum_error() <= 1e-8);
}

TEST_CASE("marginal-form examples") {
  const HermitianMatrix e = random_instance(RandomKind::Effect, 2, 3);
  const GeneralPovmFamily copies({{e, id(2) - e}, {e, id(2) - e}});
  const MarginalFormResult a = is_compatible_marginal_form(copies);
  CHECK(a.compatible);
  REQUIRE(a.joint);
  CHECK(marginal_error(*a.joint, PostProcessing::canonical(*a.joint, copies.outcome_counts()), copies) <= 1e-7);
  CHECK(a.joint->sum_error() <= 1e-8);

  const MarginalFormResult b = is_compatible_marginal_form(GeneralPovmFamily::from_effects(pauli_pair()));
  CHECK_FALSE(b.compatible);
  CHECK_FALSE(b.joint);

  const GeneralPovmFamily trivial({{id(2) / 3.0, id(2) / 3.0, id(2) / 3.0}, {id(2) * 0.5, id(2) * 0.5}});
  const MarginalFormResult c = is_compatible_marginal_form(trivial);
  CHECK(c.compatible);
  REQUIRE(c.joint);
  CHECK(c.joint->operators.size() == 6);
}

TEST_CASE("marginal-form size guard") {
  std::vector<std::vector<HermitianMatrix>> povms(14, {id(1) * 0.5, id(1) * 0.5});
  CHECK_THROWS_AS(is_compatible_marginal_form(GeneralPovmFamily(povms)), TooLarge);
}

TEST_CASE("general POVM validation") {
  CHECK_THROWS_AS(GeneralPovmFamily({{id(2) * 0.5, id(2) * 0.4}}), InvalidInput);
  CHECK_THROWS_AS(GeneralPovmFamily({{id(2) + sz(), id(2) * -1.0 - sz() + id(2)}}), InvalidInput);
  const std::vector<int> counts{3, 4};
  const GeneralPovmFamily f = random_povm_family(counts, 3, 5);
  CHECK(f.outcome_counts() == counts);
}

TEST_CASE("general POVMs with three outcomes") {
  // Two copies of the same three-outcome POVM are compatible; the trine and
  // a sharp qubit measurement along z are not.
  const GeneralPovmFamily f = random_povm_family(std::vector<int>{3}, 2, 9);
  const GeneralPovmFamily twice({f[0], f[0]});
  CHECK(is_compatible_marginal_form(twice).compatible);

  std::vector<HermitianMatrix> trine;
  for (int k = 0; k < 3; ++k) {
    const double a = 2.0 * std::numbers::pi * k / 3.0;
    trine.push_back((id(2) + sx() * std::cos(a) + sy() * std::sin(a)) / 3.0);
  }
  const GeneralPovmFamily pair({trine, {(id(2) + sz()) * 0.5, (id(2) - sz()) * 0.5}});
  CHECK_FALSE(is_compatible_marginal_form(pair).compatible);
}

TEST_CASE("add_white_noise examples") {
  const EffectTuple e = pauli_pair();
  const EffectTuple same = add_white_noise(e, std::vector<double>{1.0, 1.0});
  CHECK(max_abs_diff(to_tensor(same), to_tensor(e)) < 1e-15);
  const EffectTuple flat = add_white_noise(e, std::vector<double>{0.0, 0.0});
  for (const auto& h : flat.effects()) CHECK(max_abs_diff(h, id(2) * 0.5) < 1e-15);
  const std::vector<double> s{kInvSqrt2, kInvSqrt2};
  const EffectTuple boundary = add_white_noise(e, s);
  CHECK(max_abs_diff(to_tensor(boundary), to_tensor(e).scaled(s)) < 1e-15);
  CHECK(is_compatible(boundary).value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(add_white_noise(e, std::vector<double>{1.2, 0.0}), InvalidInput);
  CHECK_THROWS_AS(add_white_noise(e, std::vector<double>{0.5}), InvalidInput);
}

TEST_CASE("robustness examples") {
  CHECK(robustness(pauli_pair(), std::vector<double>{1, 1}) == doctest::Approx(kInvSqrt2).epsilon(1e-4));
  CHECK(robustness(pauli_triple(), std::vector<double>{1, 1, 1}) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-4));
  std::mt19937_64 rng(12);
  const EffectTuple any = random_projective_tuple(3, 3, rng);
  CHECK(robustness(any, std::vector<double>{1, 0, 0}) == 1.0);
  CHECK_THROWS_AS(robustness(any, std::vector<double>{0, 0, 0}), InvalidInput);
  CHECK_THROWS_AS(robustness(any, std::vector<double>{1, 2, 0}), InvalidInput);
}

TEST_CASE("robustness agrees with homogeneity") {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 5; ++k) {
    const EffectTuple e = random_projective_tuple(2 + k % 2, 2, rng);
    const std::vector<double> dir(static_cast<std::size_t>(e.g()), 1.0);
    const double direct = std::min(1.0, 1.0 / compat_norm(to_tensor(e)).value);
    CHECK(robustness(e, dir, 1e-6) == doctest::Approx(direct).epsilon(2e-6));
  }
}

TEST_CASE("joint POVM round trip on random compatible tuples") {
  std::mt19937_64 rng(101);
  int compatible = 0;
  for (int k = 0; k < 30; ++k) {
    const int g = 2 + k % 2, d = 2 + k % 2;
    const EffectTuple e = add_white_noise(random_projective_tuple(g, d, rng), std::vector<double>(static_cast<std::size_t>(g), 0.55));
    const CompatibilityResult r = is_compatible(e);
    if (!r.compatible) continue;
    ++compatible;
    check_joint(e, r);
  }
  CHECK(compatible > 10);
}

TEST_CASE("oracle equivalence on random dichotomic tuples") {
  std::mt19937_64 rng(202);
  int compared = 0, incompatible = 0;
  for (int k = 0; k < 40; ++k) {
    const int g = 2 + k % 2, d = 2 + k % 2;
    const double s = 0.5 + 0.1 * (k % 5);
    const EffectTuple e = add_white_noise(random_projective_tuple(g, d, rng), std::vector<double>(static_cast<std::size_t>(g), s));
    const CompatibilityResult r = is_compatible(e);
    if (std::abs(r.value - 1.0) <= 1e-4) continue;
    ++compared;
    incompatible += r.compatible ? 0 : 1;
    CHECK(is_compatible_marginal_form(GeneralPovmFamily::from_effects(e)).compatible == r.compatible);
  }
  CHECK(compared >= 30);
  CHECK(incompatible > 0);
}

TEST_CASE("embedding into a larger dimension does not raise robustness") {
  std::mt19937_64 rng(303);
  for (int k = 0; k < 5; ++k) {
    const EffectTuple e = random_projective_tuple(2, 2, rng);
    const EffectTuple big = from_tensor(pad(to_tensor(e), 3));
    const std::vector<double> dir{1.0, 1.0};
    CHECK(robustness(big, dir) <= robustness(e, dir) + 1e-5);
  }
}

TEST_CASE("simplex noise is always compatible") {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const int g = 2 + k % 3, d = 2 + k % 2;
    std::vector<double> s(static_cast<std::size_t>(g));
    double sum = 0.0;
    for (auto& v : s) sum += (v = u(rng));
    for (auto& v : s) v /= sum;
    const EffectTuple e = add_white_noise(random_projective_tuple(g, d, rng), s);
    CHECK(compat_norm(to_tensor(e)).value <= 1.0 + 1e-7);
  }
}

TEST_CASE("one-dimensional tuples are always compatible") {
  const EffectTuple e({diag({0.0}), diag({1.0}), diag({0.3})});
  const CompatibilityResult r = is_compatible(e);
  CHECK(r.compatible);
  check_joint(e, r);
  CHECK(robustness(e, std::vector<double>{1, 1, 1}) == 1.0);
  CHECK(is_compatible_marginal_form(GeneralPovmFamily::from_effects(e)).compatible);
}
