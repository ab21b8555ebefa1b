#include <catch2/catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "fwm/beam_splitter.hpp"
#include "fwm/homodyne.hpp"
#include "fwm/ladder.hpp"
#include "support/states.hpp"

using namespace fwm;
using Catch::Approx;

namespace {
constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;
}

TEST_CASE("ladder operators use the standard matrix elements") {
  SparseState one = SparseState::basis_ket({1});
  SparseState lowered = apply_ladder(one, LadderExpression::annihilate(0));
  CHECK(lowered.amplitude({0}).real() == Approx(1.0));
  CHECK(lowered.size() == 1);

  SparseState vac = SparseState::vacuum(1);
  SparseState raised = apply_ladder(vac, LadderExpression::create(0));
  CHECK(raised.amplitude({1}).real() == Approx(1.0));

  SparseState four = SparseState::basis_ket({4});
  SparseState three = apply_ladder(four, LadderExpression::annihilate(0));
  CHECK(three.amplitude({3}).real() == Approx(2.0));
}

TEST_CASE("annihilating the vacuum yields the zero state") {
  SparseState vac = SparseState::vacuum(2);
  SparseState out = apply_ladder(vac, LadderExpression::annihilate(1));
  CHECK(out.size() == 0);
}

TEST_CASE("apply_ladder rejects out-of-range modes") {
  SparseState vac = SparseState::vacuum(2);
  CHECK_THROWS_AS(apply_ladder(vac, LadderExpression::annihilate(2)), ContractViolation);
}

TEST_CASE("expectation values") {
  SparseState three = SparseState::basis_ket({3});
  CHECK(expectation(three, LadderExpression::number(0)).real() == Approx(3.0));

  SparseState vac = SparseState::vacuum(1);
  CHECK(std::abs(expectation(vac, LadderExpression::annihilate(0))) == Approx(0.0));

  // a^dag b on (|1,0> + |0,1>)/sqrt(2): a 2x2 hand computation gives 1/2.
  SparseState bell(2);
  bell.add({1, 0}, kInvSqrt2);
  bell.add({0, 1}, kInvSqrt2);
  Complex hop = expectation(bell, LadderExpression::create(0) * LadderExpression::annihilate(1));
  CHECK(hop.real() == Approx(0.5));
  CHECK(hop.imag() == Approx(0.0).margin(1e-15));
}

TEST_CASE("inner products") {
  std::mt19937 rng(11);
  SparseState psi = fwm::testing::random_state(rng, 2, 5, 6);
  CHECK(inner_product(psi, psi).real() == Approx(1.0));

  CHECK(std::abs(inner_product(SparseState::basis_ket({2, 0}), SparseState::basis_ket({0, 2}))) ==
        Approx(0.0));

  SparseState plus(1);
  plus.add({0}, kInvSqrt2);
  plus.add({1}, kInvSqrt2);
  CHECK(inner_product(SparseState::vacuum(1), plus).real() == Approx(kInvSqrt2));

  CHECK_THROWS_AS(inner_product(SparseState::vacuum(1), SparseState::vacuum(2)),
                  ContractViolation);
}

TEST_CASE("balanced beam splitter on low kets") {
  BeamSplitterSpec spec = BeamSplitterSpec::balanced(0, 1);

  SparseState one = apply_beam_splitter(SparseState::basis_ket({1, 0}), spec);
  CHECK(one.amplitude({1, 0}).real() == Approx(kInvSqrt2));
  CHECK(one.amplitude({0, 1}).real() == Approx(kInvSqrt2));

  SparseState vac = apply_beam_splitter(SparseState::vacuum(2), spec);
  CHECK(vac.amplitude({0, 0}).real() == Approx(1.0));
  CHECK(vac.size() == 1);

  // Oracle for |2,0>: expanding (a^dag + b^dag)^2 / 2 on vacuum gives
  // amplitudes 1/2, 1/sqrt(2), 1/2 on |2,0>, |1,1>, |0,2>.
  SparseState two = apply_beam_splitter(SparseState::basis_ket({2, 0}), spec);
  CHECK(two.amplitude({2, 0}).real() == Approx(0.5));
  CHECK(two.amplitude({1, 1}).real() == Approx(kInvSqrt2));
  CHECK(two.amplitude({0, 2}).real() == Approx(0.5));
}

TEST_CASE("beam splitter validates unitarity") {
  BeamSplitterSpec bad{0, 1, {0.9, 0.0}, {0.9, 0.0}};
  CHECK_THROWS_AS(apply_beam_splitter(SparseState::vacuum(2), bad), ContractViolation);
}

TEST_CASE("canonical commutator holds on random states") {
  std::mt19937 rng(23);
  for (int rep = 0; rep < 20; ++rep) {
    SparseState psi = fwm::testing::random_state(rng, 3, 6, 8);
    for (int mode = 0; mode < 3; ++mode) {
      Complex lower_raise =
          expectation(psi, LadderExpression::annihilate(mode) * LadderExpression::create(mode));
      Complex raise_lower = expectation(psi, LadderExpression::number(mode));
      CHECK(std::abs(lower_raise - raise_lower - Complex{1.0, 0.0}) < 1e-9);
    }
  }
}

TEST_CASE("beam splitter preserves the norm up to 20 bosons") {
  std::mt19937 rng(37);
  for (int rep = 0; rep < 12; ++rep) {
    SparseState psi = fwm::testing::random_state(rng, 2, 20, 10);
    SparseState out = apply_beam_splitter(psi, BeamSplitterSpec::balanced(0, 1));
    CHECK(out.norm() == Approx(1.0).margin(1e-9));
  }
}

TEST_CASE("the balanced splitter is an involution in this convention") {
  std::mt19937 rng(41);
  SparseState psi = fwm::testing::random_state(rng, 2, 12, 10);
  BeamSplitterSpec spec = BeamSplitterSpec::balanced(0, 1);
  SparseState twice = apply_beam_splitter(apply_beam_splitter(psi, spec), spec);
  double worst = 0.0;
  psi.for_each([&](const Occupation& ket, Complex amp) {
    worst = std::max(worst, std::abs(amp - twice.amplitude(ket)));
  });
  twice.for_each([&](const Occupation& ket, Complex amp) {
    worst = std::max(worst, std::abs(amp - psi.amplitude(ket)));
  });
  CHECK(worst < 1e-9);
}

TEST_CASE("pruning at the default threshold does not move the moments") {
  // Same pipeline with aggressive and with no pruning; every reported
  // moment must agree to 1e-8.
  BlockEvolver evolver({1.0, 12});
  ReducedState evolved = evolver.evolve(ReducedState::fock_start(12), 0.15);

  auto moments_with_prune = [&](double prune) {
    SparseState split = split_local_oscillator(lift_to_sparse(evolved, prune));
    return quadrature_moments(split, standard_measured_set(split));
  };
  QuadratureMoments pruned = moments_with_prune(1e-14);
  QuadratureMoments exact = moments_with_prune(0.0);
  auto a = moment_values(pruned);
  auto b = moment_values(exact);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-8);
}

TEST_CASE("tensor products and vacuum extension") {
  SparseState a = SparseState::basis_ket({2});
  SparseState b(1);
  b.add({0}, kInvSqrt2);
  b.add({1}, kInvSqrt2);
  SparseState ab = tensor_product(a, b);
  CHECK(ab.amplitude({2, 0}).real() == Approx(kInvSqrt2));
  CHECK(ab.amplitude({2, 1}).real() == Approx(kInvSqrt2));

  SparseState extended = append_vacuum_mode(a);
  CHECK(extended.mode_count() == 2);
  CHECK(extended.amplitude({2, 0}).real() == Approx(1.0));
}
