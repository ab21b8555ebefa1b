#pragma once

// Shared generators and model fragments for the test suites.

#include <cmath>
#include <random>

#include "fwm/dynamics.hpp"
#include "fwm/ladder.hpp"

namespace fwm::testing {

/// Random normalized sparse state: up to `kets` distinct occupations with
/// at most `max_total` bosons overall, complex-normal amplitudes.
inline SparseState random_state(std::mt19937& rng, int mode_count, std::uint32_t max_total,
                                int kets) {
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<std::uint32_t> count(0, max_total);
  SparseState state(mode_count);
  for (int attempts = 0; attempts < 20 * kets && static_cast<int>(state.size()) < kets;
       ++attempts) {
    Occupation ket = Occupation::vacuum(mode_count);
    std::uint32_t remaining = max_total;
    for (int m = 0; m < mode_count; ++m) {
      std::uint32_t n = std::min(count(rng), remaining);
      ket.set(m, n);
      remaining -= n;
    }
    state.add(ket, Complex{normal(rng), normal(rng)});
  }
  return state.normalized();
}

/// Random normalized reduced-basis state for one total-number block.
inline ReducedState random_reduced_state(std::mt19937& rng, std::int64_t total_number) {
  std::normal_distribution<double> normal;
  ReducedState state;
  state.total_number = total_number;
  state.coeffs.resize(static_cast<std::size_t>(reduced_dimension(total_number)));
  for (auto& c : state.coeffs) c = Complex{normal(rng), normal(rng)};
  double norm = state.norm();
  for (auto& c : state.coeffs) c /= norm;
  return state;
}

/// Truncated one-mode coherent state |alpha> with real alpha.
inline SparseState coherent_state(double alpha, std::uint32_t n_max,
                                  double prune = kDefaultPruneThreshold) {
  SparseState state(1, prune);
  double amp = std::exp(-0.5 * alpha * alpha);
  for (std::uint32_t n = 0; n <= n_max; ++n) {
    state.add({n}, Complex{amp, 0.0});
    amp *= alpha / std::sqrt(static_cast<double>(n) + 1.0);
  }
  return state.normalized();
}

/// Two-mode squeezing Hamiltonian i kappa (a0^dag a1^dag - a0 a1), the
/// undepleted-pump limit of the mixing model acting on modes (0, 1).
inline LadderPolynomial two_mode_squeeze_hamiltonian(double kappa) {
  using LE = LadderExpression;
  LE up = LE::create(0) * LE::create(1);
  up.scale(Complex{0.0, kappa});
  LE down = LE::annihilate(0) * LE::annihilate(1);
  down.scale(Complex{0.0, -kappa});
  return {up, down};
}

}  // namespace fwm::testing
