#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "fwm/sparse_state.hpp"

namespace fwm {

/// Two-mode beam splitter a_out = t a_in + r b_in, b_out = r* a_in - t* b_in.
/// The default is the balanced 50-50 splitter t = r = 1/sqrt(2); the
/// convention with the sign flip on the second output port makes the
/// balanced splitter an exact involution.
struct BeamSplitterSpec {
  int mode_a = 0;
  int mode_b = 1;
  Complex transmittance{1.0 / std::numbers::sqrt2, 0.0};
  Complex reflectance{1.0 / std::numbers::sqrt2, 0.0};

  static BeamSplitterSpec balanced(int mode_a, int mode_b) {
    return {mode_a, mode_b};
  }

  /// Alternate sign convention (r -> -r); physical moments must not
  /// depend on the choice.
  static BeamSplitterSpec balanced_flipped(int mode_a, int mode_b) {
    BeamSplitterSpec spec{mode_a, mode_b};
    spec.reflectance = -spec.reflectance;
    return spec;
  }

  void validate(int mode_count) const {
    if (mode_a < 0 || mode_a >= mode_count || mode_b < 0 || mode_b >= mode_count || mode_a == mode_b)
      throw ContractViolation("BeamSplitterSpec: invalid mode pair");
    double unitarity = std::norm(transmittance) + std::norm(reflectance);
    if (std::abs(unitarity - 1.0) > 1e-12)
      throw ContractViolation("BeamSplitterSpec: |t|^2 + |r|^2 deviates from 1");
  }
};

namespace detail {

/// Output amplitudes of U|n_a, n_b> over |k, n-k>, k = 0..n_a+n_b.
/// Built by applying the Heisenberg-transformed creation operators one
/// boson at a time with per-step normalization, which keeps every
/// intermediate vector at unit norm and the whole construction stable
/// for large occupations.
inline std::vector<Complex> beam_splitter_sector(std::uint32_t n_a, std::uint32_t n_b,
                                                 Complex t, Complex r) {
  std::vector<Complex> out{Complex{1.0, 0.0}};
  int n = 0;
  auto apply_creation = [&](Complex alpha, Complex beta, std::uint32_t step) {
    std::vector<Complex> next(static_cast<std::size_t>(n) + 2, Complex{0.0, 0.0});
    for (int k = 0; k <= n; ++k) {
      if (out[k] == Complex{0.0, 0.0}) continue;
      next[k + 1] += alpha * std::sqrt(static_cast<double>(k) + 1.0) * out[k];
      next[k] += beta * std::sqrt(static_cast<double>(n - k) + 1.0) * out[k];
    }
    double inv = 1.0 / std::sqrt(static_cast<double>(step));
    for (auto& c : next) c *= inv;
    out = std::move(next);
    ++n;
  };
  // U a^dag U^dag = t a^dag + r* b^dag, U b^dag U^dag = r a^dag - t* b^dag
  for (std::uint32_t i = 1; i <= n_a; ++i) apply_creation(t, std::conj(r), i);
  for (std::uint32_t j = 1; j <= n_b; ++j) apply_creation(r, -std::conj(t), j);
  return out;
}

}  // namespace detail

/// Exact Fock-space image of the state under the beam-splitter unitary.
/// Each two-mode sector |n_a, n_b> expands through the binomial transform
/// induced by the mode map; the norm is preserved.
inline SparseState apply_beam_splitter(const SparseState& state, const BeamSplitterSpec& spec) {
  spec.validate(state.mode_count());
  SparseState out(state.mode_count(), state.prune_threshold());
  // Sector transforms keyed by (n_a, n_b), reused across kets.
  std::unordered_map<std::uint64_t, std::vector<Complex>> sectors;
  state.for_each([&](const Occupation& ket, Complex amp) {
    std::uint32_t n_a = ket[spec.mode_a];
    std::uint32_t n_b = ket[spec.mode_b];
    std::uint64_t sector_key = (static_cast<std::uint64_t>(n_a) << 32) | n_b;
    auto it = sectors.find(sector_key);
    if (it == sectors.end())
      it = sectors
               .emplace(sector_key, detail::beam_splitter_sector(n_a, n_b, spec.transmittance,
                                                                 spec.reflectance))
               .first;
    const auto& coeffs = it->second;
    std::uint32_t n = n_a + n_b;
    for (std::uint32_t k = 0; k <= n; ++k) {
      if (coeffs[k] == Complex{0.0, 0.0}) continue;
      Occupation target = ket.with(spec.mode_a, k).with(spec.mode_b, n - k);
      out.add(target, coeffs[k] * amp);
    }
  });
  return out;
}

}  // namespace fwm
