#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <unordered_map>
#include <utility>

#include "fwm/errors.hpp"
#include "fwm/occupation.hpp"

namespace fwm {

using Complex = std::complex<double>;

inline constexpr double kDefaultPruneThreshold = 1e-14;

/// Sparse multimode pure state: a map from occupation vectors to complex
/// amplitudes. Amplitudes with magnitude at or below the prune threshold
/// are dropped on insertion.
///
/// Library operations treat states as immutable values and return new
/// states; the mutating accessors exist only to build a state up front.
class SparseState {
public:
  using Map = std::unordered_map<std::uint64_t, Complex>;

  explicit SparseState(int mode_count, double prune_threshold = kDefaultPruneThreshold)
      : mode_count_(mode_count), prune_threshold_(prune_threshold) {
    if (mode_count < 1 || mode_count > Occupation::kMaxModes)
      throw ContractViolation("SparseState: mode count out of range");
    if (prune_threshold < 0)
      throw ContractViolation("SparseState: negative prune threshold");
  }

  /// Single basis ket with amplitude 1.
  static SparseState basis_ket(const Occupation& ket, double prune_threshold = kDefaultPruneThreshold) {
    SparseState state(ket.mode_count(), prune_threshold);
    state.add(ket, 1.0);
    return state;
  }

  static SparseState vacuum(int mode_count, double prune_threshold = kDefaultPruneThreshold) {
    return basis_ket(Occupation::vacuum(mode_count), prune_threshold);
  }

  int mode_count() const noexcept { return mode_count_; }
  double prune_threshold() const noexcept { return prune_threshold_; }
  std::size_t size() const noexcept { return amplitudes_.size(); }
  bool empty() const noexcept { return amplitudes_.empty(); }

  Complex amplitude(const Occupation& ket) const {
    check_ket(ket);
    auto it = amplitudes_.find(ket.key());
    return it == amplitudes_.end() ? Complex{0.0, 0.0} : it->second;
  }

  /// Accumulate `value` onto a ket's amplitude, pruning the entry if the
  /// result falls at or below the prune threshold.
  void add(const Occupation& ket, Complex value) {
    check_ket(ket);
    add_unchecked(ket.key(), value);
  }

  void add_unchecked(std::uint64_t key, Complex value) {
    auto [it, inserted] = amplitudes_.try_emplace(key, value);
    if (!inserted) it->second += value;
    if (std::abs(it->second) <= prune_threshold_) amplitudes_.erase(it);
  }

  template <class F>
  void for_each(F&& f) const {
    for (const auto& [key, amp] : amplitudes_)
      f(Occupation::from_key(key, mode_count_), amp);
  }

  const Map& raw() const noexcept { return amplitudes_; }

  double norm_squared() const noexcept {
    double sum = 0.0;
    for (const auto& [key, amp] : amplitudes_) sum += std::norm(amp);
    return sum;
  }

  double norm() const noexcept { return std::sqrt(norm_squared()); }

  SparseState scaled(Complex factor) const {
    SparseState out(mode_count_, prune_threshold_);
    out.amplitudes_.reserve(amplitudes_.size());
    for (const auto& [key, amp] : amplitudes_) out.add_unchecked(key, factor * amp);
    return out;
  }

  SparseState normalized() const {
    double n = norm();
    if (n == 0.0) throw ContractViolation("SparseState: cannot normalize the zero state");
    return scaled(1.0 / n);
  }

private:
  void check_ket(const Occupation& ket) const {
    if (ket.mode_count() != mode_count_)
      throw ContractViolation("SparseState: occupation vector length does not match mode count");
  }

  int mode_count_;
  double prune_threshold_;
  Map amplitudes_;
};

/// <a|b>, summed over the union of stored kets.
inline Complex inner_product(const SparseState& a, const SparseState& b) {
  if (a.mode_count() != b.mode_count())
    throw ContractViolation("inner_product: mode counts differ");
  // Iterate the smaller map, look up in the larger one.
  const SparseState& small = a.size() <= b.size() ? a : b;
  const SparseState& large = a.size() <= b.size() ? b : a;
  const bool swapped = &small != &a;
  Complex sum{0.0, 0.0};
  for (const auto& [key, amp] : small.raw()) {
    auto it = large.raw().find(key);
    if (it == large.raw().end()) continue;
    sum += swapped ? std::conj(it->second) * amp : std::conj(amp) * it->second;
  }
  return sum;
}

/// |a> (x) |b>, with b's modes appended after a's.
inline SparseState tensor_product(const SparseState& a, const SparseState& b) {
  if (a.mode_count() + b.mode_count() > Occupation::kMaxModes)
    throw ContractViolation("tensor_product: combined mode count exceeds limit");
  SparseState out(a.mode_count() + b.mode_count(),
                  std::min(a.prune_threshold(), b.prune_threshold()));
  a.for_each([&](const Occupation& ka, Complex va) {
    b.for_each([&](const Occupation& kb, Complex vb) {
      Occupation ket = Occupation::vacuum(out.mode_count());
      for (int i = 0; i < ka.mode_count(); ++i) ket.set(i, ka[i]);
      for (int i = 0; i < kb.mode_count(); ++i) ket.set(a.mode_count() + i, kb[i]);
      out.add(ket, va * vb);
    });
  });
  return out;
}

/// Same state with one extra vacuum mode appended.
inline SparseState append_vacuum_mode(const SparseState& state) {
  SparseState out(state.mode_count() + 1, state.prune_threshold());
  state.for_each([&](const Occupation& ket, Complex amp) { out.add(ket.extended(0), amp); });
  return out;
}

}  // namespace fwm
