#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <string>

#include "fwm/errors.hpp"

namespace fwm {

/// Boson counts per mode labelling one Fock basis ket.
///
/// Supports up to 4 modes with up to 65535 bosons each; the counts pack
/// into a single 64-bit key so states can use it directly as a hash key.
class Occupation {
public:
  static constexpr int kMaxModes = 4;
  static constexpr std::uint32_t kMaxCount = 0xffff;

  Occupation() = default;

  Occupation(std::initializer_list<std::uint32_t> counts) {
    if (static_cast<int>(counts.size()) > kMaxModes)
      throw ContractViolation("Occupation: more than " + std::to_string(kMaxModes) + " modes");
    mode_count_ = static_cast<int>(counts.size());
    int i = 0;
    for (std::uint32_t c : counts) set(i++, c);
  }

  static Occupation vacuum(int mode_count) {
    check_mode_count(mode_count);
    Occupation occ;
    occ.mode_count_ = mode_count;
    return occ;
  }

  int mode_count() const noexcept { return mode_count_; }

  std::uint32_t operator[](int mode) const {
    check_mode(mode);
    return counts_[mode];
  }

  void set(int mode, std::uint32_t count) {
    check_mode(mode);
    if (count > kMaxCount)
      throw ContractViolation("Occupation: count " + std::to_string(count) + " exceeds storage limit");
    counts_[mode] = static_cast<std::uint16_t>(count);
  }

  /// Copy with one mode's count replaced.
  Occupation with(int mode, std::uint32_t count) const {
    Occupation occ = *this;
    occ.set(mode, count);
    return occ;
  }

  /// Copy extended by one extra mode holding `count` bosons.
  Occupation extended(std::uint32_t count = 0) const {
    check_mode_count(mode_count_ + 1);
    Occupation occ = *this;
    occ.mode_count_ += 1;
    occ.set(occ.mode_count_ - 1, count);
    return occ;
  }

  std::uint64_t total() const noexcept {
    std::uint64_t sum = 0;
    for (int i = 0; i < mode_count_; ++i) sum += counts_[i];
    return sum;
  }

  std::uint64_t key() const noexcept {
    std::uint64_t k = 0;
    for (int i = 0; i < mode_count_; ++i)
      k |= static_cast<std::uint64_t>(counts_[i]) << (16 * i);
    return k;
  }

  static Occupation from_key(std::uint64_t key, int mode_count) {
    check_mode_count(mode_count);
    Occupation occ;
    occ.mode_count_ = mode_count;
    for (int i = 0; i < mode_count; ++i)
      occ.counts_[i] = static_cast<std::uint16_t>((key >> (16 * i)) & 0xffff);
    return occ;
  }

  friend bool operator==(const Occupation& a, const Occupation& b) noexcept {
    return a.mode_count_ == b.mode_count_ && a.counts_ == b.counts_;
  }

  friend std::ostream& operator<<(std::ostream& os, const Occupation& occ) {
    os << '|';
    for (int i = 0; i < occ.mode_count_; ++i) {
      if (i) os << ',';
      os << occ.counts_[i];
    }
    return os << '>';
  }

private:
  static void check_mode_count(int n) {
    if (n < 1 || n > kMaxModes)
      throw ContractViolation("Occupation: mode count " + std::to_string(n) + " out of range");
  }
  void check_mode(int mode) const {
    if (mode < 0 || mode >= mode_count_)
      throw ContractViolation("Occupation: mode index " + std::to_string(mode) + " out of range");
  }

  std::array<std::uint16_t, kMaxModes> counts_{};
  int mode_count_ = 0;
};

}  // namespace fwm
