#pragma once

#include <complex>
#include <vector>

#include "fwm/sparse_state.hpp"

namespace fwm {

enum class LadderKind { create, annihilate };

struct LadderFactor {
  int mode = 0;
  LadderKind kind = LadderKind::annihilate;
};

/// A scalar prefactor times an ordered product of ladder operators.
/// Factors are stored in the order the product is written, so the last
/// factor acts on the state first.
struct LadderExpression {
  Complex prefactor{1.0, 0.0};
  std::vector<LadderFactor> factors;

  static LadderExpression create(int mode) {
    return {{1.0, 0.0}, {{mode, LadderKind::create}}};
  }
  static LadderExpression annihilate(int mode) {
    return {{1.0, 0.0}, {{mode, LadderKind::annihilate}}};
  }
  static LadderExpression number(int mode) {
    return {{1.0, 0.0}, {{mode, LadderKind::create}, {mode, LadderKind::annihilate}}};
  }

  LadderExpression& scale(Complex factor) {
    prefactor *= factor;
    return *this;
  }

  /// Product of two expressions (this on the left).
  friend LadderExpression operator*(const LadderExpression& a, const LadderExpression& b) {
    LadderExpression out;
    out.prefactor = a.prefactor * b.prefactor;
    out.factors = a.factors;
    out.factors.insert(out.factors.end(), b.factors.begin(), b.factors.end());
    return out;
  }

  /// Hermitian conjugate: reversed factor order, conjugate prefactor,
  /// create <-> annihilate.
  LadderExpression dagger() const {
    LadderExpression out;
    out.prefactor = std::conj(prefactor);
    out.factors.reserve(factors.size());
    for (auto it = factors.rbegin(); it != factors.rend(); ++it)
      out.factors.push_back({it->mode,
                             it->kind == LadderKind::create ? LadderKind::annihilate
                                                            : LadderKind::create});
    return out;
  }
};

/// Sum of ladder monomials; the form every composite observable takes.
using LadderPolynomial = std::vector<LadderExpression>;

/// expr|psi>, unnormalized. Standard matrix elements
/// a|n> = sqrt(n)|n-1>, a^dag|n> = sqrt(n+1)|n+1>, factors applied
/// right to left. Amplitudes at or below the prune threshold are dropped.
inline SparseState apply_ladder(const SparseState& state, const LadderExpression& expr) {
  for (const auto& f : expr.factors)
    if (f.mode < 0 || f.mode >= state.mode_count())
      throw ContractViolation("apply_ladder: mode index out of range");

  SparseState out(state.mode_count(), state.prune_threshold());
  state.for_each([&](const Occupation& ket, Complex amp) {
    Occupation cur = ket;
    double coeff = 1.0;
    for (auto it = expr.factors.rbegin(); it != expr.factors.rend(); ++it) {
      std::uint32_t n = cur[it->mode];
      if (it->kind == LadderKind::annihilate) {
        if (n == 0) return;  // annihilated the vacuum: contributes nothing
        coeff *= std::sqrt(static_cast<double>(n));
        cur = cur.with(it->mode, n - 1);
      } else {
        coeff *= std::sqrt(static_cast<double>(n) + 1.0);
        cur = cur.with(it->mode, n + 1);
      }
    }
    out.add(cur, expr.prefactor * coeff * amp);
  });
  return out;
}

inline SparseState apply_ladder(const SparseState& state, const LadderPolynomial& poly) {
  SparseState out(state.mode_count(), state.prune_threshold());
  for (const auto& term : poly) {
    SparseState part = apply_ladder(state, term);
    part.for_each([&](const Occupation& ket, Complex amp) { out.add(ket, amp); });
  }
  return out;
}

/// <psi|expr|psi> via apply_ladder followed by the inner product.
/// Non-Hermitian expressions return the raw complex value; callers
/// symmetrize as needed.
inline Complex expectation(const SparseState& state, const LadderExpression& expr) {
  return inner_product(state, apply_ladder(state, expr));
}

inline Complex expectation(const SparseState& state, const LadderPolynomial& poly) {
  Complex sum{0.0, 0.0};
  for (const auto& term : poly) sum += expectation(state, term);
  return sum;
}

}  // namespace fwm
