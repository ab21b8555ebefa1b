#pragma once

#include <array>
#include <cmath>
#include <string>

#include "fwm/beam_splitter.hpp"
#include "fwm/dynamics.hpp"
#include "fwm/ladder.hpp"

namespace fwm {

inline constexpr double kDefaultLoFloor = 1e-6;

/// Mode assignment and local-oscillator populations for the two-system
/// homodyne measurement. lo_norm_j = <b_j^dag b_j> evaluated on the same
/// state the moments are taken from; it is the scaling denominator of
/// every measured quadrature.
struct MeasuredQuadratureSet {
  int signal1 = 1;
  int lo1 = 0;
  int signal2 = 2;
  int lo2 = 3;
  double lo_norm1 = 0.0;
  double lo_norm2 = 0.0;
};

/// All first and second measured-quadrature moments a criterion can ask
/// for, plus the mode populations entering every right-hand side.
struct QuadratureMoments {
  double mean_x1 = 0.0, mean_y1 = 0.0, mean_x2 = 0.0, mean_y2 = 0.0;
  double var_x1 = 0.0, var_y1 = 0.0, var_x2 = 0.0, var_y2 = 0.0;
  double cov_x1x2 = 0.0, cov_y1y2 = 0.0;
  // Var[X1 +- X2] and Var[Y1 +- Y2], both sign choices.
  double var_x_plus = 0.0, var_x_minus = 0.0;
  double var_y_plus = 0.0, var_y_minus = 0.0;
  double pop_a1 = 0.0, pop_a2 = 0.0, pop_b1 = 0.0, pop_b2 = 0.0;
};

inline const std::array<const char*, 18>& moment_column_names() {
  static const std::array<const char*, 18> names = {
      "mean_x1", "mean_y1", "mean_x2", "mean_y2", "var_x1",     "var_y1",
      "var_x2",  "var_y2",  "cov_x1x2", "cov_y1y2", "var_x_plus", "var_x_minus",
      "var_y_plus", "var_y_minus", "pop_a1", "pop_a2", "pop_b1", "pop_b2"};
  return names;
}

inline std::array<double, 18> moment_values(const QuadratureMoments& m) {
  return {m.mean_x1, m.mean_y1, m.mean_x2, m.mean_y2, m.var_x1, m.var_y1,
          m.var_x2, m.var_y2, m.cov_x1x2, m.cov_y1y2, m.var_x_plus, m.var_x_minus,
          m.var_y_plus, m.var_y_minus, m.pop_a1, m.pop_a2, m.pop_b1, m.pop_b2};
}

/// Moments of the unnormalized number-difference operators
/// U_j = a_j b_j^dag + a_j^dag b_j and V_j = i(a_j b_j^dag - a_j^dag b_j),
/// before dividing by the local-oscillator populations. Mixtures combine
/// at this level, because variances of a mixture are not weighted
/// variances.
struct RawMomentTable {
  double mean_u1 = 0.0, mean_v1 = 0.0, mean_u2 = 0.0, mean_v2 = 0.0;
  double uu11 = 0.0, vv11 = 0.0, uu22 = 0.0, vv22 = 0.0;
  double uu12 = 0.0, vv12 = 0.0;
  double pop_a1 = 0.0, pop_a2 = 0.0, pop_b1 = 0.0, pop_b2 = 0.0;

  RawMomentTable& accumulate(const RawMomentTable& other, double weight) {
    mean_u1 += weight * other.mean_u1;
    mean_v1 += weight * other.mean_v1;
    mean_u2 += weight * other.mean_u2;
    mean_v2 += weight * other.mean_v2;
    uu11 += weight * other.uu11;
    vv11 += weight * other.vv11;
    uu22 += weight * other.uu22;
    vv22 += weight * other.vv22;
    uu12 += weight * other.uu12;
    vv12 += weight * other.vv12;
    pop_a1 += weight * other.pop_a1;
    pop_a2 += weight * other.pop_a2;
    pop_b1 += weight * other.pop_b1;
    pop_b2 += weight * other.pop_b2;
    return *this;
  }
};

namespace detail {

inline double real_checked(Complex value, const char* what) {
  if (std::abs(value.imag()) > 1e-9 * std::max(1.0, std::abs(value.real())))
    throw ContractViolation(std::string("homodyne: Hermitian moment ") + what +
                            " has a non-negligible imaginary residue");
  return value.real();
}

inline LadderPolynomial u_operator(int signal, int lo) {
  LadderPolynomial poly;
  poly.push_back(LadderExpression::annihilate(signal) * LadderExpression::create(lo));
  poly.push_back(LadderExpression::create(signal) * LadderExpression::annihilate(lo));
  return poly;
}

inline LadderPolynomial v_operator(int signal, int lo) {
  LadderPolynomial poly;
  poly.push_back(
      (LadderExpression::annihilate(signal) * LadderExpression::create(lo)).scale({0.0, 1.0}));
  poly.push_back(
      (LadderExpression::create(signal) * LadderExpression::annihilate(lo)).scale({0.0, -1.0}));
  return poly;
}

inline LadderPolynomial product(const LadderPolynomial& a, const LadderPolynomial& b) {
  LadderPolynomial out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a)
    for (const auto& y : b) out.push_back(x * y);
  return out;
}

}  // namespace detail

/// Splits the source mode into the two local oscillators: appends a
/// vacuum mode, then applies the balanced splitter so that the source
/// mode of the output carries (a_src + a_aux)/sqrt(2) and the appended
/// mode carries (a_src - a_aux)/sqrt(2). Both local-oscillator
/// populations come out as half the source population.
inline SparseState split_local_oscillator(const SparseState& state, int source_mode,
                                          const BeamSplitterSpec& spec) {
  if (state.mode_count() != 3)
    throw ContractViolation("split_local_oscillator: expected a 3-mode state");
  if (source_mode < 0 || source_mode >= state.mode_count())
    throw ContractViolation("split_local_oscillator: source mode out of range");
  return apply_beam_splitter(append_vacuum_mode(state), spec);
}

inline SparseState split_local_oscillator(const SparseState& state, int source_mode = 0) {
  return split_local_oscillator(state, source_mode,
                                BeamSplitterSpec::balanced(source_mode, state.mode_count()));
}

/// Builds the measurement configuration for a state, evaluating the
/// local-oscillator populations in situ. Populations below the floor make
/// the quadrature scaling ill-defined and raise DegenerateNormalization.
inline MeasuredQuadratureSet make_measured_set(const SparseState& state, int signal1, int lo1,
                                               int signal2, int lo2,
                                               double lo_floor = kDefaultLoFloor) {
  MeasuredQuadratureSet set{signal1, lo1, signal2, lo2, 0.0, 0.0};
  set.lo_norm1 = detail::real_checked(expectation(state, LadderExpression::number(lo1)), "<b1^dag b1>");
  set.lo_norm2 = detail::real_checked(expectation(state, LadderExpression::number(lo2)), "<b2^dag b2>");
  if (set.lo_norm1 < lo_floor || set.lo_norm2 < lo_floor)
    throw DegenerateNormalization(
        "local-oscillator population <b^dag b> below floor; the measured-quadrature "
        "scaling denominator is ill-defined");
  return set;
}

/// Standard post-splitter assignment: signals in modes 1 and 2, local
/// oscillators in modes 0 and 3.
inline MeasuredQuadratureSet standard_measured_set(const SparseState& state,
                                                   double lo_floor = kDefaultLoFloor) {
  return make_measured_set(state, 1, 0, 2, 3, lo_floor);
}

/// Oracle path: every moment evaluated by operator application on the
/// full state. Cost is one pass over the state per monomial, so this
/// stays practical into the tens of thousands of kets.
inline RawMomentTable raw_quadrature_moments(const SparseState& state,
                                             const MeasuredQuadratureSet& set) {
  using detail::product;
  using detail::real_checked;
  const LadderPolynomial u1 = detail::u_operator(set.signal1, set.lo1);
  const LadderPolynomial v1 = detail::v_operator(set.signal1, set.lo1);
  const LadderPolynomial u2 = detail::u_operator(set.signal2, set.lo2);
  const LadderPolynomial v2 = detail::v_operator(set.signal2, set.lo2);

  RawMomentTable raw;
  raw.mean_u1 = real_checked(expectation(state, u1), "<U1>");
  raw.mean_v1 = real_checked(expectation(state, v1), "<V1>");
  raw.mean_u2 = real_checked(expectation(state, u2), "<U2>");
  raw.mean_v2 = real_checked(expectation(state, v2), "<V2>");
  raw.uu11 = real_checked(expectation(state, product(u1, u1)), "<U1^2>");
  raw.vv11 = real_checked(expectation(state, product(v1, v1)), "<V1^2>");
  raw.uu22 = real_checked(expectation(state, product(u2, u2)), "<U2^2>");
  raw.vv22 = real_checked(expectation(state, product(v2, v2)), "<V2^2>");
  raw.uu12 = real_checked(expectation(state, product(u1, u2)), "<U1 U2>");
  raw.vv12 = real_checked(expectation(state, product(v1, v2)), "<V1 V2>");
  raw.pop_a1 = real_checked(expectation(state, LadderExpression::number(set.signal1)), "<n_a1>");
  raw.pop_a2 = real_checked(expectation(state, LadderExpression::number(set.signal2)), "<n_a2>");
  raw.pop_b1 = real_checked(expectation(state, LadderExpression::number(set.lo1)), "<n_b1>");
  raw.pop_b2 = real_checked(expectation(state, LadderExpression::number(set.lo2)), "<n_b2>");
  return raw;
}

/// Divides a raw table by the in-situ local-oscillator populations and
/// assembles variances, covariances and the combined variances.
inline QuadratureMoments normalize_moments(const RawMomentTable& raw,
                                           double lo_floor = kDefaultLoFloor) {
  if (raw.pop_b1 < lo_floor || raw.pop_b2 < lo_floor)
    throw DegenerateNormalization(
        "local-oscillator population <b^dag b> below floor; the measured-quadrature "
        "scaling denominator is ill-defined");
  const double nb1 = raw.pop_b1;
  const double nb2 = raw.pop_b2;
  const double root1 = std::sqrt(nb1);
  const double root2 = std::sqrt(nb2);

  QuadratureMoments m;
  m.mean_x1 = raw.mean_u1 / root1;
  m.mean_y1 = raw.mean_v1 / root1;
  m.mean_x2 = raw.mean_u2 / root2;
  m.mean_y2 = raw.mean_v2 / root2;
  m.var_x1 = (raw.uu11 - raw.mean_u1 * raw.mean_u1) / nb1;
  m.var_y1 = (raw.vv11 - raw.mean_v1 * raw.mean_v1) / nb1;
  m.var_x2 = (raw.uu22 - raw.mean_u2 * raw.mean_u2) / nb2;
  m.var_y2 = (raw.vv22 - raw.mean_v2 * raw.mean_v2) / nb2;
  m.cov_x1x2 = (raw.uu12 - raw.mean_u1 * raw.mean_u2) / (root1 * root2);
  m.cov_y1y2 = (raw.vv12 - raw.mean_v1 * raw.mean_v2) / (root1 * root2);
  m.var_x_plus = m.var_x1 + m.var_x2 + 2.0 * m.cov_x1x2;
  m.var_x_minus = m.var_x1 + m.var_x2 - 2.0 * m.cov_x1x2;
  m.var_y_plus = m.var_y1 + m.var_y2 + 2.0 * m.cov_y1y2;
  m.var_y_minus = m.var_y1 + m.var_y2 - 2.0 * m.cov_y1y2;
  m.pop_a1 = raw.pop_a1;
  m.pop_a2 = raw.pop_a2;
  m.pop_b1 = nb1;
  m.pop_b2 = nb2;
  return m;
}

inline QuadratureMoments quadrature_moments(const SparseState& state,
                                            const MeasuredQuadratureSet& set,
                                            double lo_floor = kDefaultLoFloor) {
  return normalize_moments(raw_quadrature_moments(state, set), lo_floor);
}

/// <[X_j, Y_j]> evaluated by operator application. For any state this
/// must match -2i (<b^dag b> - <a^dag a>) / <b^dag b>.
inline Complex commutator_expectation(const SparseState& state, const MeasuredQuadratureSet& set,
                                      int system) {
  if (system != 1 && system != 2)
    throw ContractViolation("commutator_expectation: system must be 1 or 2");
  const int signal = system == 1 ? set.signal1 : set.signal2;
  const int lo = system == 1 ? set.lo1 : set.lo2;
  const double lo_norm = system == 1 ? set.lo_norm1 : set.lo_norm2;
  if (lo_norm <= 0.0)
    throw DegenerateNormalization("commutator_expectation: local-oscillator population not positive");
  const LadderPolynomial u = detail::u_operator(signal, lo);
  const LadderPolynomial v = detail::v_operator(signal, lo);
  Complex uv = expectation(state, detail::product(u, v));
  Complex vu = expectation(state, detail::product(v, u));
  return (uv - vu) / lo_norm;
}

/// Measured-quadrature variance an independent coherent local oscillator
/// of the given population would report for this one-mode signal:
/// Var_c[a + a^dag] + <a^dag a>/<b^dag b>.
inline double coherent_lo_reference(const SparseState& signal, double lo_population) {
  if (signal.mode_count() != 1)
    throw ContractViolation("coherent_lo_reference: expected a 1-mode signal state");
  if (!(lo_population > 0.0))
    throw ContractViolation("coherent_lo_reference: local-oscillator population must be positive");
  LadderPolynomial x{LadderExpression::annihilate(0), LadderExpression::create(0)};
  double mean = detail::real_checked(expectation(signal, x), "<X_c>");
  double second = detail::real_checked(expectation(signal, detail::product(x, x)), "<X_c^2>");
  double pop = detail::real_checked(expectation(signal, LadderExpression::number(0)), "<n_a>");
  return (second - mean * mean) + pop / lo_population;
}

/// Fast path for pair-symmetric reduced states. With the source mode
/// split into b_1,2 = (a_0 +- a_3)/sqrt(2) and the auxiliary mode in
/// vacuum, the only surviving raw moments are
///   <U_j^2> = <V_j^2> = <n_0 n_j> + <n_0>/2 + <n_j>,
///   <U_1 U_2> = -<V_1 V_2> = Re G,
///   G = sum_m conj(c_{m-1}) c_m m sqrt((N-2m+1)(N-2m+2)),
/// every first moment vanishing because the basis ties the two signal
/// occupations together. Checked against the oracle path in the tests.
inline RawMomentTable reduced_raw_moments(const ReducedState& state) {
  state.validate();
  const std::int64_t total = state.total_number;
  double n0 = 0.0, n1 = 0.0, n0n1 = 0.0;
  Complex g{0.0, 0.0};
  for (std::size_t m = 0; m < state.coeffs.size(); ++m) {
    const double p = std::norm(state.coeffs[m]);
    const double pump = static_cast<double>(total - 2 * static_cast<std::int64_t>(m));
    const double pairs = static_cast<double>(m);
    n0 += p * pump;
    n1 += p * pairs;
    n0n1 += p * pump * pairs;
    if (m > 0) {
      const double lift = (pump + 1.0) * (pump + 2.0);
      g += std::conj(state.coeffs[m - 1]) * state.coeffs[m] * pairs * std::sqrt(lift);
    }
  }
  RawMomentTable raw;
  const double uu = n0n1 + 0.5 * n0 + n1;
  raw.uu11 = raw.vv11 = raw.uu22 = raw.vv22 = uu;
  raw.uu12 = g.real();
  raw.vv12 = -g.real();
  raw.pop_a1 = raw.pop_a2 = n1;
  raw.pop_b1 = raw.pop_b2 = 0.5 * n0;
  return raw;
}

inline QuadratureMoments reduced_quadrature_moments(const ReducedState& state,
                                                    double lo_floor = kDefaultLoFloor) {
  return normalize_moments(reduced_raw_moments(state), lo_floor);
}

}  // namespace fwm
