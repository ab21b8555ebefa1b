#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "fwm/homodyne.hpp"

namespace fwm {

/// The nine implemented inequalities. The first three hold for separable
/// states with local oscillators in arbitrary quantum states; the
/// coherent_* variants additionally assume coherent-state local
/// oscillators; the rescaled_* variants divide out the population-ratio
/// factors so the right-hand sides become the classic constants 4, 2, 1.
enum class Criterion {
  separability,
  epr_sum,
  epr_reid,
  coherent_separability,
  coherent_epr_sum,
  coherent_epr_reid,
  rescaled_separability,
  rescaled_epr_sum,
  rescaled_epr_reid,
};

inline constexpr int kCriterionCount = 9;

inline constexpr std::array<Criterion, kCriterionCount> kAllCriteria = {
    Criterion::separability,          Criterion::epr_sum,
    Criterion::epr_reid,              Criterion::coherent_separability,
    Criterion::coherent_epr_sum,      Criterion::coherent_epr_reid,
    Criterion::rescaled_separability, Criterion::rescaled_epr_sum,
    Criterion::rescaled_epr_reid,
};

inline const char* criterion_name(Criterion c) {
  switch (c) {
    case Criterion::separability: return "separability";
    case Criterion::epr_sum: return "epr_sum";
    case Criterion::epr_reid: return "epr_reid";
    case Criterion::coherent_separability: return "coherent_separability";
    case Criterion::coherent_epr_sum: return "coherent_epr_sum";
    case Criterion::coherent_epr_reid: return "coherent_epr_reid";
    case Criterion::rescaled_separability: return "rescaled_separability";
    case Criterion::rescaled_epr_sum: return "rescaled_epr_sum";
    case Criterion::rescaled_epr_reid: return "rescaled_epr_reid";
  }
  return "unknown";
}

/// Which +- pairing of Var[X1 +- X2] + Var[Y1 -+ Y2] was optimal.
enum class SignChoice { none, plus_minus, minus_plus };

inline const char* sign_choice_name(SignChoice s) {
  switch (s) {
    case SignChoice::none: return "none";
    case SignChoice::plus_minus: return "+-";
    case SignChoice::minus_plus: return "-+";
  }
  return "none";
}

/// The EPR criteria infer one system from the other; both directions are
/// evaluated and the more violated one reported.
enum class InferenceDirection { none, system2_from_1, system1_from_2 };

inline const char* inference_direction_name(InferenceDirection d) {
  switch (d) {
    case InferenceDirection::none: return "none";
    case InferenceDirection::system2_from_1: return "2|1";
    case InferenceDirection::system1_from_2: return "1|2";
  }
  return "none";
}

/// One evaluated inequality. margin = lhs - rhs, so margin < 0 means
/// violation for every criterion, sum and product forms alike.
struct CriterionResult {
  Criterion id = Criterion::separability;
  double lhs = std::numeric_limits<double>::quiet_NaN();
  double rhs = std::numeric_limits<double>::quiet_NaN();
  double margin = std::numeric_limits<double>::quiet_NaN();
  bool violated = false;
  bool defined = true;
  SignChoice sign = SignChoice::none;
  InferenceDirection direction = InferenceDirection::none;
};

struct CriteriaReport {
  std::array<CriterionResult, kCriterionCount> entries;

  const CriterionResult& operator[](Criterion c) const {
    return entries[static_cast<std::size_t>(c)];
  }
  CriterionResult& operator[](Criterion c) { return entries[static_cast<std::size_t>(c)]; }
};

namespace detail {

struct CombinedVariance {
  double lhs;
  SignChoice sign;
};

inline CombinedVariance best_combined(const QuadratureMoments& m) {
  const double plus_minus = m.var_x_plus + m.var_y_minus;
  const double minus_plus = m.var_x_minus + m.var_y_plus;
  if (minus_plus < plus_minus) return {minus_plus, SignChoice::minus_plus};
  return {plus_minus, SignChoice::plus_minus};
}

struct PopulationRatios {
  double r1;
  double r2;
  bool defined;
};

inline PopulationRatios population_ratios(const QuadratureMoments& m) {
  if (!(m.pop_b1 > 0.0) || !(m.pop_b2 > 0.0)) return {0.0, 0.0, false};
  return {m.pop_a1 / m.pop_b1, m.pop_a2 / m.pop_b2, true};
}

inline void finish(CriterionResult& r) {
  r.margin = r.lhs - r.rhs;
  r.violated = r.defined && r.margin < 0.0;
}

inline CriterionResult undefined_result(Criterion id) {
  CriterionResult r;
  r.id = id;
  r.defined = false;
  r.violated = false;
  return r;
}

/// Mean-square error of the optimal linear estimate of `target` from
/// `source`; falls back to the uncorrelated estimate when the regressor
/// variance degenerates.
inline double optimal_inference_error(double var_target, double covariance, double var_source) {
  if (var_source < 1e-12) return var_target;
  return var_target - covariance * covariance / var_source;
}

}  // namespace detail

/// Inseparability bound for arbitrary local-oscillator states:
/// Var[X1 +- X2] + Var[Y1 -+ Y2] >= 2|1 - <n_a1>/<n_b1>| + 2|1 - <n_a2>/<n_b2>|.
/// Violation certifies entanglement between the two systems.
inline CriterionResult separability(const QuadratureMoments& m) {
  const auto ratios = detail::population_ratios(m);
  if (!ratios.defined) return detail::undefined_result(Criterion::separability);
  const auto combined = detail::best_combined(m);
  CriterionResult r;
  r.id = Criterion::separability;
  r.lhs = combined.lhs;
  r.sign = combined.sign;
  r.rhs = 2.0 * std::abs(1.0 - ratios.r1) + 2.0 * std::abs(1.0 - ratios.r2);
  detail::finish(r);
  return r;
}

/// EPR criterion with the sum-variance inference: same left-hand side as
/// the separability bound, right-hand side 2|1 - <n_a>/<n_b>| of the
/// inferred system. Both inference directions are tried.
inline CriterionResult epr_sum(const QuadratureMoments& m) {
  const auto ratios = detail::population_ratios(m);
  if (!ratios.defined) return detail::undefined_result(Criterion::epr_sum);
  const auto combined = detail::best_combined(m);
  CriterionResult r;
  r.id = Criterion::epr_sum;
  r.lhs = combined.lhs;
  r.sign = combined.sign;
  const double rhs_21 = 2.0 * std::abs(1.0 - ratios.r2);
  const double rhs_12 = 2.0 * std::abs(1.0 - ratios.r1);
  if (rhs_12 > rhs_21) {
    r.rhs = rhs_12;
    r.direction = InferenceDirection::system1_from_2;
  } else {
    r.rhs = rhs_21;
    r.direction = InferenceDirection::system2_from_1;
  }
  detail::finish(r);
  return r;
}

/// EPR criterion with the optimal linear inference: the product of the
/// two inference errors against (1 - <n_a>/<n_b>)^2 of the inferred
/// system. Never weaker than epr_sum.
inline CriterionResult epr_reid(const QuadratureMoments& m) {
  const auto ratios = detail::population_ratios(m);
  if (!ratios.defined) return detail::undefined_result(Criterion::epr_reid);
  using detail::optimal_inference_error;
  const double lhs_21 = optimal_inference_error(m.var_x2, m.cov_x1x2, m.var_x1) *
                        optimal_inference_error(m.var_y2, m.cov_y1y2, m.var_y1);
  const double rhs_21 = (1.0 - ratios.r2) * (1.0 - ratios.r2);
  const double lhs_12 = optimal_inference_error(m.var_x1, m.cov_x1x2, m.var_x2) *
                        optimal_inference_error(m.var_y1, m.cov_y1y2, m.var_y2);
  const double rhs_12 = (1.0 - ratios.r1) * (1.0 - ratios.r1);
  CriterionResult r;
  r.id = Criterion::epr_reid;
  if (lhs_12 - rhs_12 < lhs_21 - rhs_21) {
    r.lhs = lhs_12;
    r.rhs = rhs_12;
    r.direction = InferenceDirection::system1_from_2;
  } else {
    r.lhs = lhs_21;
    r.rhs = rhs_21;
    r.direction = InferenceDirection::system2_from_1;
  }
  detail::finish(r);
  return r;
}

/// The three criteria that assume coherent-state local oscillators of
/// arbitrary size. Valid only under that assumption; on states whose
/// local oscillators are not coherent they can flag entanglement that is
/// not there.
inline std::array<CriterionResult, 3> coherent_lo_criteria(const QuadratureMoments& m) {
  const auto ratios = detail::population_ratios(m);
  if (!ratios.defined)
    return {detail::undefined_result(Criterion::coherent_separability),
            detail::undefined_result(Criterion::coherent_epr_sum),
            detail::undefined_result(Criterion::coherent_epr_reid)};
  const auto combined = detail::best_combined(m);

  CriterionResult sep;
  sep.id = Criterion::coherent_separability;
  sep.lhs = combined.lhs;
  sep.sign = combined.sign;
  sep.rhs = 4.0 + 2.0 * ratios.r1 + 2.0 * ratios.r2;
  detail::finish(sep);

  CriterionResult sum;
  sum.id = Criterion::coherent_epr_sum;
  sum.lhs = combined.lhs;
  sum.sign = combined.sign;
  sum.rhs = 2.0 + 2.0 * ratios.r1 + 2.0 * ratios.r2;
  detail::finish(sum);

  // Corrected optimal-inference product; the corrected regressor variance
  // can degenerate, in which case the point is reported undefined.
  auto corrected_product = [&](double var_sx, double var_sy, double var_tx, double var_ty,
                               double ratio_source, double ratio_target,
                               double& lhs) -> bool {
    const double denom_x = var_sx - ratio_source;
    const double denom_y = var_sy - ratio_source;
    if (denom_x <= 0.0 || denom_y <= 0.0) return false;
    const double dx = var_tx - ratio_target - m.cov_x1x2 * m.cov_x1x2 / denom_x;
    const double dy = var_ty - ratio_target - m.cov_y1y2 * m.cov_y1y2 / denom_y;
    lhs = dx * dy;
    return true;
  };
  CriterionResult reid;
  reid.id = Criterion::coherent_epr_reid;
  double lhs_21 = 0.0, lhs_12 = 0.0;
  const bool ok_21 =
      corrected_product(m.var_x1, m.var_y1, m.var_x2, m.var_y2, ratios.r1, ratios.r2, lhs_21);
  const bool ok_12 =
      corrected_product(m.var_x2, m.var_y2, m.var_x1, m.var_y1, ratios.r2, ratios.r1, lhs_12);
  if (!ok_21 && !ok_12) {
    reid = detail::undefined_result(Criterion::coherent_epr_reid);
  } else {
    reid.rhs = 1.0;
    if (ok_21 && (!ok_12 || lhs_21 <= lhs_12)) {
      reid.lhs = lhs_21;
      reid.direction = InferenceDirection::system2_from_1;
    } else {
      reid.lhs = lhs_12;
      reid.direction = InferenceDirection::system1_from_2;
    }
    detail::finish(reid);
  }
  return {sep, sum, reid};
}

/// Rescaled forms: the left-hand sides of the three main criteria divided
/// by their population-ratio factors, compared against the constants 4, 2
/// and 1. Forcing the denominators to one recovers the classic
/// fixed-threshold criteria.
inline std::array<CriterionResult, 3> rescaled_criteria(const QuadratureMoments& m) {
  const auto ratios = detail::population_ratios(m);
  if (!ratios.defined)
    return {detail::undefined_result(Criterion::rescaled_separability),
            detail::undefined_result(Criterion::rescaled_epr_sum),
            detail::undefined_result(Criterion::rescaled_epr_reid)};
  const auto combined = detail::best_combined(m);
  const double factor1 = std::abs(1.0 - ratios.r1);
  const double factor2 = std::abs(1.0 - ratios.r2);

  CriterionResult sep;
  const double sep_denom = 0.5 * factor1 + 0.5 * factor2;
  if (sep_denom <= 0.0) {
    sep = detail::undefined_result(Criterion::rescaled_separability);
  } else {
    sep.id = Criterion::rescaled_separability;
    sep.lhs = combined.lhs / sep_denom;
    sep.rhs = 4.0;
    sep.sign = combined.sign;
    detail::finish(sep);
  }

  CriterionResult sum;
  sum.id = Criterion::rescaled_epr_sum;
  {
    const bool ok_21 = factor2 > 0.0;
    const bool ok_12 = factor1 > 0.0;
    if (!ok_21 && !ok_12) {
      sum = detail::undefined_result(Criterion::rescaled_epr_sum);
    } else {
      const double margin_21 = ok_21 ? combined.lhs / factor2 - 2.0
                                     : std::numeric_limits<double>::infinity();
      const double margin_12 = ok_12 ? combined.lhs / factor1 - 2.0
                                     : std::numeric_limits<double>::infinity();
      sum.rhs = 2.0;
      sum.sign = combined.sign;
      if (margin_12 < margin_21) {
        sum.lhs = combined.lhs / factor1;
        sum.direction = InferenceDirection::system1_from_2;
      } else {
        sum.lhs = combined.lhs / factor2;
        sum.direction = InferenceDirection::system2_from_1;
      }
      detail::finish(sum);
    }
  }

  CriterionResult reid;
  reid.id = Criterion::rescaled_epr_reid;
  {
    using detail::optimal_inference_error;
    const double product_21 = optimal_inference_error(m.var_x2, m.cov_x1x2, m.var_x1) *
                              optimal_inference_error(m.var_y2, m.cov_y1y2, m.var_y1);
    const double product_12 = optimal_inference_error(m.var_x1, m.cov_x1x2, m.var_x2) *
                              optimal_inference_error(m.var_y1, m.cov_y1y2, m.var_y2);
    const bool ok_21 = factor2 > 0.0;
    const bool ok_12 = factor1 > 0.0;
    if (!ok_21 && !ok_12) {
      reid = detail::undefined_result(Criterion::rescaled_epr_reid);
    } else {
      const double lhs_21 = ok_21 ? product_21 / (factor2 * factor2)
                                  : std::numeric_limits<double>::infinity();
      const double lhs_12 = ok_12 ? product_12 / (factor1 * factor1)
                                  : std::numeric_limits<double>::infinity();
      reid.rhs = 1.0;
      if (lhs_12 < lhs_21) {
        reid.lhs = lhs_12;
        reid.direction = InferenceDirection::system1_from_2;
      } else {
        reid.lhs = lhs_21;
        reid.direction = InferenceDirection::system2_from_1;
      }
      detail::finish(reid);
    }
  }

  return {sep, sum, reid};
}

inline CriteriaReport evaluate_all(const QuadratureMoments& m) {
  CriteriaReport report;
  report[Criterion::separability] = separability(m);
  report[Criterion::epr_sum] = epr_sum(m);
  report[Criterion::epr_reid] = epr_reid(m);
  const auto coherent = coherent_lo_criteria(m);
  report[Criterion::coherent_separability] = coherent[0];
  report[Criterion::coherent_epr_sum] = coherent[1];
  report[Criterion::coherent_epr_reid] = coherent[2];
  const auto rescaled = rescaled_criteria(m);
  report[Criterion::rescaled_separability] = rescaled[0];
  report[Criterion::rescaled_epr_sum] = rescaled[1];
  report[Criterion::rescaled_epr_reid] = rescaled[2];
  return report;
}

}  // namespace fwm
