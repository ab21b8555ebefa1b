#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "fwm/errors.hpp"

namespace fwm {

/// Canonical-quadrature moments of the two-mode squeezed state produced
/// by the undepleted-pump limit, with squeezing parameter r = N chi t.
/// These are ideal-local-oscillator quantities; mapping onto measured
/// quadratures is the caller's job.
struct PumpApproxMoments {
  double r = 0.0;
  double var_x1 = 1.0, var_x2 = 1.0, cov_x = 0.0;
  double var_y1 = 1.0, var_y2 = 1.0, cov_y = 0.0;

  static PumpApproxMoments at(double r) {
    if (r < 0.0) throw ContractViolation("PumpApproxMoments: negative squeezing parameter");
    PumpApproxMoments m;
    m.r = r;
    m.var_x1 = m.var_x2 = m.var_y1 = m.var_y2 = std::cosh(2.0 * r);
    m.cov_x = std::sinh(2.0 * r);
    m.cov_y = -std::sinh(2.0 * r);
    return m;
  }
};

/// Classic reference curves in the undepleted-pump limit: the Duan-type
/// combined variance 4 e^{-2r} (threshold 4) and the Reid inference
/// product 1/cosh^2(2r) (threshold 1).
struct PumpCriteriaPoint {
  double r = 0.0;
  double duan_lhs = 4.0;
  double reid_product = 1.0;
};

inline PumpCriteriaPoint pump_criteria_curve(double r) {
  if (r < 0.0) throw ContractViolation("pump_criteria_curve: negative squeezing parameter");
  PumpCriteriaPoint p;
  p.r = r;
  p.duan_lhs = 4.0 * std::exp(-2.0 * r);
  const double c = std::cosh(2.0 * r);
  p.reid_product = 1.0 / (c * c);
  return p;
}

/// Finite-N rescaled criteria against the pump curves on a shared N chi t
/// grid, with the mode-0 depletion fraction alongside, so the onset of
/// deviation can be compared with the onset of depletion.
struct DeviationRecord {
  double n_chi_t = 0.0;
  double rescaled_separability = 0.0;
  double pump_separability = 0.0;
  double separability_rel_dev = 0.0;
  double rescaled_epr_reid = 0.0;
  double pump_reid = 0.0;
  double reid_rel_dev = 0.0;
  double depletion_fraction = 0.0;
};

inline std::vector<DeviationRecord> small_time_consistency(
    std::span<const double> n_chi_t, std::span<const double> rescaled_separability,
    std::span<const double> rescaled_epr_reid, std::span<const double> mode0_population,
    double total_number) {
  if (n_chi_t.size() != rescaled_separability.size() ||
      n_chi_t.size() != rescaled_epr_reid.size() || n_chi_t.size() != mode0_population.size())
    throw ContractViolation("small_time_consistency: grids do not match");
  if (!(total_number > 0.0))
    throw ContractViolation("small_time_consistency: total number must be positive");

  std::vector<DeviationRecord> records;
  records.reserve(n_chi_t.size());
  for (std::size_t i = 0; i < n_chi_t.size(); ++i) {
    const PumpCriteriaPoint pump = pump_criteria_curve(n_chi_t[i]);
    DeviationRecord rec;
    rec.n_chi_t = n_chi_t[i];
    rec.rescaled_separability = rescaled_separability[i];
    rec.pump_separability = pump.duan_lhs;
    rec.separability_rel_dev =
        std::abs(rescaled_separability[i] - pump.duan_lhs) / pump.duan_lhs;
    rec.rescaled_epr_reid = rescaled_epr_reid[i];
    rec.pump_reid = pump.reid_product;
    rec.reid_rel_dev = std::abs(rescaled_epr_reid[i] - pump.reid_product) / pump.reid_product;
    rec.depletion_fraction = 1.0 - mode0_population[i] / total_number;
    records.push_back(rec);
  }
  return records;
}

}  // namespace fwm
