#pragma once

#include <array>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fwm/analytic.hpp"
#include "fwm/criteria.hpp"
#include "fwm/ensembles.hpp"

namespace fwm {

inline constexpr int kSweepSchemaVersion = 1;

enum class MomentEngine { fast, oracle };

inline const char* moment_engine_name(MomentEngine e) {
  return e == MomentEngine::fast ? "fast" : "oracle";
}

/// One sweep: an initial number distribution evolved over a uniform
/// chi*t grid, with every moment and criterion evaluated per grid point.
struct RunConfig {
  DistributionKind initial = DistributionKind::fock;
  /// Total boson number for fock, distribution mean otherwise.
  double mean = 100.0;
  double chi = 1.0;
  double chi_t_min = 0.0;
  double chi_t_max = 0.05;
  int points = 400;
  double eps_trunc = kDefaultTruncationEpsilon;
  double block_cutoff = kDefaultBlockCutoff;
  double lo_floor = kDefaultLoFloor;
  double prune_threshold = kDefaultPruneThreshold;
  MomentEngine engine = MomentEngine::fast;
  int threads = 1;
  std::array<bool, kCriterionCount> criteria_enabled = [] {
    std::array<bool, kCriterionCount> all{};
    all.fill(true);
    return all;
  }();

  void validate() const {
    if (!(chi > 0.0)) throw ConfigError("config field 'chi' must be positive");
    if (mean < 0.0) throw ConfigError("config field 'mean' must be non-negative");
    if (points < 2) throw ConfigError("config field 'points' must be at least 2");
    if (!(chi_t_max > chi_t_min))
      throw ConfigError("config time grid must be strictly increasing (chi_t_max > chi_t_min)");
    if (chi_t_min < 0.0) throw ConfigError("config field 'chi_t_min' must be non-negative");
    if (!(eps_trunc > 0.0) || eps_trunc >= 1.0)
      throw ConfigError("config field 'eps_trunc' must lie in (0, 1)");
    if (block_cutoff < 0.0) throw ConfigError("config field 'block_cutoff' must be non-negative");
    if (!(lo_floor > 0.0)) throw ConfigError("config field 'lo_floor' must be positive");
    if (prune_threshold < 0.0)
      throw ConfigError("config field 'prune_threshold' must be non-negative");
    if (threads < 1) throw ConfigError("config field 'threads' must be at least 1");
    if (engine == MomentEngine::oracle && initial != DistributionKind::fock)
      throw ConfigError("config field 'engine': the oracle engine supports fock initial states only");
    bool any = false;
    for (bool b : criteria_enabled) any = any || b;
    if (!any) throw ConfigError("config field 'criteria' selects no criterion");
  }

  std::vector<double> grid() const {
    std::vector<double> chi_t(static_cast<std::size_t>(points));
    const double step = (chi_t_max - chi_t_min) / static_cast<double>(points - 1);
    for (int j = 0; j < points; ++j)
      chi_t[static_cast<std::size_t>(j)] = chi_t_min + step * static_cast<double>(j);
    return chi_t;
  }
};

struct SweepRow {
  double chi_t = 0.0;
  double n0 = 0.0, n1 = 0.0, n2 = 0.0;
  double lo_population = 0.0;
  /// False when the local-oscillator population fell below the floor and
  /// the measured quadratures are undefined at this point.
  bool defined = true;
  QuadratureMoments moments;
  CriteriaReport report;
};

namespace detail {

inline SweepRow make_row(double chi_t, const RawMomentTable& raw, double lo_floor) {
  SweepRow row;
  row.chi_t = chi_t;
  row.n1 = raw.pop_a1;
  row.n2 = raw.pop_a2;
  row.n0 = raw.pop_b1 + raw.pop_b2;
  row.lo_population = raw.pop_b1;
  try {
    row.moments = normalize_moments(raw, lo_floor);
    row.report = evaluate_all(row.moments);
    row.defined = true;
  } catch (const DegenerateNormalization&) {
    row.defined = false;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.moments = QuadratureMoments{nan, nan, nan, nan, nan, nan, nan, nan, nan,
                                    nan, nan, nan, nan, nan, raw.pop_a1, raw.pop_a2,
                                    raw.pop_b1, raw.pop_b2};
    for (Criterion c : kAllCriteria) {
      row.report[c].id = c;
      row.report[c].defined = false;
      row.report[c].violated = false;
    }
  }
  return row;
}

}  // namespace detail

inline std::vector<SweepRow> run_sweep(const RunConfig& config) {
  config.validate();
  const std::vector<double> chi_t = config.grid();
  std::vector<double> times(chi_t.size());
  for (std::size_t j = 0; j < chi_t.size(); ++j) times[j] = chi_t[j] / config.chi;

  std::vector<RawMomentTable> raw(chi_t.size());
  if (config.engine == MomentEngine::fast) {
    NumberDistribution dist = build_distribution(config.initial, config.mean, config.eps_trunc);
    EnsembleOptions options;
    options.chi = config.chi;
    options.block_cutoff = config.block_cutoff;
    options.lo_floor = config.lo_floor;
    options.threads = config.threads;
    raw = ensemble_raw_sweep(dist, times, options);
  } else {
    // Oracle engine: full sparse pipeline per point, moments by operator
    // application on the post-splitter 4-mode state.
    const auto total = static_cast<std::int64_t>(std::llround(config.mean));
    BlockEvolver evolver({config.chi, total});
    const MeasuredQuadratureSet set{1, 0, 2, 3, 0.0, 0.0};
    for (std::size_t j = 0; j < times.size(); ++j) {
      ReducedState state = evolver.evolve(ReducedState::fock_start(total), times[j]);
      SparseState split = split_local_oscillator(lift_to_sparse(state, config.prune_threshold));
      raw[j] = raw_quadrature_moments(split, set);
    }
  }

  std::vector<SweepRow> rows;
  rows.reserve(chi_t.size());
  for (std::size_t j = 0; j < chi_t.size(); ++j)
    rows.push_back(detail::make_row(chi_t[j], raw[j], config.lo_floor));
  return rows;
}

// ---------------------------------------------------------------------------
// CSV output. Floating-point cells use 17 significant digits so that a
// re-read reproduces the exact doubles; output is byte-identical across
// runs and thread counts for the same config and schema version.

namespace detail {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_criterion_cells(std::ostream& os, const CriterionResult& r) {
  os << ',' << format_double(r.lhs) << ',' << format_double(r.rhs) << ','
     << format_double(r.margin) << ',' << (r.violated ? 1 : 0) << ',' << sign_choice_name(r.sign)
     << ',' << inference_direction_name(r.direction) << ',' << (r.defined ? 1 : 0);
}

}  // namespace detail

inline void write_sweep_csv(std::ostream& os, const RunConfig& config,
                            const std::vector<SweepRow>& rows) {
  using detail::format_double;
  os << "# fwmsim sweep\n";
  os << "# schema=" << kSweepSchemaVersion << '\n';
  os << "# initial=" << distribution_kind_name(config.initial) << " mean="
     << format_double(config.mean) << " chi=" << format_double(config.chi)
     << " chi_t_min=" << format_double(config.chi_t_min)
     << " chi_t_max=" << format_double(config.chi_t_max) << " points=" << config.points << '\n';
  os << "# eps_trunc=" << format_double(config.eps_trunc)
     << " block_cutoff=" << format_double(config.block_cutoff)
     << " lo_floor=" << format_double(config.lo_floor)
     << " prune_threshold=" << format_double(config.prune_threshold)
     << " engine=" << moment_engine_name(config.engine) << '\n';
  os << "chi_t,n0,n1,n2,lo_population,defined";
  for (const char* name : moment_column_names()) os << ',' << name;
  for (Criterion c : kAllCriteria) {
    if (!config.criteria_enabled[static_cast<std::size_t>(c)]) continue;
    const char* name = criterion_name(c);
    os << ',' << name << "_lhs," << name << "_rhs," << name << "_margin," << name << "_violated,"
       << name << "_sign," << name << "_direction," << name << "_defined";
  }
  os << '\n';
  for (const SweepRow& row : rows) {
    os << format_double(row.chi_t) << ',' << format_double(row.n0) << ',' << format_double(row.n1)
       << ',' << format_double(row.n2) << ',' << format_double(row.lo_population) << ','
       << (row.defined ? 1 : 0);
    for (double v : moment_values(row.moments)) os << ',' << format_double(v);
    for (Criterion c : kAllCriteria) {
      if (!config.criteria_enabled[static_cast<std::size_t>(c)]) continue;
      detail::write_criterion_cells(os, row.report[c]);
    }
    os << '\n';
  }
}

// ---------------------------------------------------------------------------
// CSV input (comment lines ignored). Used by the round-trip tests and by
// the standalone criteria evaluator.

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  int index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return static_cast<int>(i);
    return -1;
  }
};

inline CsvTable read_csv(std::istream& is) {
  CsvTable table;
  std::string line;
  auto split = [](const std::string& text) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(text);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!text.empty() && text.back() == ',') cells.emplace_back();
    return cells;
  };
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (table.columns.empty()) {
      table.columns = split(line);
    } else {
      table.rows.push_back(split(line));
    }
  }
  return table;
}

/// Reads the moment columns of one CSV row. Means default to zero and the
/// combined variances are derived from variances and covariances when
/// their columns are absent.
inline QuadratureMoments moments_from_csv_row(const CsvTable& table,
                                              const std::vector<std::string>& row) {
  auto required = [&](const char* name) {
    int idx = table.index(name);
    if (idx < 0) throw ConfigError(std::string("moment CSV is missing column '") + name + "'");
    return std::stod(row.at(static_cast<std::size_t>(idx)));
  };
  auto optional = [&](const char* name, double fallback) {
    int idx = table.index(name);
    if (idx < 0) return fallback;
    return std::stod(row.at(static_cast<std::size_t>(idx)));
  };
  QuadratureMoments m;
  m.var_x1 = required("var_x1");
  m.var_y1 = required("var_y1");
  m.var_x2 = required("var_x2");
  m.var_y2 = required("var_y2");
  m.cov_x1x2 = required("cov_x1x2");
  m.cov_y1y2 = required("cov_y1y2");
  m.pop_a1 = required("pop_a1");
  m.pop_a2 = required("pop_a2");
  m.pop_b1 = required("pop_b1");
  m.pop_b2 = required("pop_b2");
  m.mean_x1 = optional("mean_x1", 0.0);
  m.mean_y1 = optional("mean_y1", 0.0);
  m.mean_x2 = optional("mean_x2", 0.0);
  m.mean_y2 = optional("mean_y2", 0.0);
  m.var_x_plus = optional("var_x_plus", m.var_x1 + m.var_x2 + 2.0 * m.cov_x1x2);
  m.var_x_minus = optional("var_x_minus", m.var_x1 + m.var_x2 - 2.0 * m.cov_x1x2);
  m.var_y_plus = optional("var_y_plus", m.var_y1 + m.var_y2 + 2.0 * m.cov_y1y2);
  m.var_y_minus = optional("var_y_minus", m.var_y1 + m.var_y2 - 2.0 * m.cov_y1y2);
  return m;
}

inline void write_criteria_csv(std::ostream& os, const std::vector<CriteriaReport>& reports) {
  os << "# fwmsim criteria\n# schema=" << kSweepSchemaVersion << '\n';
  os << "row";
  for (Criterion c : kAllCriteria) {
    const char* name = criterion_name(c);
    os << ',' << name << "_lhs," << name << "_rhs," << name << "_margin," << name << "_violated,"
       << name << "_sign," << name << "_direction," << name << "_defined";
  }
  os << '\n';
  for (std::size_t i = 0; i < reports.size(); ++i) {
    os << i;
    for (Criterion c : kAllCriteria) detail::write_criterion_cells(os, reports[i][c]);
    os << '\n';
  }
}

// ---------------------------------------------------------------------------
// Multi-N comparison on the scaled time axis N chi t, with the
// undepleted-pump reference curves alongside.

struct CompareConfig {
  std::vector<std::int64_t> particle_numbers;
  double chi = 1.0;
  double n_chi_t_max = 6.0;
  int points = 400;
  double lo_floor = kDefaultLoFloor;

  void validate() const {
    if (particle_numbers.empty())
      throw ConfigError("config field 'numbers' must list at least one particle number");
    for (std::int64_t n : particle_numbers)
      if (n < 1) throw ConfigError("config field 'numbers' must contain positive entries");
    if (points < 2) throw ConfigError("config field 'points' must be at least 2");
    if (!(n_chi_t_max > 0.0)) throw ConfigError("config field 'n_chi_t_max' must be positive");
    if (!(chi > 0.0)) throw ConfigError("config field 'chi' must be positive");
    if (!(lo_floor > 0.0)) throw ConfigError("config field 'lo_floor' must be positive");
  }
};

struct CompareCell {
  double rescaled_separability = std::numeric_limits<double>::quiet_NaN();
  double rescaled_epr_sum = std::numeric_limits<double>::quiet_NaN();
  double rescaled_epr_reid = std::numeric_limits<double>::quiet_NaN();
  double depletion = 0.0;
  bool defined = false;
};

struct CompareRow {
  double n_chi_t = 0.0;
  std::vector<CompareCell> per_number;
  double pump_separability = 0.0;
  double pump_reid = 0.0;
};

inline std::vector<CompareRow> compare_sizes(const CompareConfig& config) {
  config.validate();
  std::vector<CompareRow> rows(static_cast<std::size_t>(config.points));
  const double step = config.n_chi_t_max / static_cast<double>(config.points - 1);
  for (int j = 0; j < config.points; ++j) {
    auto& row = rows[static_cast<std::size_t>(j)];
    row.n_chi_t = step * static_cast<double>(j);
    const PumpCriteriaPoint pump = pump_criteria_curve(row.n_chi_t);
    row.pump_separability = pump.duan_lhs;
    row.pump_reid = pump.reid_product;
    row.per_number.resize(config.particle_numbers.size());
  }
  for (std::size_t i = 0; i < config.particle_numbers.size(); ++i) {
    const std::int64_t n = config.particle_numbers[i];
    BlockEvolver evolver({config.chi, n});
    std::vector<double> times(rows.size());
    for (std::size_t j = 0; j < rows.size(); ++j)
      times[j] = rows[j].n_chi_t / (static_cast<double>(n) * config.chi);
    Eigen::MatrixXcd grid = evolver.evolve_grid(ReducedState::fock_start(n), times);
    ReducedState state;
    state.total_number = n;
    state.coeffs.resize(static_cast<std::size_t>(grid.rows()));
    for (std::size_t j = 0; j < rows.size(); ++j) {
      for (Eigen::Index m = 0; m < grid.rows(); ++m)
        state.coeffs[static_cast<std::size_t>(m)] = grid(m, static_cast<Eigen::Index>(j));
      RawMomentTable raw = reduced_raw_moments(state);
      CompareCell& cell = rows[j].per_number[i];
      cell.depletion = 1.0 - (raw.pop_b1 + raw.pop_b2) / static_cast<double>(n);
      try {
        QuadratureMoments moments = normalize_moments(raw, config.lo_floor);
        const auto rescaled = rescaled_criteria(moments);
        cell.rescaled_separability = rescaled[0].defined
                                         ? rescaled[0].lhs
                                         : std::numeric_limits<double>::quiet_NaN();
        cell.rescaled_epr_sum = rescaled[1].defined ? rescaled[1].lhs
                                                    : std::numeric_limits<double>::quiet_NaN();
        cell.rescaled_epr_reid = rescaled[2].defined ? rescaled[2].lhs
                                                     : std::numeric_limits<double>::quiet_NaN();
        cell.defined = rescaled[0].defined;
      } catch (const DegenerateNormalization&) {
        cell.defined = false;
      }
    }
  }
  return rows;
}

inline void write_compare_csv(std::ostream& os, const CompareConfig& config,
                              const std::vector<CompareRow>& rows) {
  using detail::format_double;
  os << "# fwmsim compare\n# schema=" << kSweepSchemaVersion << '\n';
  os << "# chi=" << format_double(config.chi) << " n_chi_t_max=" << format_double(config.n_chi_t_max)
     << " points=" << config.points << '\n';
  os << "n_chi_t";
  for (std::int64_t n : config.particle_numbers) {
    os << ",N" << n << "_rescaled_separability,N" << n << "_rescaled_epr_sum,N" << n
       << "_rescaled_epr_reid,N" << n << "_depletion,N" << n << "_defined";
  }
  os << ",pump_separability,pump_epr_reid\n";
  for (const CompareRow& row : rows) {
    os << format_double(row.n_chi_t);
    for (const CompareCell& cell : row.per_number) {
      os << ',' << format_double(cell.rescaled_separability) << ','
         << format_double(cell.rescaled_epr_sum) << ',' << format_double(cell.rescaled_epr_reid)
         << ',' << format_double(cell.depletion) << ',' << (cell.defined ? 1 : 0);
    }
    os << ',' << format_double(row.pump_separability) << ',' << format_double(row.pump_reid)
       << '\n';
  }
}

}  // namespace fwm
