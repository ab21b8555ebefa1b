// Command-line front end: sweep runner, multi-N comparison, standalone
// criteria evaluation on moment tables, and a built-in self-check against
// the brute-force oracle.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fwm/criteria.hpp"
#include "fwm/reference.hpp"
#include "fwm/sweep.hpp"

namespace {

fwm::DistributionKind parse_kind(const std::string& name) {
  static const std::map<std::string, fwm::DistributionKind> kinds = {
      {"fock", fwm::DistributionKind::fock},
      {"poissonian", fwm::DistributionKind::poissonian},
      {"thermal", fwm::DistributionKind::thermal},
      {"coherent", fwm::DistributionKind::coherent_pure},
  };
  auto it = kinds.find(name);
  if (it == kinds.end())
    throw fwm::ConfigError("config field 'initial' must be one of fock, poissonian, thermal, coherent");
  return it->second;
}

std::array<bool, fwm::kCriterionCount> parse_criteria(const std::string& selection) {
  std::array<bool, fwm::kCriterionCount> enabled{};
  if (selection == "all") {
    enabled.fill(true);
    return enabled;
  }
  std::stringstream ss(selection);
  std::string token;
  while (std::getline(ss, token, ',')) {
    bool found = false;
    for (fwm::Criterion c : fwm::kAllCriteria) {
      if (token == fwm::criterion_name(c)) {
        enabled[static_cast<std::size_t>(c)] = true;
        found = true;
        break;
      }
    }
    if (!found)
      throw fwm::ConfigError("config field 'criteria' names unknown criterion '" + token + "'");
  }
  return enabled;
}

/// Writes to the named file, or to stdout for "-".
class OutputTarget {
public:
  explicit OutputTarget(const std::string& path) {
    if (path != "-") {
      file_.open(path);
      if (!file_) throw fwm::ConfigError("config field 'out': cannot open '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
  std::ofstream file_;
};

// --- validate: quick oracle and invariant checks at small N --------------

struct CheckResult {
  std::string name;
  bool pass = false;
  double worst = 0.0;
  std::string detail;
};

void report(std::vector<CheckResult>& all, const std::string& name, double worst, double bound) {
  CheckResult r;
  r.name = name;
  r.worst = worst;
  r.pass = worst <= bound;
  std::ostringstream os;
  os << "max deviation " << worst << " (bound " << bound << ")";
  r.detail = os.str();
  all.push_back(r);
}

double check_couplings(std::int64_t max_number) {
  double worst = 0.0;
  const fwm::LadderPolynomial h = fwm::four_wave_mixing_hamiltonian(1.0);
  for (std::int64_t n = 0; n <= max_number; ++n) {
    fwm::TridiagonalHamiltonian tri = fwm::build_hamiltonian({1.0, n});
    for (std::size_t m = 0; m + 1 < static_cast<std::size_t>(fwm::reduced_dimension(n)); ++m) {
      auto mm = static_cast<std::uint32_t>(m);
      auto pump = static_cast<std::uint32_t>(n - 2 * static_cast<std::int64_t>(m));
      fwm::SparseState ket = fwm::SparseState::basis_ket({pump, mm, mm});
      fwm::SparseState image = fwm::apply_ladder(ket, h);
      fwm::Complex up = image.amplitude({pump - 2, mm + 1, mm + 1});
      worst = std::max(worst, std::abs(up - fwm::Complex{0.0, tri.couplings[m]}));
    }
  }
  return worst;
}

double check_evolution(std::int64_t max_number) {
  double worst = 0.0;
  const fwm::LadderPolynomial h = fwm::four_wave_mixing_hamiltonian(1.0);
  for (std::int64_t n : {std::int64_t{3}, std::int64_t{8}, std::int64_t{13}, max_number}) {
    fwm::ReducedState start = fwm::ReducedState::fock_start(n);
    fwm::ReferenceEvolver oracle(fwm::lift_to_sparse(start), h);
    fwm::BlockEvolver evolver({1.0, n});
    for (double t : {0.0, 0.037, 0.11, 0.29}) {
      fwm::SparseState expected = oracle.evolve(t);
      fwm::SparseState got = fwm::lift_to_sparse(evolver.evolve(start, t));
      expected.for_each([&](const fwm::Occupation& ket, fwm::Complex amp) {
        worst = std::max(worst, std::abs(amp - got.amplitude(ket)));
      });
    }
  }
  return worst;
}

double check_moments(std::int64_t max_number, unsigned seed) {
  double worst = 0.0;
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> pick_time(0.0, 0.5);
  for (std::int64_t n = 1; n <= max_number; ++n) {
    fwm::BlockEvolver evolver({1.0, n});
    for (int rep = 0; rep < 2; ++rep) {
      double t = pick_time(rng) / std::max<double>(1.0, static_cast<double>(n) / 4.0);
      fwm::ReducedState state = evolver.evolve(fwm::ReducedState::fock_start(n), t);
      fwm::QuadratureMoments fast = fwm::reduced_quadrature_moments(state);
      fwm::SparseState split = fwm::split_local_oscillator(fwm::lift_to_sparse(state));
      fwm::QuadratureMoments oracle =
          fwm::quadrature_moments(split, fwm::standard_measured_set(split));
      const auto a = fwm::moment_values(fast);
      const auto b = fwm::moment_values(oracle);
      for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    }
  }
  return worst;
}

double check_commutator(std::int64_t number) {
  double worst = 0.0;
  fwm::BlockEvolver evolver({1.0, number});
  for (double t : {0.02, 0.08, 0.2}) {
    fwm::ReducedState state = evolver.evolve(fwm::ReducedState::fock_start(number), t);
    fwm::SparseState split = fwm::split_local_oscillator(fwm::lift_to_sparse(state));
    fwm::MeasuredQuadratureSet set = fwm::standard_measured_set(split);
    for (int system : {1, 2}) {
      const double lo_pop = system == 1 ? set.lo_norm1 : set.lo_norm2;
      fwm::Complex measured = fwm::commutator_expectation(split, set, system);
      double signal_pop =
          fwm::expectation(split, fwm::LadderExpression::number(system == 1 ? set.signal1
                                                                            : set.signal2))
              .real();
      fwm::Complex closed{0.0, -2.0 * (lo_pop - signal_pop) / lo_pop};
      worst = std::max(worst, std::abs(measured - closed));
    }
  }
  return worst;
}

double check_splitter(unsigned seed) {
  double worst = 0.0;
  std::mt19937 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<std::uint32_t> count(0, 10);
  for (int rep = 0; rep < 20; ++rep) {
    fwm::SparseState state(2);
    for (int k = 0; k < 6; ++k)
      state.add({count(rng), count(rng)}, {normal(rng), normal(rng)});
    if (state.size() == 0) continue;
    state = state.normalized();
    fwm::BeamSplitterSpec spec = fwm::BeamSplitterSpec::balanced(0, 1);
    fwm::SparseState once = fwm::apply_beam_splitter(state, spec);
    worst = std::max(worst, std::abs(once.norm() - 1.0));
    fwm::SparseState twice = fwm::apply_beam_splitter(once, spec);
    state.for_each([&](const fwm::Occupation& ket, fwm::Complex amp) {
      worst = std::max(worst, std::abs(amp - twice.amplitude(ket)));
    });
  }
  return worst;
}

int run_validate(std::int64_t max_number, unsigned seed) {
  std::vector<CheckResult> results;
  report(results, "hamiltonian couplings vs ladder-operator oracle", check_couplings(max_number),
         1e-10);
  report(results, "block evolution vs brute-force matrix exponential", check_evolution(max_number),
         1e-8);
  report(results, "reduced-basis moments vs 4-mode oracle pipeline", check_moments(max_number, seed),
         1e-8);
  report(results, "quadrature commutator identity", check_commutator(std::min<std::int64_t>(max_number, 16)),
         1e-8);
  report(results, "beam-splitter unitarity and involution", check_splitter(seed + 1), 1e-9);
  int failures = 0;
  for (const CheckResult& r : results) {
    std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.name << ": " << r.detail << '\n';
    if (!r.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Degenerate four-wave mixing: exact dynamics, number-conserving homodyne "
               "moments, and entanglement criteria"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a key=value file");

  // --- simulate ---
  auto* simulate = app.add_subcommand("simulate", "Run one sweep and write a CSV table");
  std::string sim_initial = "fock";
  std::int64_t sim_number = 100;
  double sim_mean = -1.0;
  std::string sim_criteria = "all";
  std::string sim_engine = "fast";
  std::string sim_out = "-";
  fwm::RunConfig config;
  simulate->add_option("--initial", sim_initial, "Initial distribution: fock, poissonian, thermal, coherent");
  simulate->add_option("--number,-N", sim_number, "Total boson number (fock)");
  simulate->add_option("--mean", sim_mean, "Distribution mean (poissonian, thermal, coherent)");
  simulate->add_option("--chi", config.chi, "Coupling strength; times are reported as chi*t");
  simulate->add_option("--t-min", config.chi_t_min, "Grid start in chi*t");
  simulate->add_option("--t-max", config.chi_t_max, "Grid end in chi*t");
  simulate->add_option("--points", config.points, "Number of grid points");
  simulate->add_option("--criteria", sim_criteria, "Comma-separated criterion names, or 'all'");
  simulate->add_option("--eps-trunc", config.eps_trunc, "Distribution truncation tail mass");
  simulate->add_option("--block-cutoff", config.block_cutoff, "Relative weight cutoff for N blocks");
  simulate->add_option("--lo-floor", config.lo_floor, "Local-oscillator population floor");
  simulate->add_option("--prune-threshold", config.prune_threshold, "Sparse-state prune threshold");
  simulate->add_option("--engine", sim_engine, "Moment engine: fast (reduced basis) or oracle");
  simulate->add_option("--threads", config.threads, "Worker threads for independent N blocks");
  simulate->add_option("--out,-o", sim_out, "Output path, '-' for stdout");

  // --- compare ---
  auto* compare = app.add_subcommand("compare", "Rescaled criteria for several particle numbers on the N*chi*t axis");
  fwm::CompareConfig compare_config;
  std::string cmp_out = "-";
  compare->add_option("--numbers", compare_config.particle_numbers, "Particle numbers (repeat or comma-separate)")
      ->delimiter(',');
  compare->add_option("--chi", compare_config.chi, "Coupling strength");
  compare->add_option("--nchit-max", compare_config.n_chi_t_max, "Grid end in N*chi*t");
  compare->add_option("--points", compare_config.points, "Number of grid points");
  compare->add_option("--lo-floor", compare_config.lo_floor, "Local-oscillator population floor");
  compare->add_option("--out,-o", cmp_out, "Output path, '-' for stdout");

  // --- criteria ---
  auto* criteria_cmd = app.add_subcommand("criteria", "Evaluate all criteria on a moment CSV");
  std::string crit_in;
  std::string crit_out = "-";
  criteria_cmd->add_option("--moments", crit_in, "Input CSV with moment columns")->required();
  criteria_cmd->add_option("--out,-o", crit_out, "Output path, '-' for stdout");

  // --- validate ---
  auto* validate = app.add_subcommand("validate", "Cross-check fast paths against the brute-force oracle");
  std::int64_t val_number = 20;
  unsigned val_seed = 20240811;
  validate->add_option("--max-number", val_number, "Largest total boson number to check");
  validate->add_option("--seed", val_seed, "Random seed for the sampled checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      config.initial = parse_kind(sim_initial);
      if (config.initial == fwm::DistributionKind::fock) {
        if (sim_number < 0) throw fwm::ConfigError("config field 'number' must be non-negative");
        config.mean = static_cast<double>(sim_number);
      } else {
        if (sim_mean < 0.0)
          throw fwm::ConfigError("config field 'mean' is required for non-fock distributions");
        config.mean = sim_mean;
      }
      config.engine = [&] {
        if (sim_engine == "fast") return fwm::MomentEngine::fast;
        if (sim_engine == "oracle") return fwm::MomentEngine::oracle;
        throw fwm::ConfigError("config field 'engine' must be 'fast' or 'oracle'");
      }();
      config.criteria_enabled = parse_criteria(sim_criteria);
      std::vector<fwm::SweepRow> rows = fwm::run_sweep(config);
      OutputTarget out(sim_out);
      fwm::write_sweep_csv(out.stream(), config, rows);
      return 0;
    }
    if (compare->parsed()) {
      std::vector<fwm::CompareRow> rows = fwm::compare_sizes(compare_config);
      OutputTarget out(cmp_out);
      fwm::write_compare_csv(out.stream(), compare_config, rows);
      return 0;
    }
    if (criteria_cmd->parsed()) {
      std::ifstream in(crit_in);
      if (!in) throw fwm::ConfigError("config field 'moments': cannot open '" + crit_in + "'");
      fwm::CsvTable table = fwm::read_csv(in);
      std::vector<fwm::CriteriaReport> reports;
      reports.reserve(table.rows.size());
      for (const auto& row : table.rows)
        reports.push_back(fwm::evaluate_all(fwm::moments_from_csv_row(table, row)));
      OutputTarget out(crit_out);
      fwm::write_criteria_csv(out.stream(), reports);
      return 0;
    }
    if (validate->parsed()) {
      return run_validate(val_number, val_seed);
    }
  } catch (const fwm::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
