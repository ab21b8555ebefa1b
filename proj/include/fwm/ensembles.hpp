#pragma once

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "fwm/dynamics.hpp"
#include "fwm/homodyne.hpp"

namespace fwm {

inline constexpr double kDefaultTruncationEpsilon = 1e-10;
inline constexpr double kDefaultBlockCutoff = 1e-12;

enum class DistributionKind { fock, poissonian, thermal, coherent_pure, custom };

inline const char* distribution_kind_name(DistributionKind k) {
  switch (k) {
    case DistributionKind::fock: return "fock";
    case DistributionKind::poissonian: return "poissonian";
    case DistributionKind::thermal: return "thermal";
    case DistributionKind::coherent_pure: return "coherent";
    case DistributionKind::custom: return "custom";
  }
  return "unknown";
}

/// Distribution over the total boson number. weights[N] is the
/// probability of the N block; for coherent_pure the complex amplitudes
/// are retained as well, though every implemented observable conserves
/// total number, so only their moduli ever enter the moments.
struct NumberDistribution {
  DistributionKind kind = DistributionKind::fock;
  double mean = 0.0;
  std::vector<double> weights;
  std::vector<Complex> amplitudes;

  std::int64_t n_max() const { return static_cast<std::int64_t>(weights.size()) - 1; }

  double total_weight() const {
    double sum = 0.0;
    for (double w : weights) sum += w;
    return sum;
  }

  static NumberDistribution from_weights(std::vector<double> weights) {
    if (weights.empty()) throw ContractViolation("NumberDistribution: empty weight table");
    NumberDistribution dist;
    dist.kind = DistributionKind::custom;
    dist.weights = std::move(weights);
    for (std::size_t n = 0; n < dist.weights.size(); ++n) {
      if (dist.weights[n] < 0.0)
        throw ContractViolation("NumberDistribution: negative weight");
      dist.mean += dist.weights[n] * static_cast<double>(n);
    }
    return dist;
  }
};

/// Builds one of the named distributions, truncated at the smallest N_max
/// whose tail mass stays below eps_trunc.
inline NumberDistribution build_distribution(DistributionKind kind, double mean,
                                             double eps_trunc = kDefaultTruncationEpsilon) {
  if (mean < 0.0) throw ContractViolation("build_distribution: mean must be non-negative");
  if (!(eps_trunc > 0.0) || eps_trunc >= 1.0)
    throw ContractViolation("build_distribution: eps_trunc must lie in (0, 1)");
  NumberDistribution dist;
  dist.kind = kind;
  dist.mean = mean;
  switch (kind) {
    case DistributionKind::fock: {
      const double rounded = std::round(mean);
      if (std::abs(mean - rounded) > 1e-9)
        throw ContractViolation("build_distribution: fock requires an integer boson number");
      const auto n = static_cast<std::size_t>(rounded);
      dist.weights.assign(n + 1, 0.0);
      dist.weights[n] = 1.0;
      break;
    }
    case DistributionKind::poissonian:
    case DistributionKind::coherent_pure: {
      // p_{N+1} = p_N * mean / (N + 1); stop once the tail drops below eps.
      double p = std::exp(-mean);
      double cumulative = 0.0;
      std::int64_t n = 0;
      for (;;) {
        dist.weights.push_back(p);
        cumulative += p;
        if (1.0 - cumulative < eps_trunc) break;
        p *= mean / static_cast<double>(n + 1);
        ++n;
        if (n > 100000000)
          throw ResourceError("build_distribution: truncation did not converge",
                              static_cast<std::size_t>(n));
      }
      if (kind == DistributionKind::coherent_pure) {
        // alpha taken real and positive; c_N = e^{-|a|^2/2} a^N / sqrt(N!).
        dist.amplitudes.resize(dist.weights.size());
        for (std::size_t i = 0; i < dist.weights.size(); ++i)
          dist.amplitudes[i] = Complex{std::sqrt(dist.weights[i]), 0.0};
      }
      break;
    }
    case DistributionKind::thermal: {
      // p_N = mean^N / (1 + mean)^{N+1}; the tail after N is exactly
      // (mean / (1 + mean))^{N+1}.
      const double q = mean / (1.0 + mean);
      double p = 1.0 / (1.0 + mean);
      double tail = q;
      for (;;) {
        dist.weights.push_back(p);
        if (tail < eps_trunc) break;
        p *= q;
        tail *= q;
        if (dist.weights.size() > 100000000)
          throw ResourceError("build_distribution: truncation did not converge",
                              dist.weights.size());
      }
      break;
    }
    case DistributionKind::custom:
      throw ContractViolation("build_distribution: custom distributions come from from_weights");
  }
  return dist;
}

struct EnsembleOptions {
  double chi = 1.0;
  /// Blocks with weight below cutoff * max weight are skipped.
  double block_cutoff = kDefaultBlockCutoff;
  double lo_floor = kDefaultLoFloor;
  int threads = 1;
  EvolverOptions evolver;
};

/// Raw (unnormalized) moment tables of the ensemble at every requested
/// time. Each total-number block evolves independently from its Fock
/// start; every raw first and second moment is the weight-averaged sum
/// over blocks, reduced in ascending-N order so the result does not
/// depend on how blocks were scheduled.
inline std::vector<RawMomentTable> ensemble_raw_sweep(const NumberDistribution& dist,
                                                      std::span<const double> times,
                                                      const EnsembleOptions& options = {}) {
  if (dist.weights.empty()) throw ContractViolation("ensemble_raw_sweep: empty distribution");
  if (!(options.chi > 0.0)) throw ContractViolation("ensemble_raw_sweep: chi must be positive");

  double max_weight = 0.0;
  for (double w : dist.weights) max_weight = std::max(max_weight, w);
  const double cutoff = options.block_cutoff * max_weight;

  std::vector<std::int64_t> blocks;
  for (std::size_t n = 0; n < dist.weights.size(); ++n)
    if (dist.weights[n] > 0.0 && dist.weights[n] >= cutoff)
      blocks.push_back(static_cast<std::int64_t>(n));
  if (blocks.empty()) throw ContractViolation("ensemble_raw_sweep: no blocks above cutoff");

  std::vector<std::vector<RawMomentTable>> per_block(blocks.size());
  auto run_block = [&](std::size_t slot) {
    const std::int64_t n = blocks[slot];
    BlockEvolver evolver({options.chi, n}, options.evolver);
    Eigen::MatrixXcd grid = evolver.evolve_grid(ReducedState::fock_start(n), times);
    std::vector<RawMomentTable>& tables = per_block[slot];
    tables.resize(times.size());
    ReducedState state;
    state.total_number = n;
    state.coeffs.resize(static_cast<std::size_t>(grid.rows()));
    for (std::size_t j = 0; j < times.size(); ++j) {
      for (Eigen::Index m = 0; m < grid.rows(); ++m)
        state.coeffs[static_cast<std::size_t>(m)] = grid(m, static_cast<Eigen::Index>(j));
      tables[j] = reduced_raw_moments(state);
    }
  };

  const int thread_count = std::max(1, std::min<int>(options.threads,
                                                     static_cast<int>(blocks.size())));
  if (thread_count == 1) {
    for (std::size_t slot = 0; slot < blocks.size(); ++slot) run_block(slot);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure = nullptr;
    std::mutex failure_mutex;
    auto worker = [&] {
      for (;;) {
        std::size_t slot = next.fetch_add(1);
        if (slot >= blocks.size()) return;
        try {
          run_block(slot);
        } catch (...) {
          std::scoped_lock lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(thread_count));
    for (int i = 0; i < thread_count; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  std::vector<RawMomentTable> combined(times.size());
  for (std::size_t slot = 0; slot < blocks.size(); ++slot) {
    const double weight = dist.weights[static_cast<std::size_t>(blocks[slot])];
    for (std::size_t j = 0; j < times.size(); ++j)
      combined[j].accumulate(per_block[slot][j], weight);
  }
  return combined;
}

/// Normalized ensemble moments at one time.
inline QuadratureMoments ensemble_moments(const NumberDistribution& dist, double time,
                                          const EnsembleOptions& options = {}) {
  const double times[1] = {time};
  return normalize_moments(ensemble_raw_sweep(dist, times, options)[0], options.lo_floor);
}

}  // namespace fwm
