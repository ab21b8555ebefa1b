#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fwm/ladder.hpp"
#include "fwm/sparse_state.hpp"

extern "C" {
void dstedc_(const char* compz, const int* n, double* d, double* e, double* z, const int* ldz,
             double* work, const int* lwork, int* iwork, const int* liwork, int* info);
}

namespace fwm {

struct ModelParams {
  double chi = 1.0;
  std::int64_t total_number = 0;

  void validate() const {
    if (!(chi > 0.0)) throw ContractViolation("ModelParams: chi must be positive");
    if (total_number < 0) throw ContractViolation("ModelParams: total number must be non-negative");
  }
};

/// Dimension of the pair-symmetric subspace for N total bosons.
inline std::int64_t reduced_dimension(std::int64_t total_number) { return total_number / 2 + 1; }

/// Coefficients c_m over the basis |N-2m, m, m>, m = 0..floor(N/2).
struct ReducedState {
  std::int64_t total_number = 0;
  std::vector<Complex> coeffs;

  static ReducedState fock_start(std::int64_t total_number) {
    if (total_number < 0) throw ContractViolation("ReducedState: negative total number");
    ReducedState state;
    state.total_number = total_number;
    state.coeffs.assign(static_cast<std::size_t>(reduced_dimension(total_number)), Complex{0.0, 0.0});
    state.coeffs[0] = Complex{1.0, 0.0};
    return state;
  }

  double norm() const {
    double sum = 0.0;
    for (const auto& c : coeffs) sum += std::norm(c);
    return std::sqrt(sum);
  }

  void validate() const {
    if (static_cast<std::int64_t>(coeffs.size()) != reduced_dimension(total_number))
      throw ContractViolation("ReducedState: coefficient count does not match the total number");
  }
};

/// Off-diagonal couplings of the model in the reduced basis, in units of
/// chi: <m+1|H|m> = i chi g_m. The diagonal vanishes identically.
struct TridiagonalHamiltonian {
  std::int64_t total_number = 0;
  std::vector<double> couplings;
};

inline TridiagonalHamiltonian build_hamiltonian(const ModelParams& params) {
  params.validate();
  const std::int64_t n = params.total_number;
  TridiagonalHamiltonian h;
  h.total_number = n;
  h.couplings.reserve(static_cast<std::size_t>(n / 2));
  for (std::int64_t m = 0; m + 1 < reduced_dimension(n); ++m) {
    double pump = static_cast<double>(n - 2 * m) * static_cast<double>(n - 2 * m - 1);
    h.couplings.push_back(std::sqrt(pump) * static_cast<double>(m + 1));
  }
  return h;
}

/// The model Hamiltonian as ladder monomials on a 3-mode state:
/// i chi (a0 a0 a1^dag a2^dag  -  a0^dag a0^dag a1 a2).
inline LadderPolynomial four_wave_mixing_hamiltonian(double chi) {
  using LE = LadderExpression;
  LE down = LE::annihilate(0) * LE::annihilate(0) * LE::create(1) * LE::create(2);
  down.scale(Complex{0.0, chi});
  LE up = LE::create(0) * LE::create(0) * LE::annihilate(1) * LE::annihilate(2);
  up.scale(Complex{0.0, -chi});
  return {down, up};
}

struct ModePopulations {
  double n0 = 0.0;
  double n1 = 0.0;
  double n2 = 0.0;
};

inline ModePopulations mode_populations(const ReducedState& state) {
  state.validate();
  double pairs = 0.0;
  double pump = 0.0;
  for (std::size_t m = 0; m < state.coeffs.size(); ++m) {
    double p = std::norm(state.coeffs[m]);
    pairs += p * static_cast<double>(m);
    pump += p * static_cast<double>(state.total_number - 2 * static_cast<std::int64_t>(m));
  }
  return {pump, pairs, pairs};
}

inline SparseState lift_to_sparse(const ReducedState& state,
                                  double prune_threshold = kDefaultPruneThreshold) {
  state.validate();
  SparseState out(3, prune_threshold);
  for (std::size_t m = 0; m < state.coeffs.size(); ++m) {
    auto mm = static_cast<std::uint32_t>(m);
    auto pump = static_cast<std::uint32_t>(state.total_number - 2 * static_cast<std::int64_t>(m));
    out.add(Occupation{pump, mm, mm}, state.coeffs[m]);
  }
  return out;
}

/// Inverse of lift_to_sparse; amplitudes outside the reduced basis are a
/// contract violation.
inline ReducedState project_from_sparse(const SparseState& state, std::int64_t total_number) {
  if (state.mode_count() != 3)
    throw ContractViolation("project_from_sparse: expected a 3-mode state");
  ReducedState out;
  out.total_number = total_number;
  out.coeffs.assign(static_cast<std::size_t>(reduced_dimension(total_number)), Complex{0.0, 0.0});
  state.for_each([&](const Occupation& ket, Complex amp) {
    if (ket[1] != ket[2] || ket[0] + 2 * ket[1] != static_cast<std::uint64_t>(total_number))
      throw ContractViolation("project_from_sparse: ket outside the reduced basis");
    out.coeffs[ket[1]] = amp;
  });
  return out;
}

struct EvolverOptions {
  /// Refusal threshold for the eigendecomposition workspace; the default
  /// admits blocks up to roughly N = 2e4.
  std::size_t memory_budget_bytes = std::size_t{3} << 30;
};

/// Exact propagator for one total-number block, built once and reused
/// across a time sweep.
///
/// The phase gauge c_m -> (-i)^m c_m turns the purely imaginary
/// tridiagonal Hamiltonian into a real symmetric one, which is
/// diagonalized with LAPACK's divide-and-conquer solver. Immutable once
/// constructed; evolve calls for different times may run concurrently.
class BlockEvolver {
public:
  explicit BlockEvolver(const ModelParams& params, const EvolverOptions& options = {})
      : params_(params) {
    params.validate();
    const std::int64_t dim = reduced_dimension(params.total_number);
    const auto d = static_cast<std::size_t>(dim);
    const std::size_t needed = 8 * (2 * d * d + 16 * d + 64);
    if (needed > options.memory_budget_bytes)
      throw ResourceError("BlockEvolver: eigendecomposition workspace for dimension " +
                              std::to_string(dim) + " exceeds the memory budget",
                          d);

    eigenvalues_.resize(dim);
    eigenvectors_.resize(dim, dim);
    if (dim == 1) {
      eigenvalues_[0] = 0.0;
      eigenvectors_(0, 0) = 1.0;
      return;
    }

    TridiagonalHamiltonian h = build_hamiltonian(params);
    std::vector<double> diag(d, 0.0);
    std::vector<double> off(h.couplings);
    for (auto& g : off) g *= params.chi;

    int n = static_cast<int>(dim);
    int info = 0;
    int lwork = -1, liwork = -1;
    double work_query = 0.0;
    int iwork_query = 0;
    dstedc_("I", &n, diag.data(), off.data(), eigenvectors_.data(), &n, &work_query, &lwork,
            &iwork_query, &liwork, &info);
    if (info != 0) throw std::runtime_error("BlockEvolver: eigensolver workspace query failed");
    lwork = static_cast<int>(work_query);
    liwork = iwork_query;
    std::vector<double> work(static_cast<std::size_t>(lwork));
    std::vector<int> iwork(static_cast<std::size_t>(liwork));
    dstedc_("I", &n, diag.data(), off.data(), eigenvectors_.data(), &n, work.data(), &lwork,
            iwork.data(), &liwork, &info);
    if (info != 0) throw std::runtime_error("BlockEvolver: eigensolver failed to converge");
    eigenvalues_ = Eigen::Map<Eigen::VectorXd>(diag.data(), dim);
  }

  const ModelParams& params() const noexcept { return params_; }

  /// Eigenvalues of the Hamiltonian (chi included), ascending.
  const Eigen::VectorXd& eigenvalues() const noexcept { return eigenvalues_; }

  /// exp(-i H t)|initial> for every requested time; column j holds the
  /// coefficients at times[j].
  Eigen::MatrixXcd evolve_grid(const ReducedState& initial, std::span<const double> times) const {
    initial.validate();
    if (initial.total_number != params_.total_number)
      throw ContractViolation("BlockEvolver: state belongs to a different total-number block");
    const Eigen::Index dim = eigenvalues_.size();
    const auto n_times = static_cast<Eigen::Index>(times.size());

    // Gauge in, project onto the eigenbasis.
    Eigen::VectorXd g_re(dim), g_im(dim);
    for (Eigen::Index m = 0; m < dim; ++m) {
      Complex c = initial.coeffs[static_cast<std::size_t>(m)] * gauge_phase(m);
      g_re[m] = c.real();
      g_im[m] = c.imag();
    }
    Eigen::VectorXd w_re = eigenvectors_.transpose() * g_re;
    Eigen::VectorXd w_im = eigenvectors_.transpose() * g_im;

    Eigen::MatrixXd phased_re(dim, n_times), phased_im(dim, n_times);
    for (Eigen::Index j = 0; j < n_times; ++j) {
      double t = times[static_cast<std::size_t>(j)];
      for (Eigen::Index k = 0; k < dim; ++k) {
        double cos_t = std::cos(eigenvalues_[k] * t);
        double sin_t = std::sin(eigenvalues_[k] * t);
        // e^{-i lambda t} (w_re + i w_im)
        phased_re(k, j) = cos_t * w_re[k] + sin_t * w_im[k];
        phased_im(k, j) = cos_t * w_im[k] - sin_t * w_re[k];
      }
    }
    Eigen::MatrixXd c_re = eigenvectors_ * phased_re;
    Eigen::MatrixXd c_im = eigenvectors_ * phased_im;

    Eigen::MatrixXcd out(dim, n_times);
    for (Eigen::Index m = 0; m < dim; ++m) {
      Complex undo = std::conj(gauge_phase(m));
      for (Eigen::Index j = 0; j < n_times; ++j)
        out(m, j) = undo * Complex{c_re(m, j), c_im(m, j)};
    }
    return out;
  }

  ReducedState evolve(const ReducedState& initial, double time) const {
    const double times[1] = {time};
    Eigen::MatrixXcd grid = evolve_grid(initial, times);
    ReducedState out;
    out.total_number = params_.total_number;
    out.coeffs.assign(grid.data(), grid.data() + grid.rows());
    return out;
  }

private:
  static Complex gauge_phase(Eigen::Index m) {
    switch (m & 3) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, -1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, 1.0};
    }
  }

  ModelParams params_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd eigenvectors_;
};

/// One-shot convenience wrapper; sweeps should hold a BlockEvolver.
inline ReducedState evolve(const ReducedState& initial, const ModelParams& params, double time,
                           const EvolverOptions& options = {}) {
  return BlockEvolver(params, options).evolve(initial, time);
}

}  // namespace fwm
