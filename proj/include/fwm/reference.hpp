#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "fwm/ladder.hpp"

namespace fwm {

/// Brute-force evolution under a ladder-operator Hamiltonian: enumerates
/// the basis reachable from the initial kets, builds the dense Hermitian
/// matrix on that subspace and exponentiates it by eigendecomposition.
///
/// This is the slow, generic oracle against which the structured solvers
/// are checked; it knows nothing about the model beyond the operator
/// monomials it is handed.
struct ReferenceEvolverOptions {
  std::size_t max_dimension = 20000;
  /// Optional basis filter; kets failing it are projected out
  /// (truncated Hamiltonian, still Hermitian).
  std::function<bool(const Occupation&)> keep;
};

class ReferenceEvolver {
public:
  using Options = ReferenceEvolverOptions;

  ReferenceEvolver(const SparseState& initial, const LadderPolynomial& hamiltonian,
                   const Options& options = Options())
      : mode_count_(initial.mode_count()), prune_threshold_(initial.prune_threshold()) {
    // Reachable-basis closure, kept in key order for determinism.
    std::set<std::uint64_t> basis;
    std::vector<std::uint64_t> frontier;
    initial.for_each([&](const Occupation& ket, Complex) {
      if (basis.insert(ket.key()).second) frontier.push_back(ket.key());
    });
    while (!frontier.empty()) {
      std::vector<std::uint64_t> next;
      for (std::uint64_t key : frontier) {
        SparseState ket = SparseState::basis_ket(Occupation::from_key(key, mode_count_), 0.0);
        for (const auto& term : hamiltonian) {
          apply_ladder(ket, term).for_each([&](const Occupation& image, Complex) {
            if (options.keep && !options.keep(image)) return;
            if (basis.insert(image.key()).second) next.push_back(image.key());
          });
        }
      }
      if (basis.size() > options.max_dimension)
        throw ResourceError("ReferenceEvolver: reachable basis exceeds the configured limit",
                            basis.size());
      frontier = std::move(next);
    }

    keys_.assign(basis.begin(), basis.end());
    std::map<std::uint64_t, int> index;
    for (std::size_t i = 0; i < keys_.size(); ++i) index[keys_[i]] = static_cast<int>(i);

    const auto dim = static_cast<Eigen::Index>(keys_.size());
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
      SparseState ket = SparseState::basis_ket(Occupation::from_key(keys_[j], mode_count_), 0.0);
      for (const auto& term : hamiltonian) {
        apply_ladder(ket, term).for_each([&](const Occupation& image, Complex coeff) {
          auto it = index.find(image.key());
          if (it == index.end()) return;  // projected out by the basis filter
          h(it->second, j) += coeff;
        });
      }
    }
    double scale = h.cwiseAbs().maxCoeff();
    if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, scale))
      throw ContractViolation("ReferenceEvolver: Hamiltonian is not Hermitian on the basis");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    eigenvalues_ = solver.eigenvalues();
    eigenvectors_ = solver.eigenvectors();

    Eigen::VectorXcd c0 = Eigen::VectorXcd::Zero(dim);
    initial.for_each([&](const Occupation& ket, Complex amp) { c0[index.at(ket.key())] = amp; });
    initial_in_eigenbasis_ = eigenvectors_.adjoint() * c0;
  }

  std::size_t dimension() const noexcept { return keys_.size(); }
  const Eigen::VectorXd& eigenvalues() const noexcept { return eigenvalues_; }

  /// exp(-i H t) |initial>.
  SparseState evolve(double time) const {
    Eigen::VectorXcd phased = initial_in_eigenbasis_;
    for (Eigen::Index k = 0; k < phased.size(); ++k)
      phased[k] *= std::exp(Complex{0.0, -eigenvalues_[k] * time});
    Eigen::VectorXcd c = eigenvectors_ * phased;
    SparseState out(mode_count_, prune_threshold_);
    for (std::size_t i = 0; i < keys_.size(); ++i)
      out.add_unchecked(keys_[i], c[static_cast<Eigen::Index>(i)]);
    return out;
  }

private:
  int mode_count_;
  double prune_threshold_;
  std::vector<std::uint64_t> keys_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXcd eigenvectors_;
  Eigen::VectorXcd initial_in_eigenbasis_;
};

}  // namespace fwm
