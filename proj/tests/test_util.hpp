#pragma once

// Shared helpers for the test suites: state construction shorthand, dense
// density-matrix comparison of ensembles (branch decomposition is not
// unique, so ensembles are compared through the density operator they
// induce), and random states/unitaries.

#include <complex>
#include <map>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "lofock/fock_state.hpp"

namespace lofock::test {

inline PureFockState state_of(
    int rails, int cutoff,
    std::initializer_list<std::pair<std::vector<int>, cx>> terms) {
  std::vector<std::pair<std::vector<int>, cx>> v(terms);
  return PureFockState::from_terms(FockLayout(rails, cutoff), v);
}

// Dense density matrix of an ensemble on the union of its branch supports.
// The key->row mapping is returned through `index` so two ensembles can be
// compared on a shared basis.
inline Eigen::MatrixXcd density_matrix(const StateEnsemble& ens,
                                       std::map<std::uint64_t, int>& index) {
  for (const auto& branch : ens.branches) {
    for (const auto& [key, amp] : branch.state.amplitudes()) {
      index.try_emplace(key, 0);
    }
  }
  int next = 0;
  for (auto& [key, row] : index) row = next++;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(next, next);
  for (const auto& branch : ens.branches) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(next);
    for (const auto& [key, amp] : branch.state.amplitudes()) v(index.at(key)) = amp;
    rho += branch.weight * v * v.adjoint();
  }
  return rho;
}

inline double density_distance(const StateEnsemble& a, const StateEnsemble& b) {
  std::map<std::uint64_t, int> index;
  const Eigen::MatrixXcd ra = density_matrix(a, index);
  Eigen::MatrixXcd rb = density_matrix(b, index);
  // `index` may have grown while scanning b; rebuild a on the shared basis.
  const Eigen::MatrixXcd ra2 = density_matrix(a, index);
  return (ra2 - rb).cwiseAbs().maxCoeff();
}

inline Eigen::Matrix2cd random_unitary_2x2(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::Matrix2cd g;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) g(i, j) = cx{normal(rng), normal(rng)};
  }
  Eigen::HouseholderQR<Eigen::Matrix2cd> qr(g);
  Eigen::Matrix2cd q = qr.householderQ();
  // Normalize column phases so Q is deterministic up to the generator.
  const Eigen::Matrix2cd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < 2; ++j) {
    const cx d = r(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

inline PureFockState random_state(const FockLayout& layout, int terms,
                                  std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> count(0, layout.cutoff());
  PureFockState::AmplitudeMap amps;
  std::vector<int> counts(static_cast<std::size_t>(layout.rail_count()));
  for (int t = 0; t < terms; ++t) {
    for (auto& c : counts) c = count(rng);
    amps[layout.pack(counts)] += cx{normal(rng), normal(rng)};
  }
  PureFockState state = PureFockState::from_map(layout, std::move(amps));
  return state.normalized();
}

}  // namespace lofock::test
