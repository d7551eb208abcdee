#include "lofock/sources.hpp"

#include <cmath>

namespace lofock {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

PureFockState state_of(int modes, int cutoff,
                       std::initializer_list<std::pair<std::vector<int>, cx>> terms) {
  std::vector<std::pair<std::vector<int>, cx>> v(terms);
  return PureFockState::from_terms(FockLayout(2 * modes, cutoff), v);
}

}  // namespace

double TwoQubitAmplitudes::norm_sq() const {
  return std::norm(a1) + std::norm(a2) + std::norm(a3) + std::norm(a4);
}

bool TwoQubitAmplitudes::is_normalized(double tol) const {
  return std::abs(norm_sq() - 1.0) <= tol;
}

TwoQubitAmplitudes TwoQubitAmplitudes::normalized() const {
  const double n = std::sqrt(norm_sq());
  if (n <= 0.0) throw std::invalid_argument("TwoQubitAmplitudes: zero vector");
  return TwoQubitAmplitudes{a1 / n, a2 / n, a3 / n, a4 / n};
}

PureFockState input_state(const TwoQubitAmplitudes& a, int cutoff) {
  if (!a.is_normalized())
    throw std::invalid_argument("input_state: amplitudes are not normalized");
  return state_of(2, cutoff,
                  {{{1, 0, 1, 0}, a.a1},
                   {{1, 0, 0, 1}, a.a2},
                   {{0, 1, 1, 0}, a.a3},
                   {{0, 1, 0, 1}, a.a4}});
}

PureFockState epr_pair(int cutoff) {
  return state_of(2, cutoff, {{{1, 0, 1, 0}, kInvSqrt2}, {{0, 1, 0, 1}, kInvSqrt2}});
}

PureFockState bell_psi_plus(int cutoff) {
  return state_of(2, cutoff, {{{1, 0, 0, 1}, kInvSqrt2}, {{0, 1, 1, 0}, kInvSqrt2}});
}

PureFockState spdc_pair(const SpdcParams& p, int cutoff) {
  const double g2 = p.gamma * p.gamma;
  if (p.gamma < 0.0 || g2 > 1e-2)
    throw std::invalid_argument("spdc_pair: gamma out of range (need gamma^2 <= 1e-2)");
  std::vector<std::pair<std::vector<int>, cx>> terms{
      {{0, 0, 0, 0}, cx{1.0, 0.0}},
      {{1, 0, 1, 0}, cx{p.gamma, 0.0}},
      {{0, 1, 0, 1}, cx{p.gamma, 0.0}},
  };
  if (p.include_double_pairs && cutoff >= 2) {
    terms.push_back({{2, 0, 2, 0}, cx{g2, 0.0}});
    terms.push_back({{1, 1, 1, 1}, cx{g2, 0.0}});
    terms.push_back({{0, 2, 0, 2}, cx{g2, 0.0}});
  }
  return PureFockState::from_terms(FockLayout(4, cutoff), terms).normalized();
}

PureFockState ghz_state(int cutoff) {
  return state_of(3, cutoff,
                  {{{1, 0, 1, 0, 1, 0}, kInvSqrt2}, {{0, 1, 0, 1, 0, 1}, kInvSqrt2}});
}

PureFockState chi_state(int cutoff) {
  return state_of(4, cutoff,
                  {{{1, 0, 1, 0, 1, 0, 1, 0}, 0.5},
                   {{1, 0, 1, 0, 0, 1, 0, 1}, 0.5},
                   {{0, 1, 0, 1, 1, 0, 0, 1}, 0.5},
                   {{0, 1, 0, 1, 0, 1, 1, 0}, 0.5}});
}

}  // namespace lofock
