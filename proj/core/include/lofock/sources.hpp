#pragma once

// Builders for the input and ancilla states used by the gate schemes, in
// ideal and SPDC-imperfect variants. All builders return normalized states.

#include "lofock/fock_state.hpp"

namespace lofock {

inline constexpr int kDefaultCutoff = 2;

// alpha_1 |HH> + alpha_2 |HV> + alpha_3 |VH> + alpha_4 |VV>
struct TwoQubitAmplitudes {
  cx a1{1, 0}, a2{0, 0}, a3{0, 0}, a4{0, 0};

  double norm_sq() const;
  bool is_normalized(double tol = kNormTolerance) const;
  TwoQubitAmplitudes normalized() const;

  friend bool operator==(const TwoQubitAmplitudes&, const TwoQubitAmplitudes&) = default;
};

struct SpdcParams {
  // Pair-generation amplitude; gamma^2 is the pairs-per-pulse rate.
  double gamma = 0.0;
  // Include the O(gamma^2) double-pair contribution with degenerate
  // squeezing coefficients. Off by default; the vacuum term dominates the
  // fidelity analysis either way.
  bool include_double_pairs = false;
};

// Two-qubit product-basis input on spatial modes (c, t); throws if the
// amplitudes are not normalized.
PureFockState input_state(const TwoQubitAmplitudes& a, int cutoff = kDefaultCutoff);

// (|HH> + |VV>)/sqrt(2) on two spatial modes.
PureFockState epr_pair(int cutoff = kDefaultCutoff);
// (|HV> + |VH>)/sqrt(2) on two spatial modes.
PureFockState bell_psi_plus(int cutoff = kDefaultCutoff);

// EPR-like SPDC output: vacuum + gamma (|HH> + |VV>) [+ optional double
// pairs], truncated at the cutoff and renormalized.
PureFockState spdc_pair(const SpdcParams& p, int cutoff = kDefaultCutoff);

// (|HHH> + |VVV>)/sqrt(2) on three spatial modes.
PureFockState ghz_state(int cutoff = kDefaultCutoff);

// (|HH>|Phi+> + |VV>|Psi+>)/sqrt(2) on four spatial modes; the four-photon
// entangled ancilla consumed by the given-chi CNOT variant.
PureFockState chi_state(int cutoff = kDefaultCutoff);

}  // namespace lofock
