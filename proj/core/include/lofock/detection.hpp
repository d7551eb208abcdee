#pragma once

// Conventional (bucket) detector model: finite efficiency eta, dark counts
// through nu = tau_res * R_dark, no photon-number resolution. The POVM pair
// distinguishing "no click" from "click" is diagonal in the Fock basis, so
// conditional states are computed with sqrt(Pi) weights and pure branches
// stay pure. A number-resolving projective mode is provided as the ideal
// baseline.

#include <span>
#include <vector>

#include "lofock/fock_state.hpp"

namespace lofock {

struct DetectorParams {
  double eta = 0.7;                 // efficiency, in [0, 1]
  double dark_rate = 100.0;         // dark counts per second
  double resolution_time = 10e-9;   // seconds

  double nu() const { return dark_rate * resolution_time; }
  void validate() const;

  static DetectorParams ideal() { return DetectorParams{1.0, 0.0, 0.0}; }

  friend bool operator==(const DetectorParams&, const DetectorParams&) = default;
};

// Pi0[n] = exp(-nu) (1-eta)^n, Pi1 = 1 - Pi0 elementwise; completeness holds
// exactly by construction.
struct PovmPair {
  std::vector<double> no_click;  // Pi0, indexed by photon count 0..cutoff
  std::vector<double> click;     // Pi1
};
PovmPair povm_weights(const DetectorParams& p, int cutoff);

// Demanded outcome per measured rail: 0/1 for conventional detectors, the
// exact photon count in number-resolving mode.
struct ClickPattern {
  struct Entry {
    RailIndex target;
    int outcome = 0;
  };
  std::vector<Entry> entries;
};

struct MeasurementOutcome {
  ClickPattern pattern;
  double probability = 0.0;     // unnormalized: trace of the selected part
  StateEnsemble conditional;    // renormalized, over the unmeasured rails
};

// Conventional measurement of the demanded click pattern. The probability
// equals the resulting trace; the conditional ensemble is renormalized and
// its branches are pure per surviving occupation pattern.
MeasurementOutcome measure(const StateEnsemble& ensemble, const ClickPattern& pattern,
                           const DetectorParams& params);
// Per-rail detector parameters, aligned with pattern.entries.
MeasurementOutcome measure(const StateEnsemble& ensemble, const ClickPattern& pattern,
                           std::span<const DetectorParams> params);

// Register-preserving variant used by the circuit runner: measured rails are
// left in the register with their counts zeroed instead of being removed.
MeasurementOutcome measure_keep_register(const StateEnsemble& ensemble,
                                         const ClickPattern& pattern,
                                         std::span<const DetectorParams> params);

// Projective measurement onto exact occupation counts with binomial thinning
// at efficiency eta (dark counts do not apply in this ideal-baseline mode).
MeasurementOutcome measure_number_resolving(const StateEnsemble& ensemble,
                                            const ClickPattern& counts,
                                            const DetectorParams& params);

}  // namespace lofock
