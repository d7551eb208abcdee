#pragma once

// Scheme-file grammar (line-oriented, '#' starts a comment):
//
//   gate <cs|cnot|iswap|chi|none>
//   mode <label>
//   source <input|epr|ghz|chi|vacuum> <mode>...
//   apply <kind> <mode> [<mode2>] [theta=<radians|pi/N>]
//   measure <rail>... {
//     <bits> -> accept [<correction>...]
//     <bits> -> reject
//   }
//   output <mode>...
//
// Rails are written <mode><H|V> ("cH", "3V"); <bits> is one 0/1 digit per
// measured rail; unlisted patterns are rejected. The built-in schemes are
// embedded copies of this same format.

#include <string>
#include <vector>

#include "lofock/circuit.hpp"

namespace lofock {

struct SchemeParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

CircuitProgram parse_scheme(const std::string& text, const std::string& name);

// Closed-form success probability prefactor * eta^power for the built-ins,
// under ideal sources and no dark counts.
struct SchemeInfo {
  std::string name;
  std::string description;
  double success_prefactor = 0.0;
  int eta_power = 0;
  GateTarget target = GateTarget::None;

  double success_at(double eta) const;
};

const std::vector<SchemeInfo>& scheme_catalog();
bool is_builtin_scheme(const std::string& name);
const CircuitProgram& builtin_scheme(const std::string& name);

// State right after the six-element entangling block of the CS scheme on
// ideal inputs, over modes (c, t, 1, 2, 3, 4). Built at a cutoff high enough
// that no truncation occurs, so branch norms are exact.
PureFockState scheme_ii_multigate_state(const TwoQubitAmplitudes& input,
                                        int cutoff = 4);

// Squared norms of the three branch classes of that state: terms that can
// pass both postselections (ok), terms excluded by the first measurement
// (err1), and multi-photon terms that only the second measurement removes
// (err2).
struct BranchNorms {
  double ok = 0.0;
  double err1 = 0.0;
  double err2 = 0.0;
};
BranchNorms classify_branches_scheme_ii(const PureFockState& after_multigate);

}  // namespace lofock
