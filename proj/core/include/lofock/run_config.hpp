#pragma once

// Run configuration shared by the CLI subcommands. Serialized as flat
// key=value lines with dotted keys; command-line flags override file values.
// Units: detector.rdark in 1/s, detector.tres in seconds; nu is derived
// internally and echoed in output headers.

#include <map>
#include <stdexcept>
#include <string>

#include "lofock/analysis.hpp"
#include "lofock/circuit.hpp"

namespace lofock {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string scheme = "scheme2-cs";
  DetectorParams detector;  // defaults: eta 0.7, 100/s dark rate, 10 ns
  std::map<std::string, DetectorParams> detector_overrides;  // by rail name
  std::string source_kind = "ideal";  // ancillae: ideal | spdc
  std::string input_kind = "ideal";   // input: ideal | spdc
  double gamma2 = 1e-4;
  bool double_pairs = false;
  // Input amplitudes, normalized before use.
  TwoQubitAmplitudes alphas{0.5, 0.5, 0.5, 0.5};
  std::string patterns = "all";  // all | identity
  int cutoff = kDefaultCutoff;
  int samples = 0;  // > 0: that many random inputs instead of `alphas`
  std::uint64_t seed = 1;
  std::string format = "text";  // text | json | csv
  std::string out_path;         // empty: stdout

  // Applies one "key = value" assignment; throws ConfigError naming the key
  // on anything unknown or malformed.
  void set(const std::string& key, const std::string& value);
  // Parses a whole config file body ('#' comments allowed).
  static RunConfig parse(const std::string& text);
  // Lossless round-trip: parse(to_text()) == *this.
  std::string to_text() const;

  void validate() const;
  SourceSettings source_settings() const;
  RunOptions run_options() const;

  friend bool operator==(const RunConfig&, const RunConfig&);
};

}  // namespace lofock
