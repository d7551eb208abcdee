#pragma once

// Data-driven scheme programs: ordered element applications plus
// measure-and-feedforward steps with per-pattern correction tables. Programs
// are plain data so new schemes can be added without touching the engine.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lofock/detection.hpp"
#include "lofock/elements.hpp"
#include "lofock/sources.hpp"

namespace lofock {

// Fidelity target declared by a program; Cs/Cnot/Iswap compare against the
// ideal gate applied to the logical input, ChiState against the fixed
// four-photon ancilla.
enum class GateTarget { None, Cs, Cnot, Iswap, ChiState };

struct FeedforwardRule {
  std::vector<int> outcomes;  // 0/1 per measured rail, aligned with the step
  bool accept = false;
  std::vector<ElementSpec> corrections;  // applied on acceptance
};

struct MeasureStep {
  std::vector<RailIndex> rails;
  std::vector<FeedforwardRule> rules;  // patterns not listed are rejected
};

struct Step {
  enum class Kind { Apply, Measure };
  Kind kind = Kind::Apply;
  ElementSpec element;
  MeasureStep measure;

  static Step apply(ElementSpec e) { return Step{Kind::Apply, e, {}}; }
  static Step measure_ff(MeasureStep m) { return Step{Kind::Measure, {}, std::move(m)}; }
};

enum class SourceKind { Input, Epr, Ghz, Chi, Vacuum };

struct CircuitProgram {
  std::string name;
  std::string description;
  std::vector<std::string> register_modes;  // spatial-mode labels, in order
  struct SourceSlot {
    SourceKind kind = SourceKind::Vacuum;
    std::vector<std::uint32_t> modes;
  };
  std::vector<SourceSlot> sources;  // must partition the register
  std::vector<Step> steps;
  std::vector<std::uint32_t> output_modes;
  GateTarget target = GateTarget::None;

  std::uint32_t mode_index(const std::string& label) const;
  std::string rail_name(RailIndex r) const;  // e.g. "2H", "cV"
  // Throws std::invalid_argument if any program invariant is violated:
  // rails measured at most once, output modes never measured, corrections
  // only on not-yet-measured rails, well-formed rules.
  void validate() const;
};

// Chooses the concrete state for each declared source slot.
struct SourceSettings {
  bool spdc_ancillae = false;  // EPR slots become SPDC pairs
  bool spdc_input = false;     // the input slot becomes an SPDC pair
  SpdcParams spdc;
  TwoQubitAmplitudes input;
  int cutoff = kDefaultCutoff;
};

struct SourceBinding {
  std::vector<std::uint32_t> modes;
  PureFockState state;
};

std::vector<SourceBinding> bind_sources(const CircuitProgram& program,
                                        const SourceSettings& settings);

// Shared detector parameters with optional per-detector overrides keyed by
// rail name ("cH", "2V", ...).
struct DetectorBank {
  DetectorParams shared;
  std::map<std::string, DetectorParams> overrides;

  const DetectorParams& for_rail(const std::string& rail_name) const;
};

struct RunOptions {
  DetectorBank detectors;
  // When false, only the accepted rule rows are expanded and rejected
  // probability is reported in aggregate; the result is identical, the
  // per-pattern report is just shorter.
  bool enumerate_rejected = true;
};

struct PatternRecord {
  std::string pattern;  // "DcH=1 DcV=0 ..."; stages joined with "; "
  double probability = 0.0;
  bool accepted = false;
};

struct GateRunResult {
  double success_probability = 0.0;
  StateEnsemble output;  // over output modes, in declared order, renormalized
  std::vector<PatternRecord> per_pattern_report;
  double rejected_probability = 0.0;
  double truncation_loss = 0.0;
};

// Executes the program: elements in order; at each measure step every
// demanded pattern is branched, corrections are applied on acceptance and
// rejected probability is accumulated. The output ensemble is the
// probability-weighted mixture over accepted branches, renormalized.
GateRunResult run(const CircuitProgram& program,
                  const std::vector<SourceBinding>& inputs, const RunOptions& options);
GateRunResult run(const CircuitProgram& program,
                  const std::vector<SourceBinding>& inputs,
                  const DetectorParams& detector);

// Wraps a CS (or CNOT) program into an iSWAP program: swap the input qubit
// lines, apply the phase gate to both, then run the inner gate. A CNOT inner
// program is additionally conjugated by Hadamards on the target qubit.
CircuitProgram scheme_iswap(const CircuitProgram& inner);

// Keeps only the feedforward rows that require no correction; used for the
// headline realistic-fidelity figure.
CircuitProgram restrict_to_identity_rows(const CircuitProgram& program);

}  // namespace lofock
