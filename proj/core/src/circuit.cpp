#include "lofock/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace lofock {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

std::uint32_t CircuitProgram::mode_index(const std::string& label) const {
  for (std::size_t i = 0; i < register_modes.size(); ++i) {
    if (register_modes[i] == label) return static_cast<std::uint32_t>(i);
  }
  throw std::invalid_argument("unknown mode label: " + label);
}

std::string CircuitProgram::rail_name(RailIndex r) const {
  require(r.mode < register_modes.size(), "rail_name: mode outside register");
  return register_modes[r.mode] + (r.pol == Pol::H ? "H" : "V");
}

void CircuitProgram::validate() const {
  require(!register_modes.empty(), "program '" + name + "': empty register");
  {
    std::set<std::string> labels(register_modes.begin(), register_modes.end());
    require(labels.size() == register_modes.size(),
            "program '" + name + "': duplicate mode labels");
  }
  const auto n_modes = static_cast<std::uint32_t>(register_modes.size());
  const auto check_mode = [&](std::uint32_t m, const char* what) {
    require(m < n_modes, "program '" + name + "': " + what + " outside register");
  };

  // Sources must partition the register, with at most one input slot.
  {
    std::set<std::uint32_t> covered;
    int input_slots = 0;
    for (const auto& slot : sources) {
      for (std::uint32_t m : slot.modes) {
        check_mode(m, "source mode");
        require(covered.insert(m).second,
                "program '" + name + "': mode fed by two sources");
      }
      if (slot.kind == SourceKind::Input) ++input_slots;
    }
    require(covered.size() == register_modes.size(),
            "program '" + name + "': sources do not cover the register");
    require(input_slots <= 1, "program '" + name + "': multiple input slots");
  }

  std::set<std::uint32_t> measured_flat;
  const auto element_ok = [&](const ElementSpec& e, const char* what) {
    check_mode(e.mode, what);
    require(measured_flat.count(rail(e.mode, Pol::H).flat()) == 0 &&
                measured_flat.count(rail(e.mode, Pol::V).flat()) == 0,
            "program '" + name + "': " + what + " acts on a measured mode");
    if (e.kind == ElementKind::Pbs || e.kind == ElementKind::RailSwap) {
      check_mode(e.mode2, what);
      require(e.mode != e.mode2,
              "program '" + name + "': two-mode element on identical modes");
      require(measured_flat.count(rail(e.mode2, Pol::H).flat()) == 0 &&
                  measured_flat.count(rail(e.mode2, Pol::V).flat()) == 0,
              "program '" + name + "': " + what + " acts on a measured mode");
    }
  };

  for (const auto& step : steps) {
    if (step.kind == Step::Kind::Apply) {
      element_ok(step.element, "element");
      continue;
    }
    const auto& ms = step.measure;
    require(!ms.rails.empty(), "program '" + name + "': empty measure step");
    for (RailIndex r : ms.rails) {
      check_mode(r.mode, "measured rail");
      require(measured_flat.insert(r.flat()).second,
              "program '" + name + "': rail measured twice");
    }
    std::set<std::vector<int>> seen;
    for (const auto& rule : ms.rules) {
      require(rule.outcomes.size() == ms.rails.size(),
              "program '" + name + "': rule length does not match measured rails");
      for (int o : rule.outcomes)
        require(o == 0 || o == 1, "program '" + name + "': rule outcome not 0/1");
      require(seen.insert(rule.outcomes).second,
              "program '" + name + "': duplicate rule pattern");
      if (rule.accept) {
        for (const auto& corr : rule.corrections) element_ok(corr, "correction");
      } else {
        require(rule.corrections.empty(),
                "program '" + name + "': reject rule with corrections");
      }
    }
  }

  require(!output_modes.empty(), "program '" + name + "': no output modes");
  std::set<std::uint32_t> outs;
  for (std::uint32_t m : output_modes) {
    check_mode(m, "output mode");
    require(outs.insert(m).second, "program '" + name + "': duplicate output mode");
    require(measured_flat.count(rail(m, Pol::H).flat()) == 0 &&
                measured_flat.count(rail(m, Pol::V).flat()) == 0,
            "program '" + name + "': output mode is measured");
  }
}

std::vector<SourceBinding> bind_sources(const CircuitProgram& program,
                                        const SourceSettings& settings) {
  std::vector<SourceBinding> out;
  out.reserve(program.sources.size());
  for (const auto& slot : program.sources) {
    PureFockState state = PureFockState::vacuum(FockLayout(0, settings.cutoff));
    switch (slot.kind) {
      case SourceKind::Input:
        require(slot.modes.size() == 2, "input slot needs two modes");
        state = settings.spdc_input ? spdc_pair(settings.spdc, settings.cutoff)
                                    : input_state(settings.input, settings.cutoff);
        break;
      case SourceKind::Epr:
        require(slot.modes.size() == 2, "EPR slot needs two modes");
        state = settings.spdc_ancillae ? spdc_pair(settings.spdc, settings.cutoff)
                                       : epr_pair(settings.cutoff);
        break;
      case SourceKind::Ghz:
        require(slot.modes.size() == 3, "GHZ slot needs three modes");
        state = ghz_state(settings.cutoff);
        break;
      case SourceKind::Chi:
        require(slot.modes.size() == 4, "chi slot needs four modes");
        state = chi_state(settings.cutoff);
        break;
      case SourceKind::Vacuum:
        state = PureFockState::vacuum(
            FockLayout(2 * static_cast<int>(slot.modes.size()), settings.cutoff));
        break;
    }
    out.push_back(SourceBinding{slot.modes, std::move(state)});
  }
  return out;
}

const DetectorParams& DetectorBank::for_rail(const std::string& rail_name) const {
  auto it = overrides.find(rail_name);
  return it == overrides.end() ? shared : it->second;
}

namespace {

struct ActivePath {
  StateEnsemble ens;  // absolute weights: trace() is the path probability
  std::string label;
};

std::string pattern_label(const CircuitProgram& program,
                          std::span<const RailIndex> rails,
                          std::span<const int> outcomes) {
  std::string out;
  for (std::size_t i = 0; i < rails.size(); ++i) {
    if (!out.empty()) out += ' ';
    out += 'D';
    out += program.rail_name(rails[i]);
    out += '=';
    out += static_cast<char>('0' + outcomes[i]);
  }
  return out;
}

std::string joined_label(const std::string& prefix, const std::string& stage) {
  return prefix.empty() ? stage : prefix + "; " + stage;
}

// Applies an element to every branch, folding truncation into the weights
// and adding the lost probability to `loss`.
void apply_to_ensemble(StateEnsemble& ens, const ElementSpec& elem, double& loss) {
  for (auto& branch : ens.branches) {
    UnitaryApplication result = apply_element(branch.state, elem);
    loss += branch.weight * result.truncation_loss;
    const double kept = result.state.norm_sq();
    branch.weight *= kept;
    branch.state = kept > 0.0 ? result.state.normalized() : std::move(result.state);
  }
  std::erase_if(ens.branches, [](const auto& b) { return b.weight <= 0.0; });
}

PureFockState assemble_register(const CircuitProgram& program,
                                const std::vector<SourceBinding>& inputs) {
  require(!inputs.empty(), "run: no input states");
  std::set<std::uint32_t> covered;
  std::vector<int> rail_position(2 * program.register_modes.size(), -1);
  int next = 0;
  PureFockState full = PureFockState::vacuum(FockLayout(0, inputs.front().state.cutoff()));
  for (const auto& binding : inputs) {
    require(2 * binding.modes.size() == static_cast<std::size_t>(
                                            binding.state.rail_count()),
            "run: input state size does not match its mode list");
    for (std::uint32_t m : binding.modes) {
      require(m < program.register_modes.size(), "run: input mode outside register");
      require(covered.insert(m).second, "run: register mode bound twice");
      rail_position[rail(m, Pol::H).flat()] = next++;
      rail_position[rail(m, Pol::V).flat()] = next++;
    }
    full = tensor(full, binding.state);
  }
  require(covered.size() == program.register_modes.size(),
          "run: inputs do not cover the register");
  // Rearrange concatenation order into register (mode-major) order.
  std::vector<int> perm(rail_position.size());
  for (std::size_t j = 0; j < perm.size(); ++j) perm[j] = rail_position[j];
  return reorder_rails(full, perm);
}

}  // namespace

GateRunResult run(const CircuitProgram& program,
                  const std::vector<SourceBinding>& inputs, const RunOptions& options) {
  program.validate();
  GateRunResult result;

  std::vector<ActivePath> paths;
  paths.push_back(ActivePath{StateEnsemble::pure(assemble_register(program, inputs)),
                             ""});

  for (const auto& step : program.steps) {
    if (step.kind == Step::Kind::Apply) {
      for (auto& path : paths) {
        apply_to_ensemble(path.ens, step.element, result.truncation_loss);
      }
      continue;
    }

    const auto& ms = step.measure;
    std::vector<DetectorParams> dets;
    dets.reserve(ms.rails.size());
    for (RailIndex r : ms.rails) {
      dets.push_back(options.detectors.for_rail(program.rail_name(r)));
    }

    std::vector<std::vector<int>> patterns;
    if (options.enumerate_rejected) {
      const std::size_t k = ms.rails.size();
      patterns.reserve(std::size_t{1} << k);
      for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << k); ++bits) {
        std::vector<int> outcomes(k);
        for (std::size_t i = 0; i < k; ++i) outcomes[i] = (bits >> i) & 1;
        patterns.push_back(std::move(outcomes));
      }
    } else {
      for (const auto& rule : ms.rules) patterns.push_back(rule.outcomes);
    }

    std::vector<ActivePath> next_paths;
    for (auto& path : paths) {
      const double path_trace = path.ens.trace();
      double expanded = 0.0;
      for (const auto& outcomes : patterns) {
        ClickPattern cp;
        cp.entries.reserve(outcomes.size());
        for (std::size_t i = 0; i < outcomes.size(); ++i) {
          cp.entries.push_back(ClickPattern::Entry{ms.rails[i], outcomes[i]});
        }
        MeasurementOutcome mo = measure_keep_register(path.ens, cp, dets);
        expanded += mo.probability;
        const std::string label =
            joined_label(path.label, pattern_label(program, ms.rails, outcomes));

        const FeedforwardRule* rule = nullptr;
        for (const auto& r : ms.rules) {
          if (r.outcomes == outcomes) {
            rule = &r;
            break;
          }
        }
        if (rule != nullptr && rule->accept) {
          if (mo.probability > 0.0) {
            StateEnsemble cond = std::move(mo.conditional);
            for (auto& b : cond.branches) b.weight *= mo.probability;
            for (const auto& corr : rule->corrections) {
              apply_to_ensemble(cond, corr, result.truncation_loss);
            }
            next_paths.push_back(ActivePath{std::move(cond), label});
          }
        } else {
          result.rejected_probability += mo.probability;
          result.per_pattern_report.push_back(
              PatternRecord{label, mo.probability, false});
        }
      }
      if (!options.enumerate_rejected) {
        // Everything not matching an accepted row is rejected in aggregate.
        const double remainder = path_trace - expanded;
        if (remainder > 0.0) {
          result.rejected_probability += remainder;
          result.per_pattern_report.push_back(PatternRecord{
              joined_label(path.label, "(other patterns)"), remainder, false});
        }
      }
    }
    paths = std::move(next_paths);
  }

  // Accepted leaves: record, accumulate success, and pool the branches.
  StateEnsemble pooled;
  for (auto& path : paths) {
    const double p = path.ens.trace();
    result.per_pattern_report.push_back(PatternRecord{path.label, p, true});
    result.success_probability += p;
    for (auto& b : path.ens.branches) pooled.branches.push_back(std::move(b));
  }

  if (result.success_probability > 0.0) {
    // Restrict to the output modes and order rails as declared.
    std::vector<RailIndex> traced;
    for (std::uint32_t m = 0; m < program.register_modes.size(); ++m) {
      if (std::find(program.output_modes.begin(), program.output_modes.end(), m) ==
          program.output_modes.end()) {
        traced.push_back(rail(m, Pol::H));
        traced.push_back(rail(m, Pol::V));
      }
    }
    StateEnsemble reduced = trace_out_rails(pooled, traced);

    std::vector<std::uint32_t> kept_modes;  // ascending register order
    for (std::uint32_t m = 0; m < program.register_modes.size(); ++m) {
      if (std::find(program.output_modes.begin(), program.output_modes.end(), m) !=
          program.output_modes.end()) {
        kept_modes.push_back(m);
      }
    }
    std::vector<int> perm;
    perm.reserve(2 * program.output_modes.size());
    for (std::uint32_t m : program.output_modes) {
      const auto pos = std::find(kept_modes.begin(), kept_modes.end(), m) -
                       kept_modes.begin();
      perm.push_back(static_cast<int>(2 * pos));
      perm.push_back(static_cast<int>(2 * pos + 1));
    }
    const bool identity_perm = std::is_sorted(perm.begin(), perm.end());
    for (auto& b : reduced.branches) {
      if (!identity_perm) b.state = reorder_rails(b.state, perm);
      b.weight /= result.success_probability;
    }
    result.output = std::move(reduced);
  }
  return result;
}

GateRunResult run(const CircuitProgram& program,
                  const std::vector<SourceBinding>& inputs,
                  const DetectorParams& detector) {
  RunOptions options;
  options.detectors.shared = detector;
  return run(program, inputs, options);
}

CircuitProgram scheme_iswap(const CircuitProgram& inner) {
  require(inner.target == GateTarget::Cs || inner.target == GateTarget::Cnot,
          "scheme_iswap: inner program must implement CS or CNOT");
  const CircuitProgram::SourceSlot* input_slot = nullptr;
  for (const auto& slot : inner.sources) {
    if (slot.kind == SourceKind::Input) input_slot = &slot;
  }
  require(input_slot != nullptr && input_slot->modes.size() == 2,
          "scheme_iswap: inner program has no two-mode input slot");
  require(inner.output_modes.size() == 2,
          "scheme_iswap: inner program must output two modes");

  const std::uint32_t c_in = input_slot->modes[0];
  const std::uint32_t t_in = input_slot->modes[1];

  CircuitProgram wrapped = inner;
  wrapped.name = "iswap-" + inner.name;
  wrapped.description = "iSWAP via qubit-line swap, phase gates and the " +
                        inner.name + " gate";
  wrapped.target = GateTarget::Iswap;

  std::vector<Step> steps;
  steps.push_back(Step::apply(rail_swap(c_in, t_in)));
  steps.push_back(Step::apply(s_gate(c_in)));
  steps.push_back(Step::apply(s_gate(t_in)));
  if (inner.target == GateTarget::Cnot) steps.push_back(Step::apply(hadamard(t_in)));
  steps.insert(steps.end(), inner.steps.begin(), inner.steps.end());
  if (inner.target == GateTarget::Cnot) {
    steps.push_back(Step::apply(hadamard(inner.output_modes[1])));
  }
  wrapped.steps = std::move(steps);
  wrapped.validate();
  return wrapped;
}

CircuitProgram restrict_to_identity_rows(const CircuitProgram& program) {
  CircuitProgram out = program;
  for (auto& step : out.steps) {
    if (step.kind != Step::Kind::Measure) continue;
    std::vector<FeedforwardRule> kept;
    for (const auto& rule : step.measure.rules) {
      if (rule.accept && rule.corrections.empty()) kept.push_back(rule);
    }
    step.measure.rules = std::move(kept);
  }
  return out;
}

}  // namespace lofock
