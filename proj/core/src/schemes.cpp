#include <cmath>
#include <map>
#include <stdexcept>

#include "lofock/schemes.hpp"

namespace lofock {

namespace {

// Nondestructive CS gate from two EPR ancilla pairs. The entangling block
// interferes the input qubits with one arm of each ancilla; the other arms
// (modes 1 and 4) are never touched and carry the output. Correction tables
// are keyed by the rails measured at that step; corrections always act on
// modes that still carry photons, which is why the first table corrects
// mode 2 and the second corrects modes 1 and 4.
constexpr const char* kScheme2Cs = R"(
gate cs
mode c
mode t
mode 1
mode 2
mode 3
mode 4
source input c t
source epr 1 2
source epr 3 4

# six-element entangling block
apply pbs t 3
apply pbs 2 c
apply hadamard t
apply pbs c t
apply hadamard t
apply hadamard c

# first postselection: the input modes
measure cH cV tH tV {
  1010 -> accept
  0101 -> accept
  1001 -> accept sigmaz 2
  0110 -> accept sigmaz 2
}

# second postselection: the encoder arms, in the Hadamard basis
apply hadamard 2
apply hadamard 3
measure 2H 2V 3H 3V {
  1010 -> accept
  0110 -> accept sigmaz 1
  1001 -> accept sigmaz 4
  0101 -> accept sigmaz 1 sigmaz 4
}

output 1 4
)";

// Nondestructive CNOT gate from two GHZ ancillae. The first stage fuses the
// two GHZ states into the four-photon entangled ancilla; the second stage
// performs destructive Bell-type measurements against the input qubits.
constexpr const char* kScheme1Cnot = R"(
gate cnot
mode c
mode t
mode 1
mode 2
mode 3
mode 4
mode 5
mode 6
source input c t
source ghz 1 2 3
source ghz 4 5 6

# fuse the two GHZ states into the four-photon ancilla on modes 1,2,5,6
apply hadamard 4
apply hadamard 5
apply hadamard 6
apply pbs 3 4
apply hadamard 3
apply hadamard 4
measure 3H 3V 4H 4V {
  1010 -> accept
  0101 -> accept
  1001 -> accept sigmaz 5 sigmaz 6
  0110 -> accept sigmaz 5 sigmaz 6
}

# Bell-type coincidence measurements of (c,1) and (6,t)
apply pbs c 1
apply pbs 6 t
apply hadamard c
apply hadamard 1
apply hadamard 6
apply hadamard t
measure cH cV 1H 1V 6H 6V tH tV {
  10101010 -> accept
  10100101 -> accept
  01011010 -> accept
  01010101 -> accept
  10011010 -> accept sigmaz 2
  10010101 -> accept sigmaz 2
  01101010 -> accept sigmaz 2
  01100101 -> accept sigmaz 2
  10011001 -> accept sigmaz 5
  10010110 -> accept sigmaz 5
  01101001 -> accept sigmaz 5
  01100110 -> accept sigmaz 5
  10101001 -> accept sigmaz 2 sigmaz 5
  10100110 -> accept sigmaz 2 sigmaz 5
  01011001 -> accept sigmaz 2 sigmaz 5
  01010110 -> accept sigmaz 2 sigmaz 5
}

output 2 5
)";

// Second half of the GHZ scheme, consuming the four-photon ancilla directly.
constexpr const char* kScheme1CnotGivenChi = R"(
gate cnot
mode c
mode t
mode 1
mode 2
mode 5
mode 6
source input c t
source chi 1 2 5 6

apply pbs c 1
apply pbs 6 t
apply hadamard c
apply hadamard 1
apply hadamard 6
apply hadamard t
measure cH cV 1H 1V 6H 6V tH tV {
  10101010 -> accept
  10100101 -> accept
  01011010 -> accept
  01010101 -> accept
  10011010 -> accept sigmaz 2
  10010101 -> accept sigmaz 2
  01101010 -> accept sigmaz 2
  01100101 -> accept sigmaz 2
  10011001 -> accept sigmaz 5
  10010110 -> accept sigmaz 5
  01101001 -> accept sigmaz 5
  01100110 -> accept sigmaz 5
  10101001 -> accept sigmaz 2 sigmaz 5
  10100110 -> accept sigmaz 2 sigmaz 5
  01011001 -> accept sigmaz 2 sigmaz 5
  01010110 -> accept sigmaz 2 sigmaz 5
}

output 2 5
)";

// First stage of the GHZ scheme alone: generation of the four-photon
// entangled ancilla from two GHZ states.
constexpr const char* kScheme1Chi = R"(
gate chi
mode 1
mode 2
mode 3
mode 4
mode 5
mode 6
source ghz 1 2 3
source ghz 4 5 6

apply hadamard 4
apply hadamard 5
apply hadamard 6
apply pbs 3 4
apply hadamard 3
apply hadamard 4
measure 3H 3V 4H 4V {
  1010 -> accept
  0101 -> accept
  1001 -> accept sigmaz 5 sigmaz 6
  0110 -> accept sigmaz 5 sigmaz 6
}

output 1 2 5 6
)";

struct Builtin {
  SchemeInfo info;
  CircuitProgram program;
};

std::vector<Builtin> make_builtins() {
  std::vector<Builtin> out;
  const auto add = [&out](const char* text, SchemeInfo info) {
    CircuitProgram program = parse_scheme(text, info.name);
    program.description = info.description;
    out.push_back(Builtin{std::move(info), std::move(program)});
  };

  add(kScheme2Cs,
      SchemeInfo{"scheme2-cs",
                 "nondestructive CS gate: two EPR ancillae, threefold feedforward,"
                 " eight conventional detectors",
                 1.0 / 8.0, 4, GateTarget::Cs});
  add(kScheme1Cnot,
      SchemeInfo{"scheme1-cnot",
                 "nondestructive CNOT gate: two GHZ ancillae fused into a"
                 " four-photon ancilla, then Bell-type coincidences",
                 1.0 / 8.0, 6, GateTarget::Cnot});
  add(kScheme1CnotGivenChi,
      SchemeInfo{"scheme1-cnot-given-chi",
                 "CNOT half of the GHZ scheme, consuming the four-photon"
                 " ancilla as a given resource",
                 1.0 / 4.0, 4, GateTarget::Cnot});
  add(kScheme1Chi,
      SchemeInfo{"scheme1-chi",
                 "generation of the four-photon entangled ancilla from two"
                 " GHZ states",
                 1.0 / 2.0, 2, GateTarget::ChiState});

  // iSWAP wrappers: qubit-line swap + phase gates around the CS/CNOT core.
  for (const char* base : {"scheme2-cs", "scheme1-cnot"}) {
    const Builtin* inner = nullptr;
    for (const auto& b : out) {
      if (b.info.name == base) inner = &b;
    }
    CircuitProgram wrapped = scheme_iswap(inner->program);
    SchemeInfo info = inner->info;
    info.name = wrapped.name;
    info.description = "iSWAP gate via qubit-line swap, two phase gates and " +
                       std::string(base);
    info.target = GateTarget::Iswap;
    out.push_back(Builtin{std::move(info), std::move(wrapped)});
  }
  return out;
}

const std::vector<Builtin>& builtins() {
  static const std::vector<Builtin> table = make_builtins();
  return table;
}

}  // namespace

double SchemeInfo::success_at(double eta) const {
  return success_prefactor * std::pow(eta, eta_power);
}

const std::vector<SchemeInfo>& scheme_catalog() {
  static const std::vector<SchemeInfo> infos = [] {
    std::vector<SchemeInfo> v;
    for (const auto& b : builtins()) v.push_back(b.info);
    return v;
  }();
  return infos;
}

bool is_builtin_scheme(const std::string& name) {
  for (const auto& b : builtins()) {
    if (b.info.name == name) return true;
  }
  return false;
}

const CircuitProgram& builtin_scheme(const std::string& name) {
  for (const auto& b : builtins()) {
    if (b.info.name == name) return b.program;
  }
  throw std::invalid_argument("unknown built-in scheme '" + name + "'");
}

PureFockState scheme_ii_multigate_state(const TwoQubitAmplitudes& input, int cutoff) {
  const CircuitProgram& program = builtin_scheme("scheme2-cs");
  SourceSettings settings;
  settings.input = input;
  settings.cutoff = cutoff;
  const auto bindings = bind_sources(program, settings);

  PureFockState state = PureFockState::vacuum(FockLayout(0, cutoff));
  for (const auto& b : bindings) state = tensor(state, b.state);
  // Bindings are declared in register order for this scheme, so no rail
  // permutation is needed.
  double loss = 0.0;
  for (const auto& step : program.steps) {
    if (step.kind != Step::Kind::Apply) break;  // stop at the first measurement
    UnitaryApplication result = apply_element(state, step.element);
    loss += result.truncation_loss;
    state = std::move(result.state);
  }
  if (loss > 0.0) {
    throw std::logic_error(
        "scheme_ii_multigate_state: cutoff too low, entangling block truncated");
  }
  return state;
}

BranchNorms classify_branches_scheme_ii(const PureFockState& after_multigate) {
  if (after_multigate.rail_count() != 12) {
    throw std::invalid_argument(
        "classify_branches_scheme_ii: expected the 12-rail (c,t,1,2,3,4) register");
  }
  const FockLayout& layout = after_multigate.layout();
  BranchNorms norms;
  for (const auto& [key, amp] : after_multigate.amplitudes()) {
    const double w = std::norm(amp);
    const auto mode_counts = [&](int mode) {
      return std::pair<int, int>{layout.count(key, 2 * mode),
                                 layout.count(key, 2 * mode + 1)};
    };
    // A conventional detector pair sees "one click per mode" iff exactly one
    // rail of the mode is occupied, whatever the count on that rail.
    const auto one_click = [&](int mode) {
      const auto [h, v] = mode_counts(mode);
      return (h > 0) != (v > 0);
    };
    if (!one_click(0) || !one_click(1)) {
      norms.err1 += w;  // excluded by measuring the input modes alone
      continue;
    }
    bool one_photon_everywhere = true;
    for (int mode = 0; mode < 6; ++mode) {
      const auto [h, v] = mode_counts(mode);
      if (h + v != 1) one_photon_everywhere = false;
    }
    if (one_photon_everywhere) {
      norms.ok += w;
    } else {
      norms.err2 += w;  // passes the first postselection, fails the second
    }
  }
  return norms;
}

}  // namespace lofock
