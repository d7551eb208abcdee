#pragma once

// Gate-level verification and parameter sweeps: fidelity against ideal gate
// outputs, exact 4x4 decomposition identities (plain matrix algebra, kept
// independent of the Fock engine so it doubles as a cross-oracle), random
// input statistics and grid sweeps.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lofock/circuit.hpp"
#include "lofock/schemes.hpp"

namespace lofock {

enum class TwoQubitGate { Identity, Cs, Cnot, Iswap, Swap };

// Ideal two-qubit gates in the product basis |HH>, |HV>, |VH>, |VV>.
struct IdealGate {
  TwoQubitGate kind = TwoQubitGate::Identity;
  Eigen::Matrix4cd matrix = Eigen::Matrix4cd::Identity();

  static IdealGate of(TwoQubitGate kind);
};

TwoQubitAmplitudes apply_ideal_gate(const IdealGate& gate,
                                    const TwoQubitAmplitudes& in);

// F = sum_k w_k |<target|phi_k>|^2 / sum_k w_k. Invariant under global phase
// of the target and of every branch.
double fidelity(const StateEnsemble& output, const PureFockState& target);

// Success probability prefactor of the previously published iSWAP scheme
// using the same EPR ancillae and conventional detectors (P = eta^4/32,
// with ten detectors); kept as a comparison baseline.
inline constexpr double kReferenceIswapPrefactor = 1.0 / 32.0;
inline constexpr int kReferenceIswapEtaPower = 4;

struct IdentityCheck {
  std::string name;
  double max_abs_error = 0.0;
  bool pass = false;
};
struct DecompositionReport {
  std::vector<IdentityCheck> checks;
  bool all_pass() const;
};
// Checks, to 1e-12: CS (S x S) SWAP = iSWAP, (I x H) CNOT (I x H) = CS,
// HWP(pi/8)^2 = I and S^4 = I. `inject_fault` perturbs the phase gate; a
// test hook for the CLI's failure path.
DecompositionReport verify_decompositions(bool inject_fault = false);

// Four complex standard normals, normalized.
TwoQubitAmplitudes random_amplitudes(std::mt19937_64& rng);

// The ideal output state the program's declared target maps the configured
// input to, or nullopt when the program declares none. An SPDC input is
// compared against the gate acting on its single-pair component.
std::optional<PureFockState> ideal_target(const CircuitProgram& program,
                                          const SourceSettings& settings);

struct RandomGateStats {
  double min_fidelity = 1.0;
  double mean_fidelity = 0.0;
  double mean_success = 0.0;
};
// Draws n_samples random inputs, runs the program and compares against its
// declared gate.
RandomGateStats gate_fidelity_random(const CircuitProgram& program,
                                     const SourceSettings& base,
                                     const RunOptions& options, int n_samples,
                                     std::uint64_t seed);

struct SweepSpec {
  enum class Param { Eta, Nu, Gamma2, SchemeName };
  Param param = Param::Eta;
  std::vector<double> values;        // numeric grids
  std::vector<std::string> schemes;  // SchemeName grid
  std::string scheme = "scheme2-cs";
  std::optional<CircuitProgram> program;  // overrides `scheme` when set
  DetectorParams detector;
  SourceSettings sources;
  bool identity_rows_only = false;
  int random_samples = 0;  // 0: single run with the fixed input
  std::uint64_t seed = 1;
};

struct SweepRow {
  std::string param_label;
  double param_value = 0.0;
  double success = 0.0;
  double fidelity = 0.0;  // -1 when the scheme declares no target
  double truncation_loss = 0.0;
  std::uint64_t seed = 0;
};

// One row per grid point, deterministic given the spec. Grid points are
// evaluated concurrently; rows come back in grid order.
std::vector<SweepRow> sweep(const SweepSpec& spec);

}  // namespace lofock
