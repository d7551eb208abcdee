#include "lofock/analysis.hpp"

#include <cmath>
#include <future>
#include <numbers>

#include <unsupported/Eigen/KroneckerProduct>

namespace lofock {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
const cx kI{0.0, 1.0};

Eigen::Matrix2cd phase_gate() {
  Eigen::Matrix2cd s;
  s << 1, 0, 0, kI;
  return s;
}

Eigen::Matrix2cd hadamard_2x2() {
  Eigen::Matrix2cd h;
  h << kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2;
  return h;
}

}  // namespace

IdealGate IdealGate::of(TwoQubitGate kind) {
  IdealGate gate;
  gate.kind = kind;
  Eigen::Matrix4cd& m = gate.matrix;
  m = Eigen::Matrix4cd::Identity();
  switch (kind) {
    case TwoQubitGate::Identity:
      break;
    case TwoQubitGate::Cs:
      m(3, 3) = -1.0;
      break;
    case TwoQubitGate::Cnot:
      m.setZero();
      m(0, 0) = m(1, 1) = 1.0;
      m(3, 2) = m(2, 3) = 1.0;
      break;
    case TwoQubitGate::Iswap:
      m.setZero();
      m(0, 0) = m(3, 3) = 1.0;
      m(2, 1) = m(1, 2) = kI;
      break;
    case TwoQubitGate::Swap:
      m.setZero();
      m(0, 0) = m(3, 3) = 1.0;
      m(2, 1) = m(1, 2) = 1.0;
      break;
  }
  return gate;
}

TwoQubitAmplitudes apply_ideal_gate(const IdealGate& gate,
                                    const TwoQubitAmplitudes& in) {
  Eigen::Vector4cd v;
  v << in.a1, in.a2, in.a3, in.a4;
  v = gate.matrix * v;
  return TwoQubitAmplitudes{v(0), v(1), v(2), v(3)};
}

double fidelity(const StateEnsemble& output, const PureFockState& target) {
  if (output.branches.empty()) return 0.0;
  double weighted = 0.0;
  double total = 0.0;
  for (const auto& branch : output.branches) {
    weighted += branch.weight * std::norm(inner_product(target, branch.state));
    total += branch.weight;
  }
  return total > 0.0 ? weighted / total : 0.0;
}

bool DecompositionReport::all_pass() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

DecompositionReport verify_decompositions(bool inject_fault) {
  DecompositionReport report;
  const auto push = [&report](std::string name, double err, double tol = 1e-12) {
    report.checks.push_back(IdentityCheck{std::move(name), err, err <= tol});
  };

  Eigen::Matrix2cd s = phase_gate();
  if (inject_fault) s(1, 1) += 1e-3;
  const Eigen::Matrix2cd h = hadamard_2x2();
  const Eigen::Matrix2cd id2 = Eigen::Matrix2cd::Identity();

  const Eigen::Matrix4cd cs = IdealGate::of(TwoQubitGate::Cs).matrix;
  const Eigen::Matrix4cd cnot = IdealGate::of(TwoQubitGate::Cnot).matrix;
  const Eigen::Matrix4cd swap = IdealGate::of(TwoQubitGate::Swap).matrix;
  const Eigen::Matrix4cd iswap = IdealGate::of(TwoQubitGate::Iswap).matrix;

  const Eigen::Matrix4cd s_tensor_s = Eigen::kroneckerProduct(s, s).eval();
  push("iswap-decomposition", (cs * s_tensor_s * swap - iswap).cwiseAbs().maxCoeff());

  const Eigen::Matrix4cd i_tensor_h = Eigen::kroneckerProduct(id2, h).eval();
  push("cnot-cs-conjugation",
       (i_tensor_h * cnot * i_tensor_h - cs).cwiseAbs().maxCoeff());

  Eigen::Matrix2cd hwp;
  const double c8 = std::cos(std::numbers::pi / 4.0);
  const double s8 = std::sin(std::numbers::pi / 4.0);
  hwp << c8, s8, s8, -c8;
  push("hwp-involution", (hwp * hwp - id2).cwiseAbs().maxCoeff());
  push("hadamard-is-hwp-pi8", (hwp - h).cwiseAbs().maxCoeff());
  push("phase-gate-order-four",
       (phase_gate() * phase_gate() * phase_gate() * phase_gate() - id2)
           .cwiseAbs()
           .maxCoeff());
  return report;
}

TwoQubitAmplitudes random_amplitudes(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  TwoQubitAmplitudes a{cx{normal(rng), normal(rng)}, cx{normal(rng), normal(rng)},
                       cx{normal(rng), normal(rng)}, cx{normal(rng), normal(rng)}};
  return a.normalized();
}

std::optional<PureFockState> ideal_target(const CircuitProgram& program,
                                          const SourceSettings& settings) {
  switch (program.target) {
    case GateTarget::None:
      return std::nullopt;
    case GateTarget::ChiState:
      return chi_state(settings.cutoff);
    case GateTarget::Cs:
    case GateTarget::Cnot:
    case GateTarget::Iswap: {
      // An SPDC input is useful only through its single-pair component.
      const TwoQubitAmplitudes logical =
          settings.spdc_input
              ? TwoQubitAmplitudes{kInvSqrt2, 0.0, 0.0, kInvSqrt2}
              : settings.input;
      const TwoQubitGate kind = program.target == GateTarget::Cs
                                    ? TwoQubitGate::Cs
                                    : (program.target == GateTarget::Cnot
                                           ? TwoQubitGate::Cnot
                                           : TwoQubitGate::Iswap);
      return input_state(apply_ideal_gate(IdealGate::of(kind), logical),
                         settings.cutoff);
    }
  }
  return std::nullopt;
}

RandomGateStats gate_fidelity_random(const CircuitProgram& program,
                                     const SourceSettings& base,
                                     const RunOptions& options, int n_samples,
                                     std::uint64_t seed) {
  if (n_samples < 1)
    throw std::invalid_argument("gate_fidelity_random: need at least one sample");
  std::mt19937_64 rng(seed);
  RandomGateStats stats;
  for (int i = 0; i < n_samples; ++i) {
    SourceSettings settings = base;
    settings.spdc_input = false;
    settings.input = random_amplitudes(rng);
    const GateRunResult result = run(program, bind_sources(program, settings), options);
    const auto target = ideal_target(program, settings);
    if (!target.has_value())
      throw std::invalid_argument("gate_fidelity_random: program declares no target");
    const double f = fidelity(result.output, *target);
    stats.min_fidelity = std::min(stats.min_fidelity, f);
    stats.mean_fidelity += f;
    stats.mean_success += result.success_probability;
  }
  stats.mean_fidelity /= n_samples;
  stats.mean_success /= n_samples;
  return stats;
}

namespace {

SweepRow evaluate_point(const SweepSpec& spec, const std::string& label, double value) {
  SweepRow row;
  row.param_label = label;
  row.param_value = value;
  row.seed = spec.seed;

  const CircuitProgram* program = nullptr;
  DetectorParams detector = spec.detector;
  SourceSettings sources = spec.sources;

  switch (spec.param) {
    case SweepSpec::Param::Eta:
      detector.eta = value;
      break;
    case SweepSpec::Param::Nu:
      // nu = dark rate x resolution time; sweep it directly through a unit
      // resolution time.
      detector.dark_rate = value;
      detector.resolution_time = 1.0;
      break;
    case SweepSpec::Param::Gamma2:
      sources.spdc.gamma = std::sqrt(value);
      sources.spdc_ancillae = true;
      break;
    case SweepSpec::Param::SchemeName:
      program = &builtin_scheme(label);
      break;
  }
  if (program == nullptr) {
    program = spec.program.has_value() ? &*spec.program : &builtin_scheme(spec.scheme);
  }

  CircuitProgram restricted;
  if (spec.identity_rows_only) {
    restricted = restrict_to_identity_rows(*program);
    program = &restricted;
  }

  RunOptions options;
  options.detectors.shared = detector;
  options.enumerate_rejected = false;

  if (spec.random_samples > 0) {
    const RandomGateStats stats =
        gate_fidelity_random(*program, sources, options, spec.random_samples, spec.seed);
    row.success = stats.mean_success;
    row.fidelity = stats.mean_fidelity;
    // Truncation varies per sample; report the last run's value instead of
    // re-running, it is not part of the averaged statistics.
    const GateRunResult result = run(*program, bind_sources(*program, sources), options);
    row.truncation_loss = result.truncation_loss;
  } else {
    const GateRunResult result = run(*program, bind_sources(*program, sources), options);
    row.success = result.success_probability;
    row.truncation_loss = result.truncation_loss;
    const auto target = ideal_target(*program, sources);
    row.fidelity = target.has_value() ? fidelity(result.output, *target) : -1.0;
  }
  return row;
}

}  // namespace

std::vector<SweepRow> sweep(const SweepSpec& spec) {
  std::vector<std::pair<std::string, double>> grid;
  if (spec.param == SweepSpec::Param::SchemeName) {
    for (const auto& name : spec.schemes) grid.emplace_back(name, 0.0);
  } else {
    char buf[40];
    for (double v : spec.values) {
      std::snprintf(buf, sizeof buf, "%.10g", v);
      grid.emplace_back(buf, v);
    }
  }
  if (grid.empty()) throw std::invalid_argument("sweep: empty grid");

  // Rows are independent; evaluate concurrently but emit in grid order.
  std::vector<std::future<SweepRow>> futures;
  futures.reserve(grid.size());
  for (const auto& [label, value] : grid) {
    futures.push_back(std::async(std::launch::async, evaluate_point, std::cref(spec),
                                 label, value));
  }
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (auto& f : futures) rows.push_back(f.get());
  return rows;
}

}  // namespace lofock
