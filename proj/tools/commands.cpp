#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "lofock/analysis.hpp"
#include "lofock/schemes.hpp"

namespace lofock::cli {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

struct Sink {
  std::ostream* stream;
  std::ofstream file;
};

// Opens config.out_path when set, otherwise points at `fallback`.
bool open_sink(const RunConfig& config, std::ostream& fallback, std::ostream& err,
               Sink& sink) {
  if (config.out_path.empty()) {
    sink.stream = &fallback;
    return true;
  }
  sink.file.open(config.out_path);
  if (!sink.file) {
    err << "error: cannot open output file '" << config.out_path << "'\n";
    return false;
  }
  sink.stream = &sink.file;
  return true;
}

void print_header(const RunConfig& config, std::ostream& out) {
  out << "# scheme = " << config.scheme << "\n";
  out << "# eta = " << fmt(config.detector.eta)
      << "  rdark = " << fmt(config.detector.dark_rate)
      << " 1/s  tres = " << fmt(config.detector.resolution_time)
      << " s  nu = " << fmt(config.detector.nu()) << "\n";
  out << "# source = " << config.source_kind << "  input = " << config.input_kind
      << "  gamma2 = " << fmt(config.gamma2) << "  patterns = " << config.patterns
      << "  cutoff = " << config.cutoff << "  seed = " << config.seed << "\n";
}

json run_record(const RunConfig& config, const GateRunResult& result, double fidelity_value) {
  json record;
  record["scheme"] = config.scheme;
  record["eta"] = config.detector.eta;
  record["nu"] = config.detector.nu();
  record["gamma2"] = config.gamma2;
  record["seed"] = config.seed;
  record["success_probability"] = result.success_probability;
  record["fidelity"] = fidelity_value;
  record["rejected_probability"] = result.rejected_probability;
  record["truncation_loss"] = result.truncation_loss;
  json patterns = json::array();
  for (const auto& row : result.per_pattern_report) {
    if (!row.accepted && row.probability <= 0.0) continue;
    patterns.push_back(json{{"pattern", row.pattern},
                            {"probability", row.probability},
                            {"accepted", row.accepted}});
  }
  record["per_pattern_report"] = std::move(patterns);
  return record;
}

}  // namespace

CircuitProgram resolve_scheme(const std::string& name_or_path) {
  if (is_builtin_scheme(name_or_path)) return builtin_scheme(name_or_path);
  std::ifstream in(name_or_path);
  if (!in) {
    throw ConfigError("scheme '" + name_or_path +
                      "' is neither a built-in scheme nor a readable file");
  }
  std::stringstream body;
  body << in.rdbuf();
  return parse_scheme(body.str(), name_or_path);
}

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  CircuitProgram program;
  try {
    config.validate();
    program = resolve_scheme(config.scheme);
  } catch (const SchemeParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitSchemeError;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  if (config.patterns == "identity") program = restrict_to_identity_rows(program);

  const SourceSettings settings = config.source_settings();
  RunOptions options = config.run_options();

  Sink sink;
  if (!open_sink(config, out, err, sink)) return kExitConfigError;
  std::ostream& dst = *sink.stream;

  if (config.samples > 0) {
    if (program.target == GateTarget::None) {
      err << "error: scheme '" << config.scheme
          << "' declares no gate target; random-input statistics need one\n";
      return kExitConfigError;
    }
    options.enumerate_rejected = false;
    const RandomGateStats stats =
        gate_fidelity_random(program, settings, options, config.samples, config.seed);
    if (config.format == "json") {
      json record{{"scheme", config.scheme},
                  {"samples", config.samples},
                  {"seed", config.seed},
                  {"min_fidelity", stats.min_fidelity},
                  {"mean_fidelity", stats.mean_fidelity},
                  {"mean_success", stats.mean_success}};
      dst << record.dump(2) << "\n";
    } else {
      print_header(config, dst);
      dst << "samples = " << config.samples << "\n";
      dst << "min_F = " << fmt(stats.min_fidelity) << "\n";
      dst << "mean_F = " << fmt(stats.mean_fidelity) << "\n";
      dst << "mean_P = " << fmt(stats.mean_success) << "\n";
    }
    return kExitOk;
  }

  const GateRunResult result = run(program, bind_sources(program, settings), options);
  const auto target = ideal_target(program, settings);
  const double fidelity_value =
      target.has_value() ? fidelity(result.output, *target) : -1.0;

  if (config.format == "json") {
    dst << run_record(config, result, fidelity_value).dump(2) << "\n";
  } else if (config.format == "csv") {
    dst << "# nu = " << fmt(config.detector.nu()) << "\n";
    dst << "param,P,F,trunc_loss,seed\n";
    dst << config.scheme << "," << fmt(result.success_probability) << ","
        << fmt(fidelity_value) << "," << fmt(result.truncation_loss) << ","
        << config.seed << "\n";
  } else {
    print_header(config, dst);
    dst << "P = " << fmt(result.success_probability) << "\n";
    if (target.has_value()) {
      dst << "F = " << fmt(fidelity_value) << "\n";
    } else {
      dst << "F = n/a (no gate target declared)\n";
    }
    dst << "rejected = " << fmt(result.rejected_probability) << "\n";
    dst << "truncation_loss = " << fmt(result.truncation_loss) << "\n";
    dst << "patterns with nonzero probability:\n";
    for (const auto& row : result.per_pattern_report) {
      if (!row.accepted && row.probability <= 0.0) continue;
      dst << "  " << (row.accepted ? "accept" : "reject") << "  "
          << fmt(row.probability) << "  " << row.pattern << "\n";
    }
  }
  return kExitOk;
}

int cmd_sweep(const RunConfig& config, const std::string& param,
              const std::string& grid, std::ostream& out, std::ostream& err) {
  SweepSpec spec;
  try {
    config.validate();

    if (param == "eta") spec.param = SweepSpec::Param::Eta;
    else if (param == "nu") spec.param = SweepSpec::Param::Nu;
    else if (param == "gamma2") spec.param = SweepSpec::Param::Gamma2;
    else if (param == "scheme") spec.param = SweepSpec::Param::SchemeName;
    else throw ConfigError("unknown sweep parameter '" + param + "'");

    if (spec.param == SweepSpec::Param::SchemeName) {
      std::stringstream in(grid);
      std::string name;
      while (std::getline(in, name, ',')) {
        if (!name.empty()) spec.schemes.push_back(name);
      }
      if (spec.schemes.empty()) throw ConfigError("empty scheme grid");
      for (const auto& name : spec.schemes) (void)resolve_scheme(name);
    } else if (grid.find(':') != std::string::npos) {
      double start = 0, stop = 0, step = 0;
      if (std::sscanf(grid.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3 ||
          step <= 0.0 || stop < start) {
        throw ConfigError("bad grid '" + grid + "' (want start:stop:step)");
      }
      for (double v = start; v <= stop + 0.5 * step; v += step) {
        spec.values.push_back(v);
      }
    } else {
      std::stringstream in(grid);
      std::string piece;
      while (std::getline(in, piece, ',')) {
        char* end = nullptr;
        const double v = std::strtod(piece.c_str(), &end);
        if (end == nullptr || *end != '\0' || piece.empty()) {
          throw ConfigError("bad grid value '" + piece + "'");
        }
        spec.values.push_back(v);
      }
      if (spec.values.empty()) throw ConfigError("empty grid");
    }

    spec.scheme = config.scheme;
    if (!is_builtin_scheme(config.scheme)) spec.program = resolve_scheme(config.scheme);
    spec.detector = config.detector;
    spec.sources = config.source_settings();
    spec.identity_rows_only = config.patterns == "identity";
    spec.random_samples = config.samples;
    spec.seed = config.seed;
  } catch (const SchemeParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitSchemeError;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  }

  const std::vector<SweepRow> rows = sweep(spec);

  Sink sink;
  if (!open_sink(config, out, err, sink)) return kExitConfigError;
  std::ostream& dst = *sink.stream;

  if (config.format == "json") {
    json array = json::array();
    for (const auto& row : rows) {
      array.push_back(json{{"param", row.param_label},
                           {"P", row.success},
                           {"F", row.fidelity},
                           {"trunc_loss", row.truncation_loss},
                           {"seed", row.seed}});
    }
    dst << array.dump(2) << "\n";
  } else {
    dst << "# nu = " << fmt(config.detector.nu()) << "\n";
    dst << "param,P,F,trunc_loss,seed\n";
    for (const auto& row : rows) {
      dst << row.param_label << "," << fmt(row.success) << "," << fmt(row.fidelity)
          << "," << fmt(row.truncation_loss) << "," << row.seed << "\n";
    }
  }
  return kExitOk;
}

int cmd_verify(bool inject_fault, std::ostream& out, std::ostream& err) {
  bool all_pass = true;
  std::string first_failure;
  const auto report_line = [&](const std::string& name, double error, bool pass) {
    out << (pass ? "ok   " : "FAIL ") << name << " (max error " << fmt(error) << ")\n";
    if (!pass && first_failure.empty()) first_failure = name;
    all_pass = all_pass && pass;
  };

  for (const auto& check : verify_decompositions(inject_fault).checks) {
    report_line(check.name, check.max_abs_error, check.pass);
  }

  // Quick invariant suite on top of the matrix identities.
  {
    double worst = 0.0;
    for (double eta : {0.0, 0.3, 0.7, 1.0}) {
      for (double nu : {0.0, 1e-6, 1e-2}) {
        const auto povm = povm_weights(DetectorParams{eta, nu, 1.0}, 4);
        for (int n = 0; n <= 4; ++n) {
          worst = std::max(worst, std::abs(povm.no_click[n] + povm.click[n] - 1.0));
        }
      }
    }
    report_line("povm-completeness", worst, worst == 0.0);
  }
  {
    double worst = 0.0;
    for (int i = 0; i < 64; ++i) {
      const double theta = -3.2 + 0.1 * i;
      const auto m = matrix_of(hwp(0, theta)).matrix;
      worst = std::max(
          worst,
          (m.adjoint() * m - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff());
    }
    report_line("element-unitarity", worst, worst <= 1e-12);
  }
  {
    // two-photon interference at the pi/8 plate
    const FockLayout layout(2, 2);
    const std::vector<int> hv{1, 1};
    const auto state = PureFockState::basis(layout, hv);
    const auto res = apply_element(state, hadamard(0));
    const double is2 = 1.0 / std::sqrt(2.0);
    const double worst = std::max(
        std::abs(res.state.amplitude(std::vector<int>{2, 0}) - is2),
        std::abs(res.state.amplitude(std::vector<int>{0, 2}) + is2));
    report_line("two-photon-interference", worst, worst <= 1e-12);
  }

  if (!all_pass) {
    err << "verification failed: " << first_failure << "\n";
    return kExitCheckFailed;
  }
  return kExitOk;
}

int cmd_list_schemes(std::ostream& out) {
  out << "built-in schemes (success probability with ideal sources, no dark counts):\n";
  for (const auto& info : scheme_catalog()) {
    const int denom = static_cast<int>(std::lround(1.0 / info.success_prefactor));
    char line[160];
    std::snprintf(line, sizeof line, "  %-24s P = eta^%d/%-3d %s\n", info.name.c_str(),
                  info.eta_power, denom, info.description.c_str());
    out << line;
  }
  const int ref_denom = static_cast<int>(std::lround(1.0 / kReferenceIswapPrefactor));
  out << "comparison baseline: an earlier published iSWAP scheme with the same EPR"
         " ancillae\n  reaches P = eta^"
      << kReferenceIswapEtaPower << "/" << ref_denom
      << " with ten conventional detectors; the iswap-scheme2-cs\n  wrapper reaches"
         " four times that probability with eight detectors.\n";
  return kExitOk;
}

}  // namespace lofock::cli
