// lofock: exact simulator of post-selected linear-optical two-qubit gates.
//
//   lofock run --scheme scheme2-cs --eta 1
//   lofock sweep --param eta --grid 0.1:1.0:0.1 --scheme scheme2-cs
//   lofock verify
//   lofock list-schemes
//
// Options override values from --config <file>; see README for the config
// key reference.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

using lofock::ConfigError;
using lofock::RunConfig;

struct FlagValues {
  std::string config_path;
  std::string scheme;
  double eta = 0;
  double rdark = 0;
  double tres = 0;
  double gamma2 = 0;
  std::string source_kind;
  std::string input_kind;
  std::string alphas;
  std::string patterns;
  int samples = 0;
  int cutoff = 0;
  std::uint64_t seed = 0;
  std::string format;
  std::string out_path;
  bool double_pairs = false;
  bool given_chi = false;
  bool identity_rows = false;
};

void add_common_flags(CLI::App* cmd, FlagValues& flags) {
  cmd->add_option("--config", flags.config_path, "config file (key = value lines)");
  cmd->add_option("--scheme", flags.scheme, "built-in scheme name or scheme file path");
  cmd->add_option("--eta", flags.eta, "detector efficiency");
  cmd->add_option("--rdark", flags.rdark, "dark count rate (1/s)");
  cmd->add_option("--tres", flags.tres, "detector resolution time (s)");
  cmd->add_option("--gamma2", flags.gamma2, "SPDC pair rate per pulse");
  cmd->add_option("--source", flags.source_kind, "ancilla sources: ideal|spdc");
  cmd->add_option("--input", flags.input_kind, "input state: ideal|spdc");
  cmd->add_option("--alphas", flags.alphas,
                  "input amplitudes re1,im1,...,re4,im4 (normalized before use)");
  cmd->add_option("--samples", flags.samples, "random inputs instead of --alphas");
  cmd->add_option("--cutoff", flags.cutoff, "photon cutoff per rail");
  cmd->add_option("--seed", flags.seed, "random seed");
  cmd->add_option("--format", flags.format, "output format: text|json|csv");
  cmd->add_option("--out", flags.out_path, "write results to this file");
  cmd->add_flag("--double-pairs", flags.double_pairs,
                "include the O(gamma^2) double-pair SPDC terms");
  cmd->add_flag("--given-chi", flags.given_chi,
                "use the given-ancilla variant of the GHZ CNOT scheme");
  cmd->add_flag("--identity-rows", flags.identity_rows,
                "accept only feedforward rows that need no correction");
}

// File values first, then explicit flags on top.
RunConfig build_config(const CLI::App* cmd, const FlagValues& flags) {
  RunConfig config;
  if (!flags.config_path.empty()) {
    std::ifstream in(flags.config_path);
    if (!in) throw ConfigError("cannot read config file '" + flags.config_path + "'");
    std::stringstream body;
    body << in.rdbuf();
    config = RunConfig::parse(body.str());
  }
  const auto given = [cmd](const std::string& name) { return cmd->count(name) > 0; };
  if (given("--scheme")) config.scheme = flags.scheme;
  if (given("--eta")) config.detector.eta = flags.eta;
  if (given("--rdark")) config.detector.dark_rate = flags.rdark;
  if (given("--tres")) config.detector.resolution_time = flags.tres;
  if (given("--gamma2")) config.gamma2 = flags.gamma2;
  if (given("--source")) config.set("source.kind", flags.source_kind);
  if (given("--input")) config.set("input.kind", flags.input_kind);
  if (given("--alphas")) config.set("input.alphas", flags.alphas);
  if (given("--samples")) config.samples = flags.samples;
  if (given("--cutoff")) config.cutoff = flags.cutoff;
  if (given("--seed")) config.seed = flags.seed;
  if (given("--format")) config.set("format", flags.format);
  if (given("--out")) config.out_path = flags.out_path;
  if (flags.double_pairs) config.double_pairs = true;
  if (flags.identity_rows) config.patterns = "identity";
  if (flags.given_chi) {
    if (config.scheme != "scheme1-cnot") {
      throw ConfigError("--given-chi applies to the scheme1-cnot scheme only");
    }
    config.scheme = "scheme1-cnot-given-chi";
  }
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact simulator of post-selected linear-optical two-qubit gates"};
  app.require_subcommand(1);

  FlagValues run_flags, sweep_flags;
  std::string sweep_param = "eta";
  std::string sweep_grid;
  bool inject_fault = false;

  CLI::App* run_cmd = app.add_subcommand("run", "run one scheme and report P, F");
  add_common_flags(run_cmd, run_flags);

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "run a parameter grid, emit CSV/JSON rows");
  add_common_flags(sweep_cmd, sweep_flags);
  sweep_cmd->add_option("--param", sweep_param, "eta|nu|gamma2|scheme");
  sweep_cmd->add_option("--grid", sweep_grid,
                        "comma list (or start:stop:step; scheme names for "
                        "--param scheme)");

  CLI::App* verify_cmd =
      app.add_subcommand("verify", "check gate decompositions and core invariants");
  verify_cmd->add_flag("--inject-fault", inject_fault)->group("");  // test hook

  app.add_subcommand("list-schemes", "list built-in schemes and their catalog data");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      return lofock::cli::cmd_run(build_config(run_cmd, run_flags), std::cout,
                                  std::cerr);
    }
    if (sweep_cmd->parsed()) {
      return lofock::cli::cmd_sweep(build_config(sweep_cmd, sweep_flags), sweep_param,
                                    sweep_grid, std::cout, std::cerr);
    }
    if (verify_cmd->parsed()) {
      return lofock::cli::cmd_verify(inject_fault, std::cout, std::cerr);
    }
    return lofock::cli::cmd_list_schemes(std::cout);
  } catch (const lofock::SchemeParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return lofock::cli::kExitSchemeError;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return lofock::cli::kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return lofock::cli::kExitConfigError;
  }
}
