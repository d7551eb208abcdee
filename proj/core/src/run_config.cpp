#include "lofock/run_config.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace lofock {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end == nullptr || *end != '\0' || value.empty()) {
    throw ConfigError("config key '" + key + "': bad number '" + value + "'");
  }
  return v;
}

long long parse_int(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const long long v = std::strtoll(value.c_str(), &end, 10);
  if (end == nullptr || *end != '\0' || value.empty()) {
    throw ConfigError("config key '" + key + "': bad integer '" + value + "'");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "on") return true;
  if (value == "0" || value == "false" || value == "off") return false;
  throw ConfigError("config key '" + key + "': bad boolean '" + value + "'");
}

std::vector<double> parse_csv_doubles(const std::string& key, const std::string& value,
                                      std::size_t expected) {
  std::vector<double> out;
  std::stringstream in(value);
  std::string piece;
  while (std::getline(in, piece, ',')) out.push_back(parse_double(key, trim(piece)));
  if (out.size() != expected) {
    throw ConfigError("config key '" + key + "': expected " +
                      std::to_string(expected) + " comma-separated numbers");
  }
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
  if (key == "scheme") {
    scheme = value;
  } else if (key == "detector.eta") {
    detector.eta = parse_double(key, value);
  } else if (key == "detector.rdark") {
    detector.dark_rate = parse_double(key, value);
  } else if (key == "detector.tres") {
    detector.resolution_time = parse_double(key, value);
  } else if (key.rfind("detector.", 0) == 0) {
    // per-detector override: detector.<rail>.<eta|rdark|tres>
    const auto rest = key.substr(9);
    const auto dot = rest.find('.');
    if (dot == std::string::npos) throw ConfigError("unknown config key '" + key + "'");
    const std::string rail_name = rest.substr(0, dot);
    const std::string field = rest.substr(dot + 1);
    auto [it, inserted] = detector_overrides.try_emplace(rail_name, detector);
    if (field == "eta") it->second.eta = parse_double(key, value);
    else if (field == "rdark") it->second.dark_rate = parse_double(key, value);
    else if (field == "tres") it->second.resolution_time = parse_double(key, value);
    else throw ConfigError("unknown config key '" + key + "'");
  } else if (key == "source.kind") {
    if (value != "ideal" && value != "spdc")
      throw ConfigError("config key 'source.kind': expected ideal or spdc");
    source_kind = value;
  } else if (key == "source.gamma2") {
    gamma2 = parse_double(key, value);
  } else if (key == "source.double_pairs") {
    double_pairs = parse_bool(key, value);
  } else if (key == "input.kind") {
    if (value != "ideal" && value != "spdc")
      throw ConfigError("config key 'input.kind': expected ideal or spdc");
    input_kind = value;
  } else if (key == "input.alphas") {
    const auto v = parse_csv_doubles(key, value, 8);
    alphas = TwoQubitAmplitudes{cx{v[0], v[1]}, cx{v[2], v[3]}, cx{v[4], v[5]},
                                cx{v[6], v[7]}};
  } else if (key == "patterns") {
    if (value != "all" && value != "identity")
      throw ConfigError("config key 'patterns': expected all or identity");
    patterns = value;
  } else if (key == "cutoff") {
    cutoff = static_cast<int>(parse_int(key, value));
  } else if (key == "samples") {
    samples = static_cast<int>(parse_int(key, value));
  } else if (key == "seed") {
    seed = static_cast<std::uint64_t>(parse_int(key, value));
  } else if (key == "format") {
    if (value != "text" && value != "json" && value != "csv")
      throw ConfigError("config key 'format': expected text, json or csv");
    format = value;
  } else if (key == "out") {
    out_path = value;
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

RunConfig RunConfig::parse(const std::string& text) {
  RunConfig config;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key = value");
    }
    config.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return config;
}

std::string RunConfig::to_text() const {
  std::string out;
  out += "scheme = " + scheme + "\n";
  out += "detector.eta = " + fmt(detector.eta) + "\n";
  out += "detector.rdark = " + fmt(detector.dark_rate) + "\n";
  out += "detector.tres = " + fmt(detector.resolution_time) + "\n";
  for (const auto& [rail_name, params] : detector_overrides) {
    out += "detector." + rail_name + ".eta = " + fmt(params.eta) + "\n";
    out += "detector." + rail_name + ".rdark = " + fmt(params.dark_rate) + "\n";
    out += "detector." + rail_name + ".tres = " + fmt(params.resolution_time) + "\n";
  }
  out += "source.kind = " + source_kind + "\n";
  out += "source.gamma2 = " + fmt(gamma2) + "\n";
  out += std::string("source.double_pairs = ") + (double_pairs ? "1" : "0") + "\n";
  out += "input.kind = " + input_kind + "\n";
  out += "input.alphas = " + fmt(alphas.a1.real()) + "," + fmt(alphas.a1.imag()) + "," +
         fmt(alphas.a2.real()) + "," + fmt(alphas.a2.imag()) + "," +
         fmt(alphas.a3.real()) + "," + fmt(alphas.a3.imag()) + "," +
         fmt(alphas.a4.real()) + "," + fmt(alphas.a4.imag()) + "\n";
  out += "patterns = " + patterns + "\n";
  out += "cutoff = " + std::to_string(cutoff) + "\n";
  out += "samples = " + std::to_string(samples) + "\n";
  out += "seed = " + std::to_string(seed) + "\n";
  out += "format = " + format + "\n";
  out += "out = " + out_path + "\n";
  return out;
}

void RunConfig::validate() const {
  if (scheme.empty()) throw ConfigError("config key 'scheme': empty");
  try {
    detector.validate();
    for (const auto& [rail_name, params] : detector_overrides) params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config key 'detector.*': ") + e.what());
  }
  if (gamma2 < 0.0 || gamma2 > 1e-2)
    throw ConfigError("config key 'source.gamma2': outside [0, 1e-2]");
  if (cutoff < 1) throw ConfigError("config key 'cutoff': must be >= 1");
  if (samples < 0) throw ConfigError("config key 'samples': must be >= 0");
  if (alphas.norm_sq() <= 0.0)
    throw ConfigError("config key 'input.alphas': zero vector");
}

SourceSettings RunConfig::source_settings() const {
  SourceSettings settings;
  settings.spdc_ancillae = source_kind == "spdc";
  settings.spdc_input = input_kind == "spdc";
  settings.spdc.gamma = std::sqrt(gamma2);
  settings.spdc.include_double_pairs = double_pairs;
  settings.input = alphas.normalized();
  settings.cutoff = cutoff;
  return settings;
}

RunOptions RunConfig::run_options() const {
  RunOptions options;
  options.detectors.shared = detector;
  for (const auto& [rail_name, params] : detector_overrides) {
    options.detectors.overrides.emplace(rail_name, params);
  }
  return options;
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  return a.scheme == b.scheme && a.detector == b.detector &&
         a.detector_overrides == b.detector_overrides &&
         a.source_kind == b.source_kind && a.input_kind == b.input_kind &&
         a.gamma2 == b.gamma2 && a.double_pairs == b.double_pairs &&
         a.alphas == b.alphas && a.patterns == b.patterns && a.cutoff == b.cutoff &&
         a.samples == b.samples && a.seed == b.seed && a.format == b.format &&
         a.out_path == b.out_path;
}

}  // namespace lofock
