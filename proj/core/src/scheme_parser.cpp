#include <cmath>
#include <numbers>
#include <sstream>

#include "lofock/schemes.hpp"

namespace lofock {

namespace {

[[noreturn]] void fail(const std::string& name, int line_no, const std::string& msg) {
  throw SchemeParseError("scheme '" + name + "', line " + std::to_string(line_no) +
                         ": " + msg);
}

std::vector<std::string> tokenize(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> tokens;
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  return tokens;
}

// Accepts plain radians, "pi", "pi/N" and "-pi/N".
double parse_angle(const std::string& s, const std::string& name, int line_no) {
  std::string body = s;
  double sign = 1.0;
  if (!body.empty() && body.front() == '-') {
    sign = -1.0;
    body.erase(body.begin());
  }
  if (body == "pi") return sign * std::numbers::pi;
  if (body.rfind("pi/", 0) == 0) {
    const double denom = std::strtod(body.c_str() + 3, nullptr);
    if (denom == 0.0) fail(name, line_no, "bad angle '" + s + "'");
    return sign * std::numbers::pi / denom;
  }
  char* end = nullptr;
  const double value = std::strtod(body.c_str(), &end);
  if (end == nullptr || *end != '\0') fail(name, line_no, "bad angle '" + s + "'");
  return sign * value;
}

struct ElementArity {
  int modes;
  bool takes_theta;
};

bool element_kind_from_token(const std::string& tok, ElementKind& kind,
                             ElementArity& arity) {
  if (tok == "hwp") {
    kind = ElementKind::Hwp;
    arity = {1, true};
  } else if (tok == "qwp") {
    kind = ElementKind::Qwp;
    arity = {1, false};
  } else if (tok == "phase") {
    kind = ElementKind::PhaseShifter;
    arity = {1, true};
  } else if (tok == "sigmaz") {
    kind = ElementKind::SigmaZ;
    arity = {1, false};
  } else if (tok == "sgate") {
    kind = ElementKind::SGate;
    arity = {1, false};
  } else if (tok == "hadamard") {
    kind = ElementKind::Hadamard;
    arity = {1, false};
  } else if (tok == "pbs") {
    kind = ElementKind::Pbs;
    arity = {2, false};
  } else if (tok == "railswap") {
    kind = ElementKind::RailSwap;
    arity = {2, false};
  } else {
    return false;
  }
  return true;
}

}  // namespace

CircuitProgram parse_scheme(const std::string& text, const std::string& name) {
  CircuitProgram program;
  program.name = name;

  const auto mode_of = [&](const std::string& label, int line_no) {
    for (std::size_t i = 0; i < program.register_modes.size(); ++i) {
      if (program.register_modes[i] == label) return static_cast<std::uint32_t>(i);
    }
    fail(name, line_no, "unknown mode '" + label + "'");
  };

  const auto rail_of = [&](const std::string& token, int line_no) {
    if (token.size() < 2) fail(name, line_no, "bad rail '" + token + "'");
    const char pol_ch = token.back();
    if (pol_ch != 'H' && pol_ch != 'V') fail(name, line_no, "bad rail '" + token + "'");
    const std::uint32_t mode = mode_of(token.substr(0, token.size() - 1), line_no);
    return rail(mode, pol_ch == 'H' ? Pol::H : Pol::V);
  };

  // Parses "<kind> <mode> [<mode2>] [theta=...]" starting at tokens[pos].
  const auto parse_element = [&](const std::vector<std::string>& tokens,
                                 std::size_t& pos, int line_no) {
    ElementKind kind{};
    ElementArity arity{};
    if (pos >= tokens.size() ||
        !element_kind_from_token(tokens[pos], kind, arity)) {
      fail(name, line_no, "expected an element kind, got '" +
                              (pos < tokens.size() ? tokens[pos] : "<eol>") + "'");
    }
    ++pos;
    ElementSpec spec;
    spec.kind = kind;
    if (pos >= tokens.size()) fail(name, line_no, "element is missing its mode");
    spec.mode = mode_of(tokens[pos++], line_no);
    if (arity.modes == 2) {
      if (pos >= tokens.size()) fail(name, line_no, "element needs two modes");
      spec.mode2 = mode_of(tokens[pos++], line_no);
    }
    if (pos < tokens.size() && tokens[pos].rfind("theta=", 0) == 0) {
      if (!arity.takes_theta) fail(name, line_no, "element does not take theta");
      spec.theta = parse_angle(tokens[pos].substr(6), name, line_no);
      ++pos;
    } else if (arity.takes_theta && kind == ElementKind::Hwp) {
      fail(name, line_no, "hwp requires theta=<angle>");
    }
    return spec;
  };

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  bool in_measure = false;
  MeasureStep measure_step;

  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    auto tokens = tokenize(raw);
    if (tokens.empty()) continue;

    if (in_measure) {
      if (tokens[0] == "}") {
        program.steps.push_back(Step::measure_ff(std::move(measure_step)));
        measure_step = {};
        in_measure = false;
        continue;
      }
      // "<bits> -> accept [corrections] | reject"
      if (tokens.size() < 3 || tokens[1] != "->") {
        fail(name, line_no, "expected '<bits> -> accept|reject'");
      }
      FeedforwardRule rule;
      if (tokens[0].size() != measure_step.rails.size()) {
        fail(name, line_no, "pattern length does not match measured rails");
      }
      for (char ch : tokens[0]) {
        if (ch != '0' && ch != '1') fail(name, line_no, "pattern digits must be 0/1");
        rule.outcomes.push_back(ch - '0');
      }
      if (tokens[2] == "accept") {
        rule.accept = true;
        std::size_t pos = 3;
        while (pos < tokens.size()) {
          rule.corrections.push_back(parse_element(tokens, pos, line_no));
        }
      } else if (tokens[2] == "reject") {
        if (tokens.size() != 3) fail(name, line_no, "reject takes no arguments");
      } else {
        fail(name, line_no, "expected accept or reject");
      }
      measure_step.rules.push_back(std::move(rule));
      continue;
    }

    const std::string& head = tokens[0];
    if (head == "gate") {
      if (tokens.size() != 2) fail(name, line_no, "gate takes one argument");
      if (tokens[1] == "cs") program.target = GateTarget::Cs;
      else if (tokens[1] == "cnot") program.target = GateTarget::Cnot;
      else if (tokens[1] == "iswap") program.target = GateTarget::Iswap;
      else if (tokens[1] == "chi") program.target = GateTarget::ChiState;
      else if (tokens[1] == "none") program.target = GateTarget::None;
      else fail(name, line_no, "unknown gate '" + tokens[1] + "'");
    } else if (head == "mode") {
      if (tokens.size() < 2) fail(name, line_no, "mode takes a label");
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        program.register_modes.push_back(tokens[i]);
      }
    } else if (head == "source") {
      if (tokens.size() < 3) fail(name, line_no, "source takes a kind and modes");
      CircuitProgram::SourceSlot slot;
      if (tokens[1] == "input") slot.kind = SourceKind::Input;
      else if (tokens[1] == "epr") slot.kind = SourceKind::Epr;
      else if (tokens[1] == "ghz") slot.kind = SourceKind::Ghz;
      else if (tokens[1] == "chi") slot.kind = SourceKind::Chi;
      else if (tokens[1] == "vacuum") slot.kind = SourceKind::Vacuum;
      else fail(name, line_no, "unknown source kind '" + tokens[1] + "'");
      for (std::size_t i = 2; i < tokens.size(); ++i) {
        slot.modes.push_back(mode_of(tokens[i], line_no));
      }
      program.sources.push_back(std::move(slot));
    } else if (head == "apply") {
      std::size_t pos = 1;
      const ElementSpec spec = parse_element(tokens, pos, line_no);
      if (pos != tokens.size()) fail(name, line_no, "trailing tokens after element");
      program.steps.push_back(Step::apply(spec));
    } else if (head == "measure") {
      if (tokens.back() != "{") fail(name, line_no, "measure line must end with '{'");
      for (std::size_t i = 1; i + 1 < tokens.size(); ++i) {
        measure_step.rails.push_back(rail_of(tokens[i], line_no));
      }
      if (measure_step.rails.empty()) fail(name, line_no, "measure needs rails");
      in_measure = true;
    } else if (head == "output") {
      if (tokens.size() < 2) fail(name, line_no, "output takes mode labels");
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        program.output_modes.push_back(mode_of(tokens[i], line_no));
      }
    } else {
      fail(name, line_no, "unknown directive '" + head + "'");
    }
  }
  if (in_measure) fail(name, line_no, "unterminated measure block");

  try {
    program.validate();
  } catch (const std::invalid_argument& e) {
    throw SchemeParseError(e.what());
  }
  return program;
}

}  // namespace lofock
