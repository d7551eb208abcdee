#include "lofock/elements.hpp"

#include <cmath>
#include <numbers>

namespace lofock {

ElementSpec hwp(std::uint32_t mode, double theta) {
  return ElementSpec{ElementKind::Hwp, mode, 0, theta};
}
ElementSpec qwp(std::uint32_t mode) { return ElementSpec{ElementKind::Qwp, mode, 0, 0.0}; }
ElementSpec phase_shifter(std::uint32_t mode, double phi) {
  return ElementSpec{ElementKind::PhaseShifter, mode, 0, phi};
}
ElementSpec sigma_z(std::uint32_t mode) {
  return ElementSpec{ElementKind::SigmaZ, mode, 0, 0.0};
}
ElementSpec s_gate(std::uint32_t mode) {
  return ElementSpec{ElementKind::SGate, mode, 0, 0.0};
}
ElementSpec hadamard(std::uint32_t mode) {
  return ElementSpec{ElementKind::Hadamard, mode, 0, 0.0};
}
ElementSpec pbs(std::uint32_t mode_a, std::uint32_t mode_b) {
  return ElementSpec{ElementKind::Pbs, mode_a, mode_b, 0.0};
}
ElementSpec rail_swap(std::uint32_t mode_a, std::uint32_t mode_b) {
  return ElementSpec{ElementKind::RailSwap, mode_a, mode_b, 0.0};
}

namespace {

Eigen::Matrix2cd hwp_matrix(double theta) {
  if (!std::isfinite(theta)) throw std::invalid_argument("HWP: non-finite tilt");
  Eigen::Matrix2cd m;
  const double c = std::cos(2.0 * theta);
  const double s = std::sin(2.0 * theta);
  m << c, s, s, -c;
  return m;
}

Eigen::Matrix2cd diag_matrix(cx top, cx bottom) {
  Eigen::Matrix2cd m;
  m << top, cx{0, 0}, cx{0, 0}, bottom;
  return m;
}

}  // namespace

ElementAction matrix_of(const ElementSpec& spec) {
  switch (spec.kind) {
    case ElementKind::Hwp:
      return {ElementAction::Type::PolarizationMatrix, hwp_matrix(spec.theta)};
    case ElementKind::Hadamard:
      return {ElementAction::Type::PolarizationMatrix,
              hwp_matrix(std::numbers::pi / 8.0)};
    case ElementKind::SigmaZ:
      return {ElementAction::Type::PolarizationMatrix, hwp_matrix(0.0)};
    case ElementKind::Qwp:
    case ElementKind::SGate:
      return {ElementAction::Type::PolarizationMatrix,
              diag_matrix(cx{1, 0}, cx{0, 1})};
    case ElementKind::PhaseShifter: {
      if (!std::isfinite(spec.theta))
        throw std::invalid_argument("PhaseShifter: non-finite phase");
      return {ElementAction::Type::PolarizationMatrix,
              diag_matrix(cx{1, 0}, std::polar(1.0, spec.theta))};
    }
    case ElementKind::Pbs:
      return {ElementAction::Type::SwapHRails, Eigen::Matrix2cd::Identity()};
    case ElementKind::RailSwap:
      return {ElementAction::Type::SwapModes, Eigen::Matrix2cd::Identity()};
  }
  throw std::logic_error("matrix_of: unknown element kind");
}

UnitaryApplication apply_element(const PureFockState& state, const ElementSpec& spec) {
  const ElementAction action = matrix_of(spec);
  switch (action.type) {
    case ElementAction::Type::PolarizationMatrix:
      return apply_two_rail_unitary(state, rail(spec.mode, Pol::H),
                                    rail(spec.mode, Pol::V), action.matrix);
    case ElementAction::Type::SwapHRails:
      return {apply_rail_swap(state, rail(spec.mode, Pol::H),
                              rail(spec.mode2, Pol::H)),
              0.0};
    case ElementAction::Type::SwapModes: {
      PureFockState s = apply_rail_swap(state, rail(spec.mode, Pol::H),
                                        rail(spec.mode2, Pol::H));
      s = apply_rail_swap(s, rail(spec.mode, Pol::V), rail(spec.mode2, Pol::V));
      return {std::move(s), 0.0};
    }
  }
  throw std::logic_error("apply_element: unknown action type");
}

std::string element_kind_name(ElementKind kind) {
  switch (kind) {
    case ElementKind::Hwp: return "hwp";
    case ElementKind::Qwp: return "qwp";
    case ElementKind::PhaseShifter: return "phase";
    case ElementKind::SigmaZ: return "sigmaz";
    case ElementKind::SGate: return "sgate";
    case ElementKind::Hadamard: return "hadamard";
    case ElementKind::Pbs: return "pbs";
    case ElementKind::RailSwap: return "railswap";
  }
  return "?";
}

std::string element_to_string(const ElementSpec& spec) {
  std::string out = element_kind_name(spec.kind);
  out += " m" + std::to_string(spec.mode);
  if (spec.kind == ElementKind::Pbs || spec.kind == ElementKind::RailSwap) {
    out += " m" + std::to_string(spec.mode2);
  }
  if (spec.kind == ElementKind::Hwp || spec.kind == ElementKind::PhaseShifter) {
    char buf[32];
    std::snprintf(buf, sizeof buf, " theta=%.12g", spec.theta);
    out += buf;
  }
  return out;
}

}  // namespace lofock
