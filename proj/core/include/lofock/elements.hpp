#pragma once

// Catalog of linear-optical elements. Wave plates and phase gates act on the
// (H, V) rail pair of one spatial mode; a PBS in the HV basis swaps the H
// rails of two modes and leaves V rails alone; RailSwap exchanges both rails
// of two modes (the deterministic SWAP gate).

#include <string>

#include <Eigen/Core>

#include "lofock/fock_state.hpp"

namespace lofock {

enum class ElementKind {
  Hwp,           // half-wave plate at tilt theta
  Qwp,           // quarter-wave plate, fast axis horizontal: diag(1, i)
  PhaseShifter,  // diag(1, e^{i phi}) on the polarization pair
  SigmaZ,        // diag(1, -1), identically HWP(0)
  SGate,         // phase gate diag(1, i), realized by the QWP
  Hadamard,      // HWP at theta = pi/8
  Pbs,
  RailSwap,
};

struct ElementSpec {
  ElementKind kind = ElementKind::Hwp;
  std::uint32_t mode = 0;
  std::uint32_t mode2 = 0;  // PBS / RailSwap only
  double theta = 0.0;       // HWP tilt or phase-shifter phase, radians
};

ElementSpec hwp(std::uint32_t mode, double theta);
ElementSpec qwp(std::uint32_t mode);
ElementSpec phase_shifter(std::uint32_t mode, double phi);
ElementSpec sigma_z(std::uint32_t mode);
ElementSpec s_gate(std::uint32_t mode);
ElementSpec hadamard(std::uint32_t mode);
ElementSpec pbs(std::uint32_t mode_a, std::uint32_t mode_b);
ElementSpec rail_swap(std::uint32_t mode_a, std::uint32_t mode_b);

struct ElementAction {
  enum class Type { PolarizationMatrix, SwapHRails, SwapModes };
  Type type = Type::PolarizationMatrix;
  Eigen::Matrix2cd matrix;  // meaningful for PolarizationMatrix only
};

// Polarization-basis matrix (or rail routing) of an element, acting on the
// (H, V) rails of the target mode.
ElementAction matrix_of(const ElementSpec& spec);

// Dispatches onto the fock-core primitives. Rail resolution from spatial
// modes happens here.
UnitaryApplication apply_element(const PureFockState& state, const ElementSpec& spec);

std::string element_kind_name(ElementKind kind);
std::string element_to_string(const ElementSpec& spec);

}  // namespace lofock
