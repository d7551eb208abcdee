#include <doctest.h>

#include <numbers>
#include <random>

#include "lofock/elements.hpp"
#include "lofock/sources.hpp"
#include "test_util.hpp"

using namespace lofock;
using test::state_of;

TEST_SUITE_BEGIN("elements");

TEST_CASE("wave-plate matrices") {
  const auto h = matrix_of(hadamard(0)).matrix;
  const double is2 = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(h(0, 0) - is2) <= 1e-15);
  CHECK(std::abs(h(0, 1) - is2) <= 1e-15);
  CHECK(std::abs(h(1, 0) - is2) <= 1e-15);
  CHECK(std::abs(h(1, 1) + is2) <= 1e-15);

  const auto z = matrix_of(sigma_z(0)).matrix;
  CHECK(std::abs(z(0, 0) - 1.0) <= 1e-15);
  CHECK(std::abs(z(1, 1) + 1.0) <= 1e-15);
  CHECK(std::abs(z(0, 1)) + std::abs(z(1, 0)) <= 1e-15);

  const auto s = matrix_of(s_gate(0)).matrix;
  CHECK(std::abs(s(0, 0) - 1.0) <= 1e-15);
  CHECK(std::abs(s(1, 1) - cx{0.0, 1.0}) <= 1e-15);
  CHECK((matrix_of(qwp(0)).matrix - s).cwiseAbs().maxCoeff() <= 1e-15);

  SUBCASE("hadamard is the pi/8 half-wave plate") {
    const auto hwp_pi8 = matrix_of(hwp(0, std::numbers::pi / 8.0)).matrix;
    CHECK((hwp_pi8 - h).cwiseAbs().maxCoeff() <= 1e-15);
  }
}

TEST_CASE("unitarity across the tilt range") {
  for (int i = 0; i < 100; ++i) {
    const double theta = -std::numbers::pi + i * (2.0 * std::numbers::pi / 99.0);
    const auto m = matrix_of(hwp(0, theta)).matrix;
    CHECK((m.adjoint() * m - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() <=
          1e-12);
    const auto p = matrix_of(phase_shifter(0, theta)).matrix;
    CHECK((p.adjoint() * p - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() <=
          1e-12);
  }
}

TEST_CASE("half-wave plates are involutive on states") {
  std::mt19937_64 rng(19);
  // per-key totals stay within the cutoff, so nothing truncates
  const FockLayout layout(2, 2);
  PureFockState::AmplitudeMap amps;
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> bit(0, 1);
  for (int t = 0; t < 6; ++t) {
    const std::vector<int> counts{bit(rng), bit(rng)};
    amps[layout.pack(counts)] += cx{normal(rng), normal(rng)};
  }
  const auto state = PureFockState::from_map(layout, std::move(amps)).normalized();
  for (double theta : {0.1, std::numbers::pi / 8.0, 1.2}) {
    const auto once = apply_element(state, hwp(0, theta));
    const auto twice = apply_element(once.state, hwp(0, theta));
    for (const auto& [key, amp] : state.amplitudes()) {
      CHECK(std::abs(twice.state.amplitude(key) - amp) <= 1e-12);
    }
  }
}

TEST_CASE("hadamard on a V photon") {
  const auto v = state_of(2, 2, {{{0, 1}, 1.0}});
  const auto out = apply_element(v, hadamard(0)).state;
  const double is2 = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(out.amplitude(std::vector<int>{1, 0}) - is2) <= 1e-12);
  CHECK(std::abs(out.amplitude(std::vector<int>{0, 1}) + is2) <= 1e-12);
}

TEST_CASE("hadamard equals the beam-splitter construction up to global phase") {
  // 50/50 symmetric beam splitter between the H and V rails, sandwiched by
  // -pi/2 phase shifts on the V rail.
  Eigen::Matrix2cd bs;
  const double is2 = 1.0 / std::sqrt(2.0);
  bs << cx{is2, 0}, cx{0, is2}, cx{0, is2}, cx{is2, 0};

  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    // random single-photon polarization state
    std::normal_distribution<double> normal(0.0, 1.0);
    const cx a{normal(rng), normal(rng)};
    const cx b{normal(rng), normal(rng)};
    const double n = std::sqrt(std::norm(a) + std::norm(b));
    const auto state = state_of(1 * 2, 2, {{{1, 0}, a / n}, {{0, 1}, b / n}});

    const auto via_hwp = apply_element(state, hadamard(0)).state;
    auto s = apply_element(state, phase_shifter(0, -std::numbers::pi / 2.0)).state;
    s = apply_two_rail_unitary(s, rail(0, Pol::H), rail(0, Pol::V), bs).state;
    s = apply_element(s, phase_shifter(0, -std::numbers::pi / 2.0)).state;

    const cx overlap = inner_product(via_hwp, s);
    CHECK(std::abs(std::abs(overlap) - 1.0) <= 1e-12);
  }
}

TEST_CASE("PBS routes H photons between modes and is involutive") {
  // |H>_a |V>_b : the H photon crosses to b, the V photon stays
  const auto in = state_of(4, 2, {{{1, 0, 0, 1}, 1.0}});
  const auto out = apply_element(in, pbs(0, 1)).state;
  CHECK(std::abs(out.amplitude(std::vector<int>{0, 0, 1, 1}) - 1.0) <= 1e-15);

  const auto back = apply_element(out, pbs(0, 1)).state;
  CHECK(std::abs(back.amplitude(std::vector<int>{1, 0, 0, 1}) - 1.0) <= 1e-15);

  // photon number is conserved term by term
  std::mt19937_64 rng(29);
  const auto state = test::random_state(FockLayout(4, 2), 10, rng);
  const auto routed = apply_element(state, pbs(0, 1)).state;
  double total_in = 0.0, total_out = 0.0;
  for (const auto& [key, amp] : state.amplitudes())
    total_in += state.layout().total(key) * std::norm(amp);
  for (const auto& [key, amp] : routed.amplitudes())
    total_out += routed.layout().total(key) * std::norm(amp);
  CHECK(total_in == doctest::Approx(total_out).epsilon(1e-12));
}

TEST_CASE("rail swap exchanges whole modes") {
  const auto in = state_of(4, 2, {{{1, 0, 0, 1}, 1.0}});  // |H>_a |V>_b
  const auto out = apply_element(in, rail_swap(0, 1)).state;
  CHECK(std::abs(out.amplitude(std::vector<int>{0, 1, 1, 0}) - 1.0) <= 1e-15);
}

TEST_CASE("the phase gate squares to sigma_z") {
  const auto v = state_of(2, 2, {{{0, 1}, 1.0}});
  auto s = apply_element(v, s_gate(0)).state;
  s = apply_element(s, s_gate(0)).state;
  CHECK(std::abs(s.amplitude(std::vector<int>{0, 1}) + 1.0) <= 1e-15);
}

TEST_CASE("element application validates the register") {
  const auto s = state_of(2, 2, {{{1, 0}, 1.0}});
  CHECK_THROWS_AS(apply_element(s, hadamard(1)), std::invalid_argument);
  CHECK_THROWS_AS(apply_element(s, hwp(0, std::nan(""))), std::invalid_argument);
}

TEST_SUITE_END();
