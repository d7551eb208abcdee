#include <doctest.h>

#include <cmath>

#include "lofock/analysis.hpp"
#include "test_util.hpp"

using namespace lofock;

TEST_SUITE_BEGIN("analysis");

TEST_CASE("ideal gate matrices") {
  for (auto kind : {TwoQubitGate::Identity, TwoQubitGate::Cs, TwoQubitGate::Cnot,
                    TwoQubitGate::Iswap, TwoQubitGate::Swap}) {
    const auto gate = IdealGate::of(kind);
    CHECK((gate.matrix.adjoint() * gate.matrix - Eigen::Matrix4cd::Identity())
              .cwiseAbs()
              .maxCoeff() <= 1e-15);
  }
  const auto cs = IdealGate::of(TwoQubitGate::Cs);
  CHECK(cs.matrix(3, 3) == cx{-1.0, 0.0});

  SUBCASE("iSWAP action on amplitudes") {
    const auto out = apply_ideal_gate(IdealGate::of(TwoQubitGate::Iswap),
                                      TwoQubitAmplitudes{0.0, 1.0, 0.0, 0.0});
    CHECK(std::abs(out.a3 - cx{0.0, 1.0}) <= 1e-15);
    CHECK(std::abs(out.a2) <= 1e-15);
  }
  SUBCASE("CNOT flips the target when the control is V") {
    const auto out = apply_ideal_gate(IdealGate::of(TwoQubitGate::Cnot),
                                      TwoQubitAmplitudes{0.1, 0.2, 0.3, 0.9273});
    CHECK(std::abs(out.a3 - 0.9273) <= 1e-15);
    CHECK(std::abs(out.a4 - 0.3) <= 1e-15);
  }
}

TEST_CASE("decomposition identities verify by plain matrix algebra") {
  const auto report = verify_decompositions();
  CHECK(report.all_pass());
  CHECK(report.checks.size() >= 4);
  for (const auto& check : report.checks) CHECK(check.max_abs_error <= 1e-12);

  SUBCASE("a perturbed phase gate is caught and named") {
    const auto broken = verify_decompositions(/*inject_fault=*/true);
    CHECK_FALSE(broken.all_pass());
    bool named = false;
    for (const auto& check : broken.checks) {
      if (check.name == "iswap-decomposition") named = !check.pass;
    }
    CHECK(named);
  }
}

TEST_CASE("fidelity") {
  const auto target = epr_pair();
  SUBCASE("a branch equal to the target scores one") {
    CHECK(fidelity(StateEnsemble::pure(target), target) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("an orthogonal output scores zero") {
    CHECK(fidelity(StateEnsemble::pure(bell_psi_plus()), target) <= 1e-15);
  }
  SUBCASE("global phases do not matter") {
    const auto phased = StateEnsemble::pure(target.scaled(std::polar(1.0, 1.234)));
    CHECK(fidelity(phased, target.scaled(std::polar(1.0, -0.7))) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("weights average the branch overlaps") {
    StateEnsemble mix;
    mix.branches.push_back({0.25, target});
    mix.branches.push_back({0.75, bell_psi_plus()});
    CHECK(fidelity(mix, target) == doctest::Approx(0.25).epsilon(1e-12));
  }
}

TEST_CASE("random-input gate statistics") {
  SourceSettings sources;
  RunOptions options;
  options.detectors.shared = DetectorParams::ideal();
  options.enumerate_rejected = false;
  const auto stats = gate_fidelity_random(builtin_scheme("scheme2-cs"), sources,
                                          options, 20, /*seed=*/42);
  CHECK(stats.min_fidelity >= 1.0 - 1e-10);
  CHECK(stats.mean_success == doctest::Approx(1.0 / 8.0).epsilon(1e-10));

  SUBCASE("statistics are reproducible for a fixed seed") {
    const auto again = gate_fidelity_random(builtin_scheme("scheme2-cs"), sources,
                                            options, 20, /*seed=*/42);
    CHECK(again.mean_fidelity == stats.mean_fidelity);
    CHECK(again.mean_success == stats.mean_success);
  }
}

TEST_CASE("sweeps") {
  SUBCASE("eta grid matches the closed form") {
    SweepSpec spec;
    spec.param = SweepSpec::Param::Eta;
    spec.values = {1.0, 0.7};
    spec.detector = DetectorParams::ideal();
    const auto rows = sweep(spec);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].success == doctest::Approx(0.125).epsilon(1e-10));
    CHECK(rows[1].success == doctest::Approx(0.03001250).epsilon(1e-10));
    CHECK(rows[0].fidelity == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("rows are deterministic") {
    SweepSpec spec;
    spec.param = SweepSpec::Param::Eta;
    spec.values = {0.9, 0.5};
    spec.random_samples = 5;
    spec.detector = DetectorParams::ideal();
    const auto a = sweep(spec);
    const auto b = sweep(spec);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].success == b[i].success);
      CHECK(a[i].fidelity == b[i].fidelity);
    }
  }
  SUBCASE("an empty grid is an error") {
    SweepSpec spec;
    spec.values.clear();
    CHECK_THROWS_AS(sweep(spec), std::invalid_argument);
  }
  SUBCASE("fidelity never increases with the dark-count rate") {
    SweepSpec spec;
    spec.param = SweepSpec::Param::Nu;
    spec.values = {0.0, 1e-7, 1e-6, 1e-5, 1e-4};
    spec.detector.eta = 0.7;
    spec.sources.spdc_ancillae = true;
    spec.sources.spdc_input = true;
    spec.sources.spdc.gamma = std::sqrt(1e-4);
    spec.identity_rows_only = true;
    const auto rows = sweep(spec);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      CHECK(rows[i].fidelity <= rows[i - 1].fidelity + 1e-12);
    }
  }
  SUBCASE("scheme-name sweeps cover the catalog") {
    SweepSpec spec;
    spec.param = SweepSpec::Param::SchemeName;
    spec.schemes = {"scheme2-cs", "scheme1-cnot-given-chi"};
    spec.detector = DetectorParams::ideal();
    const auto rows = sweep(spec);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].success == doctest::Approx(1.0 / 8.0).epsilon(1e-10));
    CHECK(rows[1].success == doctest::Approx(1.0 / 4.0).epsilon(1e-10));
  }
}

TEST_CASE("success-probability exponents via log-log slope") {
  const auto slope_of = [](const std::string& name) {
    std::vector<double> etas, log_eta, log_p;
    for (double eta = 0.3; eta <= 1.0 + 1e-9; eta += 0.1) etas.push_back(eta);
    SweepSpec spec;
    spec.scheme = name;
    spec.param = SweepSpec::Param::Eta;
    spec.values = etas;
    spec.detector = DetectorParams::ideal();
    for (const auto& row : sweep(spec)) {
      log_eta.push_back(std::log(row.param_value));
      log_p.push_back(std::log(row.success));
    }
    // least-squares slope
    const auto n = static_cast<double>(log_eta.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < log_eta.size(); ++i) {
      sx += log_eta[i];
      sy += log_p[i];
      sxx += log_eta[i] * log_eta[i];
      sxy += log_eta[i] * log_p[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
  };
  CHECK(std::abs(slope_of("scheme2-cs") - 4.0) <= 1e-3);
  CHECK(std::abs(slope_of("scheme1-cnot-given-chi") - 4.0) <= 1e-3);
  CHECK(std::abs(slope_of("scheme1-cnot") - 6.0) <= 1e-3);
}

TEST_SUITE_END();
