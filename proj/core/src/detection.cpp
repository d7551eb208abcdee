#include "lofock/detection.hpp"

#include <cmath>

namespace lofock {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

std::vector<RailIndex> pattern_rails(const ClickPattern& pattern) {
  require(!pattern.entries.empty(), "measure: empty rail list");
  std::vector<RailIndex> rails;
  rails.reserve(pattern.entries.size());
  for (const auto& e : pattern.entries) rails.push_back(e.target);
  return rails;
}

// Applies the per-rail diagonal weights for the demanded outcomes, folding
// the selected weight into the branch weights.
StateEnsemble apply_outcome_weights(const StateEnsemble& ensemble,
                                    const ClickPattern& pattern,
                                    const std::vector<std::vector<double>>& weights) {
  StateEnsemble selected;
  selected.branches.reserve(ensemble.branches.size());
  for (const auto& branch : ensemble.branches) {
    PureFockState state = branch.state;
    for (std::size_t i = 0; i < pattern.entries.size(); ++i) {
      state = apply_diagonal(state, DiagonalOperator{pattern.entries[i].target,
                                                     weights[i]});
    }
    const double w = state.norm_sq();
    if (w <= 0.0) continue;
    selected.branches.push_back(
        StateEnsemble::Branch{branch.weight * w, state.normalized()});
  }
  return selected;
}

MeasurementOutcome finish(const ClickPattern& pattern, StateEnsemble selected,
                          std::span<const RailIndex> rails, bool keep_register) {
  MeasurementOutcome out;
  out.pattern = pattern;
  out.probability = selected.trace();
  if (out.probability > 0.0) {
    out.conditional = keep_register ? trace_out_rails_keep_register(selected, rails)
                                    : trace_out_rails(selected, rails);
    for (auto& b : out.conditional.branches) b.weight /= out.probability;
  }
  return out;
}

MeasurementOutcome measure_impl(const StateEnsemble& ensemble,
                                const ClickPattern& pattern,
                                std::span<const DetectorParams> params,
                                bool keep_register) {
  require(params.size() == pattern.entries.size(),
          "measure: one DetectorParams per measured rail required");
  const auto rails = pattern_rails(pattern);
  if (ensemble.branches.empty()) return MeasurementOutcome{pattern, 0.0, {}};
  const int cutoff = ensemble.branches.front().state.cutoff();

  std::vector<std::vector<double>> weights(pattern.entries.size());
  for (std::size_t i = 0; i < pattern.entries.size(); ++i) {
    params[i].validate();
    const int outcome = pattern.entries[i].outcome;
    require(outcome == 0 || outcome == 1,
            "measure: conventional outcomes must be 0 (no click) or 1 (click)");
    PovmPair povm = povm_weights(params[i], cutoff);
    weights[i] = outcome == 0 ? std::move(povm.no_click) : std::move(povm.click);
  }
  return finish(pattern, apply_outcome_weights(ensemble, pattern, weights), rails,
                keep_register);
}

}  // namespace

void DetectorParams::validate() const {
  if (!(eta >= 0.0 && eta <= 1.0))
    throw std::invalid_argument("DetectorParams: eta outside [0, 1]");
  if (dark_rate < 0.0 || resolution_time < 0.0)
    throw std::invalid_argument("DetectorParams: negative dark rate or resolution time");
}

PovmPair povm_weights(const DetectorParams& p, int cutoff) {
  p.validate();
  PovmPair out;
  out.no_click.resize(static_cast<std::size_t>(cutoff) + 1);
  out.click.resize(static_cast<std::size_t>(cutoff) + 1);
  const double attenuation = std::exp(-p.nu());
  double miss = 1.0;  // (1-eta)^n
  for (int n = 0; n <= cutoff; ++n) {
    out.no_click[n] = attenuation * miss;
    out.click[n] = 1.0 - out.no_click[n];
    miss *= 1.0 - p.eta;
  }
  return out;
}

MeasurementOutcome measure(const StateEnsemble& ensemble, const ClickPattern& pattern,
                           const DetectorParams& params) {
  const std::vector<DetectorParams> all(pattern.entries.size(), params);
  return measure_impl(ensemble, pattern, all, /*keep_register=*/false);
}

MeasurementOutcome measure(const StateEnsemble& ensemble, const ClickPattern& pattern,
                           std::span<const DetectorParams> params) {
  return measure_impl(ensemble, pattern, params, /*keep_register=*/false);
}

MeasurementOutcome measure_keep_register(const StateEnsemble& ensemble,
                                         const ClickPattern& pattern,
                                         std::span<const DetectorParams> params) {
  return measure_impl(ensemble, pattern, params, /*keep_register=*/true);
}

MeasurementOutcome measure_number_resolving(const StateEnsemble& ensemble,
                                            const ClickPattern& counts,
                                            const DetectorParams& params) {
  params.validate();
  const auto rails = pattern_rails(counts);
  if (ensemble.branches.empty()) return MeasurementOutcome{counts, 0.0, {}};
  const int cutoff = ensemble.branches.front().state.cutoff();

  // Detecting k photons out of n present: binomial thinning at eta.
  std::vector<std::vector<double>> weights(counts.entries.size());
  for (std::size_t i = 0; i < counts.entries.size(); ++i) {
    const int k = counts.entries[i].outcome;
    require(k >= 0 && k <= cutoff, "measure_number_resolving: count out of range");
    auto& w = weights[i];
    w.assign(static_cast<std::size_t>(cutoff) + 1, 0.0);
    for (int n = k; n <= cutoff; ++n) {
      double binom = 1.0;
      for (int j = 0; j < k; ++j) binom = binom * (n - j) / (j + 1);
      w[n] = binom * std::pow(params.eta, k) * std::pow(1.0 - params.eta, n - k);
    }
  }
  return finish(counts, apply_outcome_weights(ensemble, counts, weights), rails,
                /*keep_register=*/false);
}

}  // namespace lofock
