#include "lofock/fock_state.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>

namespace lofock {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

double clean_zero(double v) { return v == 0.0 ? 0.0 : v; }

std::vector<double> factorials(int up_to) {
  std::vector<double> f(static_cast<std::size_t>(up_to) + 1, 1.0);
  for (int k = 1; k <= up_to; ++k) f[k] = f[k - 1] * k;
  return f;
}

}  // namespace

FockLayout::FockLayout(int rail_count, int cutoff)
    : rail_count_(rail_count), cutoff_(cutoff) {
  require(rail_count >= 0, "FockLayout: negative rail count");
  require(cutoff >= 1, "FockLayout: cutoff must be at least 1");
  bits_ = std::bit_width(static_cast<unsigned>(2 * cutoff));
  rail_mask_ = (std::uint64_t{1} << bits_) - 1;
  require(rail_count == 0 || bits_ * rail_count <= 64,
          "FockLayout: register does not fit a 64-bit key at this cutoff");
}

int FockLayout::total(std::uint64_t key) const {
  int sum = 0;
  for (int r = 0; r < rail_count_; ++r) sum += count(key, r);
  return sum;
}

std::uint64_t FockLayout::pack(std::span<const int> counts) const {
  require(static_cast<int>(counts.size()) == rail_count_,
          "FockLayout::pack: count vector length mismatch");
  std::uint64_t key = 0;
  for (int r = 0; r < rail_count_; ++r) {
    require(counts[r] >= 0 && counts[r] <= cutoff_,
            "FockLayout::pack: count out of range");
    key |= static_cast<std::uint64_t>(counts[r]) << (bits_ * r);
  }
  return key;
}

std::vector<int> FockLayout::unpack(std::uint64_t key) const {
  std::vector<int> counts(rail_count_);
  for (int r = 0; r < rail_count_; ++r) counts[r] = count(key, r);
  return counts;
}

PureFockState PureFockState::vacuum(const FockLayout& layout) {
  AmplitudeMap amps;
  amps.emplace(0, cx{1.0, 0.0});
  return PureFockState(layout, std::move(amps));
}

PureFockState PureFockState::basis(const FockLayout& layout,
                                   std::span<const int> counts, cx amplitude) {
  AmplitudeMap amps;
  amps.emplace(layout.pack(counts), amplitude);
  return PureFockState(layout, std::move(amps));
}

PureFockState PureFockState::from_terms(
    const FockLayout& layout,
    std::span<const std::pair<std::vector<int>, cx>> terms) {
  AmplitudeMap amps;
  amps.reserve(terms.size());
  for (const auto& [counts, amp] : terms) amps[layout.pack(counts)] += amp;
  return from_map(layout, std::move(amps));
}

PureFockState PureFockState::from_map(const FockLayout& layout, AmplitudeMap amps) {
  for (auto it = amps.begin(); it != amps.end();) {
    if (std::abs(it->second) <= kPruneThreshold) {
      it = amps.erase(it);
    } else {
      ++it;
    }
  }
  return PureFockState(layout, std::move(amps));
}

cx PureFockState::amplitude(std::uint64_t key) const {
  auto it = amps_.find(key);
  return it == amps_.end() ? cx{0.0, 0.0} : it->second;
}

cx PureFockState::amplitude(std::span<const int> counts) const {
  return amplitude(layout_.pack(counts));
}

double PureFockState::norm_sq() const {
  double sum = 0.0;
  for (const auto& [key, amp] : amps_) sum += std::norm(amp);
  return sum;
}

double PureFockState::norm() const { return std::sqrt(norm_sq()); }

bool PureFockState::is_normalized(double tol) const {
  return std::abs(norm_sq() - 1.0) <= tol;
}

PureFockState PureFockState::normalized() const {
  const double n = norm();
  require(n > 0.0, "PureFockState::normalized: zero state");
  return scaled(cx{1.0 / n, 0.0});
}

PureFockState PureFockState::scaled(cx factor) const {
  AmplitudeMap amps = amps_;
  for (auto& [key, amp] : amps) amp *= factor;
  return from_map(layout_, std::move(amps));
}

std::string PureFockState::debug_dump() const {
  std::vector<std::pair<std::vector<int>, cx>> rows;
  rows.reserve(amps_.size());
  for (const auto& [key, amp] : amps_) rows.emplace_back(layout_.unpack(key), amp);
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::string out;
  char buf[64];
  for (const auto& [counts, amp] : rows) {
    for (int c : counts) {
      std::snprintf(buf, sizeof buf, "%d ", c);
      out += buf;
    }
    std::snprintf(buf, sizeof buf, ": %.17g %.17g\n", clean_zero(amp.real()),
                  clean_zero(amp.imag()));
    out += buf;
  }
  return out;
}

StateEnsemble StateEnsemble::pure(PureFockState state, double weight) {
  StateEnsemble ens;
  ens.branches.push_back(Branch{weight, std::move(state)});
  return ens;
}

double StateEnsemble::trace() const {
  double sum = 0.0;
  for (const auto& b : branches) sum += b.weight;
  return sum;
}

// ---- operations ------------------------------------------------------------

PureFockState tensor(const PureFockState& a, const PureFockState& b) {
  require(a.cutoff() == b.cutoff(), "tensor: cutoff mismatch");
  const FockLayout out_layout(a.rail_count() + b.rail_count(), a.cutoff());
  PureFockState::AmplitudeMap amps;
  amps.reserve(a.term_count() * b.term_count());
  std::vector<int> counts(static_cast<std::size_t>(out_layout.rail_count()));
  for (const auto& [ka, va] : a.amplitudes()) {
    const auto ca = a.layout().unpack(ka);
    std::copy(ca.begin(), ca.end(), counts.begin());
    for (const auto& [kb, vb] : b.amplitudes()) {
      const auto cb = b.layout().unpack(kb);
      std::copy(cb.begin(), cb.end(), counts.begin() + a.rail_count());
      amps[out_layout.pack(counts)] += va * vb;
    }
  }
  return PureFockState::from_map(out_layout, std::move(amps));
}

cx inner_product(const PureFockState& a, const PureFockState& b) {
  require(a.rail_count() == b.rail_count(), "inner_product: rail count mismatch");
  require(a.cutoff() == b.cutoff(), "inner_product: cutoff mismatch");
  const auto& small = a.term_count() <= b.term_count() ? a : b;
  const auto& large = a.term_count() <= b.term_count() ? b : a;
  cx sum{0.0, 0.0};
  for (const auto& [key, amp] : small.amplitudes()) {
    const cx other = large.amplitude(key);
    // conjugate-linear in a
    if (&small == &a) {
      sum += std::conj(amp) * other;
    } else {
      sum += std::conj(other) * amp;
    }
  }
  return sum;
}

UnitaryApplication apply_two_rail_unitary(const PureFockState& state, RailIndex ra,
                                          RailIndex rb, const Eigen::Matrix2cd& u) {
  const int ia = static_cast<int>(ra.flat());
  const int ib = static_cast<int>(rb.flat());
  require(ia != ib, "apply_two_rail_unitary: identical rails");
  require(ia < state.rail_count() && ib < state.rail_count(),
          "apply_two_rail_unitary: rail outside register");
  const double udev =
      (u.adjoint() * u - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
  require(udev <= 1e-12, "apply_two_rail_unitary: matrix is not unitary");

  const FockLayout& layout = state.layout();
  const int cut = layout.cutoff();
  const int max_total = 2 * cut;
  const auto fact = factorials(max_total);

  // Powers of the matrix entries up to the largest exponent that can occur.
  std::vector<cx> p00(max_total + 1), p01(max_total + 1), p10(max_total + 1),
      p11(max_total + 1);
  p00[0] = p01[0] = p10[0] = p11[0] = cx{1.0, 0.0};
  for (int k = 1; k <= max_total; ++k) {
    p00[k] = p00[k - 1] * u(0, 0);
    p10[k] = p10[k - 1] * u(1, 0);
    p01[k] = p01[k - 1] * u(0, 1);
    p11[k] = p11[k - 1] * u(1, 1);
  }
  const auto binom = [&fact](int n, int k) { return fact[n] / (fact[k] * fact[n - k]); };

  PureFockState::AmplitudeMap out;
  out.reserve(state.term_count() * 2);
  for (const auto& [key, amp] : state.amplitudes()) {
    const int m = layout.count(key, ia);
    const int n = layout.count(key, ib);
    if (m + n == 0) {
      out[key] += amp;
      continue;
    }
    const std::uint64_t base = layout.with_count(layout.with_count(key, ia, 0), ib, 0);
    const double in_fact = std::sqrt(fact[m] * fact[n]);
    for (int p = 0; p <= m + n; ++p) {
      const int q = m + n - p;
      cx coef{0.0, 0.0};
      const int k_lo = std::max(0, p - n);
      const int k_hi = std::min(m, p);
      for (int k = k_lo; k <= k_hi; ++k) {
        coef += binom(m, k) * binom(n, p - k) * p00[k] * p10[m - k] * p01[p - k] *
                p11[n - p + k];
      }
      const cx out_amp = amp * (std::sqrt(fact[p] * fact[q]) / in_fact) * coef;
      out[layout.with_count(layout.with_count(base, ia, p), ib, q)] += out_amp;
    }
  }

  // Terms that pushed either rail past the cutoff are removed and their
  // weight reported; all other output amplitudes are unaffected by this.
  double lost = 0.0;
  for (auto it = out.begin(); it != out.end();) {
    if (layout.count(it->first, ia) > cut || layout.count(it->first, ib) > cut) {
      lost += std::norm(it->second);
      it = out.erase(it);
    } else {
      ++it;
    }
  }
  return UnitaryApplication{PureFockState::from_map(layout, std::move(out)), lost};
}

PureFockState apply_rail_swap(const PureFockState& state, RailIndex ra, RailIndex rb) {
  const int ia = static_cast<int>(ra.flat());
  const int ib = static_cast<int>(rb.flat());
  require(ia != ib, "apply_rail_swap: identical rails");
  require(ia < state.rail_count() && ib < state.rail_count(),
          "apply_rail_swap: rail outside register");
  const FockLayout& layout = state.layout();
  PureFockState::AmplitudeMap out;
  out.reserve(state.term_count());
  for (const auto& [key, amp] : state.amplitudes()) {
    const int na = layout.count(key, ia);
    const int nb = layout.count(key, ib);
    out.emplace(layout.with_count(layout.with_count(key, ia, nb), ib, na), amp);
  }
  return PureFockState::from_map(layout, std::move(out));
}

PureFockState apply_diagonal(const PureFockState& state, const DiagonalOperator& op) {
  const int r = static_cast<int>(op.target.flat());
  require(r < state.rail_count(), "apply_diagonal: rail outside register");
  require(static_cast<int>(op.weights.size()) >= state.cutoff() + 1,
          "apply_diagonal: weight table shorter than cutoff+1");
  const FockLayout& layout = state.layout();
  PureFockState::AmplitudeMap out;
  out.reserve(state.term_count());
  for (const auto& [key, amp] : state.amplitudes()) {
    const double w = op.weights[static_cast<std::size_t>(layout.count(key, r))];
    if (w < 0.0) throw std::invalid_argument("apply_diagonal: negative weight");
    out.emplace(key, amp * std::sqrt(w));
  }
  return PureFockState::from_map(layout, std::move(out));
}

namespace {

StateEnsemble split_on_rails(const StateEnsemble& ensemble,
                             std::span<const RailIndex> rails, bool keep_register) {
  StateEnsemble out;
  if (ensemble.branches.empty()) return out;
  const FockLayout& layout = ensemble.branches.front().state.layout();

  std::vector<int> traced;
  traced.reserve(rails.size());
  for (RailIndex r : rails) {
    const int f = static_cast<int>(r.flat());
    require(f < layout.rail_count(), "trace_out_rails: rail outside register");
    require(std::find(traced.begin(), traced.end(), f) == traced.end(),
            "trace_out_rails: duplicate rail");
    traced.push_back(f);
  }

  std::vector<int> kept;
  for (int r = 0; r < layout.rail_count(); ++r) {
    if (std::find(traced.begin(), traced.end(), r) == traced.end()) kept.push_back(r);
  }
  const FockLayout out_layout =
      keep_register ? layout
                    : FockLayout(static_cast<int>(kept.size()), layout.cutoff());

  // Degenerate case: tracing every rail leaves only the scalar trace.
  if (!keep_register && kept.empty()) {
    out.branches.push_back(
        StateEnsemble::Branch{ensemble.trace(), PureFockState::vacuum(out_layout)});
    return out;
  }

  for (const auto& branch : ensemble.branches) {
    require(branch.state.layout() == layout, "trace_out_rails: mixed layouts");
    std::unordered_map<std::uint64_t, PureFockState::AmplitudeMap> groups;
    for (const auto& [key, amp] : branch.state.amplitudes()) {
      std::uint64_t pattern = 0;
      for (std::size_t i = 0; i < traced.size(); ++i) {
        pattern |= static_cast<std::uint64_t>(layout.count(key, traced[i])) << (6 * i);
      }
      std::uint64_t rest;
      if (keep_register) {
        rest = key;
        for (int r : traced) rest = layout.with_count(rest, r, 0);
      } else {
        rest = 0;
        for (std::size_t j = 0; j < kept.size(); ++j) {
          rest = out_layout.with_count(rest, static_cast<int>(j),
                                       layout.count(key, kept[j]));
        }
      }
      groups[pattern][rest] += amp;
    }
    for (auto& [pattern, amps] : groups) {
      double w = 0.0;
      for (const auto& [key, amp] : amps) w += std::norm(amp);
      if (w <= 0.0) continue;
      const cx scale{1.0 / std::sqrt(w), 0.0};
      for (auto& [key, amp] : amps) amp *= scale;
      out.branches.push_back(StateEnsemble::Branch{
          branch.weight * w, PureFockState::from_map(out_layout, std::move(amps))});
    }
  }
  return out;
}

}  // namespace

StateEnsemble trace_out_rails(const StateEnsemble& ensemble,
                              std::span<const RailIndex> rails) {
  return split_on_rails(ensemble, rails, /*keep_register=*/false);
}

StateEnsemble trace_out_rails_keep_register(const StateEnsemble& ensemble,
                                            std::span<const RailIndex> rails) {
  return split_on_rails(ensemble, rails, /*keep_register=*/true);
}

PureFockState reorder_rails(const PureFockState& state, std::span<const int> perm) {
  const FockLayout& layout = state.layout();
  require(static_cast<int>(perm.size()) == layout.rail_count(),
          "reorder_rails: permutation length mismatch");
  std::vector<bool> seen(perm.size(), false);
  for (int p : perm) {
    require(p >= 0 && p < layout.rail_count() && !seen[static_cast<std::size_t>(p)],
            "reorder_rails: not a permutation");
    seen[static_cast<std::size_t>(p)] = true;
  }
  PureFockState::AmplitudeMap out;
  out.reserve(state.term_count());
  for (const auto& [key, amp] : state.amplitudes()) {
    std::uint64_t nk = 0;
    for (std::size_t j = 0; j < perm.size(); ++j) {
      nk = layout.with_count(nk, static_cast<int>(j), layout.count(key, perm[j]));
    }
    out.emplace(nk, amp);
  }
  return PureFockState::from_map(layout, std::move(out));
}

}  // namespace lofock
