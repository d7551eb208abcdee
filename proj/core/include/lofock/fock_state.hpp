#pragma once

// Sparse multi-rail bosonic Fock states and the primitive operations the
// rest of the simulator is built on. A "rail" is one bosonic mode: a
// (spatial mode, polarization) pair. States are immutable; every operation
// returns a new value.

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace lofock {

using cx = std::complex<double>;

// Amplitudes at or below this magnitude are dropped after each element
// application; keeps support sparse without touching 1e-10 level checks.
inline constexpr double kPruneThreshold = 1e-14;
inline constexpr double kNormTolerance = 1e-12;

enum class Pol : std::uint8_t { H = 0, V = 1 };

// One bosonic rail: spatial mode index plus polarization. A register of S
// spatial modes has exactly 2S rails, laid out mode-major (H before V).
struct RailIndex {
  std::uint32_t mode = 0;
  Pol pol = Pol::H;

  constexpr std::uint32_t flat() const {
    return 2 * mode + static_cast<std::uint32_t>(pol);
  }
  friend constexpr bool operator==(const RailIndex&, const RailIndex&) = default;
};

constexpr RailIndex rail(std::uint32_t mode, Pol pol) { return RailIndex{mode, pol}; }

// Bit-packing layout for occupation vectors. Each rail gets enough bits to
// hold 2*cutoff so that transient terms inside a two-rail unitary (where a
// pair of rails at the cutoff can merge onto one) never overflow the key.
class FockLayout {
 public:
  FockLayout() = default;
  FockLayout(int rail_count, int cutoff);

  int rail_count() const { return rail_count_; }
  int cutoff() const { return cutoff_; }

  int count(std::uint64_t key, int rail) const {
    return static_cast<int>((key >> (bits_ * rail)) & rail_mask_);
  }
  std::uint64_t with_count(std::uint64_t key, int rail, int n) const {
    const int shift = bits_ * rail;
    return (key & ~(rail_mask_ << shift)) |
           (static_cast<std::uint64_t>(n) << shift);
  }
  int total(std::uint64_t key) const;

  std::uint64_t pack(std::span<const int> counts) const;
  std::vector<int> unpack(std::uint64_t key) const;

  friend bool operator==(const FockLayout&, const FockLayout&) = default;

 private:
  int rail_count_ = 0;
  int cutoff_ = 2;
  int bits_ = 3;
  std::uint64_t rail_mask_ = 7;
};

// A diagonal single-rail operator, weights indexed by photon count. The
// POVM elements of the detector model and number-resolving projectors are
// both of this shape.
struct DiagonalOperator {
  RailIndex target;
  std::vector<double> weights;  // size cutoff+1
};

// Pure state as a sparse map occupation-key -> complex amplitude.
class PureFockState {
 public:
  using AmplitudeMap = std::unordered_map<std::uint64_t, cx>;

  static PureFockState vacuum(const FockLayout& layout);
  static PureFockState basis(const FockLayout& layout, std::span<const int> counts,
                             cx amplitude = cx{1.0, 0.0});
  // Merges duplicate keys and prunes negligible amplitudes.
  static PureFockState from_terms(
      const FockLayout& layout,
      std::span<const std::pair<std::vector<int>, cx>> terms);
  static PureFockState from_map(const FockLayout& layout, AmplitudeMap amps);

  const FockLayout& layout() const { return layout_; }
  int rail_count() const { return layout_.rail_count(); }
  int cutoff() const { return layout_.cutoff(); }
  const AmplitudeMap& amplitudes() const { return amps_; }
  std::size_t term_count() const { return amps_.size(); }

  cx amplitude(std::uint64_t key) const;
  cx amplitude(std::span<const int> counts) const;

  double norm_sq() const;
  double norm() const;
  bool is_normalized(double tol = kNormTolerance) const;
  PureFockState normalized() const;
  PureFockState scaled(cx factor) const;

  // One line per basis key, "occupations : re imag", sorted
  // lexicographically by occupation vector; used by golden-file tests.
  std::string debug_dump() const;

 private:
  PureFockState(FockLayout layout, AmplitudeMap amps)
      : layout_(layout), amps_(std::move(amps)) {}

  FockLayout layout_;
  AmplitudeMap amps_;
};

// Weighted list of normalized pure states; represents the density operator
// sum_k w_k |phi_k><phi_k|. Branch decomposition is not unique, so equality
// is tested through the induced density matrix, never branch by branch.
struct StateEnsemble {
  struct Branch {
    double weight = 0.0;
    PureFockState state;
  };
  std::vector<Branch> branches;

  static StateEnsemble pure(PureFockState state, double weight = 1.0);
  double trace() const;
};

struct UnitaryApplication {
  PureFockState state;
  // Squared norm of output terms discarded because a rail would exceed the
  // cutoff. Legitimately nonzero for SPDC higher-order terms.
  double truncation_loss = 0.0;
};

// ---- fock-core operations -------------------------------------------------

// Concatenates registers: b's rails are appended after a's.
PureFockState tensor(const PureFockState& a, const PureFockState& b);

// <a|b>; conjugate-linear in a.
cx inner_product(const PureFockState& a, const PureFockState& b);

// Bosonic action of a 2x2 unitary on two rails via the creation-operator
// substitution a_i^dag -> sum_j U_ji a_j^dag. Photon number on the pair is
// conserved per basis term; output terms exceeding the cutoff are dropped
// and reported as truncation_loss.
UnitaryApplication apply_two_rail_unitary(const PureFockState& state, RailIndex a,
                                          RailIndex b, const Eigen::Matrix2cd& u);

// Exchanges occupation counts on two rails in every basis key. Exact and
// involutive; this is the PBS primitive.
PureFockState apply_rail_swap(const PureFockState& state, RailIndex a, RailIndex b);

// Multiplies each amplitude by sqrt(weights[n]) with n the key's count on
// the target rail, so that norm_sq of the result equals <psi|Pi|psi>.
PureFockState apply_diagonal(const PureFockState& state, const DiagonalOperator& op);

// Splits every branch by the occupation pattern on the traced rails and
// removes those rails from the register. Output branches are normalized,
// with weight = parent weight * pattern probability; total trace preserved.
StateEnsemble trace_out_rails(const StateEnsemble& ensemble,
                              std::span<const RailIndex> rails);

// Same split, but the traced rails stay in the register with their counts
// zeroed. Used by the circuit runner so rail indices stay stable across
// measure-and-feedforward steps.
StateEnsemble trace_out_rails_keep_register(const StateEnsemble& ensemble,
                                            std::span<const RailIndex> rails);

// Returns a state whose rail j carries what rail `perm[j]` carried; perm
// must be a permutation of 0..rail_count-1.
PureFockState reorder_rails(const PureFockState& state, std::span<const int> perm);

}  // namespace lofock
