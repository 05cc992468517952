#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "riskpool/numeric.hpp"

namespace riskpool {

using Mask = std::uint32_t;

inline constexpr std::size_t kMaxGroundSize = 20;

/// Ordered list of distinct element labels; element i maps to bit i.
class GroundSet {
 public:
  GroundSet() = default;
  explicit GroundSet(std::vector<std::string> labels);

  /// Labels "1", "2", ..., "n".
  static GroundSet indexed(std::size_t n);

  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<std::size_t> index_of(std::string_view label) const;

  Mask full_mask() const { return size() == 0 ? 0 : static_cast<Mask>((std::uint64_t{1} << size()) - 1); }
  std::size_t subset_count() const { return std::size_t{1} << size(); }

  bool operator==(const GroundSet&) const = default;

 private:
  std::vector<std::string> labels_;
};

/// A subset of a ground set stored as a bitmask.
class Subset {
 public:
  constexpr Subset() = default;
  constexpr explicit Subset(Mask mask) : mask_(mask) {}

  static Subset of(std::initializer_list<std::size_t> elements) {
    Mask m = 0;
    for (std::size_t e : elements) m |= Mask{1} << e;
    return Subset(m);
  }

  constexpr Mask mask() const { return mask_; }
  constexpr bool contains(std::size_t element) const { return (mask_ >> element) & 1U; }
  constexpr Subset with(std::size_t element) const { return Subset(mask_ | (Mask{1} << element)); }
  constexpr Subset without(std::size_t element) const { return Subset(mask_ & ~(Mask{1} << element)); }
  int size() const { return std::popcount(mask_); }
  constexpr bool is_subset_of(Subset other) const { return (mask_ & ~other.mask_) == 0; }

  constexpr bool operator==(const Subset&) const = default;
  constexpr auto operator<=>(const Subset&) const = default;

 private:
  Mask mask_ = 0;
};

/// "{a,b}" using the ground set's labels in label order.
std::string format_subset(const GroundSet& ground, Subset s);

/// Real-valued function on the power set, stored as a dense table indexed by mask.
template <Scalar T>
class SetFunction {
 public:
  SetFunction(GroundSet ground, std::vector<T> values);

  static SetFunction constant(GroundSet ground, const T& value) {
    std::vector<T> values(ground.subset_count(), value);
    return SetFunction(std::move(ground), std::move(values));
  }

  template <class Fn>
  static SetFunction tabulate(GroundSet ground, Fn&& fn) {
    std::vector<T> values;
    values.reserve(ground.subset_count());
    for (Mask m = 0; m < ground.subset_count(); ++m) values.push_back(fn(Subset(m)));
    return SetFunction(std::move(ground), std::move(values));
  }

  const GroundSet& ground() const { return ground_; }
  const T& operator()(Subset s) const { return values_[s.mask()]; }
  const T& at(Mask m) const { return values_.at(m); }
  std::span<const T> values() const { return values_; }

  SetFunction operator+(const SetFunction& other) const;
  SetFunction operator-(const SetFunction& other) const;
  /// Pointwise product.
  SetFunction operator*(const SetFunction& other) const;
  SetFunction scaled(const T& factor) const;

  bool operator==(const SetFunction&) const = default;

 private:
  GroundSet ground_;
  std::vector<T> values_;
};

/// Per-element success probabilities p_h in [0, 1].
template <Scalar T>
class CoinVector {
 public:
  CoinVector(GroundSet ground, std::vector<T> p);

  static CoinVector uniform(GroundSet ground, const T& p) {
    std::vector<T> probs(ground.size(), p);
    return CoinVector(std::move(ground), std::move(probs));
  }

  const GroundSet& ground() const { return ground_; }
  const T& operator[](std::size_t i) const { return p_[i]; }
  std::span<const T> probabilities() const { return p_; }

 private:
  GroundSet ground_;
  std::vector<T> p_;
};

/// Up-closed family of subsets.
class MonotoneFamily {
 public:
  /// Throws Error when the membership table is not up-closed.
  MonotoneFamily(GroundSet ground, std::vector<bool> member);

  const GroundSet& ground() const { return ground_; }
  bool contains(Subset s) const { return member_[s.mask()]; }
  std::size_t count() const;
  /// Inclusion-minimal members.
  std::vector<Subset> minimal_members() const;

  bool operator==(const MonotoneFamily&) const = default;

 private:
  GroundSet ground_;
  std::vector<bool> member_;
};

/// True iff the membership table is closed under supersets.
bool is_up_closed(const GroundSet& ground, const std::vector<bool>& member);

/// Smallest up-closed family containing every seed.
MonotoneFamily up_closure(const GroundSet& ground, std::span<const Subset> seeds);

/// Coupled distribution on pairs (S1, S2); dense, n <= 10.
template <Scalar T>
class PairDistribution {
 public:
  static constexpr std::size_t kMaxGround = 10;

  PairDistribution(GroundSet ground, std::vector<T> weights);

  const GroundSet& ground() const { return ground_; }
  const T& weight(Subset first, Subset second) const {
    return weights_[first.mask() | (static_cast<std::size_t>(second.mask()) << ground_.size())];
  }
  std::span<const T> weights() const { return weights_; }

 private:
  GroundSet ground_;
  std::vector<T> weights_;
};

/// f(S + h) >= f(S) on every covering pair.
template <Scalar T>
bool is_increasing(const SetFunction<T>& f);

template <Scalar T>
bool is_decreasing(const SetFunction<T>& f);

/// f(S + h) > f(S) on every covering pair (float mode: by more than the tolerance).
template <Scalar T>
bool is_strictly_increasing(const SetFunction<T>& f);

template <Scalar T>
SetFunction<T> indicator(const MonotoneFamily& family);

template <Scalar T>
T product_measure(const CoinVector<T>& p, Subset s);

/// Probability that the shared/independent coin procedure for `shared` yields (first, second).
template <Scalar T>
T pair_weight(const CoinVector<T>& p, Subset shared, Subset first, Subset second);

template <Scalar T>
PairDistribution<T> pair_measure(const CoinVector<T>& p, Subset shared);

template <Scalar T>
T expectation(const SetFunction<T>& f, const CoinVector<T>& p);

/// f(S) = sum of nonnegative weights w_T over T subset of S, with `weight_count`
/// weights placed on random subsets T. Deterministic in `seed`.
template <Scalar T>
SetFunction<T> random_increasing(std::uint64_t seed, const GroundSet& ground, std::size_t weight_count);

/// Every monotone 0/1 function on the ground set (n <= 5).
template <Scalar T>
std::vector<SetFunction<T>> monotone_boolean_functions(const GroundSet& ground);

void require_same_ground(const GroundSet& a, const GroundSet& b, const char* what);

}  // namespace riskpool
