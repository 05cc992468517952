#include "riskpool/boolean_lattice.hpp"

#include <algorithm>
#include <random>
#include <unordered_set>

namespace riskpool {

GroundSet::GroundSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.size() > kMaxGroundSize) {
    throw Error("ground set has " + std::to_string(labels_.size()) + " elements; the cap is " +
                std::to_string(kMaxGroundSize));
  }
  std::unordered_set<std::string> seen;
  for (const auto& l : labels_) {
    if (!seen.insert(l).second) throw Error("duplicate ground-set label '" + l + "'");
  }
}

GroundSet GroundSet::indexed(std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t i = 1; i <= n; ++i) labels.push_back(std::to_string(i));
  return GroundSet(std::move(labels));
}

std::optional<std::size_t> GroundSet::index_of(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

std::string format_subset(const GroundSet& ground, Subset s) {
  std::string out = "{";
  bool first = true;
  for (std::size_t i = 0; i < ground.size(); ++i) {
    if (!s.contains(i)) continue;
    if (!first) out += ",";
    out += ground.label(i);
    first = false;
  }
  return out + "}";
}

void require_same_ground(const GroundSet& a, const GroundSet& b, const char* what) {
  if (!(a == b)) throw Error(std::string(what) + ": operands are defined on different ground sets");
}

// SetFunction

template <Scalar T>
SetFunction<T>::SetFunction(GroundSet ground, std::vector<T> values)
    : ground_(std::move(ground)), values_(std::move(values)) {
  if (values_.size() != ground_.subset_count()) {
    throw Error("set function table has " + std::to_string(values_.size()) + " entries, expected " +
                std::to_string(ground_.subset_count()));
  }
  for (T& v : values_) {
    if (!NumTraits<T>::is_finite(v)) throw Error("set function value is not finite");
    NumTraits<T>::normalize(v);
  }
}

template <Scalar T>
SetFunction<T> SetFunction<T>::operator+(const SetFunction& other) const {
  require_same_ground(ground_, other.ground_, "set function sum");
  std::vector<T> out(values_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = values_[i] + other.values_[i];
  return SetFunction(ground_, std::move(out));
}

template <Scalar T>
SetFunction<T> SetFunction<T>::operator-(const SetFunction& other) const {
  require_same_ground(ground_, other.ground_, "set function difference");
  std::vector<T> out(values_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = values_[i] - other.values_[i];
  return SetFunction(ground_, std::move(out));
}

template <Scalar T>
SetFunction<T> SetFunction<T>::operator*(const SetFunction& other) const {
  require_same_ground(ground_, other.ground_, "set function product");
  std::vector<T> out(values_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = values_[i] * other.values_[i];
  return SetFunction(ground_, std::move(out));
}

template <Scalar T>
SetFunction<T> SetFunction<T>::scaled(const T& factor) const {
  std::vector<T> out(values_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = values_[i] * factor;
  return SetFunction(ground_, std::move(out));
}

// CoinVector

template <Scalar T>
CoinVector<T>::CoinVector(GroundSet ground, std::vector<T> p) : ground_(std::move(ground)), p_(std::move(p)) {
  if (p_.size() != ground_.size()) {
    throw Error("coin vector has " + std::to_string(p_.size()) + " probabilities for " +
                std::to_string(ground_.size()) + " elements");
  }
  for (std::size_t i = 0; i < p_.size(); ++i) {
    NumTraits<T>::normalize(p_[i]);
    if (!NumTraits<T>::is_finite(p_[i]) || p_[i] < 0 || p_[i] > 1) {
      throw Error("probability for '" + ground_.label(i) + "' is outside [0, 1]: " +
                  NumTraits<T>::to_string(p_[i]));
    }
  }
}

// MonotoneFamily

bool is_up_closed(const GroundSet& ground, const std::vector<bool>& member) {
  const std::size_t n = ground.size();
  for (Mask m = 0; m < ground.subset_count(); ++m) {
    if (!member[m]) continue;
    for (std::size_t h = 0; h < n; ++h) {
      if (!member[m | (Mask{1} << h)]) return false;
    }
  }
  return true;
}

MonotoneFamily::MonotoneFamily(GroundSet ground, std::vector<bool> member)
    : ground_(std::move(ground)), member_(std::move(member)) {
  if (member_.size() != ground_.subset_count()) {
    throw Error("membership table has " + std::to_string(member_.size()) + " entries, expected " +
                std::to_string(ground_.subset_count()));
  }
  if (!is_up_closed(ground_, member_)) throw Error("family is not closed under supersets");
}

std::size_t MonotoneFamily::count() const {
  return static_cast<std::size_t>(std::count(member_.begin(), member_.end(), true));
}

std::vector<Subset> MonotoneFamily::minimal_members() const {
  std::vector<Subset> out;
  for (Mask m = 0; m < ground_.subset_count(); ++m) {
    if (!member_[m]) continue;
    bool minimal = true;
    for (std::size_t h = 0; h < ground_.size() && minimal; ++h) {
      if (((m >> h) & 1U) && member_[m & ~(Mask{1} << h)]) minimal = false;
    }
    if (minimal) out.emplace_back(m);
  }
  return out;
}

MonotoneFamily up_closure(const GroundSet& ground, std::span<const Subset> seeds) {
  std::vector<bool> member(ground.subset_count(), false);
  for (Subset s : seeds) {
    if ((s.mask() & ~ground.full_mask()) != 0) throw Error("seed subset lies outside the ground set");
    member[s.mask()] = true;
  }
  // Masks are visited in increasing order, so every subset is final before its supersets.
  for (Mask m = 0; m < ground.subset_count(); ++m) {
    if (!member[m]) continue;
    for (std::size_t h = 0; h < ground.size(); ++h) member[m | (Mask{1} << h)] = true;
  }
  return MonotoneFamily(ground, std::move(member));
}

// PairDistribution

template <Scalar T>
PairDistribution<T>::PairDistribution(GroundSet ground, std::vector<T> weights)
    : ground_(std::move(ground)), weights_(std::move(weights)) {
  if (ground_.size() > kMaxGround) {
    throw Error("dense pair distribution is limited to " + std::to_string(kMaxGround) + " elements");
  }
  if (weights_.size() != ground_.subset_count() * ground_.subset_count()) {
    throw Error("pair distribution table has the wrong size");
  }
  T total = 0;
  for (T& w : weights_) {
    NumTraits<T>::normalize(w);
    if (w < 0) throw Error("pair distribution has a negative weight");
    total += w;
  }
  if (!NumTraits<T>::eq(total, T(1))) throw Error("pair distribution weights do not sum to 1");
}

// Operations

template <Scalar T>
bool is_increasing(const SetFunction<T>& f) {
  const std::size_t n = f.ground().size();
  for (Mask m = 0; m < f.ground().subset_count(); ++m) {
    for (std::size_t h = 0; h < n; ++h) {
      if ((m >> h) & 1U) continue;
      if (!NumTraits<T>::geq(f.at(m | (Mask{1} << h)), f.at(m))) return false;
    }
  }
  return true;
}

template <Scalar T>
bool is_decreasing(const SetFunction<T>& f) {
  const std::size_t n = f.ground().size();
  for (Mask m = 0; m < f.ground().subset_count(); ++m) {
    for (std::size_t h = 0; h < n; ++h) {
      if ((m >> h) & 1U) continue;
      if (!NumTraits<T>::geq(f.at(m), f.at(m | (Mask{1} << h)))) return false;
    }
  }
  return true;
}

template <Scalar T>
bool is_strictly_increasing(const SetFunction<T>& f) {
  const std::size_t n = f.ground().size();
  for (Mask m = 0; m < f.ground().subset_count(); ++m) {
    for (std::size_t h = 0; h < n; ++h) {
      if ((m >> h) & 1U) continue;
      if (!NumTraits<T>::gt(f.at(m | (Mask{1} << h)), f.at(m))) return false;
    }
  }
  return true;
}

template <Scalar T>
SetFunction<T> indicator(const MonotoneFamily& family) {
  return SetFunction<T>::tabulate(family.ground(),
                                  [&](Subset s) { return family.contains(s) ? T(1) : T(0); });
}

template <Scalar T>
T product_measure(const CoinVector<T>& p, Subset s) {
  T result = 1;
  for (std::size_t h = 0; h < p.ground().size(); ++h) {
    result *= s.contains(h) ? p[h] : T(1 - p[h]);
  }
  return result;
}

template <Scalar T>
T pair_weight(const CoinVector<T>& p, Subset shared, Subset first, Subset second) {
  T result = 1;
  for (std::size_t h = 0; h < p.ground().size(); ++h) {
    const bool in1 = first.contains(h);
    const bool in2 = second.contains(h);
    if (shared.contains(h)) {
      if (in1 != in2) return T(0);
      result *= in1 ? p[h] : T(1 - p[h]);
    } else {
      result *= in1 ? p[h] : T(1 - p[h]);
      result *= in2 ? p[h] : T(1 - p[h]);
    }
  }
  return result;
}

template <Scalar T>
PairDistribution<T> pair_measure(const CoinVector<T>& p, Subset shared) {
  const GroundSet& ground = p.ground();
  if (ground.size() > PairDistribution<T>::kMaxGround) {
    throw Error("pair_measure materializes 4^n weights and is limited to n <= 10");
  }
  const std::size_t count = ground.subset_count();
  std::vector<T> weights(count * count);
  for (Mask second = 0; second < count; ++second) {
    for (Mask first = 0; first < count; ++first) {
      weights[first | (static_cast<std::size_t>(second) << ground.size())] =
          pair_weight(p, shared, Subset(first), Subset(second));
    }
  }
  return PairDistribution<T>(ground, std::move(weights));
}

template <Scalar T>
T expectation(const SetFunction<T>& f, const CoinVector<T>& p) {
  require_same_ground(f.ground(), p.ground(), "expectation");
  T total = 0;
  for (Mask m = 0; m < f.ground().subset_count(); ++m) total += f.at(m) * product_measure(p, Subset(m));
  return total;
}

namespace {

template <Scalar T>
T random_weight(std::mt19937_64& rng);

template <>
double random_weight<double>(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <>
Rational random_weight<Rational>(std::mt19937_64& rng) {
  return ratio(static_cast<long>(rng() % 33), 8);
}

}  // namespace

template <Scalar T>
SetFunction<T> random_increasing(std::uint64_t seed, const GroundSet& ground, std::size_t weight_count) {
  std::mt19937_64 rng(seed);
  std::vector<T> weights(ground.subset_count(), T(0));
  for (std::size_t i = 0; i < weight_count; ++i) {
    const Mask where = static_cast<Mask>(rng() & ground.full_mask());
    weights[where] += random_weight<T>(rng);
  }
  // Zeta transform: f(S) = sum over T subset of S of w_T.
  for (std::size_t h = 0; h < ground.size(); ++h) {
    for (Mask m = 0; m < ground.subset_count(); ++m) {
      if ((m >> h) & 1U) weights[m] += weights[m & ~(Mask{1} << h)];
    }
  }
  return SetFunction<T>(ground, std::move(weights));
}

namespace {

// Monotone 0/1 functions on k elements as tables of length 2^k: (low, high) pairs
// of monotone functions on k-1 elements with low <= high pointwise.
std::vector<std::vector<bool>> monotone_tables(std::size_t k) {
  if (k == 0) return {{false}, {true}};
  auto smaller = monotone_tables(k - 1);
  std::vector<std::vector<bool>> out;
  for (const auto& low : smaller) {
    for (const auto& high : smaller) {
      bool dominated = true;
      for (std::size_t i = 0; i < low.size() && dominated; ++i) dominated = !low[i] || high[i];
      if (!dominated) continue;
      std::vector<bool> table(low);
      table.insert(table.end(), high.begin(), high.end());
      out.push_back(std::move(table));
    }
  }
  return out;
}

}  // namespace

template <Scalar T>
std::vector<SetFunction<T>> monotone_boolean_functions(const GroundSet& ground) {
  if (ground.size() > 5) throw Error("monotone Boolean function enumeration is limited to n <= 5");
  std::vector<SetFunction<T>> out;
  for (const auto& table : monotone_tables(ground.size())) {
    std::vector<T> values;
    values.reserve(table.size());
    for (bool b : table) values.emplace_back(b ? 1 : 0);
    out.emplace_back(ground, std::move(values));
  }
  return out;
}

#define RISKPOOL_INSTANTIATE(T)                                                                    \
  template class SetFunction<T>;                                                                   \
  template class CoinVector<T>;                                                                    \
  template class PairDistribution<T>;                                                              \
  template bool is_increasing<T>(const SetFunction<T>&);                                           \
  template bool is_decreasing<T>(const SetFunction<T>&);                                           \
  template bool is_strictly_increasing<T>(const SetFunction<T>&);                                  \
  template SetFunction<T> indicator<T>(const MonotoneFamily&);                                     \
  template T product_measure<T>(const CoinVector<T>&, Subset);                                     \
  template T pair_weight<T>(const CoinVector<T>&, Subset, Subset, Subset);                         \
  template PairDistribution<T> pair_measure<T>(const CoinVector<T>&, Subset);                      \
  template T expectation<T>(const SetFunction<T>&, const CoinVector<T>&);                          \
  template SetFunction<T> random_increasing<T>(std::uint64_t, const GroundSet&, std::size_t);      \
  template std::vector<SetFunction<T>> monotone_boolean_functions<T>(const GroundSet&);

RISKPOOL_INSTANTIATE(double)
RISKPOOL_INSTANTIATE(Rational)

#undef RISKPOOL_INSTANTIATE

}  // namespace riskpool
