#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#ifndef SPINCOVER_MAX_DIM
#define SPINCOVER_MAX_DIM 12
#endif

namespace spincover {

inline constexpr int kMaxDim = SPINCOVER_MAX_DIM;
static_assert(kMaxDim >= 1 && kMaxDim <= 20, "blade masks are 32-bit and dense storage is 2^n");

// Display/comparison threshold for coefficients.
inline constexpr double kZeroThreshold = 1e-12;

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Metric signature (p, q) of Cl(p,q): generators 1..p square to +1,
// generators p+1..n square to -1.
class Signature {
 public:
  constexpr Signature(int p, int q) : p_(p), q_(q) {
    if (p < 0 || q < 0) throw InvalidArgument("signature: p and q must be non-negative");
    if (p + q < 1) throw InvalidArgument("signature: n = p + q must be at least 1");
    if (p + q > kMaxDim)
      throw InvalidArgument("signature: n = " + std::to_string(p + q) + " exceeds the maximum dimension " +
                            std::to_string(kMaxDim));
  }

  constexpr int p() const { return p_; }
  constexpr int q() const { return q_; }
  constexpr int n() const { return p_ + q_; }
  constexpr std::size_t blade_count() const { return std::size_t{1} << n(); }

  // 0-based generator index.
  constexpr int metric(int i) const { return i < p_ ? 1 : -1; }

  // Bits of the generators squaring to -1.
  constexpr std::uint32_t negative_mask() const { return ((std::uint32_t{1} << n()) - 1) & ~((std::uint32_t{1} << p_) - 1); }

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  int p_;
  int q_;
};

inline std::string to_string(const Signature& s) {
  return "(" + std::to_string(s.p()) + "," + std::to_string(s.q()) + ")";
}

// Basis blade e_A, stored as a bitmask: bit i set means generator e_{i+1} is present.
// Generators are always in ascending order, so the mask determines the blade.
class Blade {
 public:
  constexpr Blade() = default;
  constexpr explicit Blade(std::uint32_t mask) : mask_(mask) {}

  static constexpr Blade scalar() { return Blade{}; }
  // 1-based generator index, as in e_1 ... e_n.
  static constexpr Blade generator(int index) { return Blade{std::uint32_t{1} << (index - 1)}; }
  static Blade from_indices(std::initializer_list<int> indices) {
    std::uint32_t m = 0;
    int last = 0;
    for (int i : indices) {
      if (i <= last) throw InvalidArgument("blade: indices must be ascending and positive");
      m |= std::uint32_t{1} << (i - 1);
      last = i;
    }
    return Blade{m};
  }

  constexpr std::uint32_t mask() const { return mask_; }
  constexpr int grade() const { return std::popcount(mask_); }
  constexpr bool is_even() const { return grade() % 2 == 0; }
  constexpr bool contains(int index) const { return (mask_ >> (index - 1)) & 1u; }

  // 1-based indices in ascending order.
  std::vector<int> indices() const {
    std::vector<int> out;
    for (std::uint32_t m = mask_; m != 0; m &= m - 1) out.push_back(std::countr_zero(m) + 1);
    return out;
  }

  bool fits(const Signature& sig) const { return (mask_ >> sig.n()) == 0; }

  friend constexpr auto operator<=>(Blade, Blade) = default;

 private:
  std::uint32_t mask_ = 0;
};

struct SignedBlade {
  int sign;
  Blade blade;

  friend bool operator==(const SignedBlade&, const SignedBlade&) = default;
};

// (-1)^{k(k-1)/2}
constexpr int reversion_sign(int grade) { return (grade * (grade - 1) / 2) % 2 == 0 ? 1 : -1; }

// e_A e_B = sign * e_{A xor B}. For each generator of b (lowest first), count the
// generators of a above it that it has to pass; shared generators contribute their metric.
constexpr SignedBlade blade_product(Blade a, Blade b, const Signature& sig) {
  int swaps = 0;
  for (std::uint32_t m = b.mask(); m != 0; m &= m - 1) {
    const int j = std::countr_zero(m);
    swaps += std::popcount(a.mask() >> (j + 1));
  }
  const int negatives = std::popcount(a.mask() & b.mask() & sig.negative_mask());
  const int sign = ((swaps + negatives) % 2 == 0) ? 1 : -1;
  return {sign, Blade{a.mask() ^ b.mask()}};
}

// e^A = (e_A)^{-1} = reverse(e_A) / (e_A reverse(e_A)); the denominator is +-1.
constexpr SignedBlade blade_inverse(Blade a, const Signature& sig) {
  const int metric_sign = (std::popcount(a.mask() & sig.negative_mask()) % 2 == 0) ? 1 : -1;
  return {reversion_sign(a.grade()) * metric_sign, a};
}

// "1" for the scalar blade, "e" + ascending indices otherwise ("e12", "e123").
// Blades containing an index above 9 use "e_" + underscore-separated indices ("e_1_10").
inline std::string blade_name(Blade b) {
  if (b.mask() == 0) return "1";
  const auto idx = b.indices();
  const bool wide = idx.back() > 9;
  std::string s = "e";
  for (int i : idx) {
    if (wide) s += '_';
    s += std::to_string(i);
  }
  return s;
}

inline Blade parse_blade(std::string_view name, const Signature& sig) {
  auto fail = [&](const char* why) {
    return InvalidArgument("blade name '" + std::string(name) + "': " + why);
  };
  if (name == "1") return Blade::scalar();
  if (name.size() < 2 || name[0] != 'e') throw fail("expected \"1\" or e<indices>");

  std::vector<int> idx;
  if (name[1] == '_') {
    std::size_t pos = 1;
    while (pos < name.size()) {
      if (name[pos] != '_') throw fail("malformed separator");
      std::size_t end = pos + 1;
      while (end < name.size() && name[end] >= '0' && name[end] <= '9') ++end;
      if (end == pos + 1) throw fail("empty index");
      if (end - pos - 1 > 2) throw fail("index too large");
      idx.push_back(std::stoi(std::string(name.substr(pos + 1, end - pos - 1))));
      pos = end;
    }
  } else {
    for (char c : name.substr(1)) {
      if (c < '1' || c > '9') throw fail("indices must be digits 1-9 (use e_<i>_<j> for larger indices)");
      idx.push_back(c - '0');
    }
  }

  std::uint32_t m = 0;
  int last = 0;
  for (int i : idx) {
    if (i <= last) throw fail("indices must be strictly ascending");
    if (i > sig.n()) throw fail("index exceeds the signature dimension");
    m |= std::uint32_t{1} << (i - 1);
    last = i;
  }
  return Blade{m};
}

}  // namespace spincover
