#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace lmatch {

/// Exact non-negative-denominator rational with 64-bit parts. Comparisons are
/// carried out in 128-bit arithmetic so they never overflow.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  /// Accepts "3", "0.125", "1/256", "1e-3".
  static Rational parse(std::string_view text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string to_string() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) { return (a <=> b) == 0; }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Non-negative dyadic number numerator / 2^scale.
struct Dyadic {
  unsigned __int128 numerator = 0;
  unsigned scale = 0;

  static Dyadic pow2_neg(unsigned k) { return Dyadic{1, k}; }

  Dyadic& operator+=(const Dyadic& other);
  friend Dyadic operator+(Dyadic a, const Dyadic& b) { return a += b; }
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);
  friend bool operator==(const Dyadic& a, const Dyadic& b) { return (a <=> b) == 0; }

  /// Exact comparison of this * r against other (r >= 0).
  bool times_at_least(const Rational& r, const Dyadic& other) const;
  /// this >= r * other, exact.
  bool at_least_times(const Rational& r, const Dyadic& other) const;
  double to_double() const;
  std::string to_string() const;
};

/// a * x >= b * y for non-negative counts, exact.
bool scaled_at_least(const Rational& a, std::uint64_t x, const Rational& b, std::uint64_t y);

}  // namespace lmatch
