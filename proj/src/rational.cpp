#include "lmatch/rational.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <cmath>
#include <numeric>

#include "lmatch/graph.hpp"

namespace lmatch {

using boost::multiprecision::cpp_int;

namespace {

cpp_int to_big(unsigned __int128 x) {
  cpp_int hi = static_cast<std::uint64_t>(x >> 64);
  return (hi << 64) | cpp_int(static_cast<std::uint64_t>(x));
}

std::int64_t checked(const cpp_int& v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    throw InvalidArgument("rational overflow");
  return static_cast<std::int64_t>(v);
}

Rational make(const cpp_int& num, const cpp_int& den) {
  cpp_int g = boost::multiprecision::gcd(num, den);
  if (g == 0) g = 1;
  return Rational(checked(num / g), checked(den / g));
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw InvalidArgument("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  num_ = g ? num / g : num;
  den_ = g ? den / g : den;
}

Rational Rational::parse(std::string_view text) {
  auto fail = [&]() -> Rational { throw InvalidArgument("not a rational: '" + std::string(text) + "'"); };
  if (text.empty()) return fail();
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::int64_t a = 0, b = 0;
    auto ra = std::from_chars(text.data(), text.data() + slash, a);
    auto rb = std::from_chars(text.data() + slash + 1, text.data() + text.size(), b);
    if (ra.ec != std::errc{} || ra.ptr != text.data() + slash || rb.ec != std::errc{} ||
        rb.ptr != text.data() + text.size())
      return fail();
    return Rational(a, b);
  }
  // Decimal with optional exponent, parsed exactly.
  std::string_view mant = text;
  std::int64_t exp10 = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    mant = text.substr(0, e);
    auto re = std::from_chars(text.data() + e + 1, text.data() + text.size(), exp10);
    if (re.ec != std::errc{} || re.ptr != text.data() + text.size()) return fail();
  }
  bool neg = false;
  if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
    neg = mant[0] == '-';
    mant.remove_prefix(1);
  }
  cpp_int num = 0;
  std::int64_t frac_digits = 0;
  bool seen_dot = false, seen_digit = false;
  for (char c : mant) {
    if (c == '.') {
      if (seen_dot) return fail();
      seen_dot = true;
    } else if (c >= '0' && c <= '9') {
      num = num * 10 + (c - '0');
      seen_digit = true;
      if (seen_dot) ++frac_digits;
    } else {
      return fail();
    }
  }
  if (!seen_digit) return fail();
  cpp_int den = 1;
  const std::int64_t shift = exp10 - frac_digits;
  if (std::abs(shift) > 18) return fail();
  for (std::int64_t i = 0; i < std::abs(shift); ++i) (shift > 0 ? num : den) *= 10;
  if (neg) num = -num;
  return make(num, den);
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  return make(cpp_int(a.num_) * b.den_ + cpp_int(b.num_) * a.den_, cpp_int(a.den_) * b.den_);
}
Rational operator-(const Rational& a, const Rational& b) {
  return make(cpp_int(a.num_) * b.den_ - cpp_int(b.num_) * a.den_, cpp_int(a.den_) * b.den_);
}
Rational operator*(const Rational& a, const Rational& b) {
  return make(cpp_int(a.num_) * b.num_, cpp_int(a.den_) * b.den_);
}
Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw InvalidArgument("division by zero");
  cpp_int num = cpp_int(a.num_) * b.den_;
  cpp_int den = cpp_int(a.den_) * b.num_;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return make(num, den);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const cpp_int l = cpp_int(a.num_) * b.den_;
  const cpp_int r = cpp_int(b.num_) * a.den_;
  return l < r ? std::strong_ordering::less : (l > r ? std::strong_ordering::greater : std::strong_ordering::equal);
}

Dyadic& Dyadic::operator+=(const Dyadic& other) {
  if (other.scale > scale) {
    numerator <<= (other.scale - scale);
    scale = other.scale;
  }
  numerator += other.numerator << (scale - other.scale);
  return *this;
}

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
  const cpp_int l = to_big(a.numerator) << b.scale;
  const cpp_int r = to_big(b.numerator) << a.scale;
  return l < r ? std::strong_ordering::less : (l > r ? std::strong_ordering::greater : std::strong_ordering::equal);
}

bool Dyadic::times_at_least(const Rational& r, const Dyadic& other) const {
  const cpp_int l = (to_big(numerator) * r.num()) << other.scale;
  const cpp_int rr = (to_big(other.numerator) * r.den()) << scale;
  return l >= rr;
}

bool Dyadic::at_least_times(const Rational& r, const Dyadic& other) const {
  const cpp_int l = (to_big(numerator) * r.den()) << other.scale;
  const cpp_int rr = (to_big(other.numerator) * r.num()) << scale;
  return l >= rr;
}

double Dyadic::to_double() const {
  return std::ldexp(static_cast<long double>(numerator), -static_cast<int>(scale));
}

std::string Dyadic::to_string() const {
  cpp_int n = to_big(numerator);
  unsigned s = scale;
  while (s > 0 && (n & 1) == 0) {
    n >>= 1;
    --s;
  }
  if (s == 0) return n.str();
  return n.str() + "/2^" + std::to_string(s);
}

bool scaled_at_least(const Rational& a, std::uint64_t x, const Rational& b, std::uint64_t y) {
  // a.num/a.den * x >= b.num/b.den * y
  return cpp_int(a.num()) * b.den() * x >= cpp_int(b.num()) * a.den() * y;
}

}  // namespace lmatch
