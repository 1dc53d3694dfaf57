#pragma once

// Points of the circle group T = R/Z, stored as exact 128-bit fractions of a
// turn. Multiplication by an integer wraps modulo 2^128, which is exactly
// n * theta mod 1 for the stored dyadic theta.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <string>
#include <string_view>
#include <variant>

#include "kazlab/errors.hpp"

namespace kazlab {

using u128 = unsigned __int128;
using i128 = __int128;
using BigInt = boost::multiprecision::cpp_int;

namespace detail {

inline constexpr double two_pow_64 = 18446744073709551616.0;

// Value of a signed 128-bit word divided by 2^128.
inline double signed_word_to_turns(i128 w) {
  const auto hi = static_cast<std::int64_t>(w >> 64);
  const auto lo = static_cast<std::uint64_t>(static_cast<u128>(w));
  return (static_cast<double>(hi) + static_cast<double>(lo) / two_pow_64) / two_pow_64;
}

inline u128 big_to_u128(const BigInt& value) {
  // Two's complement reduction modulo 2^128.
  BigInt modulus = BigInt(1) << 128;
  BigInt r = value % modulus;
  if (r < 0) r += modulus;
  const auto lo = static_cast<std::uint64_t>(r & BigInt(0xFFFFFFFFFFFFFFFFull));
  const auto hi = static_cast<std::uint64_t>(r >> 64);
  return (static_cast<u128>(hi) << 64) | lo;
}

inline BigInt u128_to_big(u128 value) {
  BigInt hi = static_cast<std::uint64_t>(value >> 64);
  return (hi << 64) | BigInt(static_cast<std::uint64_t>(value));
}

inline u128 parse_hex_word(std::string_view hex) {
  u128 w = 0;
  require(!hex.empty() && hex.size() <= 32, ErrorCode::invalid_argument,
          "fixed-point word must have 1..32 hex digits");
  for (char c : hex) {
    unsigned d = 0;
    if (c >= '0' && c <= '9') d = static_cast<unsigned>(c - '0');
    else if (c >= 'a' && c <= 'f') d = static_cast<unsigned>(c - 'a' + 10);
    else if (c >= 'A' && c <= 'F') d = static_cast<unsigned>(c - 'A' + 10);
    else fail(ErrorCode::invalid_argument, "bad hex digit in fixed-point word");
    w = (w << 4) | d;
  }
  return w;
}

}  // namespace detail

class CirclePoint {
 public:
  constexpr CirclePoint() = default;

  static constexpr CirclePoint from_word(u128 word) {
    CirclePoint p;
    p.word_ = word;
    return p;
  }

  // floor(num/den * 2^128) mod 2^128, for 0 < den < 2^64.
  static CirclePoint from_rational(std::int64_t num, std::uint64_t den) {
    require(den > 0, ErrorCode::invalid_argument, "rational angle needs a positive denominator");
    std::int64_t r = num % static_cast<std::int64_t>(den);
    if (r < 0) r += static_cast<std::int64_t>(den);
    const u128 shifted = static_cast<u128>(static_cast<std::uint64_t>(r)) << 64;
    const u128 hi = shifted / den;
    const u128 lo = ((shifted % den) << 64) / den;
    return from_word((hi << 64) | lo);
  }

  // Nearest representable point to x mod 1. Only 53 bits are meaningful.
  static CirclePoint from_double(double x) {
    double frac = x - std::floor(x);
    if (frac >= 1.0) frac = 0.0;
    const double hi_part = std::floor(frac * detail::two_pow_64);
    const double rest = frac * detail::two_pow_64 - hi_part;
    const auto hi = static_cast<std::uint64_t>(hi_part);
    const auto lo = static_cast<std::uint64_t>(std::ldexp(rest, 64));
    return from_word((static_cast<u128>(hi) << 64) | lo);
  }

  // 2^-bits turns.
  static CirclePoint dyadic(unsigned bits) {
    require(bits >= 1 && bits <= 128, ErrorCode::invalid_argument, "dyadic exponent must lie in [1,128]");
    return from_word(static_cast<u128>(1) << (128 - bits));
  }

  constexpr u128 word() const { return word_; }

  // Angle in [0, 1) rounded to double.
  double turns() const {
    const auto hi = static_cast<std::uint64_t>(word_ >> 64);
    const auto lo = static_cast<std::uint64_t>(word_);
    return (static_cast<double>(hi) + static_cast<double>(lo) / detail::two_pow_64) / detail::two_pow_64;
  }

  // e^{2 i pi angle}; exact at quarter turns.
  std::complex<double> unit() const {
    constexpr u128 eighth = static_cast<u128>(1) << 125;
    const u128 shifted = word_ + eighth;
    const auto quadrant = static_cast<unsigned>(shifted >> 126);
    const u128 rem = shifted & ((static_cast<u128>(1) << 126) - 1);
    const double r = detail::signed_word_to_turns(static_cast<i128>(rem) - static_cast<i128>(eighth));
    const double a = 2.0 * std::numbers::pi * r;
    const double c = std::cos(a);
    const double s = std::sin(a);
    switch (quadrant) {
      case 0: return {c, s};
      case 1: return {-s, c};
      case 2: return {-c, -s};
      default: return {s, -c};
    }
  }

  // Distance to 0 on the circle, in turns, in [0, 1/2].
  double distance_to_zero() const {
    const double t = detail::signed_word_to_turns(static_cast<i128>(word_));
    return std::abs(t);
  }

  friend constexpr CirclePoint operator+(CirclePoint a, CirclePoint b) {
    return from_word(a.word_ + b.word_);
  }
  friend constexpr CirclePoint operator-(CirclePoint a, CirclePoint b) {
    return from_word(a.word_ - b.word_);
  }
  friend constexpr CirclePoint operator-(CirclePoint a) { return from_word(-a.word_); }

  // n * angle mod 1, with n given by its residue modulo 2^128.
  constexpr CirclePoint times(u128 n_residue) const { return from_word(word_ * n_residue); }
  CirclePoint times(std::int64_t n) const {
    return times(static_cast<u128>(static_cast<i128>(n)));
  }
  CirclePoint times(const BigInt& n) const { return times(detail::big_to_u128(n)); }

  friend constexpr bool operator==(CirclePoint, CirclePoint) = default;
  friend constexpr auto operator<=>(CirclePoint a, CirclePoint b) { return a.word_ <=> b.word_; }

  std::string to_hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(32, '0');
    u128 w = word_;
    for (int i = 31; i >= 0; --i) {
      out[static_cast<std::size_t>(i)] = digits[static_cast<unsigned>(w & 0xF)];
      w >>= 4;
    }
    return out;
  }

 private:
  u128 word_ = 0;
};

// Fractional part of sqrt(2), truncated to 128 bits.
inline CirclePoint sqrt2_turn() {
  static const CirclePoint value = [] {
    BigInt scaled = boost::multiprecision::sqrt(BigInt(2) << 256);
    return CirclePoint::from_word(detail::big_to_u128(scaled));
  }();
  return value;
}

// (sqrt(5) - 1) / 2, the fractional part of the golden ratio.
inline CirclePoint golden_turn() {
  static const CirclePoint value = [] {
    BigInt root5 = boost::multiprecision::sqrt(BigInt(5) << 256);
    BigInt scaled = (root5 - (BigInt(1) << 128)) >> 1;
    return CirclePoint::from_word(detail::big_to_u128(scaled));
  }();
  return value;
}

// Exact rational angle p/q turns with 0 <= p < q.
struct RationalTurn {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  static RationalTurn make(std::int64_t p, std::uint64_t q) {
    require(q > 0, ErrorCode::invalid_argument, "rational angle needs a positive denominator");
    std::int64_t r = p % static_cast<std::int64_t>(q);
    if (r < 0) r += static_cast<std::int64_t>(q);
    auto g = std::gcd(static_cast<std::uint64_t>(r), q);
    if (g == 0) g = q;
    return {static_cast<std::uint64_t>(r) / g, q / g};
  }

  CirclePoint approx() const {
    return CirclePoint::from_rational(static_cast<std::int64_t>(num), den);
  }
};

// An angle as accepted at the interfaces: exact rational or 128-bit word.
using Phase = std::variant<CirclePoint, RationalTurn>;

inline CirclePoint approx(const Phase& phase) {
  if (const auto* r = std::get_if<RationalTurn>(&phase)) return r->approx();
  return std::get<CirclePoint>(phase);
}

// Accepts "sqrt2", "golden", "p/q", a decimal such as "0.25", or "0x<hex word>".
inline Phase parse_phase(std::string_view text) {
  if (text == "sqrt2") return sqrt2_turn();
  if (text == "golden") return golden_turn();
  if (text.starts_with("0x") || text.starts_with("0X")) {
    return CirclePoint::from_word(detail::parse_hex_word(text.substr(2)));
  }
  try {
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
      const auto p = std::stoll(std::string(text.substr(0, slash)));
      const auto q = std::stoull(std::string(text.substr(slash + 1)));
      return RationalTurn::make(p, q);
    }
    if (const auto dot = text.find('.'); dot != std::string_view::npos &&
                                          text.find_first_of("eE") == std::string_view::npos) {
      const std::string digits = std::string(text.substr(0, dot)) + std::string(text.substr(dot + 1));
      const std::size_t places = text.size() - dot - 1;
      if (places <= 18) {
        std::uint64_t den = 1;
        for (std::size_t i = 0; i < places; ++i) den *= 10;
        return RationalTurn::make(std::stoll(digits.empty() ? "0" : digits), den);
      }
      return CirclePoint::from_double(std::stod(std::string(text)));
    }
    if (text.find_first_of("eE") != std::string_view::npos) {
      return CirclePoint::from_double(std::stod(std::string(text)));
    }
    return RationalTurn::make(std::stoll(std::string(text)), 1);
  } catch (const std::logic_error&) {
    fail(ErrorCode::invalid_argument, "cannot parse angle '" + std::string(text) + "'");
  }
}

inline std::string describe(const Phase& phase) {
  if (const auto* r = std::get_if<RationalTurn>(&phase)) {
    return std::to_string(r->num) + "/" + std::to_string(r->den);
  }
  return "0x" + std::get<CirclePoint>(phase).to_hex();
}

}  // namespace kazlab
