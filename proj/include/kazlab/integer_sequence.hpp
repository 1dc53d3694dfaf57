#pragma once

// Integer sequences (n_k)_{k>=0} used for character sums and as candidate
// Kazhdan sets in Z. Exact values are big integers; evaluation modulo 2^128
// or modulo a 64-bit q is done in wrapping arithmetic, which is a ring
// homomorphism and therefore exact.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <regex>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "kazlab/circle_point.hpp"
#include "kazlab/errors.hpp"

namespace kazlab {

class IntegerSequence {
 public:
  static constexpr std::uint64_t default_horizon = std::uint64_t{1} << 40;

  // Coefficients highest degree first: {1, 0, 0} is k^2.
  static IntegerSequence polynomial(std::vector<std::int64_t> coefficients,
                                    std::uint64_t horizon = default_horizon) {
    require(!coefficients.empty(), ErrorCode::invalid_argument, "polynomial needs coefficients");
    IntegerSequence s;
    s.form_ = Polynomial{std::move(coefficients)};
    s.horizon_ = horizon;
    return s;
  }

  // n_k = base^k + offset * k.
  static IntegerSequence lacunary(std::uint64_t base, std::int64_t offset = 0,
                                  std::uint64_t horizon = default_horizon) {
    require(base >= 2, ErrorCode::invalid_argument, "lacunary base must be at least 2");
    IntegerSequence s;
    s.form_ = Lacunary{base, offset};
    s.horizon_ = horizon;
    return s;
  }

  static IntegerSequence explicit_list(std::vector<BigInt> values) {
    require(!values.empty(), ErrorCode::invalid_argument, "explicit sequence is empty");
    IntegerSequence s;
    s.horizon_ = values.size() - 1;
    s.form_ = Explicit{std::move(values)};
    return s;
  }

  // "poly:1,0,0", "lacunary:2^k", "lacunary:3^k+k", "list:1,2,5".
  static IntegerSequence parse(std::string_view text) {
    const auto colon = text.find(':');
    require(colon != std::string_view::npos, ErrorCode::invalid_argument,
            "sequence spec must look like kind:args");
    const std::string kind(text.substr(0, colon));
    const std::string args(text.substr(colon + 1));
    if (kind == "poly") {
      std::vector<std::int64_t> coeffs;
      for (const auto& tok : split(args)) coeffs.push_back(std::stoll(tok));
      return polynomial(std::move(coeffs));
    }
    if (kind == "lacunary") {
      static const std::regex pattern(R"(\s*(\d+)\^k\s*(?:([+-])\s*(\d*)\s*k)?\s*)");
      std::smatch m;
      require(std::regex_match(args, m, pattern), ErrorCode::invalid_argument,
              "lacunary spec must look like b^k or b^k+ck");
      std::int64_t offset = 0;
      if (m[2].matched) {
        offset = m[3].length() > 0 ? std::stoll(m[3].str()) : 1;
        if (m[2].str() == "-") offset = -offset;
      }
      return lacunary(std::stoull(m[1].str()), offset);
    }
    if (kind == "list") {
      std::vector<BigInt> values;
      for (const auto& tok : split(args)) values.emplace_back(tok);
      return explicit_list(std::move(values));
    }
    fail(ErrorCode::invalid_argument, "unknown sequence kind '" + kind + "'");
  }

  std::uint64_t horizon() const { return horizon_; }

  std::string describe() const {
    std::ostringstream out;
    if (const auto* p = std::get_if<Polynomial>(&form_)) {
      out << "poly:";
      for (std::size_t i = 0; i < p->coefficients.size(); ++i) {
        out << (i ? "," : "") << p->coefficients[i];
      }
    } else if (const auto* l = std::get_if<Lacunary>(&form_)) {
      out << "lacunary:" << l->base << "^k";
      if (l->offset != 0) out << (l->offset > 0 ? "+" : "-") << std::abs(l->offset) << "k";
    } else {
      out << "list[" << std::get<Explicit>(form_).values.size() << "]";
    }
    return out.str();
  }

  // Exact value n_k.
  BigInt term(std::uint64_t k) const {
    check_index(k);
    if (const auto* p = std::get_if<Polynomial>(&form_)) {
      BigInt acc = 0;
      const BigInt kk = k;
      for (auto c : p->coefficients) acc = acc * kk + c;
      return acc;
    }
    if (const auto* l = std::get_if<Lacunary>(&form_)) {
      BigInt power = boost::multiprecision::pow(BigInt(l->base), static_cast<unsigned>(k));
      return power + BigInt(l->offset) * BigInt(k);
    }
    return std::get<Explicit>(form_).values[k];
  }

  // n_k mod 2^128 (two's complement for negative values).
  u128 residue(std::uint64_t k) const {
    check_index(k);
    if (const auto* p = std::get_if<Polynomial>(&form_)) {
      u128 acc = 0;
      const u128 kk = k;
      for (auto c : p->coefficients) acc = acc * kk + static_cast<u128>(static_cast<i128>(c));
      return acc;
    }
    if (const auto* l = std::get_if<Lacunary>(&form_)) {
      return pow_wrap(l->base, k) + static_cast<u128>(static_cast<i128>(l->offset)) * k;
    }
    return detail::big_to_u128(std::get<Explicit>(form_).values[k]);
  }

  // n_k mod q in [0, q).
  std::uint64_t residue_mod(std::uint64_t k, std::uint64_t q) const {
    check_index(k);
    require(q > 0, ErrorCode::invalid_argument, "modulus must be positive");
    if (const auto* p = std::get_if<Polynomial>(&form_)) {
      const u128 kk = k % q;
      u128 acc = 0;
      for (auto c : p->coefficients) acc = (acc * kk + signed_mod(c, q)) % q;
      return static_cast<std::uint64_t>(acc);
    }
    if (const auto* l = std::get_if<Lacunary>(&form_)) {
      const u128 power = pow_mod(l->base % q, k, q);
      const u128 lin = static_cast<u128>(signed_mod(l->offset, q)) * (k % q) % q;
      return static_cast<std::uint64_t>((power + lin) % q);
    }
    BigInt r = std::get<Explicit>(form_).values[k] % q;
    if (r < 0) r += q;
    return static_cast<std::uint64_t>(r);
  }

  // Number of bits of max |n_k| over k <= k_max; a precision diagnostic for
  // products with a 128-bit approximation of an irrational angle.
  unsigned magnitude_bits(std::uint64_t k_max) const {
    if (const auto* p = std::get_if<Polynomial>(&form_)) {
      BigInt bound = 0;
      BigInt kk = k_max;
      for (auto c : p->coefficients) bound = bound * kk + (c < 0 ? -c : c);
      return bound == 0 ? 0u : static_cast<unsigned>(boost::multiprecision::msb(bound)) + 1;
    }
    if (const auto* l = std::get_if<Lacunary>(&form_)) {
      double bits = static_cast<double>(k_max) * std::log2(static_cast<double>(l->base)) + 1.0;
      return static_cast<unsigned>(std::min(bits, 1e6));
    }
    unsigned bits = 0;
    const auto& values = std::get<Explicit>(form_).values;
    for (std::uint64_t k = 0; k <= std::min<std::uint64_t>(k_max, values.size() - 1); ++k) {
      BigInt a = values[k] < 0 ? BigInt(-values[k]) : values[k];
      if (a != 0) bits = std::max(bits, static_cast<unsigned>(boost::multiprecision::msb(a)) + 1);
    }
    return bits;
  }

 private:
  struct Polynomial {
    std::vector<std::int64_t> coefficients;
  };
  struct Lacunary {
    std::uint64_t base;
    std::int64_t offset;
  };
  struct Explicit {
    std::vector<BigInt> values;
  };

  void check_index(std::uint64_t k) const {
    if (k > horizon_) {
      fail(ErrorCode::horizon_exceeded,
           "index " + std::to_string(k) + " exceeds sequence horizon " + std::to_string(horizon_));
    }
  }

  static std::vector<std::string> split(const std::string& args) {
    std::vector<std::string> out;
    std::stringstream in(args);
    std::string tok;
    while (std::getline(in, tok, ',')) {
      if (!tok.empty()) out.push_back(tok);
    }
    require(!out.empty(), ErrorCode::invalid_argument, "empty argument list");
    return out;
  }

  static u128 pow_wrap(u128 base, std::uint64_t e) {
    u128 result = 1;
    while (e) {
      if (e & 1u) result *= base;
      base *= base;
      e >>= 1;
    }
    return result;
  }

  static u128 pow_mod(u128 base, std::uint64_t e, std::uint64_t q) {
    u128 result = 1 % q;
    base %= q;
    while (e) {
      if (e & 1u) result = result * base % q;
      base = base * base % q;
      e >>= 1;
    }
    return result;
  }

  static u128 signed_mod(std::int64_t c, std::uint64_t q) {
    const i128 r = static_cast<i128>(c) % static_cast<i128>(q);
    return static_cast<u128>(r < 0 ? r + static_cast<i128>(q) : r);
  }

  std::variant<Polynomial, Lacunary, Explicit> form_;
  std::uint64_t horizon_ = default_horizon;
};

// n * phase mod 1 for the k-th term, exact for both angle representations.
inline CirclePoint wrapped_product(const IntegerSequence& seq, std::uint64_t k, const Phase& phase,
                                   std::uint64_t harmonic = 1) {
  if (const auto* r = std::get_if<RationalTurn>(&phase)) {
    const u128 nk = seq.residue_mod(k, r->den);
    const u128 prod = nk * (harmonic % r->den) % r->den * r->num % r->den;
    return RationalTurn{static_cast<std::uint64_t>(prod), r->den}.approx();
  }
  return std::get<CirclePoint>(phase).times(seq.residue(k)).times(static_cast<u128>(harmonic));
}

}  // namespace kazlab
