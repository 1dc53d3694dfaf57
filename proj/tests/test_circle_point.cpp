#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace kazlab;

TEST(CirclePoint, QuarterTurnsAreExact) {
  EXPECT_EQ(CirclePoint::from_rational(0, 4).unit(), cplx(1.0, 0.0));
  EXPECT_EQ(CirclePoint::from_rational(1, 4).unit(), cplx(0.0, 1.0));
  EXPECT_EQ(CirclePoint::from_rational(2, 4).unit(), cplx(-1.0, 0.0));
  EXPECT_EQ(CirclePoint::from_rational(3, 4).unit(), cplx(0.0, -1.0));
  EXPECT_EQ(CirclePoint::from_rational(-1, 4), CirclePoint::from_rational(3, 4));
}

TEST(CirclePoint, AdditionWrapsModuloOne) {
  const auto half = CirclePoint::from_rational(1, 2);
  EXPECT_EQ(half + half, CirclePoint{});
  EXPECT_EQ(CirclePoint::dyadic(1), half);
  EXPECT_EQ(CirclePoint::dyadic(3).times(std::int64_t{8}), CirclePoint{});
  EXPECT_DOUBLE_EQ(CirclePoint::from_rational(3, 4).distance_to_zero(), 0.25);
}

TEST(CirclePoint, NamedAnglesMatchDoubles) {
  EXPECT_NEAR(sqrt2_turn().turns(), std::numbers::sqrt2 - 1.0, 3e-16);
  EXPECT_NEAR(golden_turn().turns(), (std::sqrt(5.0) - 1.0) / 2.0, 1e-16);
}

TEST(CirclePoint, ParsePhaseForms) {
  EXPECT_TRUE(std::holds_alternative<RationalTurn>(parse_phase("1/3")));
  const auto r = std::get<RationalTurn>(parse_phase("-2/6"));
  EXPECT_EQ(r.num, 2u);
  EXPECT_EQ(r.den, 3u);
  const auto d = std::get<RationalTurn>(parse_phase("0.25"));
  EXPECT_EQ(d.num, 1u);
  EXPECT_EQ(d.den, 4u);
  EXPECT_EQ(approx(parse_phase("sqrt2")), sqrt2_turn());
  const auto hex = approx(parse_phase("0x80000000000000000000000000000000"));
  EXPECT_EQ(hex, CirclePoint::from_rational(1, 2));
  try {
    parse_phase("one third");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_argument);
  }
}

TEST(CirclePoint, HexRoundTrip) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    const u128 w = (static_cast<u128>(rng()) << 64) | rng();
    const auto p = CirclePoint::from_word(w);
    EXPECT_EQ(approx(parse_phase("0x" + p.to_hex())), p);
  }
}

// Integer multiples of random words agree with big-integer arithmetic exactly.
TEST(CirclePoint, TimesMatchesBigIntegerProduct) {
  std::mt19937_64 rng(12);
  const BigInt modulus = BigInt(1) << 128;
  for (int i = 0; i < 1000; ++i) {
    const u128 w = (static_cast<u128>(rng()) << 64) | rng();
    const auto n = static_cast<std::int64_t>(rng());
    BigInt want = (detail::u128_to_big(w) * n) % modulus;
    if (want < 0) want += modulus;
    EXPECT_EQ(detail::u128_to_big(CirclePoint::from_word(w).times(n).word()), want);
  }
}

TEST(CirclePoint, FromRationalIsFloorOfScaledFraction) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 500; ++i) {
    const std::uint64_t q = 1 + rng() % (std::uint64_t{1} << 40);
    const std::int64_t p = static_cast<std::int64_t>(rng() % q);
    const BigInt want = (BigInt(p) << 128) / q;
    EXPECT_EQ(detail::u128_to_big(CirclePoint::from_rational(p, q).word()), want);
  }
}

TEST(CirclePoint, UnitMatchesPolar) {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 1000; ++i) {
    const u128 w = (static_cast<u128>(rng()) << 64) | rng();
    const auto p = CirclePoint::from_word(w);
    EXPECT_LT(std::abs(p.unit() - std::polar(1.0, oracle::two_pi * p.turns())), 1e-14);
    EXPECT_NEAR(std::abs(p.unit()), 1.0, 1e-15);
  }
}
