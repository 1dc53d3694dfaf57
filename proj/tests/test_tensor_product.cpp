#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace kazlab;
using oracle::error_code_of;

namespace {

// diag(1, e^{i t}) with anchor (sqrt(1-s), sqrt(s)): |1 - <U a, a>| = s |1 - e^{i t}|.
Slot two_level(double t, double s) {
  Vector a(2);
  a << std::sqrt(1.0 - s), std::sqrt(s);
  return {UnitaryRep::diagonal({0.0, t}), a};
}

// Slot n (1-based) is C^n with U = diag of the n-th roots of unity and the uniform anchor.
RepSequence roots_of_unity_family(std::size_t length) {
  std::vector<Slot> slots;
  for (std::size_t n = 1; n <= length; ++n) {
    std::vector<double> phases(n);
    for (std::size_t k = 0; k < n; ++k) phases[k] = oracle::two_pi * static_cast<double>(k) / static_cast<double>(n);
    slots.push_back({UnitaryRep::diagonal(phases), Vector::Ones(static_cast<Eigen::Index>(n)) / std::sqrt(static_cast<double>(n))});
  }
  return RepSequence(std::move(slots));
}

}  // namespace

TEST(ElementaryCoefficient, TrivialSlots) {
  std::vector<Slot> slots;
  for (int n = 0; n < 5; ++n) slots.push_back({UnitaryRep::trivial(3), Vector::Unit(3, n % 3)});
  const RepSequence seq(std::move(slots));
  EXPECT_EQ(elementary_coefficient(seq, {7}, {}, {}), cplx(1.0));
  const auto t = c0_series(seq, {7});
  for (double v : t.terms) EXPECT_EQ(v, 0.0);
}

TEST(ElementaryCoefficient, OrthogonalSlotGivesZero) {
  const RepSequence seq({two_level(0.3, 0.0), two_level(0.7, 0.5)});
  ElementaryVector x;
  ElementaryVector y;
  y.slots[0] = Vector::Unit(2, 1);  // orthogonal to the anchor e_0 after U = diag(1, .)
  EXPECT_LT(std::abs(elementary_coefficient(seq, {1}, x, y)), 1e-16);
}

// Product of per-slot coefficients against <(kron U_n)(kron x_n), kron y_n>.
TEST(ElementaryCoefficient, MatchesDenseKronecker) {
  std::mt19937_64 rng(61);
  for (int i = 0; i < 100; ++i) {
    const std::size_t length = 1 + rng() % 4;
    const bool lattice = i % 3 == 0;
    std::vector<Slot> slots;
    ElementaryVector x;
    ElementaryVector y;
    for (std::size_t n = 0; n < length; ++n) {
      const auto d = static_cast<Eigen::Index>(1 + rng() % 3);
      std::vector<Matrix> gens;
      if (lattice) {
        // two commuting unitaries: functions of one random unitary
        const Matrix u = haar_unitary(d, rng);
        gens = {u, u * u * u};
      } else {
        gens = {haar_unitary(d, rng)};
      }
      const auto rep = lattice ? UnitaryRep::lattice(gens) : UnitaryRep::cyclic(gens[0]);
      slots.push_back({rep, oracle::random_vector(d, rng).normalized()});
      if (rng() % 4 != 0) x.slots[n] = oracle::random_vector(d, rng);
      if (rng() % 4 != 0) y.slots[n] = oracle::random_vector(d, rng);
    }
    const RepSequence seq(slots);
    GroupWord g;
    for (std::size_t r = 0; r < seq.generator_count(); ++r) g.push_back(static_cast<std::int64_t>(rng() % 7) - 3);

    Matrix big = Matrix::Identity(1, 1);
    Vector xs = Vector::Ones(1);
    Vector ys = Vector::Ones(1);
    double norms = 1.0;
    for (std::size_t n = 0; n < length; ++n) {
      Matrix un = Matrix::Identity(slots[n].rep.dimension(), slots[n].rep.dimension());
      for (std::size_t r = 0; r < g.size(); ++r) {
        for (int e = 0; e < std::abs(g[r]); ++e) un = un * (g[r] > 0 ? Matrix(slots[n].rep.generator(r)) : Matrix(slots[n].rep.generator(r).adjoint()));
      }
      big = oracle::kron(big, un);
      xs = oracle::kron(xs, x.component(seq, n));
      ys = oracle::kron(ys, y.component(seq, n));
      norms *= x.component(seq, n).norm() * y.component(seq, n).norm();
    }
    const cplx want = ys.dot(big * xs);
    const cplx got = elementary_coefficient(seq, g, x, y);
    EXPECT_LT(std::abs(got - want), 1e-12 * std::max(1.0, norms));
    EXPECT_LE(std::abs(got), norms * (1.0 + 1e-12));
  }
}

TEST(ElementaryCoefficient, RejectsBadComponents) {
  const RepSequence seq({two_level(0.3, 0.1)});
  ElementaryVector x;
  x.slots[3] = Vector::Ones(2);
  EXPECT_EQ(error_code_of([&] { elementary_coefficient(seq, {1}, x, {}); }), ErrorCode::invalid_argument);
  ElementaryVector y;
  y.slots[0] = Vector::Ones(3);
  EXPECT_EQ(error_code_of([&] { elementary_coefficient(seq, {1}, {}, y); }), ErrorCode::invalid_argument);
  EXPECT_EQ(error_code_of([] { RepSequence({Slot{UnitaryRep::trivial(2), Vector::Ones(2)}}); }), ErrorCode::invalid_argument);
}

TEST(C0Series, ShrinkingRotationsConverge) {
  std::vector<Slot> slots;
  std::vector<double> eps;
  for (int n = 1; n <= 20; ++n) {
    const double e = std::ldexp(1.0, -n);
    eps.push_back(e);
    Matrix r(2, 2);
    r << std::cos(e), -std::sin(e), std::sin(e), std::cos(e);
    Vector a(2);
    a << std::cos(0.4), std::sin(0.4);
    slots.push_back({UnitaryRep::cyclic(r), a});
  }
  const RepSequence seq(std::move(slots));
  const auto t = c0_series(seq, {1}, DecayModel::geometric(0.6));
  for (std::size_t n = 0; n < eps.size(); ++n) {
    EXPECT_NEAR(t.terms[n], 1.0 - std::cos(eps[n]), 1e-15);
    EXPECT_LE(t.terms[n], eps[n]);
    if (n > 0) {
      EXPECT_GE(t.partial_sums[n], t.partial_sums[n - 1]);
    }
  }
  EXPECT_FALSE(t.divergence_flagged);
  EXPECT_TRUE(t.tail_estimate.has_value());
}

TEST(C0Series, FixedRotationIsFlagged) {
  std::vector<Slot> slots;
  for (int n = 0; n < 16; ++n) slots.push_back(two_level(1.0, 0.5));
  const RepSequence seq(std::move(slots));
  for (const auto& model : {DecayModel::geometric(0.5), DecayModel::power(2.0)}) {
    const auto t = c0_series(seq, {1}, model);
    EXPECT_TRUE(t.divergence_flagged) << model.describe();
    EXPECT_FALSE(t.tail_estimate.has_value());
    EXPECT_NEAR(t.partial_sums.back(), 16.0 * t.terms.front(), 1e-12);
  }
  EXPECT_FALSE(c0_series(seq, {1}).divergence_flagged);  // no model, no verdict
}

TEST(TensorDefect, TrivialAndSingleSlot) {
  const RepSequence trivial({Slot{UnitaryRep::trivial(2), Vector::Unit(2, 0)}});
  EXPECT_EQ(invariance_defect_tensor(trivial, {{1}, {-4}}).defect, 0.0);

  const auto slot = two_level(0.9, 0.3);
  const RepSequence one({slot});
  const auto d = invariance_defect_tensor(one, {{1}});
  EXPECT_NEAR(d.defect, (slot.rep.generator(0) * slot.anchor - slot.anchor).norm(), 1e-15);
}

// defect^2 <= 2 sum_n |1 - c_n| for slots with per-level defects 2^-n.
TEST(TensorDefect, BoundedByPerSlotDefects) {
  const double t = std::numbers::pi / 2;
  std::vector<Slot> slots;
  double total = 0.0;
  for (int n = 1; n <= 12; ++n) {
    const double e = std::ldexp(1.0, -n);
    slots.push_back(two_level(t, e / std::abs(1.0 - std::polar(1.0, t))));
    total += e;
  }
  const RepSequence seq(std::move(slots));
  std::vector<GroupWord> q;
  for (std::int64_t k = -5; k <= 5; ++k) q.push_back({k});
  const auto d = invariance_defect_tensor(seq, q);
  for (const auto& e : d.entries) EXPECT_LE(e.defect * e.defect, e.bound + 1e-15);
  EXPECT_NEAR(d.entries[6].bound, 2.0 * total, 1e-14);  // g = 1
  EXPECT_LT(d.entries[6].defect * d.entries[6].defect, 2.0 * total);
}

TEST(TensorDefect, RandomSequencesRespectBound) {
  std::mt19937_64 rng(62);
  for (int i = 0; i < 50; ++i) {
    std::vector<Slot> slots;
    for (std::size_t n = 0; n < 1 + rng() % 6; ++n) {
      const auto d = static_cast<Eigen::Index>(1 + rng() % 3);
      slots.push_back({UnitaryRep::cyclic(haar_unitary(d, rng)), oracle::random_vector(d, rng).normalized()});
    }
    const RepSequence seq(std::move(slots));
    std::vector<GroupWord> q;
    for (std::int64_t k = -3; k <= 3; ++k) q.push_back({k});
    EXPECT_NO_THROW(invariance_defect_tensor(seq, q));
  }
}

TEST(WeakMixing, RootsOfUnityGiveOneOverN) {
  const auto seq = roots_of_unity_family(16);
  const auto d = prop_4_3_diagnostic(seq);
  for (std::size_t n = 1; n <= 16; ++n) EXPECT_NEAR(d.values[n - 1], 1.0 / static_cast<double>(n), 1e-12);
  EXPECT_EQ(d.argmin, 16u);
  EXPECT_FALSE(d.criterion_met);
  EXPECT_TRUE(prop_4_3_diagnostic(seq, 0.07).criterion_met);
}

TEST(WeakMixing, TrivialAndAlternating) {
  const RepSequence trivial({Slot{UnitaryRep::trivial(3), Vector::Ones(3) / std::sqrt(3.0)}});
  EXPECT_NEAR(prop_4_3_diagnostic(trivial).values[0], 1.0, 1e-15);

  const auto family = roots_of_unity_family(12);
  std::vector<Slot> alternating;
  for (std::size_t n = 0; n < 12; ++n) {
    alternating.push_back(n % 2 == 0 ? family.slot(n) : Slot{UnitaryRep::trivial(2), Vector::Unit(2, 0)});
  }
  const auto d = prop_4_3_diagnostic(RepSequence(alternating));
  EXPECT_NEAR(d.minimum, 1.0 / 11.0, 1e-12);
  for (double v : d.values) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0 + 1e-12);
  }
}

TEST(Files, SequenceJson) {
  const auto j = nlohmann::json::parse(R"({"slots": [
      {"phases": [[0.0, 3.141592653589793], [0.0, 0.0]], "anchor": [1, 1]},
      {"phases": [[0.0, 1.0], [0.5, 0.5]], "anchor": [[1, 0], [0, 1]]}]})");
  const auto seq = rep_sequence_from_json(j);
  EXPECT_EQ(seq.length(), 2u);
  EXPECT_EQ(seq.generator_count(), 2u);
  EXPECT_NEAR(std::abs(seq.slot(1).anchor[1] - cplx(0.0, 1.0 / std::sqrt(2.0))), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(elementary_coefficient(seq, {1, 0}, {}, {})), 0.0, 1e-15);  // (1 + e^{i pi}) / 2 = 0
}

TEST(Files, SequenceJsonErrors) {
  EXPECT_EQ(error_code_of([] { rep_sequence_from_json(nlohmann::json::parse(R"({"slot": []})")); }), ErrorCode::schema);
  EXPECT_EQ(error_code_of([] {
              rep_sequence_from_json(nlohmann::json::parse(R"({"slots": [{"phases": [0, 1], "anchor": [1]}]})"));
            }),
            ErrorCode::schema);
  EXPECT_EQ(error_code_of([] {
              rep_sequence_from_json(nlohmann::json::parse(R"({"slots": [{"phases": [0], "anchor": ["x"]}]})"));
            }),
            ErrorCode::schema);
  EXPECT_EQ(error_code_of([] {
              rep_sequence_from_json(nlohmann::json::parse(R"({"slots": [{"phases": [0], "anchor": [1]},
                  {"phases": [[0], [1]], "anchor": [1]}]})"));
            }),
            ErrorCode::invalid_argument);
}
