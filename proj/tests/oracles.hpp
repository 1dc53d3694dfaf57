#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the transform code it is used to check.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "kazlab/kazlab.hpp"

namespace oracle {

using kazlab::cplx;
using kazlab::Matrix;
using kazlab::Vector;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Code of the kazlab::Error thrown by f, or nullopt when f returns normally.
template <class F>
std::optional<kazlab::ErrorCode> error_code_of(F&& f) {
  try {
    f();
  } catch (const kazlab::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

struct PlacedAtom {
  double position;  // turns
  double mass;
};

// A probability measure made of up to three atoms and a smooth density
//   rest * (1 + c1 cos 2pi(theta + f1) + c2 cos 4pi(theta + f2)),
// together with its atoms for the closed-form checks.
struct TestMeasure {
  kazlab::SpectralMeasure measure;
  std::vector<PlacedAtom> atoms;
  double rest = 0.0;
  double c1 = 0.0, c2 = 0.0, f1 = 0.0, f2 = 0.0;

  double atom_mass_at_zero() const {
    double m = 0.0;
    for (const auto& a : atoms) m += a.position == 0.0 ? a.mass : 0.0;
    return m;
  }

  double sum_of_squared_atoms() const {
    double s = 0.0;
    for (const auto& a : atoms) s += a.mass * a.mass;
    return s;
  }

  // sigma^(n) from the closed form: atoms plus the two cosine harmonics.
  cplx coefficient(std::int64_t n) const {
    cplx v = 0.0;
    for (const auto& a : atoms) {
      const double frac = std::fmod(static_cast<double>(n) * a.position, 1.0);
      v += a.mass * std::polar(1.0, two_pi * frac);
    }
    if (n == 0) v += rest;
    if (n == 1 || n == -1) v += rest * c1 / 2.0 * std::polar(1.0, -two_pi * static_cast<double>(n) * f1);
    if (n == 2 || n == -2) v += rest * c2 / 2.0 * std::polar(1.0, -two_pi * static_cast<double>(n) * f2);
    return v;
  }
};

// Atom positions are multiples of 1/1024 so that n * position mod 1 is exact
// in double precision; `zero_atom` forces one atom at the trivial character.
inline TestMeasure random_test_measure(std::mt19937_64& rng, std::size_t grid = std::size_t{1} << 15,
                                       bool zero_atom = false) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> atom_count(zero_atom ? 1 : 0, 3);
  std::uniform_int_distribution<int> slot(0, 1023);
  TestMeasure t;
  const int count = atom_count(rng);
  double total = count == 0 ? 0.0 : 0.2 + 0.75 * unit(rng);
  std::vector<double> raw(static_cast<std::size_t>(count));
  double raw_sum = 0.0;
  for (auto& r : raw) raw_sum += (r = 0.2 + unit(rng));
  std::vector<int> used;
  for (int i = 0; i < count; ++i) {
    int s = 0;
    bool ok = false;
    while (!ok) {
      s = (zero_atom && i == 0) ? 0 : slot(rng);
      ok = true;
      for (int u : used) {
        int gap = std::abs(u - s);
        gap = std::min(gap, 1024 - gap);
        ok = ok && gap >= 51;  // separation >= 0.05 turn
      }
    }
    used.push_back(s);
    t.atoms.push_back({static_cast<double>(s) / 1024.0, total * raw[static_cast<std::size_t>(i)] / raw_sum});
  }
  t.rest = 1.0 - total;
  t.c1 = 0.6 * unit(rng);
  t.c2 = 0.3 * unit(rng);
  t.f1 = unit(rng);
  t.f2 = unit(rng);

  std::vector<kazlab::CircleAtom> atoms;
  for (const auto& a : t.atoms) {
    atoms.push_back({kazlab::CirclePoint::from_rational(static_cast<std::int64_t>(std::lround(a.position * 1024.0)), 1024),
                     a.mass});
  }
  std::vector<cplx> density;
  if (t.rest > 0.0) {
    density.resize(grid);
    for (std::size_t i = 0; i < grid; ++i) {
      const double th = static_cast<double>(i) / static_cast<double>(grid);
      density[i] = t.rest * (1.0 + t.c1 * std::cos(two_pi * (th + t.f1)) + t.c2 * std::cos(2.0 * two_pi * (th + t.f2)));
    }
  }
  t.measure = kazlab::SpectralMeasure::circle(std::move(atoms), std::move(density));
  return t;
}

// Direct O(G) trapezoid sum (1/G) sum_m f(m/G) e^{2 i pi n m / G}.
inline cplx brute_density_coefficient(const std::vector<cplx>& samples, std::int64_t n) {
  const auto g = static_cast<std::int64_t>(samples.size());
  cplx acc = 0.0;
  for (std::int64_t m = 0; m < g; ++m) {
    const std::int64_t r = ((n % g) * m) % g;
    acc += samples[static_cast<std::size_t>(m)] * std::polar(1.0, two_pi * static_cast<double>(r) / static_cast<double>(g));
  }
  return acc / static_cast<double>(g);
}

// Coefficients of prod_k (1 + alpha_k cos 2pi m_k theta) by enumerating the
// 3^K frequency sums sum_k e_k m_k, e_k in {-1, 0, 1}.
inline std::vector<cplx> riesz_coefficients(const std::vector<std::int64_t>& m, const std::vector<double>& alpha,
                                            std::int64_t range) {
  std::vector<cplx> out(static_cast<std::size_t>(2 * range + 1), 0.0);
  std::size_t combos = 1;
  for (std::size_t k = 0; k < m.size(); ++k) combos *= 3;
  for (std::size_t c = 0; c < combos; ++c) {
    std::size_t code = c;
    std::int64_t freq = 0;
    double weight = 1.0;
    for (std::size_t k = 0; k < m.size(); ++k) {
      const int e = static_cast<int>(code % 3) - 1;
      code /= 3;
      freq += e * m[k];
      if (e != 0) weight *= alpha[k] / 2.0;
    }
    if (freq >= -range && freq <= range) out[static_cast<std::size_t>(freq + range)] += weight;
  }
  return out;
}

// Kronecker product by explicit index arithmetic.
inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < k.rows(); ++i) {
    for (Eigen::Index j = 0; j < k.cols(); ++j) {
      k(i, j) = a(i / b.rows(), j / b.cols()) * b(i % b.rows(), j % b.cols());
    }
  }
  return k;
}

inline Vector kron(const Vector& a, const Vector& b) {
  Vector k(a.size() * b.size());
  for (Eigen::Index i = 0; i < k.size(); ++i) k[i] = a[i / b.size()] * b[i % b.size()];
  return k;
}

inline Vector random_vector(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Vector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v[i] = {normal(rng), normal(rng)};
  return v;
}

inline Matrix random_matrix(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Matrix m(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) m(i, j) = {normal(rng), normal(rng)};
  }
  return m;
}

// k distinct phases with pairwise circular gaps >= min_gap.
inline std::vector<double> separated_phases(std::size_t k, double min_gap, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, two_pi);
  std::vector<double> phases;
  while (phases.size() < k) {
    const double x = angle(rng);
    bool ok = true;
    for (double y : phases) {
      double gap = std::abs(x - y);
      gap = std::min(gap, two_pi - gap);
      ok = ok && gap >= min_gap;
    }
    if (ok) phases.push_back(x);
  }
  return phases;
}

// U = Q diag(e^{i phi}) Q^* with each phase repeated according to `mult`,
// plus the eigenprojectors of the distinct eigenvalues.
struct KnownUnitary {
  Matrix u;
  std::vector<Matrix> projectors;
};

inline KnownUnitary known_unitary(const std::vector<double>& phases, const std::vector<int>& mult, std::mt19937_64& rng) {
  Eigen::Index d = 0;
  for (int m : mult) d += m;
  const Matrix q = kazlab::haar_unitary(d, rng);
  Matrix diag = Matrix::Zero(d, d);
  KnownUnitary k;
  Eigen::Index pos = 0;
  for (std::size_t i = 0; i < phases.size(); ++i) {
    Matrix e = Matrix::Zero(d, d);
    for (int r = 0; r < mult[i]; ++r, ++pos) {
      diag(pos, pos) = std::polar(1.0, phases[i]);
      e(pos, pos) = 1.0;
    }
    k.projectors.push_back(q * e * q.adjoint());
  }
  k.u = q * diag * q.adjoint();
  return k;
}

// ---- 256-bit evaluation of n * theta mod 1 ---------------------------------

using kazlab::BigInt;

inline const BigInt& two_256() {
  static const BigInt v = BigInt(1) << 256;
  return v;
}

// floor(theta * 2^256) for the named irrational angles.
inline BigInt scaled_irrational(const std::string& name) {
  if (name == "sqrt2") return boost::multiprecision::sqrt(BigInt(2) << 512) % two_256();
  // golden: (sqrt5 - 1) / 2
  return ((boost::multiprecision::sqrt(BigInt(5) << 512) - (BigInt(1) << 256)) >> 1) % two_256();
}

// Circular distance in turns between a 128-bit word and a 256-bit fraction.
inline double circular_gap(kazlab::CirclePoint got, const BigInt& want256) {
  BigInt diff = (kazlab::detail::u128_to_big(got.word()) << 128) - want256;
  diff %= two_256();
  if (diff < 0) diff += two_256();
  if (diff > two_256() / 2) diff = two_256() - diff;
  return static_cast<double>(diff) / static_cast<double>(two_256());
}

// frac(n * p / q) scaled by 2^256.
inline BigInt rational_wrap(const BigInt& n, std::uint64_t p, std::uint64_t q) {
  BigInt r = (n * p) % q;
  if (r < 0) r += q;
  return (r << 256) / q;
}

inline BigInt irrational_wrap(const BigInt& n, const BigInt& scaled_theta) {
  BigInt r = (n * scaled_theta) % two_256();
  if (r < 0) r += two_256();
  return r;
}

}  // namespace oracle
