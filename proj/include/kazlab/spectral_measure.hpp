#pragma once

// Finite measures on the circle T and on R^d, together with their
// Fourier-Stieltjes transforms
//
//   circle:     sigma^(n) = \int e^{2 i pi n theta} d sigma(theta)
//   euclidean:  sigma^(t) = \int e^{i t.x} d sigma(x)
//
// A circle measure is a sum of three parts: atoms, a density sampled on a
// uniform periodic grid of G = 2^b points (trapezoid quadrature, weight 1/G),
// and a symbolic convolution of two-point factors (1-a) delta_0 + a delta_p
// scaled by a complex mass. All parts are immutable after construction.

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kazlab/circle_point.hpp"
#include "kazlab/errors.hpp"

namespace kazlab {

using cplx = std::complex<double>;

inline constexpr std::size_t default_grid_size = std::size_t{1} << 16;

enum class MeasureDomain { circle, euclidean };

struct CircleAtom {
  CirclePoint position;
  cplx mass;
};

// (1 - weight) delta_0 + weight delta_position.
struct TwoPointFactor {
  CirclePoint position;
  double weight = 0.0;

  cplx coefficient(u128 n_residue) const {
    return (1.0 - weight) + weight * position.times(n_residue).unit();
  }
};

struct EuclideanAtom {
  std::vector<double> position;
  cplx mass;
};

// Quadrature nodes carrying the weights of a density on R^d.
struct EuclideanDensity {
  std::vector<std::vector<double>> nodes;
  std::vector<cplx> weights;
  bool compact_support = true;
  bool decays = false;
};

struct FourierCoefficient {
  std::int64_t index = 0;
  cplx value;
  // The grid density part was evaluated past the Nyquist index G/2; the
  // value is the coefficient of the sampled (discrete) measure.
  bool beyond_nyquist = false;
};

namespace detail {

inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// out[r] = sum_m in[m] e^{sign * 2 i pi r m / n}
inline std::vector<cplx> dft(std::vector<cplx> in, int sign) {
  const auto n = static_cast<int>(in.size());
  std::vector<cplx> out(in.size());
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(in.data()),
                            reinterpret_cast<fftw_complex*>(out.data()),
                            sign > 0 ? FFTW_BACKWARD : FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline unsigned log2_exact(std::size_t n) {
  unsigned b = 0;
  while ((std::size_t{1} << b) < n) ++b;
  return b;
}

inline std::int64_t residue_to_signed_index(u128 r) {
  return static_cast<std::int64_t>(static_cast<i128>(r));
}

}  // namespace detail

class SpectralMeasure {
 public:
  SpectralMeasure() = default;

  // ---- circle constructions -------------------------------------------

  static SpectralMeasure circle(std::vector<CircleAtom> atoms,
                                std::vector<cplx> density = {},
                                std::vector<TwoPointFactor> factors = {},
                                cplx singular_mass = 1.0) {
    SpectralMeasure m;
    m.domain_ = MeasureDomain::circle;
    m.circle_atoms_ = merge_atoms(std::move(atoms));
    if (!density.empty()) {
      require(detail::is_power_of_two(density.size()) && density.size() >= 4, ErrorCode::resolution,
              "density grid size must be a power of two >= 4");
      m.density_ = std::move(density);
      auto transform = detail::dft(m.density_, +1);
      const double g = static_cast<double>(m.density_.size());
      for (auto& v : transform) v /= g;
      m.density_transform_ = std::make_shared<const std::vector<cplx>>(std::move(transform));
    }
    for (const auto& f : factors) {
      require(std::isfinite(f.weight), ErrorCode::invalid_argument, "factor weight must be finite");
    }
    m.factors_ = std::move(factors);
    m.singular_mass_ = m.factors_.empty() ? cplx{0.0} : singular_mass;
    return m;
  }

  static SpectralMeasure dirac(CirclePoint at, cplx mass = 1.0) {
    return circle({CircleAtom{at, mass}});
  }

  // Normalized Haar measure scaled by mass, sampled on a grid.
  static SpectralMeasure lebesgue(std::size_t grid = default_grid_size, cplx mass = 1.0) {
    return circle({}, std::vector<cplx>(grid, mass));
  }

  // Density f (with respect to normalized Haar measure) sampled at m/G.
  static SpectralMeasure from_density(const std::function<cplx(double)>& f,
                                      std::size_t grid = default_grid_size) {
    std::vector<cplx> samples(grid);
    for (std::size_t m = 0; m < grid; ++m) {
      samples[m] = f(static_cast<double>(m) / static_cast<double>(grid));
    }
    return circle({}, std::move(samples));
  }

  // ---- euclidean constructions ----------------------------------------

  static SpectralMeasure euclidean(std::size_t dimension, std::vector<EuclideanAtom> atoms,
                                   EuclideanDensity density = {}) {
    require(dimension >= 1, ErrorCode::invalid_argument, "euclidean measure needs dimension >= 1");
    for (const auto& a : atoms) {
      require(a.position.size() == dimension, ErrorCode::invalid_argument, "atom dimension mismatch");
    }
    require(density.nodes.size() == density.weights.size(), ErrorCode::invalid_argument,
            "density nodes and weights differ in length");
    for (const auto& node : density.nodes) {
      require(node.size() == dimension, ErrorCode::invalid_argument, "density node dimension mismatch");
    }
    SpectralMeasure m;
    m.domain_ = MeasureDomain::euclidean;
    m.dimension_ = dimension;
    std::sort(atoms.begin(), atoms.end(),
              [](const EuclideanAtom& a, const EuclideanAtom& b) { return a.position < b.position; });
    for (auto& a : atoms) {
      if (!m.euclidean_atoms_.empty() && m.euclidean_atoms_.back().position == a.position) {
        m.euclidean_atoms_.back().mass += a.mass;
      } else {
        m.euclidean_atoms_.push_back(std::move(a));
      }
    }
    m.euclidean_density_ = std::move(density);
    return m;
  }

  static SpectralMeasure dirac_real(std::vector<double> at, cplx mass = 1.0) {
    const auto d = at.size();
    return euclidean(d, {EuclideanAtom{std::move(at), mass}});
  }

  // ---- accessors --------------------------------------------------------

  MeasureDomain domain() const { return domain_; }
  std::size_t dimension() const { return dimension_; }
  const std::vector<CircleAtom>& atoms() const { return circle_atoms_; }
  const std::vector<cplx>& density() const { return density_; }
  std::size_t grid_size() const { return density_.size(); }
  const std::vector<TwoPointFactor>& factors() const { return factors_; }
  cplx singular_mass() const { return singular_mass_; }
  const std::vector<EuclideanAtom>& euclidean_atoms() const { return euclidean_atoms_; }
  const EuclideanDensity& euclidean_density() const { return euclidean_density_; }

  // Trapezoid coefficient of the density part at index n mod G.
  cplx density_coefficient(u128 n_residue) const {
    if (density_.empty()) return 0.0;
    const auto g = static_cast<u128>(density_.size());
    return (*density_transform_)[static_cast<std::size_t>(n_residue & (g - 1))];
  }

  cplx total_mass() const {
    cplx total = 0.0;
    if (domain_ == MeasureDomain::circle) {
      for (const auto& a : circle_atoms_) total += a.mass;
      total += density_coefficient(0);
      total += singular_mass_;  // each two-point factor has mass 1
    } else {
      for (const auto& a : euclidean_atoms_) total += a.mass;
      for (const auto& w : euclidean_density_.weights) total += w;
    }
    return total;
  }

  // Positive real masses, weights in [0, 1], total mass 1.
  bool is_probability(double tol = 1e-9) const {
    auto nonneg = [tol](cplx c) { return std::abs(c.imag()) <= tol && c.real() >= -tol; };
    if (domain_ == MeasureDomain::circle) {
      for (const auto& a : circle_atoms_) if (!nonneg(a.mass)) return false;
      for (const auto& v : density_) if (!nonneg(v)) return false;
      for (const auto& f : factors_) if (f.weight < -tol || f.weight > 1.0 + tol) return false;
      if (!nonneg(singular_mass_)) return false;
    } else {
      for (const auto& a : euclidean_atoms_) if (!nonneg(a.mass)) return false;
      for (const auto& w : euclidean_density_.weights) if (!nonneg(w)) return false;
    }
    return std::abs(total_mass() - 1.0) <= tol;
  }

  // Mixture: a + b. Symbolic singular parts cannot be added to one another.
  friend SpectralMeasure operator+(const SpectralMeasure& a, const SpectralMeasure& b) {
    require(a.domain_ == b.domain_, ErrorCode::domain_mismatch, "cannot add measures on different domains");
    if (a.domain_ == MeasureDomain::euclidean) {
      require(a.dimension_ == b.dimension_, ErrorCode::domain_mismatch, "dimension mismatch");
      auto atoms = a.euclidean_atoms_;
      atoms.insert(atoms.end(), b.euclidean_atoms_.begin(), b.euclidean_atoms_.end());
      auto density = a.euclidean_density_;
      density.nodes.insert(density.nodes.end(), b.euclidean_density_.nodes.begin(),
                           b.euclidean_density_.nodes.end());
      density.weights.insert(density.weights.end(), b.euclidean_density_.weights.begin(),
                             b.euclidean_density_.weights.end());
      density.compact_support = a.euclidean_density_.compact_support && b.euclidean_density_.compact_support;
      density.decays = a.euclidean_density_.decays || b.euclidean_density_.decays;
      return euclidean(a.dimension_, std::move(atoms), std::move(density));
    }
    require(a.factors_.empty() || b.factors_.empty(), ErrorCode::invalid_argument,
            "sum of two symbolic singular parts is not representable");
    auto atoms = a.circle_atoms_;
    atoms.insert(atoms.end(), b.circle_atoms_.begin(), b.circle_atoms_.end());
    std::vector<cplx> density;
    if (a.density_.empty()) {
      density = b.density_;
    } else if (b.density_.empty()) {
      density = a.density_;
    } else {
      require(a.density_.size() == b.density_.size(), ErrorCode::resolution,
              "cannot add densities sampled on different grids");
      density = a.density_;
      for (std::size_t i = 0; i < density.size(); ++i) density[i] += b.density_[i];
    }
    const auto& sing = a.factors_.empty() ? b : a;
    return circle(std::move(atoms), std::move(density), sing.factors_, sing.singular_mass_);
  }

  friend SpectralMeasure operator*(cplx scale, const SpectralMeasure& m) {
    if (m.domain_ == MeasureDomain::euclidean) {
      auto atoms = m.euclidean_atoms_;
      for (auto& a : atoms) a.mass *= scale;
      auto density = m.euclidean_density_;
      for (auto& w : density.weights) w *= scale;
      return euclidean(m.dimension_, std::move(atoms), std::move(density));
    }
    auto atoms = m.circle_atoms_;
    for (auto& a : atoms) a.mass *= scale;
    auto density = m.density_;
    for (auto& v : density) v *= scale;
    return circle(std::move(atoms), std::move(density), m.factors_, m.singular_mass_ * scale);
  }

 private:
  static std::vector<CircleAtom> merge_atoms(std::vector<CircleAtom> atoms) {
    std::sort(atoms.begin(), atoms.end(),
              [](const CircleAtom& a, const CircleAtom& b) { return a.position < b.position; });
    std::vector<CircleAtom> merged;
    for (const auto& a : atoms) {
      if (!merged.empty() && merged.back().position == a.position) {
        merged.back().mass += a.mass;
      } else {
        merged.push_back(a);
      }
    }
    return merged;
  }

  MeasureDomain domain_ = MeasureDomain::circle;
  std::size_t dimension_ = 0;
  std::vector<CircleAtom> circle_atoms_;
  std::vector<cplx> density_;
  std::shared_ptr<const std::vector<cplx>> density_transform_;
  std::vector<TwoPointFactor> factors_;
  cplx singular_mass_ = 0.0;
  std::vector<EuclideanAtom> euclidean_atoms_;
  EuclideanDensity euclidean_density_;
};

inline std::string describe(const SpectralMeasure& m) {
  if (m.domain() == MeasureDomain::euclidean) {
    return "R^" + std::to_string(m.dimension()) + ": " + std::to_string(m.euclidean_atoms().size()) + " atoms, " +
           std::to_string(m.euclidean_density().nodes.size()) + " density nodes";
  }
  return "T: " + std::to_string(m.atoms().size()) + " atoms, density grid " + std::to_string(m.grid_size()) + ", " +
         std::to_string(m.factors().size()) + " two-point factors";
}

// ---- transforms -------------------------------------------------------------

// sigma^(n) for n given modulo 2^128. `beyond_nyquist` is set by the caller.
inline cplx fourier_coefficient_residue(const SpectralMeasure& m, u128 n_residue) {
  require(m.domain() == MeasureDomain::circle, ErrorCode::domain_mismatch,
          "integer Fourier coefficients need a measure on the circle");
  cplx value = 0.0;
  for (const auto& a : m.atoms()) value += a.mass * a.position.times(n_residue).unit();
  value += m.density_coefficient(n_residue);
  if (!m.factors().empty()) {
    cplx product = m.singular_mass();
    for (const auto& f : m.factors()) product *= f.coefficient(n_residue);
    value += product;
  }
  return value;
}

inline FourierCoefficient fourier_coefficient(const SpectralMeasure& m, std::int64_t n) {
  FourierCoefficient c;
  c.index = n;
  c.value = fourier_coefficient_residue(m, static_cast<u128>(static_cast<i128>(n)));
  if (!m.density().empty()) {
    const auto half = static_cast<std::int64_t>(m.grid_size() / 2);
    c.beyond_nyquist = n > half || n < -half;
  }
  return c;
}

inline cplx fourier_coefficient(const SpectralMeasure& m, const BigInt& n) {
  return fourier_coefficient_residue(m, detail::big_to_u128(n));
}

// Coefficients for every n in [first, last].
inline std::vector<cplx> fourier_coefficients(const SpectralMeasure& m, std::int64_t first,
                                              std::int64_t last) {
  require(first <= last, ErrorCode::invalid_argument, "empty coefficient range");
  std::vector<cplx> out;
  out.reserve(static_cast<std::size_t>(last - first + 1));
  for (std::int64_t n = first; n <= last; ++n) {
    out.push_back(fourier_coefficient_residue(m, static_cast<u128>(static_cast<i128>(n))));
  }
  return out;
}

// \int e^{i t.x} d sigma(x).
inline cplx fourier_transform_real(const SpectralMeasure& m, std::span<const double> t) {
  require(m.domain() == MeasureDomain::euclidean, ErrorCode::domain_mismatch,
          "real Fourier transform needs a measure on R^d");
  require(t.size() == m.dimension(), ErrorCode::invalid_argument, "frequency dimension mismatch");
  const auto& dens = m.euclidean_density();
  if (!dens.weights.empty() && !dens.compact_support && !dens.decays) {
    fail(ErrorCode::support, "density with unbounded support must be flagged as decaying");
  }
  auto phase = [&t](const std::vector<double>& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) s += t[i] * x[i];
    return std::polar(1.0, s);
  };
  cplx value = 0.0;
  for (const auto& a : m.euclidean_atoms()) value += a.mass * phase(a.position);
  for (std::size_t i = 0; i < dens.nodes.size(); ++i) value += dens.weights[i] * phase(dens.nodes[i]);
  return value;
}

inline cplx fourier_transform_real(const SpectralMeasure& m, double t) {
  return fourier_transform_real(m, std::span<const double>(&t, 1));
}

// ---- structural operations ----------------------------------------------

inline constexpr std::size_t default_expansion_cap = 20;

// Replaces the symbolic singular part by its 2^J atoms.
inline SpectralMeasure expand_atoms(const SpectralMeasure& m, std::size_t max_factors = default_expansion_cap) {
  require(m.domain() == MeasureDomain::circle, ErrorCode::domain_mismatch, "expansion needs a circle measure");
  if (m.factors().empty()) return m;
  require(m.factors().size() <= max_factors, ErrorCode::resolution,
          "atom expansion of " + std::to_string(m.factors().size()) + " factors exceeds cap " +
              std::to_string(max_factors));
  std::vector<CircleAtom> expanded{{CirclePoint{}, m.singular_mass()}};
  for (const auto& f : m.factors()) {
    std::vector<CircleAtom> next;
    next.reserve(expanded.size() * 2);
    for (const auto& a : expanded) {
      next.push_back({a.position, a.mass * (1.0 - f.weight)});
      next.push_back({a.position + f.position, a.mass * f.weight});
    }
    expanded = std::move(next);
  }
  auto atoms = m.atoms();
  atoms.insert(atoms.end(), expanded.begin(), expanded.end());
  return SpectralMeasure::circle(std::move(atoms), m.density());
}

// a * b on the circle. Symbolic parts stay symbolic when both operands are
// purely symbolic; otherwise they are expanded to atoms first.
inline SpectralMeasure convolve(const SpectralMeasure& a, const SpectralMeasure& b) {
  require(a.domain() == MeasureDomain::circle && b.domain() == MeasureDomain::circle,
          ErrorCode::domain_mismatch, "convolution is implemented on the circle only");
  const bool a_symbolic = a.atoms().empty() && a.density().empty() && !a.factors().empty();
  const bool b_symbolic = b.atoms().empty() && b.density().empty() && !b.factors().empty();
  if (a_symbolic && b_symbolic) {
    auto factors = a.factors();
    factors.insert(factors.end(), b.factors().begin(), b.factors().end());
    return SpectralMeasure::circle({}, {}, std::move(factors), a.singular_mass() * b.singular_mass());
  }
  const auto ea = expand_atoms(a);
  const auto eb = expand_atoms(b);

  std::vector<CircleAtom> atoms;
  atoms.reserve(ea.atoms().size() * eb.atoms().size());
  for (const auto& x : ea.atoms()) {
    for (const auto& y : eb.atoms()) atoms.push_back({x.position + y.position, x.mass * y.mass});
  }

  std::size_t grid = 0;
  if (!ea.density().empty() && !eb.density().empty()) {
    require(ea.grid_size() == eb.grid_size(), ErrorCode::resolution,
            "density convolution needs equal grid sizes");
  }
  if (!ea.density().empty()) grid = ea.grid_size();
  if (!eb.density().empty()) grid = eb.grid_size();

  std::vector<cplx> density;
  if (grid != 0) {
    const unsigned shift = 128 - detail::log2_exact(grid);
    const u128 off_grid_mask = (static_cast<u128>(1) << shift) - 1;
    std::vector<cplx> transform(grid, 0.0);
    // atom x density: the density is translated, so atoms must sit on the grid
    auto add_shifted = [&](const SpectralMeasure& atoms_of, const SpectralMeasure& density_of) {
      if (density_of.density().empty()) return;
      for (const auto& atom : atoms_of.atoms()) {
        require((atom.position.word() & off_grid_mask) == 0, ErrorCode::resolution,
                "atom off the density grid; convolution not representable at this resolution");
        for (std::size_t r = 0; r < grid; ++r) {
          transform[r] += atom.mass * atom.position.times(static_cast<u128>(r)).unit() *
                          density_of.density_coefficient(r);
        }
      }
    };
    add_shifted(ea, eb);
    add_shifted(eb, ea);
    if (!ea.density().empty() && !eb.density().empty()) {
      for (std::size_t r = 0; r < grid; ++r) {
        transform[r] += ea.density_coefficient(r) * eb.density_coefficient(r);
      }
    }
    density = detail::dft(std::move(transform), -1);
  }
  return SpectralMeasure::circle(std::move(atoms), std::move(density));
}

// \int F d sigma over the atoms, the grid density and (expanded) singular part.
inline cplx integrate(const SpectralMeasure& m, const std::function<double(CirclePoint)>& f,
                      std::size_t max_factors = default_expansion_cap) {
  require(m.domain() == MeasureDomain::circle, ErrorCode::domain_mismatch, "integration needs a circle measure");
  const auto e = expand_atoms(m, max_factors);
  cplx total = 0.0;
  for (const auto& a : e.atoms()) total += a.mass * f(a.position);
  if (!e.density().empty()) {
    const auto g = e.grid_size();
    const unsigned shift = 128 - detail::log2_exact(g);
    cplx acc = 0.0;
    for (std::size_t i = 0; i < g; ++i) {
      acc += e.density()[i] * f(CirclePoint::from_word(static_cast<u128>(i) << shift));
    }
    total += acc / static_cast<double>(g);
  }
  return total;
}

// ---- constructions ----------------------------------------------------------

struct BernoulliWitness {
  SpectralMeasure measure;
  std::vector<double> weights;
  // tail_bounds[k] = 2 pi a_{k+1} dominates |sigma^(2^k) - 1| for k < J.
  std::vector<double> tail_bounds;
};

// Weights a_j = min(eps/(4 pi), eps/(4 pi j)), j = 1..depth. Decreasing with a
// divergent (harmonic) sum and a_1 < eps/(2 pi).
inline std::vector<double> bernoulli_schedule(double epsilon, std::size_t depth) {
  require(epsilon > 0.0, ErrorCode::invalid_argument, "epsilon must be positive");
  std::vector<double> a(depth);
  const double base = epsilon / (4.0 * std::numbers::pi);
  for (std::size_t j = 1; j <= depth; ++j) a[j - 1] = std::min(base, base / static_cast<double>(j));
  return a;
}

// J-fold truncation of *_{j>=1} ((1 - a_j) delta_0 + a_j delta_{2^-j}).
inline BernoulliWitness bernoulli_witness(std::span<const double> weights, std::size_t depth) {
  require(depth >= 1 && depth <= 128, ErrorCode::invalid_argument, "truncation depth must lie in [1,128]");
  require(weights.size() >= depth, ErrorCode::invalid_argument, "fewer weights than the truncation depth");
  for (std::size_t j = 0; j < depth; ++j) {
    require(weights[j] > 0.0 && weights[j] < 1.0, ErrorCode::invalid_argument, "weights must lie in (0,1)");
    if (j > 0 && weights[j] > weights[j - 1]) {
      fail(ErrorCode::invalid_argument, "weights must be nonincreasing (a_" + std::to_string(j + 1) +
                                            " > a_" + std::to_string(j) + ")");
    }
  }
  std::vector<TwoPointFactor> factors;
  BernoulliWitness w;
  for (std::size_t j = 1; j <= depth; ++j) {
    factors.push_back({CirclePoint::dyadic(static_cast<unsigned>(j)), weights[j - 1]});
    w.weights.push_back(weights[j - 1]);
    w.tail_bounds.push_back(2.0 * std::numbers::pi * weights[j - 1]);
  }
  w.measure = SpectralMeasure::circle({}, {}, std::move(factors), 1.0);
  return w;
}

// Density prod_k (1 + alpha_k cos(2 pi m_k theta)) on a grid.
inline SpectralMeasure riesz_product(std::span<const std::int64_t> frequencies,
                                     std::span<const double> coefficients,
                                     std::size_t grid = default_grid_size) {
  require(frequencies.size() == coefficients.size(), ErrorCode::invalid_argument,
          "one coefficient per frequency");
  require(detail::is_power_of_two(grid), ErrorCode::resolution, "grid size must be a power of two");
  std::int64_t degree = 0;
  for (std::size_t k = 0; k < frequencies.size(); ++k) {
    require(frequencies[k] >= 1, ErrorCode::invalid_argument, "frequencies must be positive");
    require(std::abs(coefficients[k]) <= 1.0, ErrorCode::invalid_argument, "|alpha_k| must be <= 1");
    if (k > 0) {
      require(frequencies[k] > 2 * frequencies[k - 1], ErrorCode::invalid_argument,
              "frequencies must be lacunary: m_{k+1} > 2 m_k");
    }
    degree += frequencies[k];
  }
  // Exact coefficients for |n| <= degree need G > 2 * degree.
  require(static_cast<std::int64_t>(grid) > 2 * degree, ErrorCode::resolution,
          "grid of " + std::to_string(grid) + " points cannot resolve a Riesz product of degree " +
              std::to_string(degree));
  const unsigned shift = 128 - detail::log2_exact(grid);
  std::vector<cplx> samples(grid);
  for (std::size_t i = 0; i < grid; ++i) {
    const auto theta = CirclePoint::from_word(static_cast<u128>(i) << shift);
    double value = 1.0;
    for (std::size_t k = 0; k < frequencies.size(); ++k) {
      value *= 1.0 + coefficients[k] * theta.times(frequencies[k]).unit().real();
    }
    samples[i] = value;
  }
  return SpectralMeasure::circle({}, std::move(samples));
}

// Uniform probability on the closed ball B(0, radius) in R^d, discretized by
// midpoints of a cubic grid with `per_axis` cells per axis.
inline EuclideanDensity uniform_ball_density(std::size_t dimension, double radius, std::size_t per_axis) {
  require(radius > 0.0 && per_axis >= 1 && dimension >= 1, ErrorCode::invalid_argument,
          "bad ball parameters");
  EuclideanDensity d;
  std::vector<std::size_t> idx(dimension, 0);
  const double h = 2.0 * radius / static_cast<double>(per_axis);
  while (true) {
    std::vector<double> x(dimension);
    double r2 = 0.0;
    for (std::size_t i = 0; i < dimension; ++i) {
      x[i] = -radius + (static_cast<double>(idx[i]) + 0.5) * h;
      r2 += x[i] * x[i];
    }
    if (r2 <= radius * radius) d.nodes.push_back(std::move(x));
    std::size_t i = 0;
    while (i < dimension && ++idx[i] == per_axis) idx[i++] = 0;
    if (i == dimension) break;
  }
  const double w = 1.0 / static_cast<double>(d.nodes.size());
  d.weights.assign(d.nodes.size(), w);
  return d;
}

// delta_0 on the first `zeros` coordinates times m on the remaining ones.
inline SpectralMeasure dirac_zero_times(std::size_t zeros, const SpectralMeasure& m) {
  require(m.domain() == MeasureDomain::euclidean, ErrorCode::domain_mismatch, "needs a euclidean measure");
  auto lift = [zeros](const std::vector<double>& x) {
    std::vector<double> y(zeros, 0.0);
    y.insert(y.end(), x.begin(), x.end());
    return y;
  };
  std::vector<EuclideanAtom> atoms;
  for (const auto& a : m.euclidean_atoms()) atoms.push_back({lift(a.position), a.mass});
  EuclideanDensity d = m.euclidean_density();
  for (auto& node : d.nodes) node = lift(node);
  return SpectralMeasure::euclidean(zeros + m.dimension(), std::move(atoms), std::move(d));
}

// Gaussian N(0, s^2) on R, truncated to [-width, width] with `points` nodes.
inline SpectralMeasure gaussian_measure(double s, double width, std::size_t points) {
  require(s > 0.0 && width > 0.0 && points >= 2, ErrorCode::invalid_argument, "bad gaussian parameters");
  EuclideanDensity d;
  d.compact_support = false;
  d.decays = true;
  const double h = 2.0 * width / static_cast<double>(points - 1);
  double total = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double x = -width + static_cast<double>(i) * h;
    const double w = std::exp(-0.5 * x * x / (s * s));
    d.nodes.push_back({x});
    d.weights.emplace_back(w);
    total += w;
  }
  for (auto& w : d.weights) w /= total;
  return SpectralMeasure::euclidean(1, {}, std::move(d));
}

}  // namespace kazlab
