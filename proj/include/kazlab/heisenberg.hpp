#pragma once

// The Heisenberg groups H_n and the group Aff+(R) of maps s -> a s + b:
// group laws, matrix coefficients of the Schrodinger and affine
// representations by quadrature, decay scans, and the maps onto R^{2n} and R
// that carry Kazhdan sets down to abelian groups.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iomanip>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "kazlab/errors.hpp"
#include "kazlab/kazhdan.hpp"
#include "kazlab/parallel.hpp"
#include "kazlab/spectral_measure.hpp"

namespace kazlab {

inline constexpr std::size_t default_window_points = std::size_t{1} << 12;
inline constexpr double default_window_radius = 20.0;

// ---- groups -----------------------------------------------------------------------

struct HeisenbergElement {
  double t = 0.0;
  std::vector<double> q;
  std::vector<double> p;

  static HeisenbergElement identity(std::size_t n) { return {0.0, std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)}; }

  std::size_t rank() const { return q.size(); }

  HeisenbergElement inverse() const {
    HeisenbergElement h{-t, q, p};
    for (auto& x : h.q) x = -x;
    for (auto& x : h.p) x = -x;
    return h;
  }

  // (t1 + t2 + (p1.q2 - p2.q1)/2, q1 + q2, p1 + p2)
  friend HeisenbergElement operator*(const HeisenbergElement& a, const HeisenbergElement& b) {
    require(a.q.size() == b.q.size() && a.p.size() == a.q.size() && b.p.size() == b.q.size(),
            ErrorCode::domain_mismatch, "Heisenberg elements of different rank");
    HeisenbergElement c;
    double symplectic = 0.0;
    c.q.resize(a.q.size());
    c.p.resize(a.q.size());
    for (std::size_t i = 0; i < a.q.size(); ++i) {
      symplectic += a.p[i] * b.q[i] - b.p[i] * a.q[i];
      c.q[i] = a.q[i] + b.q[i];
      c.p[i] = a.p[i] + b.p[i];
    }
    c.t = a.t + b.t + 0.5 * symplectic;
    return c;
  }
};

struct AffineElement {
  double a = 1.0;
  double b = 0.0;

  AffineElement() = default;
  AffineElement(double a_, double b_) : a(a_), b(b_) {
    require(a > 0.0 && std::isfinite(a), ErrorCode::invalid_argument, "affine dilation must be positive");
  }

  AffineElement inverse() const { return {1.0 / a, -b / a}; }

  friend AffineElement operator*(const AffineElement& x, const AffineElement& y) {
    return {x.a * y.a, x.b + x.a * y.b};
  }
};

// ---- windows --------------------------------------------------------------------

struct RealGrid {
  double lo = -default_window_radius;
  double hi = default_window_radius;
  std::size_t points = default_window_points;

  double step() const { return (hi - lo) / static_cast<double>(points); }
  double node(std::size_t i) const { return lo + static_cast<double>(i) * step(); }
  bool operator==(const RealGrid&) const = default;
};

// A function on R with its sampling grid and the interval outside which it
// vanishes (numerically: below 1e-17 for the Gaussian).
class WindowFunction {
 public:
  using Evaluator = std::function<cplx(double)>;

  WindowFunction(RealGrid grid, Evaluator eval, double support_lo, double support_hi, bool compact, std::string name)
      : grid_(grid), eval_(std::move(eval)), support_lo_(support_lo), support_hi_(support_hi), compact_(compact),
        name_(std::move(name)) {
    require(grid_.hi > grid_.lo && grid_.points >= 8 && grid_.points % 2 == 0, ErrorCode::invalid_argument,
            "window grid needs hi > lo and an even number (>= 8) of points");
    require(support_lo_ <= support_hi_, ErrorCode::invalid_argument, "empty window support");
    check_support(support_lo_, support_hi_);
  }

  // L2-normalized pi^{-1/4} w^{-1/2} e^{-(x-c)^2 / (2 w^2)}.
  static WindowFunction gaussian(RealGrid grid = {}, double center = 0.0, double width = 1.0) {
    require(width > 0.0, ErrorCode::invalid_argument, "gaussian width must be positive");
    const double scale = std::pow(std::numbers::pi, -0.25) / std::sqrt(width);
    const double reach = 9.0 * width;
    return WindowFunction(
        grid, [=](double x) { const double z = (x - center) / width; return cplx(scale * std::exp(-0.5 * z * z)); },
        center - reach, center + reach, false, "gaussian");
  }

  // C exp(-1 / (1 - ((x-c)/r)^2)) on (c-r, c+r), C normalizing the grid L2 norm.
  static WindowFunction bump(RealGrid grid, double center, double radius) {
    require(radius > 0.0, ErrorCode::invalid_argument, "bump radius must be positive");
    auto raw = [=](double x) {
      const double z = (x - center) / radius;
      return std::abs(z) < 1.0 ? std::exp(-1.0 / (1.0 - z * z)) : 0.0;
    };
    double sq = 0.0;
    for (std::size_t i = 0; i < grid.points; ++i) sq += raw(grid.node(i)) * raw(grid.node(i));
    const double c = 1.0 / std::sqrt(sq * grid.step());
    return WindowFunction(grid, [=](double x) { return cplx(c * raw(x)); }, center - radius, center + radius, true,
                          "bump");
  }

  // Samples on a uniform grid x_i = x_0 + i h; cubic interpolation between nodes.
  static WindowFunction from_samples(const std::vector<double>& xs, const std::vector<cplx>& values) {
    require(xs.size() == values.size() && xs.size() >= 8, ErrorCode::invalid_argument,
            "window needs at least 8 samples with one value each");
    const double h = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
    require(h > 0.0, ErrorCode::invalid_argument, "window abscissae must increase");
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double expect = xs.front() + static_cast<double>(i) * h;
      require(std::abs(xs[i] - expect) <= 1e-9 * std::max(1.0, std::abs(expect)), ErrorCode::invalid_argument,
              "window abscissae must be uniformly spaced");
    }
    std::size_t first = xs.size();
    std::size_t last = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (values[i] != cplx(0.0)) {
        first = std::min(first, i);
        last = i;
      }
    }
    require(first < xs.size(), ErrorCode::invalid_argument, "window is identically zero");
    auto data = std::make_shared<const std::vector<cplx>>(values);
    const double x0 = xs.front();
    auto eval = [data, x0, h](double x) -> cplx {
      const double s = (x - x0) / h;
      const auto n = static_cast<std::int64_t>(data->size());
      if (s < 0.0 || s > static_cast<double>(n - 1)) return 0.0;
      const auto i = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor(s)) - 1, 0, n - 4);
      cplx value = 0.0;
      for (std::int64_t k = 0; k < 4; ++k) {
        double basis = 1.0;
        for (std::int64_t m = 0; m < 4; ++m) {
          if (m != k) basis *= (s - static_cast<double>(i + m)) / static_cast<double>(k - m);
        }
        value += basis * (*data)[static_cast<std::size_t>(i + k)];
      }
      return value;
    };
    const std::size_t points = xs.size() % 2 == 0 ? xs.size() : xs.size() + 1;
    RealGrid grid{x0, x0 + static_cast<double>(points) * h, points};
    const double lo = first == 0 ? x0 : xs[first - 1];
    const double hi = last + 1 == xs.size() ? xs.back() : xs[last + 1];
    return WindowFunction(grid, eval, lo, hi, true, "samples");
  }

  cplx operator()(double x) const { return eval_(x); }
  const RealGrid& grid() const { return grid_; }
  double support_lo() const { return support_lo_; }
  double support_hi() const { return support_hi_; }
  bool compact() const { return compact_; }
  const std::string& name() const { return name_; }

  std::vector<cplx> samples() const {
    std::vector<cplx> s(grid_.points);
    for (std::size_t i = 0; i < grid_.points; ++i) s[i] = eval_(grid_.node(i));
    return s;
  }

  double norm() const {
    double sq = 0.0;
    for (std::size_t i = 0; i < grid_.points; ++i) sq += std::norm(eval_(grid_.node(i)));
    return std::sqrt(sq * grid_.step());
  }

  // Throws unless [lo, hi] lies inside the sampling grid.
  void check_support(double lo, double hi) const {
    if (lo < grid_.lo || hi > grid_.hi) {
      std::ostringstream msg;
      msg << "support [" << lo << ", " << hi << "] leaves the grid [" << grid_.lo << ", " << grid_.hi
          << "]; use a larger grid radius";
      fail(ErrorCode::support, msg.str());
    }
  }

  WindowFunction transformed(Evaluator eval, double lo, double hi, std::string name) const {
    check_support(lo, hi);
    return WindowFunction(grid_, std::move(eval), lo, hi, compact_, std::move(name));
  }

 private:
  RealGrid grid_;
  Evaluator eval_;
  double support_lo_;
  double support_hi_;
  bool compact_;
  std::string name_;
};

struct QuadratureValue {
  cplx value;
  double error_estimate = 0.0;  // |Q_h - Q_{2h}|
};

namespace detail {

inline QuadratureValue grid_quadrature(const RealGrid& grid, const std::function<cplx(double)>& f) {
  cplx fine = 0.0;
  cplx coarse = 0.0;
  for (std::size_t i = 0; i < grid.points; ++i) {
    const cplx v = f(grid.node(i));
    fine += v;
    if (i % 2 == 0) coarse += v;
  }
  const double h = grid.step();
  return {fine * h, std::abs(fine * h - coarse * 2.0 * h)};
}

inline void check_rank_one(const HeisenbergElement& g) {
  require(g.q.size() == 1 && g.p.size() == 1, ErrorCode::invalid_argument,
          "quadrature coefficients are implemented for H_1 only");
}

}  // namespace detail

// ---- Schrodinger representations of H_1 -----------------------------------------

// pi_lambda(t,q,p) u (x) = e^{i s (mu t + sqrt(mu) q x + (mu/2) q p)} u(x + sqrt(mu) p),
// mu = |lambda|, s = sign(lambda).
inline WindowFunction apply_schrodinger(double lambda, const HeisenbergElement& g, const WindowFunction& u) {
  require(lambda != 0.0 && std::isfinite(lambda), ErrorCode::invalid_argument, "lambda must be nonzero");
  detail::check_rank_one(g);
  const double mu = std::abs(lambda);
  const double sign = lambda > 0.0 ? 1.0 : -1.0;
  const double root = std::sqrt(mu);
  const double t = g.t;
  const double q = g.q[0];
  const double shift = root * g.p[0];
  const double constant = mu * t + 0.5 * mu * q * g.p[0];
  auto eval = [=, f = u](double x) {
    return std::polar(1.0, sign * (constant + root * q * x)) * f(x + shift);
  };
  return u.transformed(eval, u.support_lo() - shift, u.support_hi() - shift, "schrodinger(" + u.name() + ")");
}

inline QuadratureValue schrodinger_coefficient(double lambda, const HeisenbergElement& g, const WindowFunction& u,
                                               const WindowFunction& v) {
  require(u.grid() == v.grid(), ErrorCode::invalid_argument, "windows must share a grid");
  const auto moved = apply_schrodinger(lambda, g, u);
  return detail::grid_quadrature(v.grid(), [&](double x) { return moved(x) * std::conj(v(x)); });
}

// <u, v> on the common grid.
inline QuadratureValue window_inner(const WindowFunction& u, const WindowFunction& v) {
  require(u.grid() == v.grid(), ErrorCode::invalid_argument, "windows must share a grid");
  return detail::grid_quadrature(v.grid(), [&](double x) { return u(x) * std::conj(v(x)); });
}

// ---- affine group ------------------------------------------------------------------

enum class HalfLine { positive, negative };

// pi(a,b) f (s) = sqrt(a) e^{2 i pi b s} f(a s).
inline WindowFunction apply_affine(HalfLine side, const AffineElement& g, const WindowFunction& f) {
  if (side == HalfLine::positive) {
    require(f.support_lo() > 0.0, ErrorCode::support, "window for pi_+ must be supported in (0, R]");
  } else {
    require(f.support_hi() < 0.0, ErrorCode::support, "window for pi_- must be supported in [-R, 0)");
  }
  const double a = g.a;
  const double b = g.b;
  const double root = std::sqrt(a);
  auto eval = [=, h = f](double s) {
    return root * std::polar(1.0, 2.0 * std::numbers::pi * b * s) * h(a * s);
  };
  return f.transformed(eval, f.support_lo() / a, f.support_hi() / a, "affine(" + f.name() + ")");
}

inline QuadratureValue affine_coefficient(HalfLine side, const AffineElement& g, const WindowFunction& f1,
                                          const WindowFunction& f2) {
  require(f1.grid() == f2.grid(), ErrorCode::invalid_argument, "windows must share a grid");
  const auto moved = apply_affine(side, g, f1);
  return detail::grid_quadrature(f2.grid(), [&](double s) { return moved(s) * std::conj(f2(s)); });
}

// ---- one-dimensional representations and projections -----------------------------

// e^{i (y.q + eta.p)}
inline cplx one_dim_heisenberg(const std::vector<double>& y, const std::vector<double>& eta, const HeisenbergElement& g) {
  require(y.size() == g.q.size() && eta.size() == g.p.size(), ErrorCode::domain_mismatch, "character rank mismatch");
  double phase = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) phase += y[i] * g.q[i] + eta[i] * g.p[i];
  return std::polar(1.0, phase);
}

// (t, q, p) -> (q, p)
inline std::vector<std::vector<double>> heisenberg_projection(const std::vector<HeisenbergElement>& q) {
  std::vector<std::vector<double>> out;
  out.reserve(q.size());
  for (const auto& g : q) {
    std::vector<double> x = g.q;
    x.insert(x.end(), g.p.begin(), g.p.end());
    out.push_back(std::move(x));
  }
  return out;
}

// (a, b) -> ln a
inline std::vector<double> affine_projection(const std::vector<AffineElement>& q) {
  std::vector<double> out;
  out.reserve(q.size());
  for (const auto& g : q) out.push_back(std::log(g.a));
  return out;
}

// ---- non-Kazhdan witness for subsets of H_n bounded in p ---------------------------

struct HeisenbergWitnessConfig {
  std::size_t ball_points_per_axis = 16;  // even, so that no node sits at the origin
  double delta_fraction = 0.25;           // delta = fraction * eps / sup|p|
  double reduction_fraction = 1.0 / 8.0;  // eps -> eps/8 when passing from H_n to R^{2n}
};

struct HeisenbergWitness {
  double delta = 0.0;
  double sup_p = 0.0;
  SpectralMeasure measure;  // delta_0 on q times the uniform ball B(0, delta) on p
  WitnessVerdict verdict;
};

inline HeisenbergWitness bounded_p_witness(const std::vector<HeisenbergElement>& q, double epsilon,
                                         const HeisenbergWitnessConfig& config = {}) {
  require(!q.empty(), ErrorCode::invalid_argument, "Q must be nonempty");
  require(epsilon > 0.0, ErrorCode::invalid_argument, "epsilon must be positive");
  require(config.ball_points_per_axis % 2 == 0, ErrorCode::invalid_argument, "ball grid needs an even point count");
  const std::size_t n = q.front().rank();
  HeisenbergWitness w;
  for (const auto& g : q) {
    require(g.rank() == n, ErrorCode::domain_mismatch, "elements of Q have different ranks");
    double norm = 0.0;
    for (double x : g.p) norm += x * x;
    w.sup_p = std::max(w.sup_p, std::sqrt(norm));
  }
  w.delta = w.sup_p > 0.0 ? config.delta_fraction * epsilon / w.sup_p : 1.0;
  const auto ball = SpectralMeasure::euclidean(n, {}, uniform_ball_density(n, w.delta, config.ball_points_per_axis));
  w.measure = dirac_zero_times(n, ball);

  auto& v = w.verdict;
  v.kind = VerdictKind::non_kazhdan_witness;
  v.set = "heisenberg projection, " + std::to_string(q.size()) + " points";
  v.window = q.size();
  v.epsilon = epsilon;
  v.measure = "delta_0 x uniform ball, delta=" + std::to_string(w.delta);
  const auto points = heisenberg_projection(q);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double d = std::abs(fourier_transform_real(w.measure, points[i]) - 1.0);
    double norm = 0.0;
    for (double x : q[i].p) norm += x * x;
    const double bound = 2.0 * w.delta * std::sqrt(norm);
    if (d > bound + chain_slack_tolerance) {
      fail(ErrorCode::internal_consistency, "ball witness exceeds 2 delta |p| at point " + std::to_string(i));
    }
    v.defect = std::max(v.defect, d);
    v.trace.push_back({"|s(q,p)-1| <= 2 delta |p| at point " + std::to_string(i), d, bound});
  }
  v.trace.push_back({"defect < eps", v.defect, epsilon});
  v.atom_estimate = 0.0;
  v.notes.push_back("the ball discretization has an even number of nodes per axis, so no mass sits at the origin");
  v.tolerances = {{"delta_fraction", config.delta_fraction},
                  {"reduction_fraction", config.reduction_fraction},
                  {"ball_points_per_axis", static_cast<double>(config.ball_points_per_axis)}};
  return w;
}

// ---- decay scans ---------------------------------------------------------------------

struct DecayScan {
  std::string parameter;
  std::vector<double> params;
  std::vector<double> magnitudes;
  std::vector<double> envelope;  // max of magnitudes over params >= this one
  std::vector<double> errors;    // quadrature error estimates

  double decay_factor() const {
    return magnitudes.back() > 0.0 ? magnitudes.front() / magnitudes.back() : std::numeric_limits<double>::infinity();
  }
};

namespace detail {

inline std::vector<double> parameter_range(double max, double step) {
  require(step > 0.0 && max >= 0.0, ErrorCode::invalid_argument, "scan needs max >= 0 and step > 0");
  std::vector<double> out;
  const auto count = static_cast<std::size_t>(std::floor(max / step + 1e-9));
  for (std::size_t i = 0; i <= count; ++i) out.push_back(static_cast<double>(i) * step);
  return out;
}

inline void finish_envelope(DecayScan& s) {
  s.envelope.resize(s.magnitudes.size());
  double running = 0.0;
  for (std::size_t i = s.magnitudes.size(); i-- > 0;) {
    running = std::max(running, s.magnitudes[i]);
    s.envelope[i] = running;
  }
}

}  // namespace detail

// |<pi_lambda(0,0,p) u, v>| for p = 0, step, ..., pmax.
inline DecayScan schrodinger_decay_scan(double lambda, const WindowFunction& u, const WindowFunction& v, double pmax,
                                        double step = 1.0) {
  DecayScan s;
  s.parameter = "p";
  s.params = detail::parameter_range(pmax, step);
  s.magnitudes.resize(s.params.size());
  s.errors.resize(s.params.size());
  parallel_for(s.params.size(), [&](std::size_t i) {
    const auto c = schrodinger_coefficient(lambda, {0.0, {0.0}, {s.params[i]}}, u, v);
    s.magnitudes[i] = std::abs(c.value);
    s.errors[i] = c.error_estimate;
  });
  detail::finish_envelope(s);
  return s;
}

// |<pi(a,b) f1, f2>| for b = 0, step, ..., bmax at fixed a.
inline DecayScan affine_decay_scan(HalfLine side, double a, const WindowFunction& f1, const WindowFunction& f2,
                                   double bmax, double step = 1.0) {
  DecayScan s;
  s.parameter = "b";
  s.params = detail::parameter_range(bmax, step);
  s.magnitudes.resize(s.params.size());
  s.errors.resize(s.params.size());
  parallel_for(s.params.size(), [&](std::size_t i) {
    const auto c = affine_coefficient(side, AffineElement(a, s.params[i]), f1, f2);
    s.magnitudes[i] = std::abs(c.value);
    s.errors[i] = c.error_estimate;
  });
  detail::finish_envelope(s);
  return s;
}

// ---- files ------------------------------------------------------------------------------

inline void write_window_csv(std::ostream& out, const WindowFunction& w) {
  out << std::setprecision(17) << "x,re,im\n";
  const auto s = w.samples();
  for (std::size_t i = 0; i < s.size(); ++i) {
    out << w.grid().node(i) << ',' << s[i].real() << ',' << s[i].imag() << '\n';
  }
}

inline WindowFunction read_window_csv(std::istream& in) {
  std::vector<double> xs;
  std::vector<cplx> values;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.starts_with("x")) continue;
    std::stringstream ss(line);
    std::string a, b, c;
    std::getline(ss, a, ',');
    std::getline(ss, b, ',');
    std::getline(ss, c, ',');
    try {
      xs.push_back(std::stod(a));
      values.emplace_back(std::stod(b), c.empty() ? 0.0 : std::stod(c));
    } catch (const std::logic_error&) {
      fail(ErrorCode::schema, "window CSV: cannot parse line '" + line + "'");
    }
  }
  return WindowFunction::from_samples(xs, values);
}

inline WindowFunction read_window_csv(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::io, "cannot open window file " + path);
  return read_window_csv(in);
}

inline void write_decay_csv(std::ostream& out, const DecayScan& s) {
  out << std::setprecision(17) << "param,magnitude\n";
  for (std::size_t i = 0; i < s.params.size(); ++i) out << s.params[i] << ',' << s.magnitudes[i] << '\n';
}

}  // namespace kazlab
