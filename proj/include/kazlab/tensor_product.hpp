#pragma once

// Truncated incomplete tensor products of sequences (pi_n, a_n) of unitary
// representations with unit anchors. Nothing here materializes the tensor
// space: every quantity is a product or a sum of per-slot scalars.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "kazlab/errors.hpp"
#include "kazlab/parallel.hpp"
#include "kazlab/representation.hpp"

namespace kazlab {

inline constexpr double anchor_norm_tolerance = 1e-12;
inline constexpr double default_weak_mixing_threshold = 1e-3;

// g = (e_1, ..., e_r) acting as U_1^{e_1} ... U_r^{e_r} in every slot.
using GroupWord = std::vector<std::int64_t>;

struct Slot {
  UnitaryRep rep;
  Vector anchor;
};

class RepSequence {
 public:
  RepSequence() = default;

  explicit RepSequence(std::vector<Slot> slots) : slots_(std::move(slots)) {
    require(!slots_.empty(), ErrorCode::invalid_argument, "sequence needs at least one slot");
    for (std::size_t n = 0; n < slots_.size(); ++n) {
      const auto& s = slots_[n];
      require(s.anchor.size() == s.rep.dimension(), ErrorCode::invalid_argument,
              "anchor of slot " + std::to_string(n + 1) + " has the wrong dimension");
      require(std::abs(s.anchor.norm() - 1.0) < anchor_norm_tolerance, ErrorCode::invalid_argument,
              "anchor of slot " + std::to_string(n + 1) + " is not a unit vector");
      require(s.rep.generators().size() == slots_.front().rep.generators().size(), ErrorCode::invalid_argument,
              "all slots must represent the same group");
    }
  }

  std::size_t length() const { return slots_.size(); }
  const Slot& slot(std::size_t n) const { return slots_.at(n); }
  const std::vector<Slot>& slots() const { return slots_; }
  std::size_t generator_count() const { return slots_.front().rep.generators().size(); }

 private:
  std::vector<Slot> slots_;
};

// Vector of the incomplete product equal to the anchor outside `slots`.
struct ElementaryVector {
  std::map<std::size_t, Vector> slots;  // 0-based slot index -> component

  const Vector& component(const RepSequence& seq, std::size_t n) const {
    const auto it = slots.find(n);
    return it == slots.end() ? seq.slot(n).anchor : it->second;
  }
};

namespace detail {

inline void check_elementary(const RepSequence& seq, const ElementaryVector& x) {
  for (const auto& [n, v] : x.slots) {
    require(n < seq.length(), ErrorCode::invalid_argument,
            "elementary vector modifies slot " + std::to_string(n + 1) + " of a sequence of length " +
                std::to_string(seq.length()));
    require(v.size() == seq.slot(n).rep.dimension(), ErrorCode::invalid_argument,
            "elementary vector component " + std::to_string(n + 1) + " has the wrong dimension");
  }
}

// <pi_n(g) x, y> for every slot, computed independently and kept in order.
inline std::vector<std::complex<double>> slot_coefficients(const RepSequence& seq, const GroupWord& g,
                                                           const ElementaryVector& x, const ElementaryVector& y) {
  std::vector<std::complex<double>> c(seq.length());
  parallel_for(seq.length(), [&](std::size_t n) {
    const auto& rep = seq.slot(n).rep;
    c[n] = y.component(seq, n).dot(rep.act(g) * x.component(seq, n));
  });
  return c;
}

}  // namespace detail

inline std::complex<double> elementary_coefficient(const RepSequence& seq, const GroupWord& g,
                                                   const ElementaryVector& x, const ElementaryVector& y) {
  detail::check_elementary(seq, x);
  detail::check_elementary(seq, y);
  std::complex<double> product = 1.0;
  for (auto c : detail::slot_coefficients(seq, g, x, y)) product *= c;
  return product;
}

// ---- convergence of sum |1 - <pi_n(g) a_n, a_n>| ------------------------------

enum class DecayKind { none, geometric, power };

struct DecayModel {
  DecayKind kind = DecayKind::none;
  double parameter = 0.0;  // ratio r < 1 or exponent p > 1

  static DecayModel geometric(double r) {
    require(r > 0.0 && r < 1.0, ErrorCode::invalid_argument, "geometric ratio must lie in (0,1)");
    return {DecayKind::geometric, r};
  }
  static DecayModel power(double p) {
    require(p > 1.0, ErrorCode::invalid_argument, "power exponent must exceed 1");
    return {DecayKind::power, p};
  }

  // Envelope f(n), n >= 1.
  double envelope(std::size_t n) const {
    const double x = static_cast<double>(n);
    if (kind == DecayKind::geometric) return std::pow(parameter, x);
    if (kind == DecayKind::power) return std::pow(x, -parameter);
    return 1.0;
  }

  // sum_{n > L} f(n), bounded by an integral for the power model.
  double tail(std::size_t length) const {
    const double l = static_cast<double>(length);
    if (kind == DecayKind::geometric) return std::pow(parameter, l + 1.0) / (1.0 - parameter);
    if (kind == DecayKind::power) return std::pow(l, 1.0 - parameter) / (parameter - 1.0);
    return std::numeric_limits<double>::infinity();
  }

  std::string describe() const {
    if (kind == DecayKind::geometric) return "geometric r=" + std::to_string(parameter);
    if (kind == DecayKind::power) return "power p=" + std::to_string(parameter);
    return "none";
  }
};

struct ConvergenceTrace {
  GroupWord g;
  std::vector<double> terms;         // |1 - <pi_n(g) a_n, a_n>|, n = 1..L
  std::vector<double> partial_sums;  // nondecreasing
  DecayModel model;
  std::optional<double> tail_estimate;
  bool divergence_flagged = false;
  static constexpr const char* caveat = "heuristic: the decay model is declared, not proved";
};

// The envelope constant C is fitted on the first half of the window; a term
// of the second half above C f(n) flags divergence.
inline ConvergenceTrace c0_series(const RepSequence& seq, const GroupWord& g, const DecayModel& model = {}) {
  ConvergenceTrace t;
  t.g = g;
  t.model = model;
  const ElementaryVector anchors;
  const auto coeffs = detail::slot_coefficients(seq, g, anchors, anchors);
  double sum = 0.0;
  for (auto c : coeffs) {
    t.terms.push_back(std::abs(1.0 - c));
    sum += t.terms.back();
    t.partial_sums.push_back(sum);
  }
  if (model.kind == DecayKind::none) return t;

  const std::size_t length = t.terms.size();
  const std::size_t half = std::max<std::size_t>(1, length / 2);
  double constant = 0.0;
  for (std::size_t n = 1; n <= half; ++n) constant = std::max(constant, t.terms[n - 1] / model.envelope(n));
  for (std::size_t n = half + 1; n <= length; ++n) {
    if (t.terms[n - 1] > constant * model.envelope(n) * (1.0 + 1e-9) + 1e-300) t.divergence_flagged = true;
  }
  if (!t.divergence_flagged) t.tail_estimate = constant * model.tail(length);
  return t;
}

// ---- invariance defect of the anchor product --------------------------------

struct TensorDefectEntry {
  GroupWord g;
  std::complex<double> coefficient;  // prod_n <pi_n(g) a_n, a_n>
  double defect = 0.0;               // ||Pi(g) a - a|| = sqrt(2 (1 - Re coefficient))
  double bound = 0.0;                // 2 sum_n |1 - <pi_n(g) a_n, a_n>|
};

struct TensorDefect {
  double defect = 0.0;  // sup over Q
  double bound = 0.0;   // sup over Q of the per-element bound
  std::vector<TensorDefectEntry> entries;
};

inline TensorDefect invariance_defect_tensor(const RepSequence& seq, const std::vector<GroupWord>& q) {
  require(!q.empty(), ErrorCode::invalid_argument, "Q must be nonempty");
  TensorDefect out;
  const ElementaryVector anchors;
  for (const auto& g : q) {
    TensorDefectEntry e;
    e.g = g;
    e.coefficient = 1.0;
    for (auto c : detail::slot_coefficients(seq, g, anchors, anchors)) {
      e.coefficient *= c;
      e.bound += 2.0 * std::abs(1.0 - c);
    }
    const double sq = std::max(0.0, 2.0 * (1.0 - e.coefficient.real()));
    e.defect = std::sqrt(sq);
    if (sq > e.bound + 1e-10) {
      fail(ErrorCode::internal_consistency, "defect^2 = " + std::to_string(sq) + " exceeds 2 sum |1-c_n| = " +
                                                std::to_string(e.bound));
    }
    out.defect = std::max(out.defect, e.defect);
    out.bound = std::max(out.bound, e.bound);
    out.entries.push_back(std::move(e));
  }
  return out;
}

// ---- weak mixing diagnostic ---------------------------------------------------

struct WeakMixingDiagnostic {
  std::vector<double> values;  // v_n = sum_lambda ||P_lambda a_n||^4
  double threshold = default_weak_mixing_threshold;
  std::size_t window = 0;
  std::size_t argmin = 0;  // 1-based slot of the window minimum
  double minimum = 0.0;
  bool criterion_met = false;  // minimum over the window below threshold
};

inline WeakMixingDiagnostic prop_4_3_diagnostic(const RepSequence& seq, double threshold = default_weak_mixing_threshold,
                                                double cluster_tol = default_cluster_tolerance) {
  WeakMixingDiagnostic d;
  d.threshold = threshold;
  d.window = seq.length();
  d.values.resize(seq.length());
  parallel_for(seq.length(), [&](std::size_t n) {
    const auto& s = seq.slot(n);
    const auto dec = decompose(s.rep, cluster_tol);
    d.values[n] = mean_square_coefficient(s.rep, dec, s.anchor, s.anchor);
  });
  const auto it = std::min_element(d.values.begin(), d.values.end());
  d.argmin = static_cast<std::size_t>(it - d.values.begin()) + 1;
  d.minimum = *it;
  d.criterion_met = d.minimum < threshold;
  return d;
}

// ---- files ----------------------------------------------------------------------

namespace detail {

inline std::complex<double> json_complex(const nlohmann::json& v) {
  if (v.is_number()) return v.get<double>();
  require(v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number(), ErrorCode::schema,
          "complex numbers are written as a number or [re, im]");
  return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace detail

// {"slots": [{"phases": [...] | [[...], ...], "anchor": [...], "normalize": true}]}
// Phases are radians of the diagonal generator(s); one list per generator.
inline RepSequence rep_sequence_from_json(const nlohmann::json& j) {
  require(j.is_object() && j.contains("slots") && j["slots"].is_array(), ErrorCode::schema,
          "sequence file needs a \"slots\" array");
  std::vector<Slot> slots;
  for (const auto& s : j["slots"]) {
    require(s.is_object() && s.contains("phases") && s.contains("anchor"), ErrorCode::schema,
            "each slot needs \"phases\" and \"anchor\"");
    const auto& ph = s["phases"];
    require(ph.is_array() && !ph.empty(), ErrorCode::schema, "\"phases\" must be a nonempty array");
    std::vector<std::vector<double>> per_generator;
    if (ph[0].is_array()) {
      for (const auto& list : ph) per_generator.push_back(list.get<std::vector<double>>());
    } else {
      per_generator.push_back(ph.get<std::vector<double>>());
    }
    const auto d = per_generator.front().size();
    if (s.contains("dimension")) {
      require(s["dimension"].get<std::size_t>() == d, ErrorCode::schema, "slot dimension disagrees with its phases");
    }
    std::vector<Matrix> gens;
    for (const auto& list : per_generator) {
      require(list.size() == d, ErrorCode::schema, "phase lists of one slot differ in length");
      Matrix u = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
      for (std::size_t i = 0; i < d; ++i) u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = std::polar(1.0, list[i]);
      gens.push_back(std::move(u));
    }
    const auto& an = s["anchor"];
    require(an.is_array() && an.size() == d, ErrorCode::schema, "anchor length must equal the slot dimension");
    Vector anchor(static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i) anchor[static_cast<Eigen::Index>(i)] = detail::json_complex(an[i]);
    if (s.value("normalize", true)) {
      require(anchor.norm() > 0.0, ErrorCode::schema, "anchor is zero");
      anchor.normalize();
    }
    const auto tag = gens.size() == 1 ? GroupTag::integers : GroupTag::lattice;
    slots.push_back({UnitaryRep(tag, std::move(gens)), std::move(anchor)});
  }
  return RepSequence(std::move(slots));
}

inline RepSequence read_rep_sequence(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::io, "cannot open sequence file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::schema, std::string("sequence file is not valid JSON: ") + e.what());
  }
  return rep_sequence_from_json(j);
}

// Rows n, v_n, partial C0 sum.
inline void write_diagnostic_csv(std::ostream& out, const WeakMixingDiagnostic& d, const ConvergenceTrace& t) {
  out << std::setprecision(17) << "n,v_n,partial_c0_sum\n";
  for (std::size_t n = 0; n < d.values.size(); ++n) {
    out << n + 1 << ',' << d.values[n] << ',' << (n < t.partial_sums.size() ? t.partial_sums[n] : 0.0) << '\n';
  }
}

}  // namespace kazlab
