#pragma once

// Cesaro means of characters along integer sequences,
//
//   S_N(h, theta) = (1/N) sum_{k=1}^{N} e^{2 i pi h n_k theta},
//
// evaluated with exact wrapped products. Finite-N output is evidence only:
// every report carries its N, the partial-sum schedule and the residual.

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "kazlab/circle_point.hpp"
#include "kazlab/integer_sequence.hpp"
#include "kazlab/parallel.hpp"

namespace kazlab {

using cplx = std::complex<double>;

struct WeylConfig {
  std::uint64_t harmonics = 8;
  double tolerance = 0.05;
};

struct PartialMean {
  std::uint64_t count;
  cplx value;
};

struct WeylReport {
  Phase theta;
  std::uint64_t harmonic = 1;
  std::uint64_t count = 0;
  std::vector<PartialMean> schedule;  // N = 10, 100, ... and the final N
  cplx value;
  double magnitude = 0.0;
  // Bits of h*n_k*theta that are still exact for a 128-bit approximated
  // angle; 128 for exact rational angles.
  int exact_bits = 128;
};

namespace detail {

inline void check_count(const IntegerSequence& seq, std::uint64_t count) {
  require(count >= 1, ErrorCode::invalid_argument, "Cesaro mean needs N >= 1");
  if (count > seq.horizon()) {
    fail(ErrorCode::horizon_exceeded,
         "N = " + std::to_string(count) + " exceeds sequence horizon " + std::to_string(seq.horizon()));
  }
}

inline int exact_bits(const IntegerSequence& seq, const Phase& theta, std::uint64_t count,
                      std::uint64_t harmonic) {
  if (std::holds_alternative<RationalTurn>(theta)) return 128;
  const auto h_bits = static_cast<int>(std::bit_width(harmonic));
  return 128 - static_cast<int>(seq.magnitude_bits(count)) - h_bits;
}

}  // namespace detail

inline cplx cesaro_character_mean(const IntegerSequence& seq, const Phase& theta, std::uint64_t count,
                                  std::uint64_t harmonic = 1) {
  detail::check_count(seq, count);
  cplx sum = 0.0;
  for (std::uint64_t k = 1; k <= count; ++k) sum += wrapped_product(seq, k, theta, harmonic).unit();
  return sum / static_cast<double>(count);
}

inline WeylReport weyl_report(const IntegerSequence& seq, const Phase& theta, std::uint64_t count,
                              std::uint64_t harmonic) {
  detail::check_count(seq, count);
  WeylReport r;
  r.theta = theta;
  r.harmonic = harmonic;
  r.count = count;
  r.exact_bits = detail::exact_bits(seq, theta, count, harmonic);
  std::uint64_t next_checkpoint = 10;
  cplx sum = 0.0;
  for (std::uint64_t k = 1; k <= count; ++k) {
    sum += wrapped_product(seq, k, theta, harmonic).unit();
    if (k == next_checkpoint && k < count) {
      r.schedule.push_back({k, sum / static_cast<double>(k)});
      next_checkpoint *= 10;
    }
  }
  r.value = sum / static_cast<double>(count);
  r.magnitude = std::abs(r.value);
  r.schedule.push_back({count, r.value});
  return r;
}

// One report per harmonic h = 1..H.
inline std::vector<WeylReport> weyl_criterion_scan(const IntegerSequence& seq, const Phase& theta,
                                                   std::uint64_t harmonics, std::uint64_t count) {
  require(harmonics >= 1, ErrorCode::invalid_argument, "need at least one harmonic");
  detail::check_count(seq, count);
  std::vector<WeylReport> reports(harmonics);
  parallel_for(harmonics, [&](std::size_t i) { reports[i] = weyl_report(seq, theta, count, i + 1); });
  return reports;
}

enum class ScanClass { decayed, undetermined };

struct FirstKindScan {
  std::uint64_t count = 0;
  std::uint64_t harmonics = 0;
  double tolerance = 0.0;
  std::vector<Phase> thetas;
  std::vector<ScanClass> classes;
  std::vector<double> residuals;  // max_h |S_N(h, theta)|
  static constexpr const char* caveat = "heuristic: finite-N evidence, no limit is certified";

  std::size_t decayed_count() const {
    std::size_t n = 0;
    for (auto c : classes) n += c == ScanClass::decayed;
    return n;
  }
};

// A grid point is "decayed" when every harmonic h <= H has |S_N| < tol.
inline FirstKindScan first_kind_scan(const IntegerSequence& seq, const std::vector<Phase>& grid,
                                     std::uint64_t count, const WeylConfig& config = {}) {
  detail::check_count(seq, count);
  require(config.harmonics >= 1, ErrorCode::invalid_argument, "need at least one harmonic");
  FirstKindScan scan;
  scan.count = count;
  scan.harmonics = config.harmonics;
  scan.tolerance = config.tolerance;
  scan.thetas = grid;
  scan.classes.resize(grid.size());
  scan.residuals.resize(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    double worst = 0.0;
    for (std::uint64_t h = 1; h <= config.harmonics; ++h) {
      worst = std::max(worst, std::abs(cesaro_character_mean(seq, grid[i], count, h)));
    }
    scan.residuals[i] = worst;
    scan.classes[i] = worst < config.tolerance ? ScanClass::decayed : ScanClass::undetermined;
  });
  return scan;
}

}  // namespace kazlab
