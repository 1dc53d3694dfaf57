#pragma once

// Text description of a circle measure and CSV export of its coefficients.
//
//   [atoms]            position = mass      (position: 0, 1/3, 0.25, sqrt2, 0x...;
//   0 = 0.5                                  mass: re or re, im)
//   1/2 = 0.25
//   [density]
//   kind = lebesgue    lebesgue | cosine
//   mass = 0.25
//   coefficients = 0.3, 0.1      cosine: 1 + sum_k c_k cos(2 pi k theta)
//   grid = 65536
//   [bernoulli]
//   epsilon = 0.05     or: weights = 0.01, 0.005, ...
//   depth = 40
//   mass = 1
//   [riesz]
//   frequencies = 4, 13, 40
//   coefficients = 1, 1, 1
//   grid = 65536
//   mass = 1

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "kazlab/circle_point.hpp"
#include "kazlab/errors.hpp"
#include "kazlab/spectral_measure.hpp"

namespace kazlab {

namespace detail {

inline std::string trim(std::string s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline std::vector<double> parse_numbers(const std::string& text, const std::string& where) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::logic_error&) {
      used = 0;
    }
    require(used == tok.size(), ErrorCode::schema, where + ": '" + tok + "' is not a number");
    out.push_back(v);
  }
  require(!out.empty(), ErrorCode::schema, where + ": expected a number list");
  return out;
}

inline double single_number(const std::map<std::string, std::string>& kv, const std::string& key, double fallback,
                            const std::string& section) {
  const auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  const auto v = parse_numbers(it->second, "[" + section + "] " + key);
  require(v.size() == 1, ErrorCode::schema, "[" + section + "] " + key + " takes one number");
  return v[0];
}

inline void check_keys(const std::map<std::string, std::string>& kv, const std::set<std::string>& allowed,
                       const std::string& section) {
  for (const auto& [k, _] : kv) {
    require(allowed.contains(k), ErrorCode::schema, "unknown key '" + k + "' in [" + section + "]");
  }
}

}  // namespace detail

inline SpectralMeasure parse_measure_description(std::istream& in) {
  std::vector<CircleAtom> atoms;
  std::map<std::string, std::map<std::string, std::string>> sections;
  std::string current;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    if (line.front() == '[') {
      require(line.back() == ']', ErrorCode::schema, where + ": unterminated section header");
      current = line.substr(1, line.size() - 2);
      require(current == "atoms" || current == "density" || current == "bernoulli" || current == "riesz",
              ErrorCode::schema, where + ": unknown section [" + current + "]");
      require(!sections.contains(current), ErrorCode::schema, where + ": section [" + current + "] repeated");
      sections[current];
      continue;
    }
    const auto eq = line.find('=');
    require(eq != std::string::npos, ErrorCode::schema, where + ": expected key = value");
    require(!current.empty(), ErrorCode::schema, where + ": entry outside a section");
    const auto key = detail::trim(line.substr(0, eq));
    const auto value = detail::trim(line.substr(eq + 1));
    if (current == "atoms") {
      Phase pos;
      try {
        pos = parse_phase(key);
      } catch (const Error&) {
        fail(ErrorCode::schema, where + ": bad atom position '" + key + "'");
      }
      const auto m = detail::parse_numbers(value, where);
      require(m.size() <= 2, ErrorCode::schema, where + ": atom mass is re or re, im");
      atoms.push_back({approx(pos), {m[0], m.size() == 2 ? m[1] : 0.0}});
    } else {
      require(!sections[current].contains(key), ErrorCode::schema, where + ": key '" + key + "' repeated");
      sections[current][key] = value;
    }
  }

  std::vector<cplx> density;
  auto add_density = [&density](std::vector<cplx> samples) {
    if (density.empty()) {
      density = std::move(samples);
      return;
    }
    require(density.size() == samples.size(), ErrorCode::schema, "[density] and [riesz] must use the same grid");
    for (std::size_t i = 0; i < density.size(); ++i) density[i] += samples[i];
  };

  if (sections.contains("density")) {
    const auto& kv = sections["density"];
    detail::check_keys(kv, {"kind", "mass", "grid", "coefficients"}, "density");
    const std::string kind = kv.contains("kind") ? kv.at("kind") : "lebesgue";
    const double mass = detail::single_number(kv, "mass", 1.0, "density");
    const auto grid = static_cast<std::size_t>(detail::single_number(kv, "grid", default_grid_size, "density"));
    require(detail::is_power_of_two(grid), ErrorCode::schema, "[density] grid must be a power of two");
    std::vector<double> coeffs;
    if (kind == "cosine") {
      require(kv.contains("coefficients"), ErrorCode::schema, "[density] cosine needs coefficients");
      coeffs = detail::parse_numbers(kv.at("coefficients"), "[density] coefficients");
    } else {
      require(kind == "lebesgue", ErrorCode::schema, "[density] kind must be lebesgue or cosine");
    }
    std::vector<cplx> samples(grid);
    for (std::size_t i = 0; i < grid; ++i) {
      const double theta = static_cast<double>(i) / static_cast<double>(grid);
      double v = 1.0;
      for (std::size_t k = 0; k < coeffs.size(); ++k) {
        v += coeffs[k] * std::cos(2.0 * std::numbers::pi * static_cast<double>(k + 1) * theta);
      }
      samples[i] = mass * v;
    }
    add_density(std::move(samples));
  }

  if (sections.contains("riesz")) {
    const auto& kv = sections["riesz"];
    detail::check_keys(kv, {"frequencies", "coefficients", "grid", "mass"}, "riesz");
    require(kv.contains("frequencies") && kv.contains("coefficients"), ErrorCode::schema,
            "[riesz] needs frequencies and coefficients");
    std::vector<std::int64_t> freqs;
    for (double f : detail::parse_numbers(kv.at("frequencies"), "[riesz] frequencies")) {
      require(f == std::floor(f), ErrorCode::schema, "[riesz] frequencies must be integers");
      freqs.push_back(static_cast<std::int64_t>(f));
    }
    const auto coeffs = detail::parse_numbers(kv.at("coefficients"), "[riesz] coefficients");
    const auto grid = static_cast<std::size_t>(detail::single_number(kv, "grid", default_grid_size, "riesz"));
    const double mass = detail::single_number(kv, "mass", 1.0, "riesz");
    const auto riesz = riesz_product(freqs, coeffs, grid);
    auto samples = riesz.density();
    for (auto& s : samples) s *= mass;
    add_density(std::move(samples));
  }

  std::vector<TwoPointFactor> factors;
  cplx singular_mass = 1.0;
  if (sections.contains("bernoulli")) {
    const auto& kv = sections["bernoulli"];
    detail::check_keys(kv, {"epsilon", "weights", "depth", "mass"}, "bernoulli");
    std::vector<double> weights;
    std::size_t depth = 0;
    if (kv.contains("weights")) {
      require(!kv.contains("epsilon"), ErrorCode::schema, "[bernoulli] takes epsilon or weights, not both");
      weights = detail::parse_numbers(kv.at("weights"), "[bernoulli] weights");
      depth = static_cast<std::size_t>(detail::single_number(kv, "depth", static_cast<double>(weights.size()), "bernoulli"));
    } else {
      require(kv.contains("epsilon"), ErrorCode::schema, "[bernoulli] needs epsilon or weights");
      depth = static_cast<std::size_t>(detail::single_number(kv, "depth", 40, "bernoulli"));
      weights = bernoulli_schedule(detail::single_number(kv, "epsilon", 0.0, "bernoulli"), depth);
    }
    const auto witness = bernoulli_witness(weights, depth);
    factors = witness.measure.factors();
    singular_mass = detail::single_number(kv, "mass", 1.0, "bernoulli");
  }

  require(!atoms.empty() || !density.empty() || !factors.empty(), ErrorCode::schema, "measure description is empty");
  return SpectralMeasure::circle(std::move(atoms), std::move(density), std::move(factors), singular_mass);
}

inline SpectralMeasure read_measure_description(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::io, "cannot open measure file " + path);
  return parse_measure_description(in);
}

inline SpectralMeasure measure_from_text(const std::string& text) {
  std::istringstream in(text);
  return parse_measure_description(in);
}

// Rows n, re, im.
inline void write_coefficients_csv(std::ostream& out, std::int64_t first, const std::vector<cplx>& values) {
  out << std::setprecision(17) << "n,re,im\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    out << first + static_cast<std::int64_t>(i) << ',' << values[i].real() << ',' << values[i].imag() << '\n';
  }
}

}  // namespace kazlab
