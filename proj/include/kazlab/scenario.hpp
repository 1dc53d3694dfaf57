#pragma once

// Batch scenarios: a JSON document {kind, name, seed, params} is validated,
// dispatched to the computation modules and turned into a self-describing
// report plus data files. Reports contain no timestamps, so identical
// scenarios give identical bytes.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "kazlab/errors.hpp"
#include "kazlab/heisenberg.hpp"
#include "kazlab/integer_sequence.hpp"
#include "kazlab/kazhdan.hpp"
#include "kazlab/measure_file.hpp"
#include "kazlab/representation.hpp"
#include "kazlab/spectral_measure.hpp"
#include "kazlab/tensor_product.hpp"
#include "kazlab/weyl.hpp"

#ifndef KAZLAB_VERSION
#define KAZLAB_VERSION "0.1.0"
#endif

namespace kazlab {

inline constexpr const char* tool_version = KAZLAB_VERSION;

using ojson = nlohmann::ordered_json;

struct Artifact {
  std::string filename;
  std::string content;
};

struct ScenarioOutput {
  std::string name;
  ojson report;
  std::vector<Artifact> artifacts;  // data files next to the report
};

inline std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << v;
  return out.str();
}

// Process exit status for an error code; 1 is left for command line misuse.
inline int exit_status(ErrorCode code) { return 2 + static_cast<int>(code); }

inline ojson error_record(ErrorCode code, const std::string& message) {
  ojson j;
  j["error"] = {{"code", std::string(to_string(code))}, {"message", message}};
  j["tool"] = "kazlab";
  j["version"] = tool_version;
  return j;
}

namespace scenario_detail {

using json = nlohmann::json;

class Params {
 public:
  Params(const json& params, std::string kind) : p_(params), kind_(std::move(kind)) {
    require(p_.is_object(), ErrorCode::schema, "\"params\" must be an object");
  }

  bool has(const std::string& key) const { return p_.contains(key); }

  double number(const std::string& key, std::optional<double> fallback = std::nullopt) const {
    if (!p_.contains(key)) return required(key, fallback);
    require(p_[key].is_number(), ErrorCode::schema, where(key) + " must be a number");
    return p_[key].get<double>();
  }

  std::int64_t integer(const std::string& key, std::optional<std::int64_t> fallback = std::nullopt) const {
    if (!p_.contains(key)) {
      require(fallback.has_value(), ErrorCode::schema, where(key) + " is required");
      return *fallback;
    }
    require(p_[key].is_number_integer(), ErrorCode::schema, where(key) + " must be an integer");
    return p_[key].get<std::int64_t>();
  }

  std::uint64_t count(const std::string& key, std::optional<std::uint64_t> fallback = std::nullopt) const {
    const auto v = integer(key, fallback ? std::optional<std::int64_t>(static_cast<std::int64_t>(*fallback)) : std::nullopt);
    require(v >= 0, ErrorCode::schema, where(key) + " must be nonnegative");
    return static_cast<std::uint64_t>(v);
  }

  std::string text(const std::string& key, std::optional<std::string> fallback = std::nullopt) const {
    if (!p_.contains(key)) {
      require(fallback.has_value(), ErrorCode::schema, where(key) + " is required");
      return *fallback;
    }
    require(p_[key].is_string(), ErrorCode::schema, where(key) + " must be a string");
    return p_[key].get<std::string>();
  }

  bool flag(const std::string& key, bool fallback) const {
    if (!p_.contains(key)) return fallback;
    require(p_[key].is_boolean(), ErrorCode::schema, where(key) + " must be a boolean");
    return p_[key].get<bool>();
  }

  std::vector<double> numbers(const std::string& key) const {
    require(p_.contains(key), ErrorCode::schema, where(key) + " is required");
    require(p_[key].is_array(), ErrorCode::schema, where(key) + " must be an array of numbers");
    std::vector<double> out;
    for (const auto& v : p_[key]) {
      require(v.is_number(), ErrorCode::schema, where(key) + " must be an array of numbers");
      out.push_back(v.get<double>());
    }
    return out;
  }

  const json& raw(const std::string& key) const { return p_.at(key); }

  void allow(std::initializer_list<const char*> keys) const {
    for (const auto& [k, _] : p_.items()) {
      bool ok = false;
      for (const char* a : keys) ok = ok || k == a;
      require(ok, ErrorCode::schema, "unknown parameter '" + k + "' for " + kind_);
    }
  }

 private:
  double required(const std::string& key, std::optional<double> fallback) const {
    require(fallback.has_value(), ErrorCode::schema, where(key) + " is required");
    return *fallback;
  }
  std::string where(const std::string& key) const { return kind_ + ": parameter '" + key + "'"; }

  const json& p_;
  std::string kind_;
};

inline ojson cjson(cplx z) { return ojson::array({z.real(), z.imag()}); }

inline std::filesystem::path resolve(const std::filesystem::path& base, const std::string& file) {
  const std::filesystem::path p(file);
  return p.is_absolute() ? p : base / p;
}

inline const char* default_measure_text = "[atoms]\n0 = 0.95\n[density]\nkind = lebesgue\nmass = 0.05\n";

inline SpectralMeasure scenario_measure(const Params& p, const std::filesystem::path& base) {
  if (p.has("measure_file")) return read_measure_description(resolve(base, p.text("measure_file")).string());
  return measure_from_text(p.text("measure", std::string(default_measure_text)));
}

inline std::string csv_number(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

// ---- kinds ----------------------------------------------------------------------

inline void measure_eval(const Params& p, const std::filesystem::path& base, ScenarioOutput& out) {
  p.allow({"measure", "measure_file", "first", "last"});
  const auto m = scenario_measure(p, base);
  const auto first = p.integer("first", -16);
  const auto last = p.integer("last", 16);
  require(first <= last && last - first <= 10'000'000, ErrorCode::schema, "measure-eval: bad index window");
  const auto values = fourier_coefficients(m, first, last);
  std::size_t beyond = 0;
  for (auto n = first; n <= last; ++n) beyond += fourier_coefficient(m, n).beyond_nyquist;
  std::ostringstream csv;
  write_coefficients_csv(csv, first, values);
  out.artifacts.push_back({out.name + ".coefficients.csv", csv.str()});
  auto& r = out.report["result"];
  r["total_mass"] = cjson(m.total_mass());
  r["probability"] = m.is_probability();
  r["atoms"] = m.atoms().size();
  r["grid_size"] = m.grid_size();
  r["singular_factors"] = m.factors().size();
  r["window"] = {first, last};
  r["beyond_nyquist"] = beyond;
  out.report["tolerances"] = {{"probability_mass", 1e-9}};
}

inline void weyl_scan(const Params& p, const std::filesystem::path&, ScenarioOutput& out) {
  p.allow({"seq", "theta", "N", "harmonics", "tolerance"});
  const auto seq = IntegerSequence::parse(p.text("seq"));
  const auto theta = parse_phase(p.text("theta"));
  const auto n = p.count("N", 100000);
  const auto h = p.count("harmonics", 8);
  const double tol = p.number("tolerance", 0.05);
  const auto reports = weyl_criterion_scan(seq, theta, h, n);
  std::ostringstream csv;
  csv << "h,N,re,im,magnitude\n";
  auto& r = out.report["result"];
  r["seq"] = seq.describe();
  r["theta"] = describe(theta);
  r["N"] = n;
  double worst = 0.0;
  auto& hs = r["harmonics"] = ojson::array();
  for (const auto& rep : reports) {
    worst = std::max(worst, rep.magnitude);
    ojson entry;
    entry["h"] = rep.harmonic;
    entry["value"] = cjson(rep.value);
    entry["magnitude"] = rep.magnitude;
    entry["exact_bits"] = rep.exact_bits;
    auto& sched = entry["schedule"] = ojson::array();
    for (const auto& s : rep.schedule) sched.push_back({s.count, s.value.real(), s.value.imag()});
    hs.push_back(std::move(entry));
    csv << rep.harmonic << ',' << rep.count << ',' << csv_number(rep.value.real()) << ','
        << csv_number(rep.value.imag()) << ',' << csv_number(rep.magnitude) << '\n';
  }
  r["max_magnitude"] = worst;
  r["all_below_tolerance"] = worst < tol;
  r["caveat"] = FirstKindScan::caveat;
  out.artifacts.push_back({out.name + ".weyl.csv", csv.str()});
  out.report["tolerances"] = {{"tolerance", tol}};
}

inline void kazhdan_witness(const Params& p, const std::filesystem::path&, ScenarioOutput& out) {
  p.allow({"set", "epsilon", "depth", "window"});
  const auto set = p.text("set", std::string("lacunary:2^k"));
  const double eps = p.number("epsilon", 0.05);
  require(eps > 0.0, ErrorCode::schema, "kazhdan-witness: epsilon must be positive");
  if (set == "lacunary:2^k") {
    const auto depth = p.count("depth", 40);
    const auto window = p.count("window", 30);
    const auto v = bernoulli_verdict(eps, depth, window);
    out.report["result"] = to_json(v);
    std::ostringstream measure;
    measure << std::setprecision(17) << "[bernoulli]\nepsilon = " << eps << "\ndepth = " << depth << "\n";
    out.artifacts.push_back({out.name + ".measure.txt", measure.str()});
    out.report["tolerances"] = {{"chain_slack", chain_slack_tolerance}, {"depth", depth}, {"window", window}};
  } else if (set == "real:k+sqrt2") {
    const auto window = p.count("window", 10000);
    const auto w = real_line_witness(eps, window);
    out.report["result"] = to_json(w.verdict);
    out.report["result"]["b"] = w.b;
    out.report["tolerances"] = {{"window", window}};
  } else {
    fail(ErrorCode::schema, "kazhdan-witness: set must be \"lacunary:2^k\" or \"real:k+sqrt2\"");
  }
}

inline void kazhdan_certify(const Params& p, const std::filesystem::path& base, ScenarioOutput& out) {
  p.allow({"set", "measure", "measure_file", "K", "N"});
  const auto set = p.text("set", std::string("lacunary:2^k+k"));
  require(set == "lacunary:2^k+k", ErrorCode::schema, "kazhdan-certify: only the set lacunary:2^k+k is certified");
  const auto m = scenario_measure(p, base);
  CertificateConfig config;
  config.recovery_count = p.count("N", default_recovery_count);
  const auto v = example_b_certificate(m, p.count("K", 20), config);
  out.report["result"] = to_json(v);
  out.report["tolerances"] = {{"chain_slack", chain_slack_tolerance}, {"threshold", example_b_threshold},
                              {"recovery_N", config.recovery_count}};
}

inline void rep_project(const Params& p, const std::filesystem::path& base, ScenarioOutput& out, std::uint64_t seed) {
  p.allow({"phases", "matrix_file", "random_basis", "operator", "cluster_tol", "cesaro_N"});
  std::mt19937_64 rng(seed);
  Matrix u;
  if (p.has("matrix_file")) {
    u = read_matrix_csv(resolve(base, p.text("matrix_file")).string());
  } else {
    const auto phases = p.numbers("phases");
    require(!phases.empty(), ErrorCode::schema, "rep-project: phases must be nonempty");
    const auto d = static_cast<Eigen::Index>(phases.size());
    Matrix diag = Matrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) diag(i, i) = std::polar(1.0, phases[static_cast<std::size_t>(i)]);
    if (p.flag("random_basis", true)) {
      const Matrix q = haar_unitary(d, rng);
      u = q * diag * q.adjoint();
    } else {
      u = diag;
    }
  }
  const auto rep = UnitaryRep::cyclic(u);
  const auto d = rep.dimension();
  Matrix a;
  const auto op = p.text("operator", std::string("random"));
  if (op == "random") {
    std::normal_distribution<double> normal;
    a.resize(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
      for (Eigen::Index i = 0; i < d; ++i) a(i, j) = {normal(rng), normal(rng)};
    }
  } else if (op == "identity") {
    a = Matrix::Identity(d, d);
  } else {
    a = read_matrix_csv(resolve(base, op).string());
  }
  const double cluster_tol = p.number("cluster_tol", default_cluster_tolerance);
  const auto dec = decompose(rep, cluster_tol);
  const Matrix pa = commutant_projection(rep, dec, a);
  auto& r = out.report["result"];
  r["dimension"] = d;
  r["decomposition"] = to_json(dec);
  r["projection_norm"] = projection_norm(rep, dec, a);
  r["projection_norm_direct"] = hs_norm(pa);
  r["commutator_residual"] = (u * pa - pa * u).norm();
  r["idempotence_residual"] = (commutant_projection(rep, dec, pa) - pa).norm();
  r["trace_residual"] = std::abs(pa.trace() - a.trace());
  const auto cesaro_n = p.count("cesaro_N", 0);
  if (cesaro_n > 0) r["cesaro_difference"] = (cesaro_conjugation_mean(rep, a, cesaro_n) - pa).norm();
  std::ostringstream csv;
  write_matrix_csv(csv, pa);
  out.artifacts.push_back({out.name + ".projection.csv", csv.str()});
  out.report["tolerances"] = {{"cluster_tol", cluster_tol}, {"eigen_residual", eigen_residual_tolerance},
                              {"unitarity", unitarity_tolerance}, {"cesaro_N", cesaro_n}};
}

inline RepSequence diagonal_family(std::size_t length) {
  std::vector<Slot> slots;
  for (std::size_t n = 1; n <= length; ++n) {
    std::vector<double> phases;
    for (std::size_t k = 0; k < n; ++k) phases.push_back(2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
    Vector anchor = Vector::Constant(static_cast<Eigen::Index>(n), 1.0 / std::sqrt(static_cast<double>(n)));
    slots.push_back({UnitaryRep::diagonal(phases), anchor});
  }
  return RepSequence(std::move(slots));
}

inline void tensor_diagnose(const Params& p, const std::filesystem::path& base, ScenarioOutput& out) {
  p.allow({"sequence_file", "slots", "family", "length", "g", "decay", "decay_parameter", "threshold"});
  RepSequence seq;
  if (p.has("sequence_file")) {
    seq = read_rep_sequence(resolve(base, p.text("sequence_file")).string());
  } else if (p.has("slots")) {
    seq = rep_sequence_from_json(nlohmann::json{{"slots", p.raw("slots")}});
  } else {
    require(p.text("family", std::string("diagonal")) == "diagonal", ErrorCode::schema,
            "tensor-diagnose: family must be \"diagonal\"");
    seq = diagonal_family(p.count("length", 16));
  }
  GroupWord g(seq.generator_count(), 0);
  g[0] = 1;
  if (p.has("g")) {
    g.clear();
    for (double x : p.numbers("g")) g.push_back(static_cast<std::int64_t>(x));
  }
  DecayModel model;
  const auto decay = p.text("decay", std::string("none"));
  if (decay == "geometric") model = DecayModel::geometric(p.number("decay_parameter", 0.5));
  else if (decay == "power") model = DecayModel::power(p.number("decay_parameter", 2.0));
  else require(decay == "none", ErrorCode::schema, "tensor-diagnose: decay must be none, geometric or power");
  const double threshold = p.number("threshold", default_weak_mixing_threshold);

  const auto diag = prop_4_3_diagnostic(seq, threshold);
  const auto trace = c0_series(seq, g, model);
  const auto defect = invariance_defect_tensor(seq, {g});
  auto& r = out.report["result"];
  r["length"] = seq.length();
  r["g"] = g;
  r["v_n"] = diag.values;
  r["window"] = diag.window;
  r["minimum"] = diag.minimum;
  r["argmin"] = diag.argmin;
  r["weak_mixing_criterion_met_at_horizon"] = diag.criterion_met;
  r["c0_partial_sums"] = trace.partial_sums;
  r["decay_model"] = model.describe();
  r["divergence_flagged"] = trace.divergence_flagged;
  r["tail_estimate"] = trace.tail_estimate ? ojson(*trace.tail_estimate) : ojson(nullptr);
  r["c0_caveat"] = ConvergenceTrace::caveat;
  r["defect"] = defect.defect;
  r["defect_bound"] = defect.bound;
  std::ostringstream csv;
  write_diagnostic_csv(csv, diag, trace);
  out.artifacts.push_back({out.name + ".diagnostic.csv", csv.str()});
  out.report["tolerances"] = {{"threshold", threshold}, {"anchor_norm", anchor_norm_tolerance},
                              {"cluster_tol", default_cluster_tolerance}};
}

inline RealGrid scenario_grid(const Params& p, double lo, double hi, std::size_t points) {
  RealGrid g{p.number("grid_lo", lo), p.number("grid_hi", hi), static_cast<std::size_t>(p.count("points", points))};
  return g;
}

inline ojson scan_json(const DecayScan& s) {
  ojson r;
  r["parameter"] = s.parameter;
  r["values"] = s.params;
  r["magnitudes"] = s.magnitudes;
  r["envelope"] = s.envelope;
  r["max_quadrature_error"] = *std::max_element(s.errors.begin(), s.errors.end());
  r["decay_factor"] = s.decay_factor();
  r["caveat"] = "finite-window evidence; decay is an asymptotic statement";
  return r;
}

inline void heisenberg_decay(const Params& p, const std::filesystem::path& base, ScenarioOutput& out) {
  p.allow({"lambda", "window", "window_file", "pmax", "step", "grid_lo", "grid_hi", "points"});
  const double lambda = p.number("lambda", 1.0);
  const double pmax = p.number("pmax", 10.0);
  const double step = p.number("step", 1.0);
  const auto window = [&] {
    if (p.has("window_file")) return read_window_csv(resolve(base, p.text("window_file")).string());
    require(p.text("window", std::string("gaussian")) == "gaussian", ErrorCode::schema,
            "heisenberg-decay: window must be gaussian");
    return WindowFunction::gaussian(scenario_grid(p, -default_window_radius, default_window_radius, default_window_points));
  }();
  const auto scan = schrodinger_decay_scan(lambda, window, window, pmax, step);
  const auto moved = apply_schrodinger(lambda, {0.0, {0.5}, {pmax}}, window);
  auto& r = out.report["result"];
  r = scan_json(scan);
  r["lambda"] = lambda;
  r["window"] = window.name();
  r["unitarity_residual"] = std::abs(moved.norm() - window.norm());
  std::ostringstream csv;
  write_decay_csv(csv, scan);
  out.artifacts.push_back({out.name + ".decay.csv", csv.str()});
  out.report["tolerances"] = {{"grid_points", window.grid().points}, {"grid_lo", window.grid().lo},
                              {"grid_hi", window.grid().hi}};
}

inline void affine_decay(const Params& p, const std::filesystem::path& base, ScenarioOutput& out) {
  p.allow({"a", "bmax", "step", "side", "window", "window_file", "center", "radius", "grid_lo", "grid_hi", "points"});
  const double a = p.number("a", 1.0);
  const double bmax = p.number("bmax", 50.0);
  const double step = p.number("step", 1.0);
  const auto side_text = p.text("side", std::string("+"));
  require(side_text == "+" || side_text == "-", ErrorCode::schema, "affine-decay: side must be + or -");
  const auto side = side_text == "+" ? HalfLine::positive : HalfLine::negative;
  const double sgn = side == HalfLine::positive ? 1.0 : -1.0;
  const auto window = [&] {
    if (p.has("window_file")) return read_window_csv(resolve(base, p.text("window_file")).string());
    require(p.text("window", std::string("bump")) == "bump", ErrorCode::schema, "affine-decay: window must be bump");
    const RealGrid grid = side == HalfLine::positive ? scenario_grid(p, 0.0, 4.0, default_window_points)
                                                     : scenario_grid(p, -4.0, 0.0, default_window_points);
    return WindowFunction::bump(grid, p.number("center", sgn * 1.0), p.number("radius", 0.5));
  }();
  const auto scan = affine_decay_scan(side, a, window, window, bmax, step);
  const auto moved = apply_affine(side, AffineElement(a, bmax), window);
  auto& r = out.report["result"];
  r = scan_json(scan);
  r["a"] = a;
  r["side"] = side_text;
  r["window"] = window.name();
  r["unitarity_residual"] = std::abs(moved.norm() - window.norm());
  std::ostringstream csv;
  write_decay_csv(csv, scan);
  out.artifacts.push_back({out.name + ".decay.csv", csv.str()});
  out.report["tolerances"] = {{"grid_points", window.grid().points}, {"grid_lo", window.grid().lo},
                              {"grid_hi", window.grid().hi}};
}

}  // namespace scenario_detail

// Runs a parsed scenario; relative file names resolve against `base`.
inline ScenarioOutput execute_scenario(const nlohmann::json& scenario, const std::filesystem::path& base = ".") {
  using namespace scenario_detail;
  require(scenario.is_object(), ErrorCode::schema, "scenario must be a JSON object");
  for (const auto& [k, _] : scenario.items()) {
    require(k == "kind" || k == "name" || k == "seed" || k == "params", ErrorCode::schema,
            "unknown scenario field '" + k + "'");
  }
  require(scenario.contains("kind") && scenario["kind"].is_string(), ErrorCode::schema,
          "scenario needs a string field \"kind\"");
  const auto kind = scenario["kind"].get<std::string>();
  std::uint64_t seed = 0;
  if (scenario.contains("seed")) {
    require(scenario["seed"].is_number_unsigned(), ErrorCode::schema, "\"seed\" must be a nonnegative integer");
    seed = scenario["seed"].get<std::uint64_t>();
  }
  const nlohmann::json params = scenario.value("params", nlohmann::json::object());

  ScenarioOutput out;
  out.name = scenario.value("name", kind);
  require(!out.name.empty() && out.name.find('/') == std::string::npos, ErrorCode::schema,
          "\"name\" must be a plain file stem");
  out.report["tool"] = "kazlab";
  out.report["version"] = tool_version;
  out.report["scenario_hash"] = hex64(fnv1a(scenario.dump()));
  out.report["kind"] = kind;
  out.report["seed"] = seed;
  out.report["tolerances"] = ojson::object();
  out.report["result"] = ojson::object();

  const Params p(params, kind);
  try {
    if (kind == "measure-eval") measure_eval(p, base, out);
    else if (kind == "weyl-scan") weyl_scan(p, base, out);
    else if (kind == "kazhdan-witness") kazhdan_witness(p, base, out);
    else if (kind == "kazhdan-certify") kazhdan_certify(p, base, out);
    else if (kind == "rep-project") rep_project(p, base, out, seed);
    else if (kind == "tensor-diagnose") tensor_diagnose(p, base, out);
    else if (kind == "heisenberg-decay") heisenberg_decay(p, base, out);
    else if (kind == "affine-decay") affine_decay(p, base, out);
    else fail(ErrorCode::schema, "unknown scenario kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::schema, std::string("malformed parameter: ") + e.what());
  }
  auto& outputs = out.report["outputs"] = ojson::array();
  for (const auto& a : out.artifacts) outputs.push_back(a.filename);
  return out;
}

inline nlohmann::json read_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::io, "cannot open scenario " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::schema, std::string("scenario is not valid JSON: ") + e.what());
  }
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  require(f.good(), ErrorCode::io, "cannot write " + path.string());
  f << content;
  require(f.good(), ErrorCode::io, "write failed for " + path.string());
}

inline std::string report_text(const ScenarioOutput& out) { return out.report.dump(2) + "\n"; }

// Writes <name>.json and the data files into out_dir.
inline void write_outputs(const ScenarioOutput& out, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  require(!ec, ErrorCode::io, "cannot create output directory " + out_dir.string());
  write_file(out_dir / (out.name + ".json"), report_text(out));
  for (const auto& a : out.artifacts) write_file(out_dir / a.filename, a.content);
}

}  // namespace kazlab
