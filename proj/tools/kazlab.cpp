#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "kazlab/kazlab.hpp"

namespace {

using nlohmann::json;

struct Globals {
  std::uint64_t seed = 0;
  std::string out_dir;
  std::string format = "json";
  std::string out;
};

int emit(const kazlab::ScenarioOutput& result, const Globals& g) {
  if (!g.out_dir.empty()) kazlab::write_outputs(result, g.out_dir);
  std::string primary = kazlab::report_text(result);
  if (g.format == "csv" && !result.artifacts.empty()) primary = result.artifacts.front().content;
  if (!g.out.empty()) {
    kazlab::write_file(g.out, primary);
  } else if (g.out_dir.empty()) {
    std::cout << primary;
  }
  return 0;
}

int fail_with(const kazlab::Error& e, const Globals& g, const std::string& name) {
  const auto record = kazlab::error_record(e.code(), e.what());
  std::cerr << record.dump() << '\n';
  if (!g.out_dir.empty()) {
    try {
      std::filesystem::create_directories(g.out_dir);
      kazlab::write_file(std::filesystem::path(g.out_dir) / (name + ".error.json"), record.dump(2) + "\n");
    } catch (...) {
    }
  }
  return kazlab::exit_status(e.code());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kazlab: spectral measures, Kazhdan witnesses and representation diagnostics"};
  app.set_version_flag("--version", std::string(kazlab::tool_version));
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Seed for randomized constructions");
  app.add_option("--out-dir", g.out_dir, "Directory receiving the report and data files");
  app.add_option("--format", g.format, "Format written to --out or stdout")->check(CLI::IsMember({"csv", "json"}));

  json scenario;
  std::filesystem::path base = ".";
  std::string scenario_path;

  auto with_out = [&g](CLI::App* sub) { sub->add_option("--out", g.out, "Write the primary output here"); };

  // weyl scan
  auto* weyl = app.add_subcommand("weyl", "Weyl sums along integer sequences")->require_subcommand(1);
  auto* weyl_scan = weyl->add_subcommand("scan", "Cesaro means of e(h n_k theta) for h = 1..H");
  std::string seq = "poly:1,0,0", theta = "sqrt2";
  std::uint64_t count = 100000, harmonics = 8;
  double tolerance = 0.05;
  weyl_scan->add_option("--seq", seq, "Sequence: poly:c_d,..,c_0 | lacunary:b^k+ck | list:n_1,n_2,..");
  weyl_scan->add_option("--theta", theta, "Angle in turns: p/q, decimal, sqrt2, golden or 0x<word>");
  weyl_scan->add_option("--N", count, "Number of terms");
  weyl_scan->add_option("--harmonics", harmonics, "Harmonics h = 1..H");
  weyl_scan->add_option("--tolerance", tolerance, "Decay tolerance");
  with_out(weyl_scan);
  weyl_scan->callback([&] {
    scenario = {{"kind", "weyl-scan"},
                {"params", {{"seq", seq}, {"theta", theta}, {"N", count}, {"harmonics", harmonics}, {"tolerance", tolerance}}}};
  });

  // kazhdan witness / certify
  auto* kazhdan = app.add_subcommand("kazhdan", "Kazhdan and non-Kazhdan witnesses")->require_subcommand(1);
  auto* witness = kazhdan->add_subcommand("witness", "Measure showing that a set is not Kazhdan");
  std::string set = "lacunary:2^k";
  double epsilon = 0.05;
  std::uint64_t depth = 40, window = 30;
  witness->add_option("--set", set, "lacunary:2^k or real:k+sqrt2");
  witness->add_option("--epsilon", epsilon, "Kazhdan constant to defeat");
  witness->add_option("--depth", depth, "Truncation depth J of the Bernoulli convolution");
  witness->add_option("--window", window, "Largest index of Q that is checked");
  with_out(witness);
  witness->callback([&] {
    json params = {{"set", set}, {"epsilon", epsilon}, {"window", window}};
    if (set == "lacunary:2^k") params["depth"] = depth;
    scenario = {{"kind", "kazhdan-witness"}, {"params", params}};
  });

  auto* certify = kazhdan->add_subcommand("certify", "Inequality chain and atom recovery on {2^k+k}");
  std::string certify_set = "lacunary:2^k+k", measure_file;
  std::uint64_t depth_k = 20, recovery = kazlab::default_recovery_count;
  certify->add_option("--set", certify_set, "Only lacunary:2^k+k");
  certify->add_option("--measure", measure_file, "Measure description file");
  certify->add_option("--K", depth_k, "Chain depth");
  certify->add_option("--N", recovery, "Cesaro length for atom recovery");
  with_out(certify);
  certify->callback([&] {
    json params = {{"set", certify_set}, {"K", depth_k}, {"N", recovery}};
    if (!measure_file.empty()) params["measure_file"] = measure_file;
    scenario = {{"kind", "kazhdan-certify"}, {"params", params}};
  });

  // measure eval
  auto* measure = app.add_subcommand("measure", "Spectral measures")->require_subcommand(1);
  auto* eval = measure->add_subcommand("eval", "Fourier-Stieltjes coefficients over an index window");
  std::string eval_file;
  std::int64_t first = -16, last = 16;
  eval->add_option("--measure", eval_file, "Measure description file")->required();
  eval->add_option("--first", first, "First index");
  eval->add_option("--last", last, "Last index");
  with_out(eval);
  eval->callback([&] {
    scenario = {{"kind", "measure-eval"}, {"params", {{"measure_file", eval_file}, {"first", first}, {"last", last}}}};
  });

  // rep project
  auto* rep = app.add_subcommand("rep", "Finite-dimensional unitary representations")->require_subcommand(1);
  auto* project = rep->add_subcommand("project", "Commutant projection of an operator");
  std::string matrix_file, operator_spec = "random";
  std::vector<double> phases;
  std::uint64_t cesaro = 0;
  project->add_option("--matrix", matrix_file, "Unitary generator as interleaved re,im CSV");
  project->add_option("--phases", phases, "Eigenphases (radians) of a random-basis unitary")->delimiter(',');
  project->add_option("--operator", operator_spec, "random, identity or a matrix CSV");
  project->add_option("--cesaro", cesaro, "Also compare with the Cesaro mean of this length");
  with_out(project);
  project->callback([&] {
    json params = {{"operator", operator_spec}, {"cesaro_N", cesaro}};
    if (!matrix_file.empty()) params["matrix_file"] = matrix_file;
    else params["phases"] = phases.empty() ? std::vector<double>{0.0, 1.0, 1.0, 2.5} : phases;
    scenario = {{"kind", "rep-project"}, {"params", params}};
  });

  // tensor diagnose
  auto* tensor = app.add_subcommand("tensor", "Truncated tensor products")->require_subcommand(1);
  auto* diagnose = tensor->add_subcommand("diagnose", "Weak-mixing diagnostic and C0 series");
  std::string sequence_file, decay = "none";
  std::uint64_t length = 16;
  double decay_parameter = 0.5, threshold = kazlab::default_weak_mixing_threshold;
  diagnose->add_option("--sequence", sequence_file, "Sequence description (JSON)");
  diagnose->add_option("--length", length, "Length of the built-in diagonal family");
  diagnose->add_option("--decay", decay, "none, geometric or power");
  diagnose->add_option("--decay-parameter", decay_parameter, "Ratio or exponent of the decay model");
  diagnose->add_option("--threshold", threshold, "Weak-mixing threshold");
  with_out(diagnose);
  diagnose->callback([&] {
    json params = {{"decay", decay}, {"threshold", threshold}};
    if (decay != "none") params["decay_parameter"] = decay_parameter;
    if (!sequence_file.empty()) params["sequence_file"] = sequence_file;
    else params["length"] = length;
    scenario = {{"kind", "tensor-diagnose"}, {"params", params}};
  });

  // heisenberg / affine decay
  auto* heis = app.add_subcommand("heisenberg", "Schrodinger coefficients on H_1")->require_subcommand(1);
  auto* heis_decay = heis->add_subcommand("decay", "|<pi(0,0,p)u,u>| for p = 0..pmax");
  double lambda = 1.0, pmax = 10.0, pstep = 1.0;
  std::string heis_window = "gaussian";
  heis_decay->add_option("--lambda", lambda, "Nonzero representation parameter (sign selects the family)");
  heis_decay->add_option("--window", heis_window, "gaussian or a window CSV (x,re,im)");
  heis_decay->add_option("--pmax", pmax, "Largest p");
  heis_decay->add_option("--step", pstep, "Step in p");
  with_out(heis_decay);
  heis_decay->callback([&] {
    json params = {{"lambda", lambda}, {"pmax", pmax}, {"step", pstep}};
    if (heis_window == "gaussian") params["window"] = heis_window;
    else params["window_file"] = heis_window;
    scenario = {{"kind", "heisenberg-decay"}, {"params", params}};
  });

  auto* aff = app.add_subcommand("affine", "Affine group coefficients")->require_subcommand(1);
  auto* aff_decay = aff->add_subcommand("decay", "|<pi(a,b)f,f>| for b = 0..bmax");
  double dilation = 1.0, bmax = 50.0, bstep = 1.0;
  std::string aff_window = "bump", side = "+";
  aff_decay->add_option("--a", dilation, "Dilation a > 0");
  aff_decay->add_option("--bmax", bmax, "Largest b");
  aff_decay->add_option("--step", bstep, "Step in b");
  aff_decay->add_option("--side", side, "+ or -")->check(CLI::IsMember({"+", "-"}));
  aff_decay->add_option("--window", aff_window, "bump or a window CSV (x,re,im)");
  with_out(aff_decay);
  aff_decay->callback([&] {
    json params = {{"a", dilation}, {"bmax", bmax}, {"step", bstep}, {"side", side}};
    if (aff_window == "bump") params["window"] = aff_window;
    else params["window_file"] = aff_window;
    scenario = {{"kind", "affine-decay"}, {"params", params}};
  });

  // run <scenario>
  auto* run = app.add_subcommand("run", "Run a scenario file");
  run->add_option("scenario", scenario_path, "Scenario JSON")->required();
  with_out(run);

  CLI11_PARSE(app, argc, argv);

  std::string name = "kazlab";
  try {
    if (!scenario_path.empty()) {
      scenario = kazlab::read_scenario(scenario_path);
      base = std::filesystem::path(scenario_path).parent_path();
      if (base.empty()) base = ".";
      if (scenario.is_object() && scenario.contains("name") && scenario["name"].is_string()) {
        name = scenario["name"].get<std::string>();
      }
      if (scenario.is_object() && (g.seed != 0 || !scenario.contains("seed"))) scenario["seed"] = g.seed;
    } else {
      scenario["seed"] = g.seed;
      name = scenario["kind"].get<std::string>();
    }
    const auto result = kazlab::execute_scenario(scenario, base);
    return emit(result, g);
  } catch (const kazlab::Error& e) {
    return fail_with(e, g, name);
  } catch (const std::exception& e) {
    return fail_with(kazlab::Error(kazlab::ErrorCode::internal_consistency, e.what()), g, name);
  }
}
