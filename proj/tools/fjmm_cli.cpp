// fjmm: generate graphs, simulate FJ-MM models, check stability, and
// reproduce the bundled experiments.
//
// Exit codes: 0 success, 1 input error, 2 equilibrium requested for an
// unstable model, 3 `stability` found the model unstable.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "cli_config.hpp"
#include "fjmm/dynamics.hpp"
#include "fjmm/errors.hpp"
#include "fjmm/experiments.hpp"
#include "fjmm/io.hpp"
#include "fjmm/metrics.hpp"
#include "fjmm/spectral.hpp"

namespace {

namespace fs = std::filesystem;
using fjmm::cli::RunConfig;
using nlohmann::json;

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kUnstableEquilibrium = 2;
constexpr int kUnstableVerdict = 3;

constexpr double kDefaultStopTol = 1e-10;
constexpr int kUnstableHorizon = 1000;

struct Invocation {
  RunConfig flags;
  std::string config_path;
  std::string experiment;
};

void add_graph_options(CLI::App* cmd, Invocation& inv) {
  cmd->add_option("--graph", inv.flags.graph,
                  "family spec (barbell:K, cycle:N, complete:N, erdos-renyi:N:P, "
                  "watts-strogatz:N:K:P) or an edge-list / matrix CSV file");
  cmd->add_option("--seed", inv.flags.seed, "seed for random graph families");
  cmd->add_option("--config", inv.config_path, "JSON config file; flags override its values");
}

void add_model_options(CLI::App* cmd, Invocation& inv) {
  add_graph_options(cmd, inv);
  cmd->add_option("--lagged-graph", inv.flags.lagged_graph,
                  "explicit lagged influence matrix, same syntax as --graph");
  cmd->add_option("--directed", inv.flags.directed, "read edge-list files as directed (true/false)");
  cmd->add_option("--use-case", inv.flags.use_case,
                  "two-hop, two-hop-alt, inertia, memory, blend, lagged-comm (default two-hop)");
  cmd->add_option("--beta", inv.flags.beta, "memory weight: scalar or per-node file (default 0)");
  cmd->add_option("--alpha1", inv.flags.alpha1, "weight on W in the blend use case");
  cmd->add_option("--lambda", inv.flags.lambda, "susceptibility: scalar or per-node file");
  cmd->add_option("--stubborn", inv.flags.stubborn,
                  "comma-separated 1-based totally stubborn nodes (lambda = 1 elsewhere)");
  cmd->add_option("--innate", inv.flags.innate, "innate opinions: vector file or 'polarized'");
}

RunConfig resolve(const Invocation& inv) {
  if (inv.config_path.empty()) return inv.flags;
  return fjmm::cli::merge(inv.flags, fjmm::cli::read_config_file(inv.config_path));
}

json config_echo(const RunConfig& c) {
  json j = json::object();
  auto put = [&](const char* key, const auto& v) {
    if (v) j[key] = *v;
  };
  put("graph", c.graph);
  put("lagged_graph", c.lagged_graph);
  put("directed", c.directed);
  put("use_case", c.use_case);
  put("beta", c.beta);
  put("alpha1", c.alpha1);
  put("lambda", c.lambda);
  put("stubborn", c.stubborn);
  put("innate", c.innate);
  j["seed"] = fjmm::cli::seed_or_default(c);
  put("tol", c.tol);
  put("horizon", c.horizon);
  return j;
}

json vector_json(const fjmm::Vector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw fjmm::ParseError("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------

int cmd_gen_graph(const Invocation& inv) {
  const RunConfig c = resolve(inv);
  if (!c.graph) throw fjmm::InvalidParameter("no graph source; pass --graph");
  const std::string& source = *c.graph;
  const fjmm::InfluenceGraph g =
      fjmm::GraphSpec::is_family_spec(source)
          ? fjmm::GraphSpec::parse(source, fjmm::cli::seed_or_default(c)).build()
          : fjmm::io::read_edge_list_file(source, c.directed.value_or(false));
  if (!c.out) {
    fjmm::io::write_edge_list(std::cout, g);
    return kOk;
  }
  const fs::path out(*c.out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  std::ofstream file(out);
  if (!file) throw fjmm::ParseError("cannot write '" + out.string() + "'");
  if (out.extension() == ".csv") {
    fjmm::io::write_matrix_csv(file, fjmm::row_stochastic(g).matrix());
  } else {
    fjmm::io::write_edge_list(file, g);
  }
  std::cout << "graph " << source << ": " << g.size() << " nodes, " << g.edge_count()
            << " edges -> " << out.string() << '\n';
  return kOk;
}

int cmd_stability(const Invocation& inv) {
  const RunConfig c = resolve(inv);
  const fjmm::FJMMModel model = fjmm::cli::build_model(c);
  const fjmm::StabilityReport report = fjmm::stability_report(model);
  const json j = fjmm::io::to_json(report);
  std::cout << j.dump(2) << '\n';
  if (c.out) {
    fs::create_directories(*c.out);
    write_json(fs::path(*c.out) / "stability.json", j);
  }
  return report.stable ? kOk : kUnstableVerdict;
}

int cmd_simulate(const Invocation& inv) {
  const RunConfig c = resolve(inv);
  const fjmm::FJMMModel model = fjmm::cli::build_model(c);
  const fjmm::StabilityReport report = fjmm::stability_report(model);
  const bool want_equilibrium = c.equilibrium.value_or(true);

  auto refuse = [&](const std::string& why) {
    std::cerr << "error: " << why << "\n" << fjmm::io::to_json(report).dump(2) << '\n';
    return kUnstableEquilibrium;
  };
  if (want_equilibrium && !report.stable) {
    return refuse("the model is not stable, so it has no equilibrium (pass --equilibrium false to "
                  "simulate anyway)");
  }
  std::optional<fjmm::Vector> x_bar;
  if (want_equilibrium) {
    try {
      x_bar = fjmm::equilibrium(model);
    } catch (const fjmm::InstabilityError& e) {
      return refuse(e.what());
    }
  }

  fjmm::SimulationOptions opt;
  opt.horizon = c.horizon;
  opt.stop_tol = c.tol;
  if (!opt.horizon && !opt.stop_tol) {
    if (report.stable) {
      opt.stop_tol = kDefaultStopTol;
    } else {
      opt.horizon = kUnstableHorizon;
    }
  }
  const fjmm::Trajectory traj = fjmm::simulate(model, opt);

  const fs::path dir(c.out.value_or("out"));
  fs::create_directories(dir);
  {
    std::ofstream csv(dir / "trajectory.csv");
    if (!csv) throw fjmm::ParseError("cannot write '" + (dir / "trajectory.csv").string() + "'");
    fjmm::io::write_trajectory_csv(csv, traj);
  }

  const double conv_tol = c.tol.value_or(1e-6);
  json summary;
  summary["nodes"] = model.size();
  summary["depth"] = model.depth();
  summary["horizon"] = traj.horizon();
  summary["stop_reason"] = traj.stop_reason() == fjmm::StopReason::kTolerance ? "tolerance" : "horizon";
  summary["stability"] = fjmm::io::to_json(report);
  summary["parameters"] = config_echo(c);
  const fjmm::Vector& measured = x_bar ? *x_bar : traj.final();
  const fjmm::PolarizationReport pol = fjmm::polarization_index(measured);
  summary["polarization"] = {{"index", pol.index}, {"mean", pol.mean},
                             {"of", x_bar ? "equilibrium" : "final_state"}};
  if (x_bar) {
    summary["equilibrium"] = vector_json(*x_bar);
    const fjmm::ConvergenceTime ct = fjmm::convergence_time(traj, *x_bar, conv_tol);
    summary["convergence"] = {{"tol", conv_tol},
                              {"steps", ct.steps ? json(*ct.steps) : json(nullptr)},
                              {"final_error", ct.final_error}};
  } else {
    summary["equilibrium"] = nullptr;
  }
  write_json(dir / "summary.json", summary);

  std::cout << "nodes " << model.size() << ", simulated to t = " << traj.horizon() << " ("
            << summary["stop_reason"].get<std::string>() << ")\n";
  std::cout << "stable: " << (report.stable ? "yes" : "no")
            << ", rho(augmented) = " << fjmm::io::format_number(report.rho_augmented, 12)
            << ", rho(comparison) = " << fjmm::io::format_number(report.rho_comparison, 12) << '\n';
  std::cout << "polarization (" << summary["polarization"]["of"].get<std::string>()
            << ") = " << fjmm::io::format_number(pol.index, 12) << '\n';
  if (x_bar) {
    const auto& steps = summary["convergence"]["steps"];
    std::cout << "convergence time at tol " << conv_tol << ": "
              << (steps.is_null() ? std::string("not reached") : std::to_string(steps.get<int>()))
              << '\n';
  }
  std::cout << "wrote " << (dir / "trajectory.csv").string() << ", " << (dir / "summary.json").string()
            << '\n';
  return kOk;
}

int cmd_experiment(const Invocation& inv) {
  namespace ex = fjmm::experiments;
  const RunConfig c = resolve(inv);
  const auto& names = ex::experiment_names();
  if (std::find(names.begin(), names.end(), inv.experiment) == names.end()) {
    std::string list;
    for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
    throw fjmm::InvalidParameter("unknown experiment '" + inv.experiment + "'; valid names: " + list);
  }

  const std::string& name = inv.experiment;
  auto reject_unless = [&](bool allowed, const char* flag, bool given) {
    if (given && !allowed) {
      throw fjmm::InvalidParameter(std::string(flag) + " does not apply to experiment " + name);
    }
  };
  const bool homog = name == "homogeneous-sweep";
  const bool heter = name == "heterogeneous-sweep";
  reject_unless(homog, "--sigma", c.sigma.has_value());
  reject_unless(homog, "--alpha1", c.alpha1.has_value());
  reject_unless(homog || heter, "--use-case", c.use_case.has_value());
  reject_unless(heter, "--fraction", c.fraction.has_value());
  reject_unless(heter, "--graph", c.graph.has_value());
  reject_unless(homog || heter || name == "example2", "--grid", c.grid.has_value());
  reject_unless(homog || heter || name == "example3", "--seed", c.seed.has_value());

  const std::uint64_t seed = fjmm::cli::seed_or_default(c);
  std::optional<std::vector<double>> grid;
  if (c.grid) grid = fjmm::cli::parse_number_list(*c.grid);

  ex::ExperimentResult result;
  if (name == "example1") {
    result = ex::example1();
  } else if (name == "example2") {
    result = ex::example2(grid.value_or(ex::default_beta_grid()));
  } else if (name == "example3") {
    result = ex::example3(seed);
  } else if (name == "fig2") {
    result = ex::fig2();
  } else if (homog) {
    const fjmm::UseCase uc = fjmm::parse_use_case(c.use_case.value_or("inertia"));
    result = ex::homogeneous_sweep(c.sigma.value_or(0.6), grid.value_or(ex::interior_beta_grid()), uc,
                                   c.alpha1.value_or(0.5), seed);
  } else {
    const fjmm::GraphSpec g =
        fjmm::GraphSpec::parse(c.graph.value_or("watts-strogatz:200:120:0.7"), seed);
    const fjmm::UseCase uc = fjmm::parse_use_case(c.use_case.value_or("two-hop"));
    result = ex::heterogeneous_sweep(g, c.fraction.value_or(0.15), grid.value_or(ex::fine_beta_grid()),
                                     uc, seed);
  }

  const std::string dir = c.out.value_or("results");
  std::cout << "experiment " << name << ": " << result.main().rows.size() << " rows\n";
  for (const auto& path : result.write(dir)) std::cout << "wrote " << path << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FJ-MM opinion dynamics: graphs, simulation, stability, experiments", "fjmm"};
  app.set_version_flag("--version", std::string(FJMM_VERSION));
  app.require_subcommand(1);

  Invocation inv;

  CLI::App* gen = app.add_subcommand("gen-graph", "write an influence graph as an edge list or matrix CSV");
  add_graph_options(gen, inv);
  gen->add_option("--directed", inv.flags.directed, "read edge-list files as directed (true/false)");
  gen->add_option("--out", inv.flags.out, "output file (*.csv writes the row-stochastic matrix)");

  CLI::App* sim = app.add_subcommand("simulate", "run the recursion and write trajectory.csv and summary.json");
  add_model_options(sim, inv);
  sim->add_option("--horizon", inv.flags.horizon, "last time step to compute");
  sim->add_option("--tol", inv.flags.tol, "stop once successive states differ by less than tol");
  sim->add_option("--equilibrium", inv.flags.equilibrium,
                  "compute the equilibrium (default true; false allows unstable models)");
  sim->add_option("--out", inv.flags.out, "output directory (default out)");

  CLI::App* stab = app.add_subcommand("stability", "print the stability report; exit 3 when unstable");
  add_model_options(stab, inv);
  stab->add_option("--out", inv.flags.out, "also write stability.json into this directory");

  CLI::App* exp = app.add_subcommand("experiment", "reproduce a bundled experiment as CSV + meta JSON");
  exp->add_option("name", inv.experiment, "experiment name")->required();
  exp->add_option("--sigma", inv.flags.sigma, "homogeneous susceptibility");
  exp->add_option("--grid", inv.flags.grid, "comma-separated beta0 values");
  exp->add_option("--use-case", inv.flags.use_case, "use case for the sweeps");
  exp->add_option("--fraction", inv.flags.fraction, "stubborn fraction for the heterogeneous sweep");
  exp->add_option("--graph", inv.flags.graph, "graph family spec for the heterogeneous sweep");
  exp->add_option("--alpha1", inv.flags.alpha1, "blend weight for the homogeneous sweep");
  exp->add_option("--seed", inv.flags.seed, "random seed");
  exp->add_option("--out", inv.flags.out, "output directory (default results)");
  exp->add_option("--config", inv.config_path, "JSON config file; flags override its values");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInputError;
  }

  try {
    if (gen->parsed()) return cmd_gen_graph(inv);
    if (sim->parsed()) return cmd_simulate(inv);
    if (stab->parsed()) return cmd_stability(inv);
    return cmd_experiment(inv);
  } catch (const fjmm::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
}
