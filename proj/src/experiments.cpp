#include "fjmm/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "fjmm/dynamics.hpp"
#include "fjmm/errors.hpp"
#include "fjmm/io.hpp"
#include "fjmm/metrics.hpp"
#include "fjmm/random.hpp"

namespace fjmm::experiments {

// ---------------------------------------------------------------------------
// Tables
// ---------------------------------------------------------------------------

std::size_t Table::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw InvalidParameter("no column '" + name + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

double Table::number(std::size_t row, const std::string& name) const {
  const Cell& cell = rows.at(row).at(column(name));
  if (const auto* d = std::get_if<double>(&cell)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return static_cast<double>(*i);
  throw InvalidParameter("column '" + name + "' is not numeric");
}

std::string Table::text(std::size_t row, const std::string& name) const {
  const Cell& cell = rows.at(row).at(column(name));
  if (const auto* s = std::get_if<std::string>(&cell)) return *s;
  throw InvalidParameter("column '" + name + "' is not text");
}

std::string Table::to_csv() const {
  std::ostringstream os;
  for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) os << ',';
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              os << io::format_number(v);
            } else {
              os << v;
            }
          },
          row[c]);
    }
    os << '\n';
  }
  return os.str();
}

const Table& ExperimentResult::table(const std::string& suffix) const {
  for (const auto& t : tables) {
    if (t.suffix == suffix) return t;
  }
  throw InvalidParameter("experiment '" + name + "' has no table '" + suffix + "'");
}

std::vector<std::string> ExperimentResult::write(const std::string& dir) const {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::vector<std::string> paths;
  for (const auto& t : tables) {
    const fs::path path =
        fs::path(dir) / (t.suffix.empty() ? name + ".csv" : name + "_" + t.suffix + ".csv");
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write '" + path.string() + "'");
    out << t.to_csv();
    paths.push_back(path.string());
  }
  const fs::path meta_path = fs::path(dir) / (name + ".meta.json");
  std::ofstream out(meta_path);
  if (!out) throw ParseError("cannot write '" + meta_path.string() + "'");
  out << meta.dump(2) << '\n';
  paths.push_back(meta_path.string());
  return paths;
}

// ---------------------------------------------------------------------------
// Helpers
// ---------------------------------------------------------------------------

namespace {

std::vector<double> linspace_grid(int count, double step) {
  std::vector<double> grid;
  // Built from integers so the values are the exact decimal round-offs.
  for (int k = 0; k < count; ++k) grid.push_back(std::round(k * step * 1e6) / 1e6);
  return grid;
}

nlohmann::json base_meta(const std::string& name) {
  return nlohmann::json{{"name", name},
                        {"version", FJMM_VERSION},
                        {"rng", Rng::kAlgorithm},
                        {"node_indexing", "1-based"}};
}

nlohmann::json one_based(const NodeSet& nodes) {
  nlohmann::json out = nlohmann::json::array();
  for (int i : nodes) out.push_back(i + 1);
  return out;
}

std::int64_t flag(bool b) { return b ? 1 : 0; }

void check_grid(const std::vector<double>& grid, double lo, double hi, bool open_lo, bool open_hi) {
  if (grid.empty()) throw InvalidParameter("beta0 grid is empty");
  for (double b : grid) {
    const bool ok = (open_lo ? b > lo : b >= lo) && (open_hi ? b < hi : b <= hi);
    if (!ok) throw InvalidParameter("beta0 grid value out of range: " + io::format_number(b));
  }
}

std::vector<double> sorted_unique(std::vector<double> grid) {
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

// Runs body(k) for k in [0, count) with OpenMP when available. Every call
// writes only its own slot, so output order never depends on scheduling.
template <typename Body>
void parallel_points(std::size_t count, Body&& body) {
  std::vector<std::string> failures(count);
#ifdef FJMM_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (std::size_t k = 0; k < count; ++k) {
    try {
      body(k);
    } catch (const std::exception& e) {
      failures[k] = e.what();
    }
  }
  for (const auto& f : failures) {
    if (!f.empty()) throw Error(f);
  }
}

std::vector<std::string> x_columns(const char* prefix, int n) {
  std::vector<std::string> cols;
  for (int i = 1; i <= n; ++i) cols.push_back(std::string(prefix) + std::to_string(i));
  return cols;
}

}  // namespace

std::vector<double> default_beta_grid() { return linspace_grid(10, 0.1); }

std::vector<double> interior_beta_grid() {
  auto grid = linspace_grid(10, 0.1);
  grid.erase(grid.begin());
  return grid;
}

std::vector<double> fine_beta_grid() { return linspace_grid(21, 0.05); }

// ---------------------------------------------------------------------------
// Barbell examples
// ---------------------------------------------------------------------------

ExperimentResult example1() {
  const int k = 3;
  const InfluenceGraph g = barbell(k);
  const StochasticMatrix w = row_stochastic(g);
  const int n = g.size();
  const Vector s = polarized_opinions(n);
  const NodeSet stubborn{k - 1, k};
  const double beta0 = 0.8;
  const auto lambda = SusceptibilityProfile::stubborn(n, stubborn);

  ExperimentResult result;
  result.name = "example1";
  Table table;
  table.columns = {"model", "beta0", "stable", "rho_augmented", "rho_comparison", "P", "mean"};
  for (auto& c : x_columns("x_", n)) table.columns.push_back(c);

  auto add_row = [&](const std::string& label, double b, const FJMMModel& model) {
    const StabilityReport report = stability_report(model);
    const Vector x = equilibrium(model);
    const PolarizationReport pol = polarization_index(x);
    std::vector<Cell> row{label, b, flag(report.stable), report.rho_augmented,
                          report.rho_comparison, pol.index, pol.mean};
    for (Eigen::Index i = 0; i < x.size(); ++i) row.emplace_back(x[i]);
    table.rows.push_back(std::move(row));
  };
  add_row("fj", 0.0, FJMMModel::classical(w, lambda, s));
  add_row("fjmm", beta0,
          FJMMModel(use_case_pair(UseCase::kTwoHop, w, MemoryWeights::uniform(n, beta0)), lambda,
                    s));
  result.tables.push_back(std::move(table));

  result.meta = base_meta(result.name);
  result.meta["parameters"] = {{"graph", "barbell:3"},
                               {"use_case", to_string(UseCase::kTwoHop)},
                               {"beta0", beta0},
                               {"stubborn", one_based(stubborn)},
                               {"innate", "polarized"}};
  return result;
}

ExperimentResult example2(const std::vector<double>& grid_in) {
  const std::vector<double> grid = sorted_unique(grid_in);
  check_grid(grid, 0.0, 1.0, false, true);
  const int k = 5;
  const InfluenceGraph g = barbell(k);
  const StochasticMatrix w = row_stochastic(g);
  const int n = g.size();
  const Vector s = polarized_opinions(n);
  const NodeSet stubborn{k - 1, k};
  const auto lambda = SusceptibilityProfile::stubborn(n, stubborn);

  Table table;
  table.columns = {"beta0", "P", "mean", "stable", "rho_augmented", "rho_comparison"};
  for (auto& c : x_columns("x_", n)) table.columns.push_back(c);
  table.rows.resize(grid.size());
  parallel_points(grid.size(), [&](std::size_t idx) {
    const double b = grid[idx];
    const FJMMModel model(use_case_pair(UseCase::kTwoHop, w, MemoryWeights::uniform(n, b)),
                          lambda, s);
    const StabilityReport report = stability_report(model);
    const Vector x = equilibrium(model);
    const PolarizationReport pol = polarization_index(x);
    std::vector<Cell> row{b, pol.index, pol.mean, flag(report.stable), report.rho_augmented,
                          report.rho_comparison};
    for (Eigen::Index i = 0; i < x.size(); ++i) row.emplace_back(x[i]);
    table.rows[idx] = std::move(row);
  });

  ExperimentResult result;
  result.name = "example2";
  result.tables.push_back(std::move(table));
  result.meta = base_meta(result.name);
  result.meta["parameters"] = {{"graph", "barbell:5"},
                               {"use_case", to_string(UseCase::kTwoHop)},
                               {"grid", grid},
                               {"stubborn", one_based(stubborn)},
                               {"innate", "polarized"}};
  return result;
}

ExperimentResult example3(std::uint64_t seed) {
  const int k = 8;
  const InfluenceGraph g = barbell(k);
  const StochasticMatrix w = row_stochastic(g);
  const int n = g.size();
  const Vector s = polarized_opinions(n);
  const double beta0 = 0.8;
  const double tol = 1e-6;

  // Bridge endpoints plus one non-endpoint node from each clique.
  Rng rng(seed);
  NodeSet stubborn{k - 1, k, rng.below(k - 1), k + 1 + rng.below(k - 1)};
  std::sort(stubborn.begin(), stubborn.end());
  const auto lambda = SusceptibilityProfile::stubborn(n, stubborn);

  const FJMMModel classical = FJMMModel::classical(w, lambda, s);
  const FJMMModel memory(use_case_pair(UseCase::kTwoHop, w, MemoryWeights::uniform(n, beta0)),
                         lambda, s);
  const StabilityReport report = stability_report(memory);
  const Vector x_fj = equilibrium(classical);
  const Vector x_mm = equilibrium(memory);

  // Long enough for the slowest model to get 1e-10 below its start.
  const double rho = std::max(report.rho_augmented, 1e-3);
  const int horizon =
      std::clamp(static_cast<int>(std::ceil(std::log(1e-10) / std::log(rho))) + 10, 50, 100000);
  SimulationOptions opts;
  opts.horizon = horizon;
  const Trajectory tr_fj = simulate(classical, opts);
  const Trajectory tr_mm = simulate(memory, opts);
  const Trajectory tr_cmp = simulate_comparison(memory, opts);

  const auto mean_fj = mean_trajectory(tr_fj);
  const auto mean_mm = mean_trajectory(tr_mm);
  const auto mean_cmp = mean_trajectory(tr_cmp);
  Table means;
  means.columns = {"t", "mean_fj", "mean_fjmm", "mean_comparison"};
  for (int t = 0; t <= horizon; ++t) {
    means.rows.push_back({std::int64_t{t}, mean_fj[static_cast<std::size_t>(t)],
                          mean_mm[static_cast<std::size_t>(t + memory.depth() - 1)],
                          mean_cmp[static_cast<std::size_t>(t + memory.depth() - 1)]});
  }

  Table finals;
  finals.suffix = "final";
  finals.columns = {"node", "stubborn", "x_fj", "x_fjmm", "x_comparison",
                    "equilibrium_fj", "equilibrium_fjmm"};
  for (int i = 0; i < n; ++i) {
    const bool is_stubborn = std::binary_search(stubborn.begin(), stubborn.end(), i);
    finals.rows.push_back({std::int64_t{i + 1}, flag(is_stubborn), tr_fj.final()[i],
                           tr_mm.final()[i], tr_cmp.final()[i], x_fj[i], x_mm[i]});
  }

  const ConvergenceTime ct_fj = convergence_time(tr_fj, x_fj, tol);
  const ConvergenceTime ct_mm = convergence_time(tr_mm, x_mm, tol);
  const ConvergenceTime ct_cmp = convergence_time(tr_cmp, x_mm, tol);
  auto steps_json = [](const ConvergenceTime& ct) {
    return ct.steps ? nlohmann::json(*ct.steps) : nlohmann::json(nullptr);
  };

  ExperimentResult result;
  result.name = "example3";
  result.tables.push_back(std::move(means));
  result.tables.push_back(std::move(finals));
  result.meta = base_meta(result.name);
  result.meta["seed"] = seed;
  result.meta["parameters"] = {{"graph", "barbell:8"},
                               {"use_case", to_string(UseCase::kTwoHop)},
                               {"beta0", beta0},
                               {"stubborn", one_based(stubborn)},
                               {"innate", "polarized"},
                               {"horizon", horizon},
                               {"tol", tol}};
  result.meta["summary"] = {
      {"convergence_time_fj", steps_json(ct_fj)},
      {"convergence_time_fjmm", steps_json(ct_mm)},
      {"convergence_time_comparison", steps_json(ct_cmp)},
      {"rho_augmented", report.rho_augmented},
      {"rho_comparison", report.rho_comparison},
      {"rho_fj", spectral_radius(classical.comparison_matrix())},
      {"limit_gap_fjmm_vs_comparison", (tr_mm.final() - tr_cmp.final()).lpNorm<Eigen::Infinity>()},
      {"limit_gap_fjmm_vs_fj", (x_mm - x_fj).lpNorm<Eigen::Infinity>()},
      {"P_fj", polarization_index(x_fj).index},
      {"P_fjmm", polarization_index(x_mm).index}};
  return result;
}

// ---------------------------------------------------------------------------
// Spectral sweeps
// ---------------------------------------------------------------------------

ExperimentResult homogeneous_sweep(double sigma, const std::vector<double>& grid_in,
                                   UseCase use_case, double alpha1, std::uint64_t seed) {
  if (!(sigma > 0.0 && sigma < 1.0)) throw InvalidParameter("sigma must lie in (0, 1)");
  const std::vector<double> grid = sorted_unique(grid_in);
  check_grid(grid, 0.0, 1.0, true, true);
  std::optional<BlendCoefficients> blend;
  switch (use_case) {
    case UseCase::kTwoHop:
    case UseCase::kInertia:
    case UseCase::kMemory:
      break;
    case UseCase::kBlend:
      blend = BlendCoefficients::from_alpha1(alpha1);
      break;
    default:
      throw InvalidParameter("homogeneous sweep supports two-hop, inertia, memory and blend");
  }

  const int ws_n = 200;
  const std::vector<GraphSpec> specs{
      GraphSpec::parse("cycle:20", seed), GraphSpec::parse("erdos-renyi:150:0.4", seed),
      GraphSpec{"watts-strogatz", {double(ws_n), double(lattice_degree(ws_n, 0.6)), 0.7}, seed},
      GraphSpec::parse("complete:50", seed)};
  std::vector<StochasticMatrix> ws;
  for (const auto& spec : specs) ws.push_back(row_stochastic(spec.build()));

  struct Point {
    std::size_t graph;
    double beta0;
  };
  std::vector<Point> points;
  for (std::size_t gi = 0; gi < specs.size(); ++gi) {
    for (double b : grid) points.push_back({gi, b});
  }

  Table table;
  table.columns = {"graph", "n", "beta0", "rho_augmented", "rho_comparison", "closed_form",
                   "closed_form_alt", "abs_error", "deviates_from_both", "power_iterations"};
  table.rows.resize(points.size());
  parallel_points(points.size(), [&](std::size_t idx) {
    const Point& p = points[idx];
    const StochasticMatrix& w = ws[p.graph];
    const int n = w.size();
    const FJMMModel model(use_case_pair(use_case, w, MemoryWeights::uniform(n, p.beta0), blend),
                          SusceptibilityProfile::uniform(n, sigma), Vector::Zero(n));
    const RadiusEstimate aug = perron_root(augmented(model).matrix);
    const double cmp = spectral_radius(model.comparison_matrix());
    const double closed = closed_form_rho_homogeneous(sigma, p.beta0);
    const double alt = closed_form_rho_alternate(sigma, p.beta0);
    const double err = std::abs(aug.value - closed);
    const bool off_both = err > 1e-8 && std::abs(aug.value - alt) > 1e-8;
    table.rows[idx] = {specs[p.graph].to_string(), std::int64_t{n}, p.beta0, aug.value, cmp,
                       closed, alt, err, flag(off_both), std::int64_t{aug.iterations}};
  });

  ExperimentResult result;
  result.name = "homogeneous_sweep";
  result.tables.push_back(std::move(table));
  result.meta = base_meta(result.name);
  result.meta["seed"] = seed;
  nlohmann::json graphs = nlohmann::json::array();
  for (const auto& spec : specs) graphs.push_back(spec.to_string());
  result.meta["parameters"] = {{"sigma", sigma},
                               {"grid", grid},
                               {"use_case", to_string(use_case)},
                               {"graphs", graphs},
                               {"isolated_node_policy", "resample"}};
  if (blend) result.meta["parameters"]["alpha1"] = blend->alpha1;
  return result;
}

ExperimentResult heterogeneous_sweep(const GraphSpec& graph, double fraction,
                                     const std::vector<double>& grid_in, UseCase use_case,
                                     std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw InvalidParameter("stubborn fraction must lie in (0, 1]");
  }
  if (use_case == UseCase::kBlend || use_case == UseCase::kLaggedComm) {
    throw InvalidParameter("heterogeneous sweep supports two-hop, two-hop-alt, inertia, memory");
  }
  const std::vector<double> grid = sorted_unique(grid_in);
  check_grid(grid, 0.0, 1.0, false, false);

  GraphSpec spec = graph;
  spec.seed = seed;
  const StochasticMatrix w = row_stochastic(spec.build());
  const int n = w.size();

  // Stubborn subset: partial Fisher-Yates on a stream separate from the graph's.
  const int count = std::max(1, static_cast<int>(std::lround(fraction * n)));
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed + 1);
  for (int i = 0; i < count; ++i) std::swap(perm[i], perm[i + rng.below(n - i)]);
  NodeSet stubborn(perm.begin(), perm.begin() + count);
  std::sort(stubborn.begin(), stubborn.end());
  const auto lambda = SusceptibilityProfile::stubborn(n, stubborn);

  const double rho_fj = spectral_radius(lambda.values().asDiagonal() * w.matrix());

  Table table;
  table.columns = {"beta0", "rho_fj", "rho_augmented", "rho_comparison", "gap", "stable"};
  table.rows.resize(grid.size());
  parallel_points(grid.size(), [&](std::size_t idx) {
    const double b = grid[idx];
    const FJMMModel model(use_case_pair(use_case, w, MemoryWeights::uniform(n, b)), lambda,
                          Vector::Zero(n));
    const StabilityReport report = stability_report(model);
    table.rows[idx] = {b,
                       rho_fj,
                       report.rho_augmented,
                       report.rho_comparison,
                       report.rho_augmented - report.rho_comparison,
                       flag(report.stable)};
  });

  ExperimentResult result;
  result.name = "heterogeneous_sweep";
  result.tables.push_back(std::move(table));
  result.meta = base_meta(result.name);
  result.meta["seed"] = seed;
  result.meta["parameters"] = {{"graph", spec.to_string()},
                               {"stubborn_fraction", fraction},
                               {"stubborn_count", count},
                               {"stubborn", one_based(stubborn)},
                               {"grid", grid},
                               {"use_case", to_string(use_case)},
                               {"isolated_node_policy", "resample"},
                               {"stubborn_rng_seed", seed + 1}};
  return result;
}

// ---------------------------------------------------------------------------
// Stabilization by blending
// ---------------------------------------------------------------------------

StabilizationInstance stabilization_instance() {
  // 0-based. W: 1 -> 0, 0 -> 0, 2 -> 2 (node 2 never hears node 0).
  Matrix w = Matrix::Zero(3, 3);
  w(0, 0) = 1.0;
  w(1, 0) = 1.0;
  w(2, 2) = 1.0;
  // W~: 2 -> 0, 0 -> 0, 1 -> 1 (node 1 never hears node 0).
  Matrix wt = Matrix::Zero(3, 3);
  wt(0, 0) = 1.0;
  wt(1, 1) = 1.0;
  wt(2, 0) = 1.0;
  return StabilizationInstance{StochasticMatrix(std::move(w)), StochasticMatrix(std::move(wt)),
                               SusceptibilityProfile::stubborn(3, NodeSet{0})};
}

ExperimentResult fig2() {
  const StabilizationInstance inst = stabilization_instance();
  const auto lam = inst.lambda.values().asDiagonal();
  const double rho_w = spectral_radius(lam * inst.w.matrix());
  const double rho_wt = spectral_radius(lam * inst.w_tilde.matrix());
  if (std::abs(rho_w - 1.0) > 1e-9 || std::abs(rho_wt - 1.0) > 1e-9) {
    throw InvariantViolation("stabilization instance: Lambda W or Lambda W~ is Schur stable");
  }

  const std::vector<double> grid{0.0, 0.25, 0.5, 0.75, 1.0};
  Table table;
  table.columns = {"beta0",  "rho_lambda_w",       "rho_lambda_wtilde", "rho_augmented",
                   "rho_comparison", "globally_reachable", "stable", "criteria_agree"};
  for (double b : grid) {
    const FJMMModel model(decomposed_pair(inst.w, inst.w_tilde, MemoryWeights::uniform(3, b)),
                          inst.lambda, Vector::Zero(3));
    const StabilityReport report = stability_report(model);
    const bool interior = b > 0.0 && b < 1.0;
    const bool expected = interior;
    const bool numeric_stable = report.rho_augmented < 1.0 - kMarginalBand;
    if (report.stable != expected || (interior && !numeric_stable) || !report.criteria_agree) {
      throw InvariantViolation("stabilization instance: unexpected verdict at beta0 = " +
                               io::format_number(b));
    }
    table.rows.push_back({b, rho_w, rho_wt, report.rho_augmented, report.rho_comparison,
                          flag(report.globally_reachable), flag(report.stable),
                          flag(report.criteria_agree)});
  }

  ExperimentResult result;
  result.name = "fig2";
  result.tables.push_back(std::move(table));
  result.meta = base_meta(result.name);
  result.meta["parameters"] = {
      {"W_arcs", {{1, 1}, {2, 1}, {3, 3}}},
      {"W_tilde_arcs", {{1, 1}, {2, 2}, {3, 1}}},
      {"stubborn", {1}},
      {"lambda", {0.0, 1.0, 1.0}},
      {"grid", grid}};
  return result;
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> kNames{"example1", "example2",          "example3",
                                               "fig2",     "homogeneous-sweep", "heterogeneous-sweep"};
  return kNames;
}

}  // namespace fjmm::experiments
