#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "fjmm/influence.hpp"
#include "fjmm/netgen.hpp"
#include "fjmm/spectral.hpp"

namespace fjmm::experiments {

using Cell = std::variant<double, std::int64_t, std::string>;

/// One CSV table. Written as <experiment>.csv when suffix is empty,
/// <experiment>_<suffix>.csv otherwise.
struct Table {
  std::string suffix;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
  std::string text(std::size_t row, const std::string& name) const;
  std::string to_csv() const;
};

struct ExperimentResult {
  std::string name;
  std::vector<Table> tables;  // tables[0] is the main table
  nlohmann::json meta;

  const Table& main() const { return tables.front(); }
  const Table& table(const std::string& suffix) const;
  /// Writes every table plus <name>.meta.json into dir; returns the paths.
  std::vector<std::string> write(const std::string& dir) const;
};

inline constexpr std::uint64_t kDefaultSeed = 20240917;

std::vector<double> default_beta_grid();  // 0, 0.1, ..., 0.9
std::vector<double> interior_beta_grid();  // 0.1, ..., 0.9
std::vector<double> fine_beta_grid();      // 0, 0.05, ..., 1

/// Six-node barbell, stubborn bridge endpoints, two-hop memory at beta0 = 0.8:
/// equilibria of the classical and memory models.
ExperimentResult example1();

/// Ten-node barbell with stubborn bridge endpoints: polarization per beta0.
ExperimentResult example2(const std::vector<double>& grid = default_beta_grid());

/// Sixteen-node barbell, bridge endpoints plus one seeded random node per
/// clique stubborn, beta0 = 0.8: mean-opinion trajectories of the classical,
/// memory and comparison models, and their final opinions.
ExperimentResult example3(std::uint64_t seed = kDefaultSeed);

/// Lambda = sigma I on cycle(20), G(150, 0.4), WS(200, 120, 0.7), K_50:
/// numeric rho(A_d) against the closed form per beta0. use_case is one of
/// two-hop, inertia, memory, blend (alpha1 used only for blend).
ExperimentResult homogeneous_sweep(double sigma = 0.6,
                                   const std::vector<double>& grid = interior_beta_grid(),
                                   UseCase use_case = UseCase::kInertia, double alpha1 = 0.5,
                                   std::uint64_t seed = kDefaultSeed);

/// A random `fraction` of the nodes totally stubborn, the rest lambda = 1:
/// radii of the classical (beta0 = 0), memory and comparison models per beta0.
ExperimentResult heterogeneous_sweep(const GraphSpec& graph, double fraction,
                                     const std::vector<double>& grid = fine_beta_grid(),
                                     UseCase use_case = UseCase::kTwoHop,
                                     std::uint64_t seed = kDefaultSeed);

/// Three nodes, node 1 stubborn. Neither Lambda W nor Lambda W~ is Schur
/// stable, but every strict blend of the two is.
struct StabilizationInstance {
  StochasticMatrix w;
  StochasticMatrix w_tilde;
  SusceptibilityProfile lambda;
};

StabilizationInstance stabilization_instance();

/// The instance above evaluated at beta0 in {0, 0.25, 0.5, 0.75, 1}. Throws
/// InvariantViolation if the expected verdicts do not come out.
ExperimentResult fig2();

const std::vector<std::string>& experiment_names();

}  // namespace fjmm::experiments
