#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fjmm/model.hpp"
#include "fjmm/netgen.hpp"

namespace fjmm::cli {

// Every field is optional so that flag values can be layered over a JSON
// config file. Strings that name either a number or a file (beta, lambda)
// are resolved in build_model().
struct RunConfig {
  std::optional<std::string> graph;         // family spec ("barbell:3") or file path
  std::optional<std::string> lagged_graph;  // explicit W~, same syntax as graph
  std::optional<bool> directed;             // edge-list files only
  std::optional<std::string> use_case;
  std::optional<std::string> beta;     // scalar or per-node file
  std::optional<double> alpha1;
  std::optional<std::string> lambda;   // scalar or per-node file
  std::optional<std::string> stubborn; // comma-separated 1-based node list
  std::optional<std::string> innate;   // vector file or "polarized"
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<double> tol;
  std::optional<int> horizon;
  std::optional<bool> equilibrium;
  // experiment overrides
  std::optional<double> sigma;
  std::optional<std::string> grid;     // comma-separated beta0 values
  std::optional<double> fraction;
};

/// Reads a JSON object whose keys are the field names above (dashes and
/// underscores are interchangeable). Relative file paths are taken relative
/// to the config file. Throws ParseError on unknown keys or wrong types.
RunConfig read_config_file(const std::string& path);

/// Fields set in `flags` win over those in `file`.
RunConfig merge(const RunConfig& flags, const RunConfig& file);

std::uint64_t seed_or_default(const RunConfig& config);

/// Family spec, dense CSV matrix (*.csv) or edge-list file.
StochasticMatrix load_influence(const std::string& source, bool directed, std::uint64_t seed);

/// Assembles the L = 2 model. Throws fjmm::Error subclasses on bad input.
FJMMModel build_model(const RunConfig& config);

std::vector<double> parse_number_list(const std::string& text);

}  // namespace fjmm::cli
