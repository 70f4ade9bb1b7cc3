#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "fjmm/dynamics.hpp"
#include "fjmm/netgen.hpp"
#include "fjmm/spectral.hpp"

namespace fjmm::io {

// Edge list: one "i j [weight]" per line, 1-indexed, '#' starts a comment.
// Reading requires the node count unless a "# nodes: N" header is present;
// otherwise n is the largest index seen.
InfluenceGraph read_edge_list(std::istream& in, bool directed = false);
InfluenceGraph read_edge_list_file(const std::string& path, bool directed = false);
void write_edge_list(std::ostream& out, const InfluenceGraph& g);

// Dense CSV, one row per line.
Matrix read_matrix_csv(std::istream& in);
Matrix read_matrix_csv_file(const std::string& path);
void write_matrix_csv(std::ostream& out, const Matrix& m);

/// Vector file: numbers separated by commas, whitespace or newlines.
Vector read_vector_file(const std::string& path);

/// Header "t,x_1,...,x_n", one row per stored time (history rows at t <= 0).
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

/// Shortest decimal with at most `digits` significant digits.
std::string format_number(double value, int digits = 17);
/// value rounded to 12 significant digits (radii in reports).
double round_significant(double value, int digits = 12);

nlohmann::json to_json(const StabilityReport& report);

}  // namespace fjmm::io
