#include "fjmm/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "fjmm/errors.hpp"

namespace fjmm::io {

namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return in;
}

std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

bool blank(const std::string& s) { return s.find_first_not_of(" \t\r") == std::string::npos; }

}  // namespace

InfluenceGraph read_edge_list(std::istream& in, bool directed) {
  struct Row {
    long i, j;
    double w;
  };
  std::vector<Row> rows;
  long declared = 0;
  long max_index = 0;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      std::istringstream header(line.substr(hash + 1));
      std::string key;
      long value = 0;
      if (header >> key >> value && key == "nodes:") declared = value;
    }
    const std::string body = strip_comment(line);
    if (blank(body)) continue;
    std::istringstream fields(body);
    Row r{0, 0, 1.0};
    if (!(fields >> r.i >> r.j)) {
      throw ParseError("edge list line " + std::to_string(line_no) + ": expected 'i j [weight]'");
    }
    if (!(fields >> r.w)) {
      if (!fields.eof()) {
        throw ParseError("edge list line " + std::to_string(line_no) + ": bad weight");
      }
      r.w = 1.0;
    }
    std::string extra;
    if (fields >> extra) {
      throw ParseError("edge list line " + std::to_string(line_no) + ": trailing fields");
    }
    if (r.i < 1 || r.j < 1) {
      throw ParseError("edge list line " + std::to_string(line_no) + ": nodes are 1-indexed");
    }
    max_index = std::max({max_index, r.i, r.j});
    rows.push_back(r);
  }
  const long n = declared > 0 ? declared : max_index;
  if (n < 1) throw ParseError("edge list is empty");
  if (max_index > n) throw ParseError("edge endpoint exceeds declared node count");
  InfluenceGraph g(static_cast<int>(n), directed);
  for (const auto& r : rows) {
    try {
      g.add_edge(static_cast<int>(r.i - 1), static_cast<int>(r.j - 1), r.w);
    } catch (const InvalidParameter& e) {
      throw ParseError(e.what());
    }
  }
  return g;
}

InfluenceGraph read_edge_list_file(const std::string& path, bool directed) {
  auto in = open_input(path);
  return read_edge_list(in, directed);
}

void write_edge_list(std::ostream& out, const InfluenceGraph& g) {
  out << "# nodes: " << g.size() << "\n";
  out << "# " << (g.directed() ? "directed" : "undirected") << "\n";
  for (int i = 0; i < g.size(); ++i) {
    for (const Arc& a : g.out(i)) {
      if (!g.directed() && a.target < i) continue;
      out << i + 1 << ' ' << a.target + 1;
      if (a.weight != 1.0) out << ' ' << format_number(a.weight);
      out << '\n';
    }
  }
}

Matrix read_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = strip_comment(line);
    if (blank(body)) continue;
    std::vector<double> row;
    std::stringstream ss(body);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (!blank(cell.substr(used))) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ParseError("matrix CSV line " + std::to_string(line_no) + ": bad number '" + cell +
                         "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError("matrix CSV line " + std::to_string(line_no) + ": ragged row");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("matrix CSV is empty");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Matrix read_matrix_csv_file(const std::string& path) {
  auto in = open_input(path);
  return read_matrix_csv(in);
}

void write_matrix_csv(std::ostream& out, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_number(m(i, j));
    }
    out << '\n';
  }
}

Vector read_vector_file(const std::string& path) {
  auto in = open_input(path);
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    std::string body = strip_comment(line);
    for (char& c : body) {
      if (c == ',' || c == ';') c = ' ';
    }
    std::istringstream ss(body);
    std::string token;
    while (ss >> token) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(token, &used));
        if (used != token.size()) throw std::invalid_argument(token);
      } catch (const std::exception&) {
        throw ParseError("'" + path + "': bad number '" + token + "'");
      }
    }
  }
  if (values.empty()) throw ParseError("'" + path + "' holds no numbers");
  return Eigen::Map<Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
  out << 't';
  for (int i = 1; i <= trajectory.nodes(); ++i) out << ",x_" << i;
  out << '\n';
  int t = trajectory.first_time();
  for (const auto& x : trajectory.states()) {
    out << t++;
    for (Eigen::Index i = 0; i < x.size(); ++i) out << ',' << format_number(x[i]);
    out << '\n';
  }
}

std::string format_number(double value, int digits) {
  char buf[64];
  // Shortest of %.{p}g for p <= digits that round-trips at that precision.
  for (int p = 1; p <= digits; ++p) {
    std::snprintf(buf, sizeof buf, "%.*g", p, value);
    if (std::strtod(buf, nullptr) == value) return buf;
  }
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return buf;
}

double round_significant(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return std::strtod(buf, nullptr);
}

nlohmann::json to_json(const StabilityReport& report) {
  nlohmann::json stubborn = nlohmann::json::array();
  for (int i : report.stubborn_set) stubborn.push_back(i + 1);
  return nlohmann::json{
      {"rho_comparison", round_significant(report.rho_comparison)},
      {"rho_augmented", round_significant(report.rho_augmented)},
      {"stubborn_set", stubborn},
      {"globally_reachable", report.globally_reachable},
      {"stable", report.stable},
      {"criteria_agree", report.criteria_agree},
  };
}

}  // namespace fjmm::io
