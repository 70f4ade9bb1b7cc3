#include "cli_config.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "fjmm/errors.hpp"
#include "fjmm/experiments.hpp"
#include "fjmm/influence.hpp"
#include "fjmm/io.hpp"

namespace fjmm::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::optional<double> parse_double(const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return v;
}

std::string join_list(const json& value, const std::string& key) {
  if (value.is_string()) return value.get<std::string>();
  if (!value.is_array()) throw ParseError("config key '" + key + "' must be a list or a string");
  std::string out;
  for (const auto& item : value) {
    if (!item.is_number()) throw ParseError("config key '" + key + "' must list numbers");
    if (!out.empty()) out += ',';
    out += io::format_number(item.get<double>());
  }
  return out;
}

std::string scalar_or_path(const json& value, const std::string& key, const fs::path& base) {
  if (value.is_number()) return io::format_number(value.get<double>());
  if (!value.is_string()) throw ParseError("config key '" + key + "' must be a number or a path");
  const std::string text = value.get<std::string>();
  if (parse_double(text)) return text;
  const fs::path p(text);
  return p.is_absolute() ? text : (base / p).string();
}

std::string graph_source(const json& value, const std::string& key, const fs::path& base) {
  if (!value.is_string()) throw ParseError("config key '" + key + "' must be a string");
  const std::string text = value.get<std::string>();
  if (GraphSpec::is_family_spec(text)) return text;
  const fs::path p(text);
  return p.is_absolute() ? text : (base / p).string();
}

template <typename T>
T typed(const json& value, const std::string& key) {
  try {
    return value.get<T>();
  } catch (const json::exception&) {
    throw ParseError("config key '" + key + "' has the wrong type");
  }
}

Vector per_node(const std::string& text, int n, const std::string& what) {
  if (const auto v = parse_double(text)) return Vector::Constant(n, *v);
  const Vector values = io::read_vector_file(text);
  if (values.size() != n) {
    throw InvalidParameter(what + " file '" + text + "' has " + std::to_string(values.size()) +
                           " entries, the graph has " + std::to_string(n) + " nodes");
  }
  return values;
}

}  // namespace

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    token.erase(0, token.find_first_not_of(" \t"));
    token.erase(token.find_last_not_of(" \t") + 1);
    const auto v = parse_double(token);
    if (!v) throw ParseError("'" + token + "' is not a number in list '" + text + "'");
    out.push_back(*v);
  }
  if (out.empty()) throw ParseError("empty number list");
  return out;
}

RunConfig read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ParseError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) throw ParseError("config file '" + path + "' must hold a JSON object");

  const fs::path base = fs::path(path).parent_path();
  RunConfig c;
  for (const auto& [raw_key, value] : doc.items()) {
    std::string key = raw_key;
    std::replace(key.begin(), key.end(), '-', '_');
    if (key == "graph") {
      c.graph = graph_source(value, key, base);
    } else if (key == "lagged_graph") {
      c.lagged_graph = graph_source(value, key, base);
    } else if (key == "directed") {
      c.directed = typed<bool>(value, key);
    } else if (key == "use_case") {
      c.use_case = typed<std::string>(value, key);
    } else if (key == "beta") {
      c.beta = scalar_or_path(value, key, base);
    } else if (key == "alpha1") {
      c.alpha1 = typed<double>(value, key);
    } else if (key == "lambda") {
      c.lambda = scalar_or_path(value, key, base);
    } else if (key == "stubborn") {
      c.stubborn = join_list(value, key);
    } else if (key == "innate") {
      const std::string text = typed<std::string>(value, key);
      c.innate = text == "polarized" || fs::path(text).is_absolute() ? text : (base / text).string();
    } else if (key == "seed") {
      c.seed = typed<std::uint64_t>(value, key);
    } else if (key == "out") {
      c.out = typed<std::string>(value, key);
    } else if (key == "tol") {
      c.tol = typed<double>(value, key);
    } else if (key == "horizon") {
      c.horizon = typed<int>(value, key);
    } else if (key == "equilibrium") {
      c.equilibrium = typed<bool>(value, key);
    } else if (key == "sigma") {
      c.sigma = typed<double>(value, key);
    } else if (key == "grid") {
      c.grid = join_list(value, key);
    } else if (key == "fraction") {
      c.fraction = typed<double>(value, key);
    } else {
      throw ParseError("unknown config key '" + raw_key + "'");
    }
  }
  return c;
}

RunConfig merge(const RunConfig& flags, const RunConfig& file) {
  RunConfig c = file;
  auto take = [](auto& dst, const auto& src) {
    if (src) dst = src;
  };
  take(c.graph, flags.graph);
  take(c.lagged_graph, flags.lagged_graph);
  take(c.directed, flags.directed);
  take(c.use_case, flags.use_case);
  take(c.beta, flags.beta);
  take(c.alpha1, flags.alpha1);
  take(c.lambda, flags.lambda);
  take(c.stubborn, flags.stubborn);
  take(c.innate, flags.innate);
  take(c.seed, flags.seed);
  take(c.out, flags.out);
  take(c.tol, flags.tol);
  take(c.horizon, flags.horizon);
  take(c.equilibrium, flags.equilibrium);
  take(c.sigma, flags.sigma);
  take(c.grid, flags.grid);
  take(c.fraction, flags.fraction);
  // A susceptibility given on the command line replaces the file's, whichever form.
  if (flags.lambda && !flags.stubborn) c.stubborn.reset();
  if (flags.stubborn && !flags.lambda) c.lambda.reset();
  return c;
}

std::uint64_t seed_or_default(const RunConfig& config) {
  return config.seed.value_or(experiments::kDefaultSeed);
}

StochasticMatrix load_influence(const std::string& source, bool directed, std::uint64_t seed) {
  if (GraphSpec::is_family_spec(source)) {
    return row_stochastic(GraphSpec::parse(source, seed).build());
  }
  if (!fs::exists(source)) throw ParseError("graph file '" + source + "' does not exist");
  if (fs::path(source).extension() == ".csv") return StochasticMatrix(io::read_matrix_csv_file(source));
  return row_stochastic(io::read_edge_list_file(source, directed));
}

FJMMModel build_model(const RunConfig& config) {
  if (!config.graph) throw InvalidParameter("no graph source; pass --graph");
  const std::uint64_t seed = seed_or_default(config);
  const bool directed = config.directed.value_or(false);
  const StochasticMatrix w = load_influence(*config.graph, directed, seed);
  const int n = w.size();

  const MemoryWeights beta(per_node(config.beta.value_or("0"), n, "beta"));

  if (config.lambda && config.stubborn) {
    throw InvalidParameter("give either --lambda or --stubborn, not both");
  }
  if (!config.lambda && !config.stubborn) {
    throw InvalidParameter("no susceptibility given; pass --lambda or --stubborn");
  }
  std::optional<SusceptibilityProfile> lambda;
  if (config.lambda) {
    lambda.emplace(per_node(*config.lambda, n, "lambda"));
  } else {
    NodeSet nodes;
    for (double v : parse_number_list(*config.stubborn)) {
      const int node = static_cast<int>(v);
      if (node != v || node < 1 || node > n) {
        throw InvalidParameter("stubborn node " + io::format_number(v) + " is not in 1.." +
                               std::to_string(n));
      }
      nodes.push_back(node - 1);
    }
    lambda.emplace(SusceptibilityProfile::stubborn(n, nodes));
  }

  const std::string innate = config.innate.value_or("polarized");
  Vector s = innate == "polarized" ? polarized_opinions(n) : per_node(innate, n, "innate");

  if (config.lagged_graph) {
    if (config.use_case) throw InvalidParameter("--lagged-graph replaces --use-case; give only one");
    const StochasticMatrix w_tilde = load_influence(*config.lagged_graph, directed, seed);
    if (w_tilde.size() != n) throw InvalidParameter("--lagged-graph size differs from --graph");
    return FJMMModel(decomposed_pair(w, w_tilde, beta), *lambda, std::move(s));
  }

  const UseCase uc = parse_use_case(config.use_case.value_or("two-hop"));
  std::optional<BlendCoefficients> blend;
  if (config.alpha1) {
    blend = BlendCoefficients::from_alpha1(*config.alpha1);
  } else if (uc == UseCase::kBlend) {
    throw InvalidParameter("use case 'blend' needs --alpha1");
  }
  return FJMMModel(use_case_pair(uc, w, beta, blend), *lambda, std::move(s));
}

}  // namespace fjmm::cli
