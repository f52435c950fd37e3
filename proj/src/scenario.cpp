#include "polyreach/scenario.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "polyreach/errors.hpp"
#include "polyreach/polytope.hpp"

namespace polyreach {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw InvalidInput(path + ": " + msg);
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& path) {
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) fail(path, "unknown key \"" + key + "\"");
}

const json& member(const json& obj, const char* key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail(path, std::string("missing key \"") + key + "\"");
  return *it;
}

double as_double(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected a boolean");
  return j.get<bool>();
}

Vec as_vec(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of numbers");
  Vec v;
  v.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    v.push_back(as_double(j[i], path + "[" + std::to_string(i) + "]"));
  return v;
}

Matrix as_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of rows");
  std::vector<Vec> rows;
  rows.reserve(j.size());
  for (std::size_t r = 0; r < j.size(); ++r) {
    rows.push_back(as_vec(j[r], path + "[" + std::to_string(r) + "]"));
    if (rows.back().size() != rows[0].size()) fail(path, "rows have unequal lengths");
  }
  return Matrix::from_rows(rows, static_cast<int>(rows[0].size()));
}

std::vector<std::pair<int, int>> as_edges(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of [a, b] pairs");
  std::vector<std::pair<int, int>> edges;
  edges.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].size() != 2) fail(p, "expected a pair [a, b]");
    edges.emplace_back(as_int(j[i][0], p), as_int(j[i][1], p));
  }
  return edges;
}

std::vector<Vec> as_points(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of points");
  std::vector<Vec> points;
  points.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    points.push_back(as_vec(j[i], path + "[" + std::to_string(i) + "]"));
  return points;
}

PolytopePair as_pair_set(const json& j, int dim, const std::string& path) {
  check_keys(j, {"normals", "offsets", "vertices"}, path);
  const std::vector<Vec> normals = as_points(member(j, "normals", path), path + ".normals");
  const Vec offsets = as_vec(member(j, "offsets", path), path + ".offsets");
  if (normals.size() != offsets.size()) fail(path, "normals and offsets disagree in count");
  std::vector<Halfspace> faces;
  faces.reserve(normals.size());
  for (std::size_t i = 0; i < normals.size(); ++i) faces.emplace_back(normals[i], offsets[i]);
  return PolytopePair{HPolytope(std::move(faces), dim),
                      VPolytope(as_points(member(j, "vertices", path), path + ".vertices"), dim)};
}

/* A set block is {"box": ...}, {"ball": ...}, {"pair": ...}, or, for
 * disturbance sets only, {"vertices": ...}. */
PolytopePair as_initial_set(const json& j, int dim, const std::string& path) {
  if (!j.is_object() || j.size() != 1)
    fail(path, "expected exactly one of \"box\", \"ball\", \"pair\"");
  if (j.contains("box")) {
    const json& b = j["box"];
    check_keys(b, {"lo", "hi"}, path + ".box");
    const Vec lo = as_vec(member(b, "lo", path + ".box"), path + ".box.lo");
    const Vec hi = as_vec(member(b, "hi", path + ".box"), path + ".box.hi");
    if (static_cast<int>(lo.size()) != dim) fail(path + ".box", "dimension mismatch");
    return box(lo, hi);
  }
  if (j.contains("ball")) {
    const json& b = j["ball"];
    check_keys(b, {"rho", "resolution"}, path + ".ball");
    const double rho = as_double(member(b, "rho", path + ".ball"), path + ".ball.rho");
    const int res =
        b.contains("resolution") ? as_int(b["resolution"], path + ".ball.resolution") : 16;
    return ball(rho, dim, res);
  }
  if (j.contains("pair")) return as_pair_set(j["pair"], dim, path + ".pair");
  fail(path, "expected one of \"box\", \"ball\", \"pair\"");
}

std::pair<VPolytope, std::optional<HPolytope>> as_disturbance_set(const json& j, int dim,
                                                                  const std::string& path) {
  if (j.is_object() && j.size() == 1 && j.contains("vertices"))
    return {VPolytope(as_points(j["vertices"], path + ".vertices"), dim), std::nullopt};
  const PolytopePair pair = as_initial_set(j, dim, path);
  return {pair.vertices, pair.faces};
}

AgentModel as_agent(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  check_keys(j, {"A", "B", "B1", "K_self", "K", "X0", "W"}, path);
  Matrix a = as_matrix(member(j, "A", path), path + ".A");
  Matrix b = as_matrix(member(j, "B", path), path + ".B");
  Matrix b1 = as_matrix(member(j, "B1", path), path + ".B1");
  Matrix k_self = as_matrix(member(j, "K_self", path), path + ".K_self");

  std::map<int, Matrix> gains;
  if (j.contains("K")) {
    const json& k = j["K"];
    if (!k.is_object()) fail(path + ".K", "expected an object mapping neighbor id to a matrix");
    for (const auto& [key, value] : k.items()) {
      int id = 0;
      try {
        std::size_t used = 0;
        id = std::stoi(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        fail(path + ".K", "key \"" + key + "\" is not an agent id");
      }
      gains.emplace(id, as_matrix(value, path + ".K." + key));
    }
  }

  const int nx = a.rows();
  const int nw = b1.cols();
  PolytopePair x0 = as_initial_set(member(j, "X0", path), nx, path + ".X0");
  auto [w, w_faces] = as_disturbance_set(member(j, "W", path), nw, path + ".W");
  return AgentModel{std::move(a),      std::move(b),  std::move(b1), std::move(k_self),
                    std::move(gains),  std::move(x0), std::move(w),  std::move(w_faces)};
}

int line_of_byte(const std::string& text, std::size_t byte) {
  const std::size_t end = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + end, '\n'));
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(origin + ":" + std::to_string(line_of_byte(text, e.byte)),
         "parse error: " + std::string(e.what()));
  }
  if (!root.is_object()) fail(origin, "top level must be an object");
  check_keys(root,
             {"name", "graph", "schedule", "agents", "t0", "tau", "dt", "dle_tol",
              "dle_max_iter", "consensus_rounds", "use_vertex_shares", "disturbance_mode",
              "integrator", "seed", "samples"},
             origin);

  const json& gj = member(root, "graph", origin);
  check_keys(gj, {"nodes", "edges"}, origin + ".graph");
  const int nodes = as_int(member(gj, "nodes", origin + ".graph"), origin + ".graph.nodes");
  Graph graph(nodes, as_edges(member(gj, "edges", origin + ".graph"), origin + ".graph.edges"));

  const json& aj = member(root, "agents", origin);
  if (!aj.is_array() || aj.empty()) fail(origin + ".agents", "expected a non-empty array");
  if (static_cast<int>(aj.size()) != nodes)
    fail(origin + ".agents", "agent count disagrees with graph.nodes");
  std::vector<AgentModel> models;
  models.reserve(aj.size());
  for (std::size_t i = 0; i < aj.size(); ++i)
    models.push_back(as_agent(aj[i], origin + ".agents[" + std::to_string(i) + "]"));

  GraphSchedule schedule = GraphSchedule::fixed(graph);
  if (root.contains("schedule")) {
    const json& sj = root["schedule"];
    if (!sj.is_array() || sj.empty())
      fail(origin + ".schedule", "expected a non-empty array of graphs");
    std::vector<Graph> graphs;
    graphs.reserve(sj.size());
    for (std::size_t i = 0; i < sj.size(); ++i) {
      const std::string p = origin + ".schedule[" + std::to_string(i) + "]";
      check_keys(sj[i], {"edges"}, p);
      graphs.emplace_back(nodes, as_edges(member(sj[i], "edges", p), p + ".edges"));
    }
    schedule = GraphSchedule::periodic(std::move(graphs));
  }

  ReachConfig config;
  if (root.contains("t0")) config.t0 = as_double(root["t0"], origin + ".t0");
  if (root.contains("tau")) config.tau = as_double(root["tau"], origin + ".tau");
  if (root.contains("dt")) config.dt = as_double(root["dt"], origin + ".dt");
  if (root.contains("dle_tol")) config.dle_tol = as_double(root["dle_tol"], origin + ".dle_tol");
  if (root.contains("dle_max_iter"))
    config.dle_max_iter = as_int(root["dle_max_iter"], origin + ".dle_max_iter");
  if (root.contains("consensus_rounds"))
    config.consensus_rounds = as_int(root["consensus_rounds"], origin + ".consensus_rounds");
  if (root.contains("use_vertex_shares"))
    config.use_vertex_shares = as_bool(root["use_vertex_shares"], origin + ".use_vertex_shares");
  if (root.contains("disturbance_mode")) {
    const std::string mode = root["disturbance_mode"].is_string()
                                 ? root["disturbance_mode"].get<std::string>()
                                 : "";
    if (mode == "stacked")
      config.disturbance_mode = DisturbanceMode::stacked;
    else if (mode == "product")
      config.disturbance_mode = DisturbanceMode::product;
    else
      fail(origin + ".disturbance_mode", "expected \"stacked\" or \"product\"");
  }
  if (root.contains("integrator")) {
    const std::string kind =
        root["integrator"].is_string() ? root["integrator"].get<std::string>() : "";
    if (kind == "exponential")
      config.integrator = Integrator::exponential;
    else if (kind == "implicit_euler")
      config.integrator = Integrator::implicit_euler;
    else
      fail(origin + ".integrator", "expected \"exponential\" or \"implicit_euler\"");
  }

  std::string name;
  if (root.contains("name")) {
    if (!root["name"].is_string()) fail(origin + ".name", "expected a string");
    name = root["name"].get<std::string>();
  } else {
    name = std::filesystem::path(origin).stem().string();
  }

  std::uint64_t seed = 1;
  if (root.contains("seed")) {
    if (!root["seed"].is_number_integer() || root["seed"].get<std::int64_t>() < 0)
      fail(origin + ".seed", "expected a non-negative integer");
    seed = root["seed"].get<std::uint64_t>();
  }
  int samples = 1000;
  if (root.contains("samples")) {
    samples = as_int(root["samples"], origin + ".samples");
    if (samples < 0) fail(origin + ".samples", "expected a non-negative integer");
  }

  return Scenario{std::move(name), std::move(models), std::move(graph),
                  std::move(schedule), config, seed, samples};
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput(path + ": cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str(), path);
}

}  // namespace polyreach
