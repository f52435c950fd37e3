#include "polyreach/exports.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "polyreach/errors.hpp"

namespace polyreach {

namespace {

using nlohmann::json;

void require(bool ok, const std::string& msg) {
  if (!ok) throw InvalidInput(msg);
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), path + ": cannot open for writing");
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(line.substr(start));
      return parts;
    }
    parts.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_double(const std::string& token, const std::string& where) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  require(end == begin + token.size() && !token.empty(), where + ": bad number \"" + token + "\"");
  return value;
}

int parse_int(const std::string& token, const std::string& where) {
  const double value = parse_double(token, where);
  const int i = static_cast<int>(value);
  require(i == value, where + ": expected an integer, got \"" + token + "\"");
  return i;
}

int count_prefixed(const std::vector<std::string>& header, const std::string& prefix) {
  int count = 0;
  for (const std::string& h : header)
    if (h.rfind(prefix, 0) == 0) ++count;
  return count;
}

json row_to_json(const TraceRow& row) {
  json j;
  j["agent"] = row.agent;
  j["trace"] = row.trace;
  j["step"] = row.step;
  j["time"] = row.time;
  j["gamma"] = row.gamma;
  j["costate"] = row.costate;
  j["contact"] = row.contact;
  j["w"] = row.disturbance;
  return j;
}

std::vector<TraceRow> load_traces_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), path + ": cannot open file");
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), path + ": empty file");
  const std::vector<std::string> header = split(line, ',');
  const int n = count_prefixed(header, "costate_");
  const int nw = count_prefixed(header, "w_");
  require(n >= 1 && count_prefixed(header, "contact_") == n, path + ": unrecognized header");
  const std::size_t expected = 5 + 2 * static_cast<std::size_t>(n) + nw;
  require(header.size() == expected, path + ": unrecognized header");

  std::vector<TraceRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(lineno);
    const std::vector<std::string> parts = split(line, ',');
    require(parts.size() == expected, where + ": wrong field count");
    TraceRow row;
    row.agent = parse_int(parts[0], where);
    row.trace = parse_int(parts[1], where);
    row.step = parse_int(parts[2], where);
    row.time = parse_double(parts[3], where);
    row.gamma = parse_double(parts[4], where);
    for (int i = 0; i < n; ++i) row.costate.push_back(parse_double(parts[5 + i], where));
    for (int i = 0; i < n; ++i) row.contact.push_back(parse_double(parts[5 + n + i], where));
    bool any = false;
    for (int i = 0; i < nw; ++i) any = any || !parts[5 + 2 * n + i].empty();
    if (any)
      for (int i = 0; i < nw; ++i)
        row.disturbance.push_back(parse_double(parts[5 + 2 * n + i], where));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<TraceRow> load_traces_jsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), path + ": cannot open file");
  std::vector<TraceRow> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(lineno);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw InvalidInput(where + ": parse error: " + e.what());
    }
    try {
      TraceRow row;
      row.agent = j.at("agent").get<int>();
      row.trace = j.at("trace").get<int>();
      row.step = j.at("step").get<int>();
      row.time = j.at("time").get<double>();
      row.gamma = j.at("gamma").get<double>();
      row.costate = j.at("costate").get<Vec>();
      row.contact = j.at("contact").get<Vec>();
      row.disturbance = j.at("w").get<Vec>();
      rows.push_back(std::move(row));
    } catch (const json::exception& e) {
      throw InvalidInput(where + ": " + e.what());
    }
  }
  return rows;
}

}  // namespace

std::vector<TraceRow> flatten_traces(const std::vector<ReachResult>& results) {
  std::vector<TraceRow> rows;
  for (const ReachResult& res : results) {
    for (int j = 0; j < static_cast<int>(res.traces.size()); ++j) {
      const HyperplaneTrace& tr = res.traces[j];
      for (int k = 0; k <= res.steps(); ++k) {
        TraceRow row;
        row.agent = res.agent;
        row.trace = j;
        row.step = k;
        row.time = res.times[k];
        row.gamma = tr.support_offset[k];
        row.costate = tr.costate[k];
        row.contact = tr.contact[k];
        if (k > 0) row.disturbance = tr.disturbance[k - 1];
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

void write_traces_csv(const std::string& path, const std::vector<TraceRow>& rows) {
  require(!rows.empty(), "no trace rows to write");
  const int n = static_cast<int>(rows[0].costate.size());
  int nw = 0;
  for (const TraceRow& row : rows)
    nw = std::max(nw, static_cast<int>(row.disturbance.size()));

  std::ofstream out = open_out(path);
  out << "agent,trace,step,time,gamma";
  for (int i = 0; i < n; ++i) out << ",costate_" << i;
  for (int i = 0; i < n; ++i) out << ",contact_" << i;
  for (int i = 0; i < nw; ++i) out << ",w_" << i;
  out << "\n";
  for (const TraceRow& row : rows) {
    require(static_cast<int>(row.costate.size()) == n &&
                static_cast<int>(row.contact.size()) == n,
            "trace rows disagree in dimension");
    require(row.disturbance.empty() || static_cast<int>(row.disturbance.size()) == nw,
            "trace rows disagree in disturbance dimension");
    out << row.agent << ',' << row.trace << ',' << row.step << ',' << fmt(row.time) << ','
        << fmt(row.gamma);
    for (double x : row.costate) out << ',' << fmt(x);
    for (double x : row.contact) out << ',' << fmt(x);
    for (int i = 0; i < nw; ++i) {
      out << ',';
      if (!row.disturbance.empty()) out << fmt(row.disturbance[i]);
    }
    out << "\n";
  }
}

void write_traces_jsonl(const std::string& path, const std::vector<TraceRow>& rows) {
  std::ofstream out = open_out(path);
  for (const TraceRow& row : rows) out << row_to_json(row).dump() << "\n";
}

std::vector<TraceRow> load_traces(const std::string& path) {
  const std::string ext = std::filesystem::path(path).extension().string();
  if (ext == ".csv") return load_traces_csv(path);
  if (ext == ".jsonl") return load_traces_jsonl(path);
  throw InvalidInput(path + ": expected a .csv or .jsonl trace file");
}

void write_outer_json(const std::string& dir, const std::vector<ReachResult>& results) {
  require(!results.empty(), "no results to write");
  const int steps = results[0].steps();
  for (int k = 0; k <= steps; ++k) {
    json agents = json::array();
    for (const ReachResult& res : results) {
      json entry;
      entry["agent"] = res.agent;
      json normals = json::array();
      json offsets = json::array();
      json contacts = json::array();
      for (const HyperplaneTrace& tr : res.traces) {
        normals.push_back(tr.costate[k]);
        offsets.push_back(tr.support_offset[k]);
        contacts.push_back(tr.contact[k]);
      }
      entry["normals"] = std::move(normals);
      entry["offsets"] = std::move(offsets);
      entry["contacts"] = std::move(contacts);
      agents.push_back(std::move(entry));
    }
    json j;
    j["step"] = k;
    j["time"] = results[0].times[k];
    j["agents"] = std::move(agents);
    std::ofstream out =
        open_out((std::filesystem::path(dir) / ("outer_k" + std::to_string(k) + ".json")).string());
    out << j.dump(2) << "\n";
  }
}

void write_agent_boxes(const std::string& path, const std::vector<AgentView>& views,
                       const std::vector<double>& times) {
  json agents = json::array();
  for (const AgentView& view : views) {
    json entry;
    entry["agent"] = view.agent;
    entry["times"] = times;
    entry["lower"] = view.lower;
    entry["upper"] = view.upper;
    entry["degenerate"] = view.degenerate;
    agents.push_back(std::move(entry));
  }
  json j;
  j["agents"] = std::move(agents);
  std::ofstream out = open_out(path);
  out << j.dump(2) << "\n";
}

void write_run_report(const std::string& path, const RunSummary& summary) {
  json j;
  j["scenario"] = summary.scenario;
  j["mode"] = summary.mode;
  j["agents"] = summary.agents;
  j["traces"] = summary.traces;
  j["steps"] = summary.steps;
  j["t0"] = summary.t0;
  j["tau"] = summary.tau;
  j["dt"] = summary.dt;
  j["dle_sweeps_total"] = summary.dle_sweeps_total;
  j["consensus_rounds_total"] = summary.consensus_rounds_total;
  j["seed"] = summary.seed;
  j["warnings"] = summary.warnings;
  std::ofstream out = open_out(path);
  out << j.dump(2) << "\n";
}

}  // namespace polyreach
