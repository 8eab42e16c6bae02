#include "mbvqe/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mbvqe {

void require_keys(const nlohmann::json& j, const std::vector<std::string>& allowed,
                  const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument(where + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw std::invalid_argument(where + ": unknown key \"" + it.key() + "\"");
  }
}

nlohmann::json pattern_to_json(const MeasurementPattern& p) {
  nlohmann::json j;
  j["num_vertices"] = p.og.g.num_vertices();
  auto edges = nlohmann::json::array();
  for (auto [u, v] : p.og.g.edges()) edges.push_back({u, v});
  j["edges"] = edges;
  j["outputs"] = p.og.outputs;
  nlohmann::json meas = nlohmann::json::object();
  for (const auto& [v, spec] : p.measure) {
    nlohmann::json m;
    if (spec.is_parametric())
      m["angle_param"] = spec.param;
    else
      m["fixed_angle"] = spec.fixed_angle;
    meas[std::to_string(v)] = m;
  }
  j["measurements"] = meas;
  j["layers"] = p.layers;
  return j;
}

MeasurementPattern pattern_from_json(const nlohmann::json& j) {
  require_keys(j, {"num_vertices", "edges", "outputs", "measurements", "layers"},
               "pattern");
  MeasurementPattern p;
  const int n = j.at("num_vertices").get<int>();
  p.og.g = Graph(n);
  for (const auto& e : j.at("edges"))
    p.og.g.add_edge(e.at(0).get<int>(), e.at(1).get<int>());
  p.og.outputs = j.at("outputs").get<std::vector<int>>();
  int max_param = -1;
  for (auto it = j.at("measurements").begin(); it != j.at("measurements").end(); ++it) {
    const int v = std::stoi(it.key());
    if (v < 0 || v >= n) throw std::invalid_argument("pattern: vertex out of range");
    MeasureSpec spec;
    require_keys(*it, {"angle_param", "fixed_angle"}, "pattern measurement");
    if (it->contains("angle_param")) {
      spec.param = it->at("angle_param").get<int>();
      max_param = std::max(max_param, spec.param);
    } else {
      spec.fixed_angle = it->at("fixed_angle").get<double>();
    }
    p.measure[v] = spec;
  }
  p.layers = j.at("layers").get<std::vector<std::vector<int>>>();
  p.num_params = max_param + 1;
  // Every non-output vertex needs exactly one spec, and the layers must
  // enumerate the measured set exactly once.
  std::size_t listed = 0;
  for (const auto& layer : p.layers)
    for (int v : layer) {
      if (!p.measure.count(v))
        throw std::invalid_argument("pattern: layered vertex has no measurement");
      ++listed;
    }
  if (listed != p.measure.size())
    throw std::invalid_argument("pattern: layers do not cover the measured set");
  for (int v = 0; v < n; ++v) {
    bool out = p.og.is_output(v);
    if (out && p.measure.count(v))
      throw std::invalid_argument("pattern: output vertex has a measurement");
    if (!out && !p.measure.count(v))
      throw std::invalid_argument("pattern: non-output vertex lacks a measurement");
  }
  return p;
}

nlohmann::json pauli_sum_to_json(const PauliSum& h) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [c, t] : h.terms())
    terms.push_back({{"coeff", c}, {"string", t.str().substr(1)}});
  return {{"num_qubits", h.num_qubits()}, {"terms", terms}};
}

CsvWriter::CsvWriter(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvWriter::add_meta(const std::string& key, const nlohmann::json& value) {
  meta_.emplace_back(key, value.dump());
}

void CsvWriter::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_.size())
    throw std::invalid_argument("CSV row width mismatch");
  rows_.push_back(cells);
}

std::string CsvWriter::str() const {
  std::ostringstream os;
  for (const auto& [k, v] : meta_) os << "# " << k << " = " << v << "\n";
  for (std::size_t i = 0; i < columns_.size(); ++i)
    os << columns_[i] << (i + 1 < columns_.size() ? "," : "\n");
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i)
      os << row[i] << (i + 1 < row.size() ? "," : "\n");
  }
  return os.str();
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  const std::string partial = path + ".partial";
  {
    std::ofstream out(partial, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + partial);
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + partial);
  }
  if (std::rename(partial.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot move " + partial + " to " + path);
}

}  // namespace mbvqe
