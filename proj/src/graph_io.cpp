#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "kgshield/graph.hpp"

namespace kgshield {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::string format_weight(double w) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", w);
  return buf;
}

}  // namespace

Graph load_graph(const std::filesystem::path& edge_file,
                 const std::filesystem::path& node_file) {
  std::ifstream in(edge_file);
  if (!in) throw IoError("cannot open " + edge_file.string());

  std::string line;
  if (!std::getline(in, line)) throw ParseError(edge_file.string() + ": empty file");
  auto header = split_csv(line);
  bool weighted;
  if (header.size() == 3 && header[0] == "src" && header[1] == "dst" && header[2] == "weight") {
    weighted = true;
  } else if (header.size() == 2 && header[0] == "src" && header[1] == "dst") {
    weighted = false;
  } else {
    throw ParseError(edge_file.string() + ":1: bad header, expected src,dst[,weight]");
  }

  Graph g(weighted);
  std::unordered_map<std::string, VertexId> by_label;

  if (!node_file.empty()) {
    std::ifstream nin(node_file);
    if (!nin) throw IoError("cannot open " + node_file.string());
    std::string nline;
    if (!std::getline(nin, nline) || split_csv(nline) != std::vector<std::string>{"id", "label"})
      throw ParseError(node_file.string() + ":1: bad header, expected id,label");
    int lineno = 1;
    while (std::getline(nin, nline)) {
      ++lineno;
      if (nline.empty()) continue;
      auto cols = split_csv(nline);
      if (cols.size() != 2)
        throw ParseError(node_file.string() + ":" + std::to_string(lineno) + ": expected 2 columns");
      VertexId v = g.add_vertex(cols[1]);
      by_label.emplace(cols[1], v);  // first occurrence wins for edge resolution
    }
  }

  auto resolve = [&](const std::string& label) {
    auto it = by_label.find(label);
    if (it != by_label.end()) return it->second;
    VertexId v = g.add_vertex(label);
    by_label.emplace(label, v);
    return v;
  };

  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto cols = split_csv(line);
    if (cols.size() != (weighted ? 3u : 2u))
      throw ParseError(edge_file.string() + ":" + std::to_string(lineno) + ": expected " +
                       std::to_string(weighted ? 3 : 2) + " columns");
    VertexId s = resolve(cols[0]);
    VertexId d = resolve(cols[1]);
    if (weighted) {
      double w;
      try {
        std::size_t used = 0;
        w = std::stod(cols[2], &used);
        if (used != cols[2].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ParseError(edge_file.string() + ":" + std::to_string(lineno) + ": bad weight '" +
                         cols[2] + "'");
      }
      if (!(w >= 0.0 && w <= 1.0))
        throw ValidationError(edge_file.string() + ":" + std::to_string(lineno) +
                              ": weight outside [0,1]");
      g.add_edge(s, d, w);
    } else {
      g.add_edge(s, d);
    }
  }
  return g;
}

void save_graph(const Graph& g, const std::filesystem::path& edge_file,
                const std::filesystem::path& node_file) {
  std::vector<std::size_t> order(g.edges().size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const auto& edges = g.edges();
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Edge& ea = edges[a];
    const Edge& eb = edges[b];
    const std::string& sa = g.label(ea.src);
    const std::string& sb = g.label(eb.src);
    if (sa != sb) return sa < sb;
    const std::string& da = g.label(ea.dst);
    const std::string& db = g.label(eb.dst);
    if (da != db) return da < db;
    if (g.weighted() && ea.weight != eb.weight) return ea.weight < eb.weight;
    return a < b;
  });

  std::ofstream out(edge_file);
  if (!out) throw IoError("cannot write " + edge_file.string());
  out << (g.weighted() ? "src,dst,weight\n" : "src,dst\n");
  for (std::size_t i : order) {
    const Edge& e = edges[i];
    out << g.label(e.src) << ',' << g.label(e.dst);
    if (g.weighted()) out << ',' << format_weight(e.weight);
    out << '\n';
  }
  if (!out) throw IoError("failed writing " + edge_file.string());

  if (!node_file.empty()) {
    std::ofstream nout(node_file);
    if (!nout) throw IoError("cannot write " + node_file.string());
    std::vector<VertexId> vs = g.vertices();
    std::sort(vs.begin(), vs.end(),
              [&](VertexId a, VertexId b) { return g.label(a) < g.label(b); });
    nout << "id,label\n";
    std::size_t row = 0;
    for (VertexId v : vs) nout << row++ << ',' << g.label(v) << '\n';
    if (!nout) throw IoError("failed writing " + node_file.string());
  }
}

}  // namespace kgshield
