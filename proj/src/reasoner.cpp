#include "kgshield/reasoner.hpp"

#include <algorithm>
#include <queue>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace kgshield {

RuleProgram rule_program_from_name(const std::string& name) {
  if (name == "none") return RuleProgram::None;
  if (name == "reach") return RuleProgram::Reachability;
  if (name == "control") return RuleProgram::Control;
  if (name == "ultimate") return RuleProgram::UltimateController;
  throw InvalidParameter("unknown rule program '" + name + "'");
}

std::string rule_program_name(RuleProgram p) {
  switch (p) {
    case RuleProgram::None: return "none";
    case RuleProgram::Reachability: return "reach";
    case RuleProgram::Control: return "control";
    case RuleProgram::UltimateController: return "ultimate";
  }
  return "none";
}

namespace {

struct DenseView {
  std::vector<VertexId> ids;
  std::unordered_map<VertexId, int> pos;
  // out adjacency as (target, weight) with parallel edges kept
  std::vector<std::vector<std::pair<int, double>>> out;

  explicit DenseView(const Graph& g) {
    ids = g.vertices();
    pos.reserve(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) pos[ids[i]] = static_cast<int>(i);
    out.resize(ids.size());
    for (const Edge& e : g.edges())
      out[pos[e.src]].emplace_back(pos[e.dst], g.weighted() ? e.weight : 1.0);
  }
};

// Controlled set of one source, as dense indices (source included).
std::vector<int> control_from(const DenseView& dv, int src) {
  const int n = static_cast<int>(dv.ids.size());
  std::vector<char> in_c(n, 0);
  std::vector<double> sum_to(n, 0.0);
  std::vector<int> stack{src};
  std::vector<int> members{src};
  in_c[src] = 1;
  while (!stack.empty()) {
    int y = stack.back();
    stack.pop_back();
    for (auto [z, w] : dv.out[y]) {
      sum_to[z] += w;
      if (!in_c[z] && sum_to[z] > 0.5) {
        in_c[z] = 1;
        stack.push_back(z);
        members.push_back(z);
      }
    }
  }
  return members;
}

}  // namespace

std::set<DerivedPair> reach_closure(const Graph& g) {
  DenseView dv(g);
  const int n = static_cast<int>(dv.ids.size());
  std::set<DerivedPair> out;
  std::vector<char> seen(n);
  for (int s = 0; s < n; ++s) {
    std::fill(seen.begin(), seen.end(), 0);
    std::vector<int> stack;
    seen[s] = 1;
    stack.push_back(s);
    while (!stack.empty()) {
      int y = stack.back();
      stack.pop_back();
      for (auto [z, w] : dv.out[y]) {
        if (w > 0.0 && !seen[z]) {
          seen[z] = 1;
          stack.push_back(z);
        }
      }
    }
    for (int t = 0; t < n; ++t)
      if (seen[t] && t != s) out.emplace(dv.ids[s], dv.ids[t]);
  }
  return out;
}

std::set<DerivedPair> control_closure(const Graph& g, int workers) {
  if (!g.weighted()) throw UnsupportedProgram("control rules require a weighted graph");
  DenseView dv(g);
  const int n = static_cast<int>(dv.ids.size());
  std::vector<std::vector<int>> per_source(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16) num_threads(std::max(workers, 1)) if (workers > 1)
#endif
  for (int s = 0; s < n; ++s) per_source[s] = control_from(dv, s);
  std::set<DerivedPair> out;
  for (int s = 0; s < n; ++s)
    for (int t : per_source[s])
      if (t != s) out.emplace(dv.ids[s], dv.ids[t]);
  return out;
}

std::set<DerivedPair> ultimate_controller(const Graph& g, int workers) {
  std::set<DerivedPair> control = control_closure(g, workers);
  std::set<VertexId> controlled;
  for (const auto& [x, y] : control) controlled.insert(y);
  std::set<DerivedPair> out;
  for (const auto& [x, y] : control)
    if (!controlled.count(x)) out.emplace(x, y);
  return out;
}

ReasonedGraph reason(const Graph& g, RuleProgram sigma, int workers) {
  ReasonedGraph rg;
  rg.ground = g;
  rg.program = sigma;
  switch (sigma) {
    case RuleProgram::None: break;
    case RuleProgram::Reachability: rg.derived = reach_closure(g); break;
    case RuleProgram::Control: rg.derived = control_closure(g, workers); break;
    case RuleProgram::UltimateController: rg.derived = ultimate_controller(g, workers); break;
  }
  return rg;
}

Query query_from_spec(const std::string& spec) {
  if (spec == "two-owns") return Query::two_owns();
  auto colon = spec.find(':');
  if (colon != std::string::npos) {
    std::string head = spec.substr(0, colon);
    std::string arg = spec.substr(colon + 1);
    try {
      if (head == "two-q-owns") {
        double q = std::stod(arg);
        if (q < 0.0 || q > 1.0) throw InvalidParameter("query threshold q outside [0,1]");
        return Query::two_q_owns(q);
      }
      if (head == "holding") {
        int K = std::stoi(arg);
        if (K < 1) throw InvalidParameter("holding K must be >= 1");
        return Query::holding(K);
      }
    } catch (const std::invalid_argument&) {
    }
  }
  throw InvalidParameter("unknown query spec '" + spec + "'");
}

std::string query_spec(const Query& q) {
  switch (q.kind) {
    case Query::Kind::TwoOwns: return "two-owns";
    case Query::Kind::TwoQOwns: {
      char buf[48];
      std::snprintf(buf, sizeof(buf), "two-q-owns:%g", q.q);
      return buf;
    }
    case Query::Kind::HoldingK: return "holding:" + std::to_string(q.K);
  }
  return "two-owns";
}

std::set<VertexId> evaluate_query(const ReasonedGraph& rg, const Query& q) {
  const Graph& g = rg.ground;
  std::set<VertexId> ans;
  switch (q.kind) {
    case Query::Kind::TwoOwns: {
      for (VertexId v : g.vertices()) {
        int count = 0;
        for (EdgeId e : g.out_edges(v))
          if (g.edge(e).dst != v) ++count;
        if (count >= 2) ans.insert(v);
      }
      break;
    }
    case Query::Kind::TwoQOwns: {
      if (!g.weighted()) throw UnsupportedProgram("two-q-owns requires a weighted graph");
      for (VertexId v : g.vertices()) {
        int count = 0;
        for (EdgeId e : g.out_edges(v)) {
          const Edge& ed = g.edge(e);
          if (ed.dst != v && ed.weight > q.q) ++count;
        }
        if (count >= 2) ans.insert(v);
      }
      break;
    }
    case Query::Kind::HoldingK: {
      if (rg.program != RuleProgram::Control)
        throw QueryProgramMismatch("holding:K requires the control program");
      std::unordered_map<VertexId, int> counts;
      for (const auto& [x, y] : rg.derived)
        if (x != y) ++counts[x];
      for (const auto& [x, c] : counts)
        if (c >= q.K) ans.insert(x);
      break;
    }
  }
  return ans;
}

}  // namespace kgshield
