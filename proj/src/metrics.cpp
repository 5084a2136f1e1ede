#include <algorithm>
#include <cmath>

#include "kgshield/metrics.hpp"

#include "json.hpp"

namespace kgshield {

namespace {

bool needs_reasoning(const std::vector<Query>& queries) {
  for (const Query& q : queries)
    if (q.kind == Query::Kind::HoldingK) return true;
  return false;
}

ReasonedGraph maybe_reason(const Graph& g, RuleProgram sigma, const std::vector<Query>& queries,
                           int workers) {
  if (needs_reasoning(queries)) return reason(g, sigma, workers);
  ReasonedGraph rg;
  rg.ground = g;
  rg.program = sigma;
  return rg;
}

// Released answers pulled back to original vertex ids; answers without a
// preimage get a negative code so they count as released-only.
std::set<std::int64_t> pulled_back(const ReasonedGraph& ra, const Query& q,
                                   const std::map<VertexId, VertexId>& inverse) {
  std::set<std::int64_t> out;
  for (VertexId r : evaluate_query(ra, q)) {
    auto it = inverse.find(r);
    out.insert(it != inverse.end() ? it->second : -(r + 1));
  }
  return out;
}

double utility_core(const Graph& g, RuleProgram sigma, const Graph& a,
                    const std::map<VertexId, VertexId>& inverse,
                    const std::vector<Query>& queries, bool symmetric, int workers) {
  if (queries.empty()) throw InvalidParameter("utility needs at least one query");
  ReasonedGraph rg = maybe_reason(g, sigma, queries, workers);
  ReasonedGraph ra = maybe_reason(a, sigma, queries, workers);

  double total = 0.0;
  for (const Query& q : queries) {
    std::set<std::int64_t> qg;
    for (VertexId v : evaluate_query(rg, q)) qg.insert(v);
    std::set<std::int64_t> qa = pulled_back(ra, q, inverse);

    if (symmetric) {
      std::vector<std::int64_t> uni;
      std::set_union(qg.begin(), qg.end(), qa.begin(), qa.end(), std::back_inserter(uni));
      if (uni.empty()) continue;
      std::vector<std::int64_t> sym;
      std::set_symmetric_difference(qg.begin(), qg.end(), qa.begin(), qa.end(),
                                    std::back_inserter(sym));
      total += static_cast<double>(sym.size()) / static_cast<double>(uni.size());
    } else {
      if (qg.empty()) continue;
      std::vector<std::int64_t> lost;
      std::set_difference(qg.begin(), qg.end(), qa.begin(), qa.end(), std::back_inserter(lost));
      total += static_cast<double>(lost.size()) / static_cast<double>(qg.size());
    }
  }
  return total / static_cast<double>(queries.size());
}

std::map<VertexId, VertexId> invert(const std::map<VertexId, VertexId>& m) {
  std::map<VertexId, VertexId> inv;
  for (const auto& [orig, released] : m) inv[released] = orig;
  return inv;
}

}  // namespace

double utility_u(const Graph& g, RuleProgram sigma, const AnonymizationResult& a,
                 const std::vector<Query>& queries) {
  return utility_core(g, sigma, a.released, invert(a.identity_map), queries, false, 1);
}

double utility_sym(const Graph& g, RuleProgram sigma, const AnonymizationResult& a,
                   const std::vector<Query>& queries) {
  return utility_core(g, sigma, a.released, invert(a.identity_map), queries, true, 1);
}

double utility_sym_ids(const Graph& g, RuleProgram sigma, const Graph& a,
                       const std::vector<Query>& queries) {
  std::map<VertexId, VertexId> inverse;
  for (VertexId v : g.vertices()) inverse[v] = v;
  return utility_core(g, sigma, a, inverse, queries, true, 1);
}

double wasserstein1(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw InvalidParameter("wasserstein1 needs nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a.size() == b.size()) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::fabs(a[i] - b[i]);
    return s / static_cast<double>(a.size());
  }
  // unequal sizes: compare on a common quantile grid
  std::size_t grid = std::max(a.size(), b.size());
  auto at = [](const std::vector<double>& v, double q) {
    auto idx = static_cast<std::size_t>(q * static_cast<double>(v.size()));
    return v[std::min(idx, v.size() - 1)];
  };
  double s = 0.0;
  for (std::size_t i = 0; i < grid; ++i) {
    double q = (static_cast<double>(i) + 0.5) / static_cast<double>(grid);
    s += std::fabs(at(a, q) - at(b, q));
  }
  return s / static_cast<double>(grid);
}

double nodes_overhead(const Graph& g, const AnonymizationResult& a) {
  if (g.vertex_count() == 0) throw InvalidParameter("nodes overhead of an empty graph");
  return 100.0 *
         (static_cast<double>(a.released.vertex_count()) -
          static_cast<double>(g.vertex_count())) /
         static_cast<double>(g.vertex_count());
}

std::string MetricsReport::to_json() const {
  nlohmann::ordered_json j;
  auto put = [&](const char* key, const auto& opt) {
    if (opt.has_value()) j[key] = *opt;
    else j[key] = "n/a";
  };
  put("utility_u", utility_u);
  put("utility_sym", utility_sym);
  put("w1_degree", w1_degree);
  put("w1_weight", w1_weight);
  put("nodes_overhead_pct", nodes_overhead_pct);
  put("delta_anonymity", delta_anonymity);
  put("augmentation_intact", augmentation_intact);
  if (sampled.has_value()) j["sampled"] = *sampled;
  return j.dump(2);
}

}  // namespace kgshield
