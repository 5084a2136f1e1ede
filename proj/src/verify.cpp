#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

#include "kgshield/metrics.hpp"
#include "kgshield/subiso.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace kgshield {

namespace {

std::string verts_to_string(const Graph& g, const std::vector<VertexId>& vs) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < vs.size(); ++i) os << (i ? "," : "") << g.label(vs[i]);
  os << "}";
  return os.str();
}

// All size-x handles of the released graph, bucketed once; the per-NAG check
// searches a bucket for k-1 disjoint, attribute-diverse partners.
struct FamilySearcher {
  const Graph& a;
  int k, x;
  std::vector<HandleKG> handles;
  BucketSet bs;
  std::map<std::vector<VertexId>, int> index;

  FamilySearcher(const Graph& a_, RuleProgram sigma, int k_, int x_, int workers)
      : a(a_), k(k_), x(x_) {
    std::vector<std::vector<VertexId>> sets;
    std::mutex mu;
    for_each_connected_induced_subgraph(
        a, x,
        [&](const std::vector<VertexId>& s) {
          std::lock_guard<std::mutex> lock(mu);
          sets.push_back(s);
        },
        workers);
    std::sort(sets.begin(), sets.end());
    handles.resize(sets.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 64) num_threads(std::max(workers, 1)) if (workers > 1)
#endif
    for (std::size_t i = 0; i < sets.size(); ++i) handles[i] = make_handle(a, sets[i], sigma);
    bs = isomorphism_bucketing(handles);
    for (std::size_t i = 0; i < sets.size(); ++i) index.emplace(handles[i].verts, i);
  }

  struct Pick {
    int handle;
    std::vector<int> perm;  // base position i sits at handles[handle].verts[perm[i]]
  };

  bool diverse(const Pick& p, const Pick& q) const {
    for (int i = 0; i < x; ++i) {
      VertexId u = handles[p.handle].verts[p.perm[i]];
      VertexId w = handles[q.handle].verts[q.perm[i]];
      if (a.label(u) == a.label(w)) return false;
      if (a.in_degree(u) == a.in_degree(w)) return false;
      if (a.out_degree(u) == a.out_degree(w)) return false;
    }
    return true;
  }

  bool extend(const HandleKG& base, const std::vector<int>& members,
              std::vector<Pick>& chosen, std::size_t start, long& budget) const {
    if (static_cast<int>(chosen.size()) == k) return true;
    for (std::size_t m = start; m < members.size(); ++m) {
      int c = members[m];
      bool overlap = false;
      for (const Pick& p : chosen)
        if (p.handle == c || [&] {
              const auto& av = handles[p.handle].verts;
              const auto& bv = handles[c].verts;
              std::size_t i = 0, j = 0;
              while (i < av.size() && j < bv.size()) {
                if (av[i] < bv[j]) ++i;
                else if (bv[j] < av[i]) ++j;
                else return true;
              }
              return false;
            }()) {
          overlap = true;
          break;
        }
      if (overlap) continue;

      bool found = false;
      enumerate_isomorphisms(base, handles[c], [&](const std::vector<int>& perm) {
        if (--budget < 0) return false;
        Pick cand{c, perm};
        for (const Pick& p : chosen)
          if (!diverse(p, cand)) return true;  // try the next variant
        chosen.push_back(std::move(cand));
        if (extend(base, members, chosen, m + 1, budget)) {
          found = true;
          return false;
        }
        chosen.pop_back();
        return budget >= 0;
      });
      if (found) return true;
      if (budget < 0) return false;
    }
    return false;
  }

  bool nag_ok(int h0) const {
    const auto& members = bs.buckets[bs.bucket_of[h0]];
    if (static_cast<int>(members.size()) < k) return false;
    std::vector<int> identity(x);
    for (int i = 0; i < x; ++i) identity[i] = i;
    std::vector<Pick> chosen{{h0, identity}};
    long budget = 500000;
    return extend(handles[h0], members, chosen, 0, budget);
  }
};

// NAG handles: every weakly connected size-x original subset, mapped into
// released-graph ids.
std::vector<int> nag_handles(const Graph& g, const AnonymizationResult& a,
                             const FamilySearcher& fs, int x) {
  std::vector<int> out;
  for (const auto& s : enumerate_connected_induced_subgraphs(g, x)) {
    std::vector<VertexId> mapped;
    mapped.reserve(s.size());
    for (VertexId v : s) mapped.push_back(a.identity_map.at(v));
    std::sort(mapped.begin(), mapped.end());
    auto it = fs.index.find(mapped);
    out.push_back(it == fs.index.end() ? -1 : it->second);
  }
  return out;
}

}  // namespace

VerificationReport verify_kx_anonymisation(const Graph& g, const AnonymizationResult& a,
                                           RuleProgram sigma, int k, int x, int workers) {
  if (x > static_cast<int>(g.vertex_count()))
    throw InvalidParameter("x exceeds the original vertex count");
  VerificationReport rep;
  const Graph& rel = a.released;

  // (1) augmentation: every original vertex and edge survives
  for (VertexId v : g.vertices()) {
    auto it = a.identity_map.find(v);
    if (it == a.identity_map.end() || !rel.has_vertex(it->second)) {
      rep.augmentation = {false, "missing original vertex " + g.label(v)};
      break;
    }
  }
  std::map<std::pair<VertexId, VertexId>, std::vector<double>> orig_pairs, rel_pairs;
  if (rep.augmentation.pass) {
    for (const Edge& e : g.edges())
      orig_pairs[{a.identity_map.at(e.src), a.identity_map.at(e.dst)}].push_back(e.weight);
    for (const Edge& e : rel.edges()) rel_pairs[{e.src, e.dst}].push_back(e.weight);
    for (const auto& [pr, ws] : orig_pairs) {
      auto it = rel_pairs.find(pr);
      if (it == rel_pairs.end() || it->second.size() < ws.size()) {
        rep.augmentation = {false, "missing original edge " + rel.label(pr.first) + "->" +
                                       rel.label(pr.second)};
        break;
      }
    }
  }

  // (2) disjoint label universes
  {
    auto lg = g.label_universe();
    for (const auto& l : rel.label_universe())
      if (lg.count(l)) {
        rep.label_disjoint = {false, "shared label '" + l + "'"};
        break;
      }
  }

  // (3) every surviving original edge carries a changed weight; parallel
  // edges are matched injectively
  if (!g.weighted()) {
    rep.weights_differ = {true, "n/a (unweighted)"};
  } else if (rep.augmentation.pass) {
    for (const auto& [pr, ws] : orig_pairs) {
      const auto& rw = rel_pairs[pr];
      // bipartite matching: original slot -> released slot with differing weight
      std::vector<int> match(rw.size(), -1);
      std::function<bool(std::size_t, std::vector<char>&)> augment =
          [&](std::size_t i, std::vector<char>& seen) {
            for (std::size_t j = 0; j < rw.size(); ++j) {
              if (seen[j] || std::fabs(rw[j] - ws[i]) <= 1e-9) continue;
              seen[j] = 1;
              if (match[j] < 0 || augment(match[j], seen)) {
                match[j] = static_cast<int>(i);
                return true;
              }
            }
            return false;
          };
      bool ok = true;
      for (std::size_t i = 0; i < ws.size() && ok; ++i) {
        std::vector<char> seen(rw.size(), 0);
        ok = augment(i, seen);
      }
      if (!ok) {
        rep.weights_differ = {false, "unchanged weight on " + rel.label(pr.first) + "->" +
                                         rel.label(pr.second)};
        break;
      }
    }
  }

  // (4) anchored families for every NAG
  {
    FamilySearcher fs(rel, sigma, k, x, workers);
    std::vector<int> nags = nag_handles(g, a, fs, x);
    rep.nags_checked = nags.size();
    std::vector<char> bad(nags.size(), 0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(std::max(workers, 1)) if (workers > 1)
#endif
    for (std::size_t i = 0; i < nags.size(); ++i)
      bad[i] = nags[i] < 0 || !fs.nag_ok(nags[i]);
    for (std::size_t i = 0; i < nags.size(); ++i)
      if (bad[i]) {
        ++rep.nags_failed;
        if (rep.families.pass)
          rep.families = {false, "no family for " + (nags[i] < 0
                                                         ? std::string("unmapped subset")
                                                         : verts_to_string(rel, fs.handles[nags[i]].verts))};
      }
  }
  return rep;
}

double delta_anonymity(const Graph& g, const AnonymizationResult& a, RuleProgram sigma, int k,
                       int x, int workers, std::optional<int> sample, std::uint64_t seed) {
  if (x > static_cast<int>(g.vertex_count()))
    throw InvalidParameter("x exceeds the original vertex count");
  FamilySearcher fs(a.released, sigma, k, x, workers);
  std::vector<int> nags = nag_handles(g, a, fs, x);
  if (nags.empty()) return 1.0;

  std::vector<int> picked;
  if (sample && *sample < static_cast<int>(nags.size())) {
    Rng rng(seed);
    for (std::size_t i : rng.sample_without_replacement(nags.size(), *sample))
      picked.push_back(nags[i]);
  } else {
    picked = nags;
  }

  std::size_t good = 0;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) reduction(+ : good) \
    num_threads(std::max(workers, 1)) if (workers > 1)
#endif
  for (std::size_t i = 0; i < picked.size(); ++i)
    if (picked[i] >= 0 && fs.nag_ok(picked[i])) ++good;
  return static_cast<double>(good) / static_cast<double>(picked.size());
}

}  // namespace kgshield
