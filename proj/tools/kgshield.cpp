#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "kgshield/anonymize.hpp"
#include "kgshield/generators.hpp"
#include "kgshield/metrics.hpp"

using namespace kgshield;

namespace {

std::uint64_t default_seed() {
  if (const char* env = std::getenv("KGSHIELD_SEED")) return std::strtoull(env, nullptr, 10);
  return 0;
}

std::vector<Query> parse_queries(const std::vector<std::string>& specs) {
  std::vector<Query> out;
  for (const auto& s : specs) out.push_back(query_from_spec(s));
  return out;
}

void write_mapping(const std::string& path, const Graph& g, const AnonymizationResult& res) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "original,released\n";
  for (const auto& [orig, rel] : res.identity_map)
    out << g.label(orig) << ',' << res.released.label(rel) << '\n';
  std::cerr << "warning: " << path
            << " links released vertices to their real identities; releasing it defeats the "
               "anonymization\n";
}

AnonymizationResult load_result(const Graph& g, const std::string& released_path,
                                const std::string& mapping_path) {
  AnonymizationResult res;
  res.released = load_graph(released_path);
  if (mapping_path.empty()) return res;

  std::map<std::string, VertexId> by_label_g, by_label_rel;
  for (VertexId v : g.vertices()) by_label_g[g.label(v)] = v;
  for (VertexId v : res.released.vertices()) by_label_rel[res.released.label(v)] = v;

  std::ifstream in(mapping_path);
  if (!in) throw IoError("cannot open " + mapping_path);
  std::string line;
  if (!std::getline(in, line) || line != "original,released")
    throw ParseError(mapping_path + ":1: bad header, expected original,released");
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos)
      throw ParseError(mapping_path + ":" + std::to_string(lineno) + ": expected 2 columns");
    auto og = by_label_g.find(line.substr(0, comma));
    auto rl = by_label_rel.find(line.substr(comma + 1));
    if (og == by_label_g.end() || rl == by_label_rel.end())
      throw ValidationError(mapping_path + ":" + std::to_string(lineno) + ": unknown label");
    res.identity_map[og->second] = rl->second;
  }
  return res;
}

AnonymizationResult merge_components(const Graph& g, RuleProgram sigma,
                                     const AnonymizationParams& params, Algo algo) {
  auto comps = weakly_connected_components(g);
  std::vector<AnonymizationResult> sub;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    AnonymizationParams p = params;
    p.seed = Rng::derive_seed(params.seed, 4000 + i);
    Graph part = g.induced_subgraph(comps[i]);
    sub.push_back(algo == Algo::Klone ? klone(part, sigma, p) : kguard(part, sigma, p));
  }
  AnonymizationResult out;
  Graph merged(g.weighted());
  for (std::size_t i = 0; i < sub.size(); ++i) {
    std::map<VertexId, VertexId> remap;
    for (VertexId v : sub[i].released.vertices())
      remap[v] = merged.add_vertex("p" + std::to_string(i) + "_" + std::to_string(v));
    for (const Edge& e : sub[i].released.edges()) {
      EdgeId ne = merged.add_edge(remap[e.src], remap[e.dst], e.weight);
      if (sub[i].synthetic_edges.count(e.id)) out.synthetic_edges.insert(ne);
    }
    for (const auto& [orig, rel] : sub[i].identity_map) out.identity_map[orig] = remap[rel];
    for (VertexId v : sub[i].synthetic_vertices) out.synthetic_vertices.insert(remap[v]);
    for (VertexId v : sub[i].unconstrained_vertices)
      out.unconstrained_vertices.insert(remap[v]);
  }
  FreshLabels labels(g.label_universe(), params.fresh_label_prefix);
  for (VertexId v : merged.vertices()) merged.set_label(v, labels.next());
  out.released = std::move(merged);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kgshield: anonymization toolkit for reasoning-aware knowledge graphs"};
  app.require_subcommand(1);
  app.fallthrough();

  int workers = 1;
  app.add_option("--workers", workers, "worker threads (1 = deterministic serial)");

  // generate
  auto* gen = app.add_subcommand("generate", "generate a random graph");
  std::string model = "erdos", weights = "none", gen_out, gen_nodes;
  int gen_n = 0;
  long gen_m = -1;
  double alpha = 3.0;
  std::uint64_t gen_seed = default_seed();
  bool no_self_loops = false;
  gen->add_option("--model", model, "erdos | powerlaw")
      ->check(CLI::IsMember({"erdos", "powerlaw"}));
  gen->add_option("--n", gen_n, "vertex count")->required();
  gen->add_option("--m", gen_m, "edge count (erdos; default n ln n / 2)");
  gen->add_option("--alpha", alpha, "power-law exponent (powerlaw)");
  gen->add_option("--weights", weights, "none | uniform | economic")
      ->check(CLI::IsMember({"none", "uniform", "economic"}));
  gen->add_option("--seed", gen_seed, "rng seed");
  gen->add_flag("--no-self-loops", no_self_loops, "exclude self-loops (erdos)");
  gen->add_option("-o,--output", gen_out, "edge csv path")->required();
  gen->add_option("--nodes", gen_nodes, "node csv path (id,label)");

  // reason
  auto* rea = app.add_subcommand("reason", "materialize derived edges");
  std::string rea_in, rea_nodes, rea_rules = "none", rea_out;
  rea->add_option("-i,--input", rea_in, "edge csv")->required();
  rea->add_option("--nodes", rea_nodes, "node csv");
  rea->add_option("--rules", rea_rules, "none | reach | control | ultimate");
  rea->add_option("-o,--output", rea_out, "derived edge csv")->required();

  // anonymize
  auto* ano = app.add_subcommand("anonymize", "produce a (k,x)-isomorphism anonymisation");
  std::string ano_in, ano_nodes, algo_name = "klone", ano_rules = "none", ano_out;
  std::string manifest_path, mapping_path, label_prefix = "n";
  std::vector<std::string> query_specs;
  std::vector<double> kde_samples;
  double kde_bandwidth = 0.05, deg_r = 2.0, deg_p = 0.5;
  int ano_k = 2, ano_x = 0, ano_M = 10, split_threshold = 0;
  std::uint64_t ano_seed = default_seed();
  bool per_component = false;
  ano->add_option("-i,--input", ano_in, "edge csv")->required();
  ano->add_option("--nodes", ano_nodes, "node csv");
  ano->add_option("--algo", algo_name, "klone | kguard")
      ->check(CLI::IsMember({"klone", "kguard"}));
  ano->add_option("-k", ano_k, "number of indistinguishable subgraphs")->required();
  ano->add_option("-x", ano_x, "attacker subgraph size (kguard)");
  ano->add_option("--rules", ano_rules, "none | reach | control | ultimate");
  ano->add_option("--queries", query_specs, "utility queries, e.g. two-owns two-q-owns:0.5");
  ano->add_option("-M,--trials", ano_M, "weight noising trials");
  ano->add_option("--seed", ano_seed, "rng seed");
  ano->add_option("--kde-samples", kde_samples, "weight kde sample points (default: uniform)");
  ano->add_option("--kde-bandwidth", kde_bandwidth, "weight kde bandwidth");
  ano->add_option("--deg-r", deg_r, "negative binomial r for degree draws");
  ano->add_option("--deg-p", deg_p, "negative binomial p for degree draws");
  ano->add_option("--label-prefix", label_prefix, "released label prefix");
  ano->add_option("--split", split_threshold, "split-and-merge component cap");
  ano->add_flag("--per-component", per_component, "anonymize each weak component separately");
  ano->add_option("-o,--output", ano_out, "released edge csv")->required();
  ano->add_option("--manifest", manifest_path, "run manifest path (default <output>.manifest.json)");
  ano->add_option("--emit-mapping", mapping_path, "write the private identity map here");

  // verify
  auto* ver = app.add_subcommand("verify", "check the released graph against the definition");
  std::string ver_in, ver_nodes, ver_rel, ver_map, ver_rules = "none";
  int ver_k = 2, ver_x = 2;
  ver->add_option("-i,--input", ver_in, "original edge csv")->required();
  ver->add_option("--nodes", ver_nodes, "node csv");
  ver->add_option("--released", ver_rel, "released edge csv")->required();
  ver->add_option("--mapping", ver_map, "identity map csv")->required();
  ver->add_option("--rules", ver_rules, "rule program");
  ver->add_option("-k", ver_k, "k")->required();
  ver->add_option("-x", ver_x, "x")->required();

  // evaluate
  auto* eva = app.add_subcommand("evaluate", "fidelity, utility and privacy metrics");
  std::string eva_in, eva_nodes, eva_rel, eva_map, eva_rules = "none";
  std::vector<std::string> eva_queries;
  int eva_k = 2, eva_x = 2, eva_sample = 0;
  bool eva_delta = false;
  std::uint64_t eva_seed = default_seed();
  eva->add_option("-i,--input", eva_in, "original edge csv")->required();
  eva->add_option("--nodes", eva_nodes, "node csv");
  eva->add_option("--released", eva_rel, "released edge csv")->required();
  eva->add_option("--mapping", eva_map, "identity map csv");
  eva->add_option("--rules", eva_rules, "rule program");
  eva->add_option("--queries", eva_queries, "utility queries");
  eva->add_flag("--delta", eva_delta, "compute delta-anonymity");
  eva->add_option("-k", eva_k, "k (delta)");
  eva->add_option("-x", eva_x, "x (delta)");
  eva->add_option("--sample", eva_sample, "estimate delta over N sampled subgraphs");
  eva->add_option("--seed", eva_seed, "sampling seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*gen) {
      Graph g = model == "erdos"
                    ? erdos_renyi_directed(gen_n, gen_m < 0 ? std::nullopt
                                                            : std::optional<long>(gen_m),
                                           gen_seed, !no_self_loops)
                    : scale_free(gen_n, alpha, gen_seed);
      WeightMode mode = weights == "uniform"    ? WeightMode::Uniform01
                        : weights == "economic" ? WeightMode::EconomicNormalized
                                                : WeightMode::None;
      if (mode != WeightMode::None) g = assign_weights(g, mode, Rng::derive_seed(gen_seed, 1));
      save_graph(g, gen_out, gen_nodes);
      std::cout << "n=" << g.vertex_count() << " edges=" << g.edge_count()
                << " weighted=" << (g.weighted() ? "yes" : "no") << "\n";
    } else if (*rea) {
      Graph g = load_graph(rea_in, rea_nodes);
      ReasonedGraph rg = reason(g, rule_program_from_name(rea_rules), workers);
      std::ofstream out(rea_out);
      if (!out) throw IoError("cannot write " + rea_out);
      out << "src,dst,kind\n";
      for (const auto& [s, d] : rg.derived)
        out << g.label(s) << ',' << g.label(d) << ',' << rule_program_name(rg.program) << '\n';
      std::cout << "derived=" << rg.derived.size() << "\n";
    } else if (*ano) {
      Graph g = load_graph(ano_in, ano_nodes);
      if (algo_name == "kguard" && ano_x < 1)
        throw InvalidParameter("kguard requires -x");
      AnonymizationParams params;
      params.k = ano_k;
      params.x = std::max(ano_x, 1);
      params.query_set = parse_queries(query_specs);
      params.weight_dist = kde_samples.empty()
                               ? WeightDistribution::uniform01()
                               : WeightDistribution::empirical_kde(kde_samples, kde_bandwidth);
      params.in_degree_dist = DegreeDistribution::negative_binomial(deg_r, deg_p);
      params.out_degree_dist = params.in_degree_dist;
      params.fresh_label_prefix = label_prefix;
      params.M = ano_M;
      params.seed = ano_seed;
      params.workers = workers;
      RuleProgram sigma = rule_program_from_name(ano_rules);
      Algo algo = algo_name == "klone" ? Algo::Klone : Algo::Kguard;

      auto t0 = std::chrono::steady_clock::now();
      AnonymizationResult res;
      if (split_threshold > 0) {
        res = split_and_merge(g, sigma, params, algo, split_threshold);
      } else if (!is_weakly_connected(g)) {
        if (!per_component) {
          std::string sizes;
          for (const auto& c : weakly_connected_components(g))
            sizes += (sizes.empty() ? "" : ",") + std::to_string(c.size());
          throw NotWeaklyConnected("input is disconnected (component sizes " + sizes +
                                   "); pass --per-component or --split");
        }
        res = merge_components(g, sigma, params, algo);
      } else {
        res = algo == Algo::Klone ? klone(g, sigma, params) : kguard(g, sigma, params);
      }
      double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

      save_graph(res.released, ano_out);
      if (!mapping_path.empty()) write_mapping(mapping_path, g, res);

      nlohmann::ordered_json man;
      man["input"] = ano_in;
      man["output"] = ano_out;
      man["algorithm"] = algo_name;
      man["k"] = ano_k;
      if (algo == Algo::Kguard) man["x"] = params.x;
      man["rules"] = ano_rules;
      man["queries"] = query_specs;
      man["trials"] = ano_M;
      man["seed"] = ano_seed;
      man["workers"] = workers;
      if (split_threshold > 0) man["split"] = split_threshold;
      man["original_vertices"] = g.vertex_count();
      man["original_edges"] = g.edge_count();
      man["released_vertices"] = res.released.vertex_count();
      man["released_edges"] = res.released.edge_count();
      man["synthetic_vertices"] = res.synthetic_vertices.size();
      man["synthetic_edges"] = res.synthetic_edges.size();
      man["nodes_overhead_pct"] = nodes_overhead(g, res);
      man["augmentation_intact"] = res.augmentation_intact;
      man["wall_time_s"] = secs;
      if (!mapping_path.empty()) man["mapping"] = mapping_path;
      std::string mpath = manifest_path.empty() ? ano_out + ".manifest.json" : manifest_path;
      std::ofstream mf(mpath);
      if (!mf) throw IoError("cannot write " + mpath);
      mf << man.dump(2) << "\n";
      std::cout << "released n=" << res.released.vertex_count()
                << " edges=" << res.released.edge_count() << " overhead="
                << nodes_overhead(g, res) << "% manifest=" << mpath << "\n";
    } else if (*ver) {
      Graph g = load_graph(ver_in, ver_nodes);
      AnonymizationResult res = load_result(g, ver_rel, ver_map);
      VerificationReport rep = verify_kx_anonymisation(g, res, rule_program_from_name(ver_rules),
                                                       ver_k, ver_x, workers);
      auto line = [](const char* name, const VerificationItem& item) {
        std::cout << (item.pass ? "PASS " : "FAIL ") << name
                  << (item.detail.empty() ? "" : ": " + item.detail) << "\n";
      };
      line("augmentation", rep.augmentation);
      line("label-disjoint", rep.label_disjoint);
      line("weights-differ", rep.weights_differ);
      line("families", rep.families);
      std::cout << "subgraphs checked=" << rep.nags_checked << " failed=" << rep.nags_failed
                << "\n";
      return rep.pass() ? 0 : 1;
    } else if (*eva) {
      Graph g = load_graph(eva_in, eva_nodes);
      AnonymizationResult res = load_result(g, eva_rel, eva_map);
      RuleProgram sigma = rule_program_from_name(eva_rules);
      MetricsReport rep;

      if (!eva_queries.empty()) {
        if (res.identity_map.empty())
          throw InvalidParameter(
              "utility needs --mapping: released answers can only be compared to original ones "
              "through the private identity map");
        auto qs = parse_queries(eva_queries);
        rep.utility_u = utility_u(g, sigma, res, qs);
        rep.utility_sym = utility_sym(g, sigma, res, qs);
      }

      std::vector<double> dg, da;
      for (VertexId v : g.vertices()) {
        dg.push_back(g.in_degree(v));
        dg.push_back(g.out_degree(v));
      }
      for (VertexId v : res.released.vertices()) {
        da.push_back(res.released.in_degree(v));
        da.push_back(res.released.out_degree(v));
      }
      rep.w1_degree = wasserstein1(dg, da);
      if (g.weighted() && res.released.weighted() && g.edge_count() > 0 &&
          res.released.edge_count() > 0) {
        std::vector<double> wg, wa;
        for (const Edge& e : g.edges()) wg.push_back(e.weight);
        for (const Edge& e : res.released.edges()) wa.push_back(e.weight);
        rep.w1_weight = wasserstein1(wg, wa);
      }
      rep.nodes_overhead_pct = nodes_overhead(g, res);

      if (!res.identity_map.empty()) {
        VerificationReport vrep = verify_kx_anonymisation(
            g, res, RuleProgram::None, 1, std::min<int>(1, g.vertex_count()), workers);
        rep.augmentation_intact = vrep.augmentation.pass;
      }
      if (eva_delta) {
        if (res.identity_map.empty()) throw InvalidParameter("delta-anonymity needs --mapping");
        rep.delta_anonymity =
            delta_anonymity(g, res, sigma, eva_k, eva_x, workers,
                            eva_sample > 0 ? std::optional<int>(eva_sample) : std::nullopt,
                            eva_seed);
        if (eva_sample > 0) rep.sampled = eva_sample;
      }
      std::cout << rep.to_json() << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
