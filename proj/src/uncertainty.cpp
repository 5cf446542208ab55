#include "cclique/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace cclique {

UncertaintySet::UncertaintySet(std::vector<Graph> graphs, std::optional<Provenance> provenance)
    : graphs_(std::move(graphs)), provenance_(std::move(provenance)) {
  if (graphs_.empty()) throw std::invalid_argument("UncertaintySet: needs at least one graph");
  const int n = graphs_.front().vertex_count();
  for (const auto& g : graphs_)
    if (g.vertex_count() != n)
      throw std::invalid_argument("UncertaintySet: members disagree on vertex count");
}

Graph intersection_graph(const UncertaintySet& us) {
  std::vector<std::pair<int, int>> common;
  for (const auto& e : us.member(0).edges()) {
    bool everywhere = true;
    for (int k = 1; k < us.member_count() && everywhere; ++k)
      everywhere = us.member(k).has_edge(e.first, e.second);
    if (everywhere) common.push_back(e);
  }
  return Graph(us.vertex_count(), std::move(common));
}

UncertaintySet generate_instance(const InstanceSpec& spec) {
  if (!(spec.b > 0.0 && spec.b <= 1.0)) throw std::invalid_argument("InstanceSpec: b must be in (0,1]");
  if (!(spec.p >= 0.0 && spec.p <= 1.0)) throw std::invalid_argument("InstanceSpec: p must be in [0,1]");
  if (spec.m < 1) throw std::invalid_argument("InstanceSpec: m must be >= 1");

  Rng rng(spec.seed);
  const auto& base_edges = spec.base.edges();
  const std::size_t total = base_edges.size();
  const std::size_t k = static_cast<std::size_t>(std::floor(spec.b * static_cast<double>(total)));

  // Backbone: k distinct base-edge indices via partial Fisher-Yates on the
  // sorted edge list. The draw order is part of the format: changing it
  // changes every seeded instance.
  std::vector<std::size_t> idx(total);
  for (std::size_t i = 0; i < total; ++i) idx[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.next_below(total - i));
    std::swap(idx[i], idx[j]);
  }
  std::vector<bool> in_backbone(total, false);
  for (std::size_t i = 0; i < k; ++i) in_backbone[idx[i]] = true;

  std::vector<std::pair<int, int>> backbone;
  std::vector<std::size_t> addable;
  for (std::size_t i = 0; i < total; ++i) {
    if (in_backbone[i])
      backbone.push_back(base_edges[i]);
    else
      addable.push_back(i);
  }

  std::vector<Graph> members;
  members.reserve(spec.m);
  for (int g = 0; g < spec.m; ++g) {
    std::vector<std::pair<int, int>> edges = backbone;
    for (std::size_t i : addable)
      if (rng.next_double() < spec.p) edges.push_back(base_edges[i]);
    members.emplace_back(spec.base.vertex_count(), std::move(edges));
  }
  return UncertaintySet(std::move(members),
                        Provenance{spec.base_name, spec.b, spec.p, spec.seed});
}

namespace {

constexpr int kManifestVersion = 1;

std::filesystem::path manifest_path(const std::filesystem::path& path) {
  if (std::filesystem::is_directory(path) || path.extension().empty())
    return path / "instance.json";
  return path;
}

}  // namespace

void save_instance(const UncertaintySet& us, const std::filesystem::path& path) {
  nlohmann::json j;
  j["version"] = kManifestVersion;
  j["n"] = us.vertex_count();
  j["m"] = us.member_count();
  if (us.provenance()) {
    j["base_graph"] = us.provenance()->base_graph;
    j["b"] = us.provenance()->b;
    j["p"] = us.provenance()->p;
    j["seed"] = us.provenance()->seed;
  }
  nlohmann::json graphs = nlohmann::json::array();
  for (const auto& g : us.members()) {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [a, b] : g.edges()) edges.push_back({a + 1, b + 1});
    graphs.push_back(std::move(edges));
  }
  j["graphs"] = std::move(graphs);

  const auto target = manifest_path(path);
  if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
  std::ofstream out(target);
  if (!out) throw std::runtime_error("cannot write " + target.string());
  out << j.dump(1) << '\n';
}

UncertaintySet load_instance(const std::filesystem::path& path) {
  const auto target = manifest_path(path);
  std::ifstream in(target);
  if (!in) throw std::runtime_error("cannot open " + target.string());
  nlohmann::json j;
  in >> j;

  if (!j.contains("version") || j["version"].get<int>() != kManifestVersion)
    throw std::runtime_error(target.string() + ": unsupported manifest version");
  const int n = j.at("n").get<int>();
  const int m = j.at("m").get<int>();
  const auto& graphs = j.at("graphs");
  if (static_cast<int>(graphs.size()) != m)
    throw std::runtime_error(target.string() + ": graph count does not match m");

  std::vector<Graph> members;
  members.reserve(m);
  for (const auto& edges : graphs) {
    std::vector<std::pair<int, int>> es;
    es.reserve(edges.size());
    for (const auto& e : edges) {
      const int u = e.at(0).get<int>();
      const int v = e.at(1).get<int>();
      if (u < 1 || u > n || v < 1 || v > n)
        throw std::runtime_error(target.string() + ": edge endpoint outside [1,n] (n mismatch)");
      es.emplace_back(u - 1, v - 1);
    }
    members.emplace_back(n, std::move(es));
  }

  std::optional<Provenance> prov;
  if (j.contains("seed") || j.contains("b") || j.contains("p") || j.contains("base_graph")) {
    prov = Provenance{j.value("base_graph", std::string{}), j.value("b", 0.0), j.value("p", 0.0),
                      j.value("seed", std::uint64_t{0})};
  }
  return UncertaintySet(std::move(members), std::move(prov));
}

}  // namespace cclique
