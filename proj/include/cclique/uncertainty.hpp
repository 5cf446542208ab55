#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cclique/graph.hpp"

namespace cclique {

// Generation record carried alongside generated instances.
struct Provenance {
  std::string base_graph;
  double b = 0.0;
  double p = 0.0;
  std::uint64_t seed = 0;

  bool operator==(const Provenance&) const = default;
};

// A finite family of graphs on a shared vertex set: the adversary's universe.
class UncertaintySet {
 public:
  explicit UncertaintySet(std::vector<Graph> graphs, std::optional<Provenance> provenance = {});

  int member_count() const { return static_cast<int>(graphs_.size()); }
  int vertex_count() const { return graphs_.front().vertex_count(); }
  const Graph& member(int i) const { return graphs_[i]; }
  const std::vector<Graph>& members() const { return graphs_; }
  const std::optional<Provenance>& provenance() const { return provenance_; }

  bool operator==(const UncertaintySet& other) const {
    return graphs_ == other.graphs_ && provenance_ == other.provenance_;
  }

 private:
  std::vector<Graph> graphs_;
  std::optional<Provenance> provenance_;
};

struct InstanceSpec {
  Graph base;
  std::string base_name = "base";
  double b = 1.0;          // backbone fraction in (0, 1]
  double p = 0.0;          // edge-addition probability in [0, 1]
  int m = 1;               // number of realizations
  std::uint64_t seed = 0;
};

// Edge intersection of all members; the backbone seen by a solver.
Graph intersection_graph(const UncertaintySet& us);

// Backbone = uniformly random floor(b*|E|)-subset of the base edges; every
// member contains the backbone plus each remaining base edge independently
// with probability p. Equal specs give bit-identical sets.
UncertaintySet generate_instance(const InstanceSpec& spec);

// Manifest persistence (JSON, 1-based edge indices to match DIMACS
// conventions). `path` may be a directory, in which case instance.json
// inside it is used. Round-trips structurally, provenance included.
void save_instance(const UncertaintySet& us, const std::filesystem::path& path);
UncertaintySet load_instance(const std::filesystem::path& path);

}  // namespace cclique
