#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cclique/rng.hpp"

namespace cclique {

// Simple undirected loopless graph on vertices [0, n). Immutable after
// construction; safe to share read-only across threads.
class Graph {
 public:
  Graph() = default;

  // Edges may appear in any orientation and with duplicates; they are
  // normalized to i < j, deduplicated and sorted. Throws std::invalid_argument
  // on self-loops or endpoints outside [0, n).
  Graph(int n, std::vector<std::pair<int, int>> edges);

  int vertex_count() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  bool has_edge(int i, int j) const { return i != j && adj_[flat(i, j)] != 0; }
  int degree(int i) const { return static_cast<int>(neighbors_[i].size()); }
  const std::vector<int>& neighbors(int i) const { return neighbors_[i]; }

  bool operator==(const Graph& other) const {
    return n_ == other.n_ && edges_ == other.edges_;
  }

 private:
  std::size_t flat(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
  }

  int n_ = 0;
  std::vector<std::pair<int, int>> edges_;   // sorted, first < second
  std::vector<std::uint8_t> adj_;            // n*n adjacency flags
  std::vector<std::vector<int>> neighbors_;  // sorted adjacency lists
};

struct DimacsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// DIMACS .clq format: "c" comments, exactly one "p edge <n> <m>" line,
// "e u v" edge lines with 1-based endpoints. Duplicate edge lines are
// idempotent. Malformed input throws DimacsError with the line number.
Graph parse_dimacs(std::istream& in);
Graph parse_dimacs_file(const std::string& path);
void write_dimacs(const Graph& g, std::ostream& out);

// U = 1/2 I + A: diagonal exactly 1/2, off-diagonal 1 on edges.
Eigen::MatrixXd regularized_matrix(const Graph& g);

// G(n,p): each unordered pair is an edge independently with probability p.
Graph random_graph(int n, double p, Rng& rng);

}  // namespace cclique
