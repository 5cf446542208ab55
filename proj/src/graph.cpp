#include "cclique/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace cclique {

Graph::Graph(int n, std::vector<std::pair<int, int>> edges) : n_(n) {
  if (n <= 0) throw std::invalid_argument("Graph: vertex count must be positive");
  for (auto& e : edges) {
    if (e.first == e.second)
      throw std::invalid_argument("Graph: self-loop at vertex " + std::to_string(e.first));
    if (e.first < 0 || e.first >= n || e.second < 0 || e.second >= n)
      throw std::invalid_argument("Graph: edge endpoint out of range");
    if (e.first > e.second) std::swap(e.first, e.second);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);

  adj_.assign(static_cast<std::size_t>(n_) * n_, 0);
  neighbors_.assign(n_, {});
  for (const auto& [i, j] : edges_) {
    adj_[flat(i, j)] = 1;
    adj_[flat(j, i)] = 1;
    neighbors_[i].push_back(j);
    neighbors_[j].push_back(i);
  }
  for (auto& nb : neighbors_) std::sort(nb.begin(), nb.end());
}

namespace {

[[noreturn]] void fail(int line_no, const std::string& what) {
  throw DimacsError("line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

Graph parse_dimacs(std::istream& in) {
  int n = -1;
  std::vector<std::pair<int, int>> edges;
  std::string line;
  int line_no = 0;
  bool have_problem = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;  // blank line
    if (tag == "c") continue;
    if (tag == "p") {
      if (have_problem) fail(line_no, "duplicate problem line");
      std::string kind;
      long long nn = 0, mm = 0;
      if (!(ls >> kind >> nn >> mm)) fail(line_no, "malformed problem line");
      if (kind != "edge") fail(line_no, "expected 'p edge', got 'p " + kind + "'");
      if (nn <= 0) fail(line_no, "vertex count must be positive");
      std::string extra;
      if (ls >> extra) fail(line_no, "trailing tokens on problem line");
      n = static_cast<int>(nn);
      have_problem = true;
    } else if (tag == "e") {
      if (!have_problem) fail(line_no, "edge line before problem line");
      long long u = 0, v = 0;
      if (!(ls >> u >> v)) fail(line_no, "malformed edge line");
      if (u < 1 || u > n || v < 1 || v > n) fail(line_no, "edge index out of [1,n]");
      if (u == v) fail(line_no, "self-loop");
      edges.emplace_back(static_cast<int>(u - 1), static_cast<int>(v - 1));
    } else {
      fail(line_no, "unrecognized line type '" + tag + "'");
    }
  }
  if (!have_problem) throw DimacsError("missing problem line");
  return Graph(n, std::move(edges));
}

Graph parse_dimacs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DimacsError("cannot open " + path);
  return parse_dimacs(in);
}

void write_dimacs(const Graph& g, std::ostream& out) {
  out << "p edge " << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (const auto& [i, j] : g.edges()) out << "e " << i + 1 << ' ' << j + 1 << '\n';
}

Eigen::MatrixXd regularized_matrix(const Graph& g) {
  const int n = g.vertex_count();
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(n, n);
  u.diagonal().setConstant(0.5);
  for (const auto& [i, j] : g.edges()) {
    u(i, j) = 1.0;
    u(j, i) = 1.0;
  }
  return u;
}

Graph random_graph(int n, double p, Rng& rng) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.next_double() < p) edges.emplace_back(i, j);
  return Graph(n, std::move(edges));
}

}  // namespace cclique
