#include "cclique/exact.hpp"

#include <algorithm>
#include <stdexcept>

namespace cclique {

namespace {

// Fixed-width bitset over vertices, 64 per word.
class VertexSet {
 public:
  explicit VertexSet(int n) : n_(n), w_((n + 63) / 64, 0) {}

  void add(int i) { w_[i >> 6] |= 1ULL << (i & 63); }
  void remove(int i) { w_[i >> 6] &= ~(1ULL << (i & 63)); }
  bool contains(int i) const { return (w_[i >> 6] >> (i & 63)) & 1ULL; }
  bool empty() const {
    for (auto x : w_)
      if (x) return false;
    return true;
  }
  int count() const {
    int c = 0;
    for (auto x : w_) c += __builtin_popcountll(x);
    return c;
  }
  void intersect_with(const VertexSet& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
  }
  template <class Fn>
  void for_each(Fn fn) const {
    for (std::size_t b = 0; b < w_.size(); ++b) {
      std::uint64_t x = w_[b];
      while (x) {
        const int i = static_cast<int>(b << 6) + __builtin_ctzll(x);
        fn(i);
        x &= x - 1;
      }
    }
  }

 private:
  int n_;
  std::vector<std::uint64_t> w_;
};

// Smallest-last (degeneracy) ordering; min-degree ties broken by index.
std::vector<int> degeneracy_order(const Graph& g) {
  const int n = g.vertex_count();
  std::vector<int> deg(n);
  std::vector<bool> removed(n, false);
  for (int i = 0; i < n; ++i) deg[i] = g.degree(i);
  std::vector<int> order;
  order.reserve(n);
  for (int step = 0; step < n; ++step) {
    int best = -1;
    for (int i = 0; i < n; ++i)
      if (!removed[i] && (best < 0 || deg[i] < deg[best])) best = i;
    removed[best] = true;
    order.push_back(best);
    for (int j : g.neighbors(best))
      if (!removed[j]) --deg[j];
  }
  return order;
}

class BranchAndBound {
 public:
  BranchAndBound(const Graph& g, std::uint64_t budget) : g_(g), budget_(budget) {
    const int n = g.vertex_count();
    // Search labels: reverse degeneracy order, so low-degeneracy vertices
    // are expanded last (classic MCQ layout keeps the coloring bound tight).
    const std::vector<int> order = degeneracy_order(g);
    label_to_vertex_.assign(n, 0);
    std::vector<int> vertex_to_label(n, 0);
    for (int i = 0; i < n; ++i) {
      const int v = order[n - 1 - i];
      label_to_vertex_[i] = v;
      vertex_to_label[v] = i;
    }
    adj_.assign(n, VertexSet(n));
    for (const auto& [u, v] : g.edges()) {
      adj_[vertex_to_label[u]].add(vertex_to_label[v]);
      adj_[vertex_to_label[v]].add(vertex_to_label[u]);
    }
  }

  CliqueResult solve() {
    const int n = g_.vertex_count();
    VertexSet all(n);
    for (int i = 0; i < n; ++i) all.add(i);
    std::vector<int> current;
    expand(all, current);

    CliqueResult res;
    res.size = static_cast<int>(best_.size());
    res.vertices.reserve(best_.size());
    for (int lbl : best_) res.vertices.push_back(label_to_vertex_[lbl]);
    std::sort(res.vertices.begin(), res.vertices.end());
    res.nodes_explored = nodes_;
    res.method = CliqueResult::Method::branch_and_bound;
    res.completed = !out_of_budget_;
    return res;
  }

 private:
  void expand(const VertexSet& candidates, std::vector<int>& current) {
    if (out_of_budget_) return;
    if (++nodes_ > budget_) {
      out_of_budget_ = true;
      return;
    }
    if (candidates.empty()) {
      if (current.size() > best_.size()) best_ = current;
      return;
    }

    // Greedy sequential coloring of the candidate set in label order; the
    // color number of a vertex bounds the clique extension through it.
    std::vector<int> verts;
    candidates.for_each([&](int v) { verts.push_back(v); });
    std::vector<int> color(verts.size(), 0);
    {
      std::vector<VertexSet> classes;
      for (std::size_t i = 0; i < verts.size(); ++i) {
        const int v = verts[i];
        std::size_t k = 0;
        for (; k < classes.size(); ++k) {
          bool clash = false;
          classes[k].for_each([&](int u) { clash = clash || adj_[v].contains(u); });
          if (!clash) break;
        }
        if (k == classes.size()) classes.emplace_back(static_cast<int>(adj_.size()));
        classes[k].add(v);
        color[i] = static_cast<int>(k) + 1;
      }
    }

    // Highest colors first; once the bound fails it fails for the rest.
    std::vector<std::size_t> by_color(verts.size());
    for (std::size_t i = 0; i < verts.size(); ++i) by_color[i] = i;
    std::stable_sort(by_color.begin(), by_color.end(),
                     [&](std::size_t a, std::size_t b) { return color[a] < color[b]; });

    VertexSet remaining = candidates;
    for (std::size_t idx = by_color.size(); idx-- > 0;) {
      const int v = verts[by_color[idx]];
      if (current.size() + static_cast<std::size_t>(color[by_color[idx]]) <= best_.size()) return;
      current.push_back(v);
      VertexSet next = remaining;
      next.intersect_with(adj_[v]);
      expand(next, current);
      current.pop_back();
      if (out_of_budget_) return;
      remaining.remove(v);
    }
  }

  const Graph& g_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  bool out_of_budget_ = false;
  std::vector<VertexSet> adj_;
  std::vector<int> label_to_vertex_;
  std::vector<int> best_;
};

bool is_clique_everywhere(const std::vector<int>& vs, const UncertaintySet& us) {
  for (std::size_t a = 0; a < vs.size(); ++a)
    for (std::size_t b = a + 1; b < vs.size(); ++b)
      for (const auto& g : us.members())
        if (!g.has_edge(vs[a], vs[b])) return false;
  return true;
}

}  // namespace

CliqueResult max_clique_exact(const Graph& g, std::uint64_t node_budget) {
  return BranchAndBound(g, node_budget).solve();
}

CliqueResult max_common_clique(const UncertaintySet& us, std::uint64_t node_budget) {
  CliqueResult res = max_clique_exact(intersection_graph(us), node_budget);
  if (!is_clique_everywhere(res.vertices, us))
    throw std::logic_error("max_common_clique: result fails pairwise verification");
  return res;
}

CliqueResult brute_force_common(const UncertaintySet& us) {
  const int n = us.vertex_count();
  if (n > 16) throw std::invalid_argument("brute_force_common: n must be <= 16");

  // Per-member adjacency masks.
  std::vector<std::vector<std::uint32_t>> adj(us.member_count(),
                                              std::vector<std::uint32_t>(n, 0));
  for (int k = 0; k < us.member_count(); ++k)
    for (const auto& [u, v] : us.member(k).edges()) {
      adj[k][u] |= 1u << v;
      adj[k][v] |= 1u << u;
    }

  CliqueResult res;
  res.method = CliqueResult::Method::brute_force;
  const std::uint32_t top = 1u << n;
  for (std::uint32_t mask = 1; mask < top; ++mask) {
    ++res.nodes_explored;
    const int sz = __builtin_popcount(mask);
    if (sz <= res.size) continue;
    bool ok = true;
    for (int k = 0; k < us.member_count() && ok; ++k) {
      for (std::uint32_t rest = mask; rest && ok;) {
        const int i = __builtin_ctz(rest);
        rest &= rest - 1;
        ok = (mask & ~adj[k][i]) == (1u << i);
      }
    }
    if (ok) {
      res.size = sz;
      res.vertices.clear();
      for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) res.vertices.push_back(i);
    }
  }
  return res;
}

double reversed_minmax_value(const UncertaintySet& us, std::uint64_t node_budget) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& g : us.members()) {
    const int omega = max_clique_exact(g, node_budget).size;
    best = std::min(best, 1.0 - 1.0 / (2.0 * omega));
  }
  return best;
}

}  // namespace cclique
