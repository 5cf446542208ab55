#pragma once

#include <cstdint>
#include <vector>

#include "cclique/graph.hpp"
#include "cclique/uncertainty.hpp"

namespace cclique {

struct CliqueResult {
  enum class Method { branch_and_bound, brute_force };

  int size = 0;
  std::vector<int> vertices;  // sorted, pairwise adjacent in the target graph
  std::uint64_t nodes_explored = 0;
  Method method = Method::branch_and_bound;
  bool completed = true;  // false when the node budget ran out (incumbent returned)
};

inline constexpr std::uint64_t kDefaultNodeBudget = 100'000'000;

// Exact maximum clique: branch and bound with a greedy-coloring upper bound
// and degeneracy vertex ordering. Deterministic. When the node budget is
// exhausted, returns the incumbent with completed = false.
CliqueResult max_clique_exact(const Graph& g, std::uint64_t node_budget = kDefaultNodeBudget);

// A common clique is exactly a clique of the intersection graph; the result
// is verified pairwise against every member.
CliqueResult max_common_clique(const UncertaintySet& us,
                               std::uint64_t node_budget = kDefaultNodeBudget);

// Independent oracle: enumerate all vertex subsets (n <= 16).
CliqueResult brute_force_common(const UncertaintySet& us);

// min over members of (1 - 1/(2 omega)): the value of the reversed min-max
// problem, i.e. the adversary picking the member with the smallest clique
// number. Diagnostic only.
double reversed_minmax_value(const UncertaintySet& us,
                             std::uint64_t node_budget = kDefaultNodeBudget);

}  // namespace cclique
