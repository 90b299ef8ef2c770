#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace consensus {

inline constexpr int kMaxEnumerationNodes = 20;

/// Directed graph on nodes 0..n-1. An edge (i, j) reads "i hears of j":
/// agent i's update gives positive weight to agent j's value. Self-loops
/// are allowed and meaningful.
class Digraph {
 public:
  explicit Digraph(int n);
  Digraph(int n, const std::vector<std::pair<int, int>>& edges);

  int size() const { return n_; }
  void add_edge(int from, int to);
  bool has_edge(int from, int to) const;
  const std::vector<int>& out(int from) const { return out_[static_cast<std::size_t>(from)]; }

  /// Edge list in lexicographic order.
  std::vector<std::pair<int, int>> edges() const;
  int edge_count() const;

  bool operator==(const Digraph& other) const = default;

 private:
  int n_ = 0;
  std::vector<std::vector<int>> out_;  // sorted, deduplicated
};

/// Contraction of every strongly connected component to a single node.
/// The component digraph carries no self-loops and is acyclic.
struct Condensation {
  std::vector<std::vector<int>> components;  // sorted by smallest member
  std::vector<int> component_of;             // node -> component index
  Digraph dag{0};
};

std::vector<std::vector<int>> strongly_connected_components(const Digraph& g);
Condensation condense(const Digraph& g);

/// Components of the undirected version of the graph ("connected components"
/// in the model's sense, as opposed to strongly connected ones).
std::vector<std::vector<int>> weak_components(const Digraph& g);

bool is_strongly_connected(const Digraph& g);

/// True iff every node has a directed path to j (a path may be empty).
bool is_oriented_toward(const Digraph& g, int j);

/// Smallest j such that the graph is oriented toward j, if any. A graph is
/// oriented exactly when its condensation has a unique sink component.
std::optional<int> orientation_root(const Digraph& g);

/// True iff every weak component is strongly connected.
bool is_completely_reducible(const Digraph& g);

enum class AnchorMethod { structural, bruteforce };

/// True iff no node subset containing j has an outgoing edge but no incoming
/// edge. Structurally equivalent to: j's weak component is oriented toward j
/// and every other weak component is strongly connected. The bruteforce
/// method enumerates all 2^(n-1) subsets and requires n <= 20.
bool is_anchored(const Digraph& g, int j, AnchorMethod method = AnchorMethod::structural);

/// Nodes with no outgoing edge to a different node; self-loops ignored.
std::vector<int> sinks(const Digraph& g);

/// Acyclicity test; self-loops ignored by default, matching how the
/// condensation is consumed.
bool is_acyclic(const Digraph& g, bool ignore_self_loops = true);

Digraph reverse(const Digraph& g);
Digraph union_graph(std::span<const Digraph> graphs);

/// Nodes from which j is reachable (always contains j itself).
std::vector<char> reaches(const Digraph& g, int j);

}  // namespace consensus
