#include "consensus/digraph.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "consensus/errors.hpp"

namespace consensus {

Digraph::Digraph(int n) : n_(n), out_(static_cast<std::size_t>(std::max(n, 0))) {
  if (n < 1) throw ValidationError("digraph needs at least one node");
}

Digraph::Digraph(int n, const std::vector<std::pair<int, int>>& edges) : Digraph(n) {
  for (const auto& [u, v] : edges) add_edge(u, v);
}

void Digraph::add_edge(int from, int to) {
  if (from < 0 || from >= n_ || to < 0 || to >= n_)
    throw ValidationError("edge endpoint out of range: (" + std::to_string(from) +
                          ", " + std::to_string(to) + ")");
  auto& row = out_[static_cast<std::size_t>(from)];
  auto it = std::lower_bound(row.begin(), row.end(), to);
  if (it == row.end() || *it != to) row.insert(it, to);
}

bool Digraph::has_edge(int from, int to) const {
  if (from < 0 || from >= n_ || to < 0 || to >= n_) return false;
  const auto& row = out_[static_cast<std::size_t>(from)];
  return std::binary_search(row.begin(), row.end(), to);
}

std::vector<std::pair<int, int>> Digraph::edges() const {
  std::vector<std::pair<int, int>> result;
  for (int u = 0; u < n_; ++u)
    for (int v : out_[static_cast<std::size_t>(u)]) result.emplace_back(u, v);
  return result;
}

int Digraph::edge_count() const {
  int total = 0;
  for (const auto& row : out_) total += static_cast<int>(row.size());
  return total;
}

std::vector<std::vector<int>> strongly_connected_components(const Digraph& g) {
  const int n = g.size();
  std::vector<int> index(static_cast<std::size_t>(n), -1);
  std::vector<int> low(static_cast<std::size_t>(n), 0);
  std::vector<char> on_stack(static_cast<std::size_t>(n), 0);
  std::vector<int> stack;
  std::vector<std::vector<int>> comps;
  int next_index = 0;

  // Iterative Tarjan: frame = (node, position in its adjacency list).
  struct Frame { int node; std::size_t edge; };
  for (int root = 0; root < n; ++root) {
    if (index[static_cast<std::size_t>(root)] != -1) continue;
    std::vector<Frame> call;
    call.push_back({root, 0});
    index[static_cast<std::size_t>(root)] = low[static_cast<std::size_t>(root)] = next_index++;
    stack.push_back(root);
    on_stack[static_cast<std::size_t>(root)] = 1;
    while (!call.empty()) {
      auto& frame = call.back();
      const auto& adj = g.out(frame.node);
      if (frame.edge < adj.size()) {
        int next = adj[frame.edge++];
        if (index[static_cast<std::size_t>(next)] == -1) {
          index[static_cast<std::size_t>(next)] = low[static_cast<std::size_t>(next)] = next_index++;
          stack.push_back(next);
          on_stack[static_cast<std::size_t>(next)] = 1;
          call.push_back({next, 0});
        } else if (on_stack[static_cast<std::size_t>(next)]) {
          low[static_cast<std::size_t>(frame.node)] =
              std::min(low[static_cast<std::size_t>(frame.node)], index[static_cast<std::size_t>(next)]);
        }
      } else {
        int node = frame.node;
        call.pop_back();
        if (!call.empty()) {
          int parent = call.back().node;
          low[static_cast<std::size_t>(parent)] =
              std::min(low[static_cast<std::size_t>(parent)], low[static_cast<std::size_t>(node)]);
        }
        if (low[static_cast<std::size_t>(node)] == index[static_cast<std::size_t>(node)]) {
          std::vector<int> comp;
          while (true) {
            int w = stack.back();
            stack.pop_back();
            on_stack[static_cast<std::size_t>(w)] = 0;
            comp.push_back(w);
            if (w == node) break;
          }
          std::sort(comp.begin(), comp.end());
          comps.push_back(std::move(comp));
        }
      }
    }
  }
  std::sort(comps.begin(), comps.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return comps;
}

Condensation condense(const Digraph& g) {
  Condensation result;
  result.components = strongly_connected_components(g);
  result.component_of.assign(static_cast<std::size_t>(g.size()), -1);
  for (int c = 0; c < static_cast<int>(result.components.size()); ++c)
    for (int node : result.components[static_cast<std::size_t>(c)])
      result.component_of[static_cast<std::size_t>(node)] = c;
  result.dag = Digraph(static_cast<int>(result.components.size()));
  for (const auto& [u, v] : g.edges()) {
    int cu = result.component_of[static_cast<std::size_t>(u)];
    int cv = result.component_of[static_cast<std::size_t>(v)];
    if (cu != cv) result.dag.add_edge(cu, cv);
  }
  return result;
}

std::vector<std::vector<int>> weak_components(const Digraph& g) {
  const int n = g.size();
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  for (const auto& [u, v] : g.edges()) {
    int ru = find(u), rv = find(v);
    if (ru != rv) parent[static_cast<std::size_t>(std::max(ru, rv))] = std::min(ru, rv);
  }
  std::vector<std::vector<int>> comps;
  std::vector<int> comp_id(static_cast<std::size_t>(n), -1);
  for (int v = 0; v < n; ++v) {
    int r = find(v);
    if (comp_id[static_cast<std::size_t>(r)] == -1) {
      comp_id[static_cast<std::size_t>(r)] = static_cast<int>(comps.size());
      comps.emplace_back();
    }
    comps[static_cast<std::size_t>(comp_id[static_cast<std::size_t>(r)])].push_back(v);
  }
  return comps;
}

std::vector<char> reaches(const Digraph& g, int j) {
  if (j < 0 || j >= g.size()) throw ValidationError("node out of range: " + std::to_string(j));
  // BFS over reversed edges from j.
  std::vector<std::vector<int>> in(static_cast<std::size_t>(g.size()));
  for (const auto& [u, v] : g.edges()) in[static_cast<std::size_t>(v)].push_back(u);
  std::vector<char> seen(static_cast<std::size_t>(g.size()), 0);
  std::vector<int> queue{j};
  seen[static_cast<std::size_t>(j)] = 1;
  while (!queue.empty()) {
    int v = queue.back();
    queue.pop_back();
    for (int u : in[static_cast<std::size_t>(v)]) {
      if (!seen[static_cast<std::size_t>(u)]) {
        seen[static_cast<std::size_t>(u)] = 1;
        queue.push_back(u);
      }
    }
  }
  return seen;
}

bool is_strongly_connected(const Digraph& g) {
  return strongly_connected_components(g).size() == 1;
}

bool is_oriented_toward(const Digraph& g, int j) {
  auto seen = reaches(g, j);
  return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

std::optional<int> orientation_root(const Digraph& g) {
  Condensation c = condense(g);
  std::vector<int> sink_comps = sinks(c.dag);
  if (sink_comps.size() != 1) return std::nullopt;
  const auto& comp = c.components[static_cast<std::size_t>(sink_comps.front())];
  return comp.front();  // components are sorted: smallest witness
}

bool is_completely_reducible(const Digraph& g) {
  Condensation c = condense(g);
  for (const auto& comp : weak_components(g)) {
    int id = c.component_of[static_cast<std::size_t>(comp.front())];
    for (int node : comp)
      if (c.component_of[static_cast<std::size_t>(node)] != id) return false;
  }
  return true;
}

namespace {

bool is_anchored_structural(const Digraph& g, int j) {
  auto reach_j = reaches(g, j);
  // A directed path never leaves the weak component, so reaching j is
  // equivalent to reaching it within j's component.
  Condensation c = condense(g);
  for (const auto& comp : weak_components(g)) {
    bool holds_j = std::find(comp.begin(), comp.end(), j) != comp.end();
    if (holds_j) {
      for (int node : comp)
        if (!reach_j[static_cast<std::size_t>(node)]) return false;
    } else {
      int id = c.component_of[static_cast<std::size_t>(comp.front())];
      for (int node : comp)
        if (c.component_of[static_cast<std::size_t>(node)] != id) return false;
    }
  }
  return true;
}

bool is_anchored_bruteforce(const Digraph& g, int j) {
  const int n = g.size();
  if (n > kMaxEnumerationNodes)
    throw CapabilityError("subset enumeration limited to " +
                          std::to_string(kMaxEnumerationNodes) + " nodes; use the structural method");
  std::vector<int> others;
  for (int v = 0; v < n; ++v)
    if (v != j) others.push_back(v);
  const auto edges = g.edges();
  const std::uint32_t subsets = 1u << others.size();
  for (std::uint32_t mask = 0; mask < subsets; ++mask) {
    std::vector<char> in_set(static_cast<std::size_t>(n), 0);
    in_set[static_cast<std::size_t>(j)] = 1;
    for (std::size_t b = 0; b < others.size(); ++b)
      if (mask & (1u << b)) in_set[static_cast<std::size_t>(others[b])] = 1;
    bool outgoing = false, incoming = false;
    for (const auto& [u, v] : edges) {
      if (in_set[static_cast<std::size_t>(u)] && !in_set[static_cast<std::size_t>(v)]) outgoing = true;
      if (!in_set[static_cast<std::size_t>(u)] && in_set[static_cast<std::size_t>(v)]) incoming = true;
      if (outgoing && incoming) break;
    }
    if (outgoing && !incoming) return false;
  }
  return true;
}

}  // namespace

bool is_anchored(const Digraph& g, int j, AnchorMethod method) {
  if (j < 0 || j >= g.size()) throw ValidationError("node out of range: " + std::to_string(j));
  return method == AnchorMethod::structural ? is_anchored_structural(g, j)
                                            : is_anchored_bruteforce(g, j);
}

std::vector<int> sinks(const Digraph& g) {
  std::vector<int> result;
  for (int u = 0; u < g.size(); ++u) {
    bool has_out = false;
    for (int v : g.out(u)) {
      if (v != u) {
        has_out = true;
        break;
      }
    }
    if (!has_out) result.push_back(u);
  }
  return result;
}

bool is_acyclic(const Digraph& g, bool ignore_self_loops) {
  const int n = g.size();
  std::vector<int> indegree(static_cast<std::size_t>(n), 0);
  for (const auto& [u, v] : g.edges()) {
    if (u == v) {
      if (!ignore_self_loops) return false;
      continue;
    }
    ++indegree[static_cast<std::size_t>(v)];
  }
  std::vector<int> queue;
  for (int v = 0; v < n; ++v)
    if (indegree[static_cast<std::size_t>(v)] == 0) queue.push_back(v);
  int removed = 0;
  while (!queue.empty()) {
    int u = queue.back();
    queue.pop_back();
    ++removed;
    for (int v : g.out(u)) {
      if (v == u) continue;
      if (--indegree[static_cast<std::size_t>(v)] == 0) queue.push_back(v);
    }
  }
  return removed == n;
}

Digraph reverse(const Digraph& g) {
  Digraph r(g.size());
  for (const auto& [u, v] : g.edges()) r.add_edge(v, u);
  return r;
}

Digraph union_graph(std::span<const Digraph> graphs) {
  if (graphs.empty()) throw ValidationError("union of an empty graph list");
  Digraph result(graphs.front().size());
  for (const auto& g : graphs) {
    if (g.size() != result.size()) throw DimensionError("union over mismatched node counts");
    for (const auto& [u, v] : g.edges()) result.add_edge(u, v);
  }
  return result;
}

}  // namespace consensus
