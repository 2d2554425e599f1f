#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "pmod/digraph.hpp"
#include "pmod/engine.hpp"
#include "pmod/error.hpp"
#include "pmod/multiset.hpp"

namespace pmod {

/// Flow predecessors (p_j objects) and successors (c_j objects) per cell.
struct FlowSolution {
  std::vector<std::set<CellId>> preds;  // preds[i - 1] = P_i
  std::vector<std::set<CellId>> succs;  // succs[i - 1] = C_i
  std::size_t k = 0;

  FlowSolution() = default;
  explicit FlowSolution(CellId n) : preds(n), succs(n) {}

  [[nodiscard]] CellId size() const noexcept { return static_cast<CellId>(succs.size()); }
  [[nodiscard]] const std::set<CellId>& P(CellId i) const { return preds.at(i - 1); }
  [[nodiscard]] const std::set<CellId>& C(CellId i) const { return succs.at(i - 1); }
  [[nodiscard]] std::set<CellId>& P(CellId i) { return preds.at(i - 1); }
  [[nodiscard]] std::set<CellId>& C(CellId i) { return succs.at(i - 1); }

  void add_arc(CellId u, CellId v) {
    C(u).insert(v);
    P(v).insert(u);
  }

  [[nodiscard]] std::vector<Arc> arcs() const {
    std::vector<Arc> out;
    for (CellId u = 1; u <= size(); ++u) {
      for (CellId v : C(u)) out.emplace_back(u, v);
    }
    return out;
  }

  friend bool operator==(const FlowSolution&, const FlowSolution&) = default;
};

namespace detail {

/// Unit-capacity network searched with depth-first augmenting paths.
///
/// The residual structure is kept as a flow flag per arc. From node u the
/// search may follow a free arc (u, v) or push back flow on an arc (v, u);
/// when both lead to v the pushback is taken, so antiparallel flow never
/// builds up. Neighbors are tried in ascending node order and visit marks
/// are cleared between stages.
class UnitNetwork {
 public:
  explicit UnitNetwork(std::size_t nodes) : out_(nodes), in_(nodes) {}

  void add_arc(std::size_t u, std::size_t v) {
    arcs_.push_back({u, v, false});
    out_[u].push_back(arcs_.size() - 1);
    in_[v].push_back(arcs_.size() - 1);
  }

  // With `resume`, each stage scans the source's arcs starting just after
  // the arc that succeeded in the previous stage.
  std::size_t max_flow(std::size_t s, std::size_t t, bool resume) {
    finalize();
    std::size_t k = 0;
    std::size_t start = 0;
    for (;;) {
      std::vector<char> visited(out_.size(), 0);
      visited[s] = 1;
      std::optional<std::size_t> found;
      const auto& source_moves = moves_[s];
      for (std::size_t pos = resume ? start : 0; pos < source_moves.size(); ++pos) {
        const Move& m = source_moves[pos];
        if (!usable(m)) continue;
        if (visited[m.to]) continue;
        apply(m);
        if (m.to == t || dfs(m.to, t, visited)) {
          found = pos;
          break;
        }
        revert(m);
      }
      if (!found) break;
      ++k;
      start = *found + 1;
    }
    return k;
  }

  [[nodiscard]] std::vector<std::pair<std::size_t, std::size_t>> flow_arcs() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (const auto& a : arcs_) {
      if (a.flow) out.emplace_back(a.from, a.to);
    }
    return out;
  }

 private:
  struct ArcState {
    std::size_t from;
    std::size_t to;
    bool flow;
  };

  struct Move {
    std::size_t to;
    std::size_t arc;
    bool pushback;
  };

  void finalize() {
    moves_.assign(out_.size(), {});
    for (std::size_t u = 0; u < out_.size(); ++u) {
      auto& mv = moves_[u];
      for (std::size_t a : in_[u]) mv.push_back({arcs_[a].from, a, true});
      for (std::size_t a : out_[u]) mv.push_back({arcs_[a].to, a, false});
      std::stable_sort(mv.begin(), mv.end(), [](const Move& x, const Move& y) {
        if (x.to != y.to) return x.to < y.to;
        return x.pushback > y.pushback;
      });
    }
  }

  [[nodiscard]] bool usable(const Move& m) const {
    return m.pushback ? arcs_[m.arc].flow : !arcs_[m.arc].flow;
  }

  void apply(const Move& m) { arcs_[m.arc].flow = !m.pushback; }
  void revert(const Move& m) { arcs_[m.arc].flow = m.pushback; }

  bool dfs(std::size_t u, std::size_t t, std::vector<char>& visited) {
    visited[u] = 1;
    const auto& mv = moves_[u];
    for (const Move& m : mv) {
      if (visited[m.to] || !usable(m)) continue;
      apply(m);
      if (m.to == t || dfs(m.to, t, visited)) return true;
      revert(m);
    }
    return false;
  }

  std::vector<ArcState> arcs_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
  std::vector<std::vector<Move>> moves_;
};

// Removes directed cycles (including 2-cycles) from a unit flow; the s-t
// value is unchanged.
inline void cancel_cycles(FlowSolution& sol) {
  const CellId n = sol.size();
  for (;;) {
    std::vector<int> color(n + 1, 0);
    std::vector<CellId> stack;
    std::optional<std::vector<CellId>> cycle;
    std::function<bool(CellId)> visit = [&](CellId u) {
      color[u] = 1;
      stack.push_back(u);
      for (CellId v : sol.C(u)) {
        if (color[v] == 1) {
          auto from = std::find(stack.begin(), stack.end(), v);
          cycle = std::vector<CellId>(from, stack.end());
          return true;
        }
        if (color[v] == 0 && visit(v)) return true;
      }
      stack.pop_back();
      color[u] = 2;
      return false;
    };
    for (CellId u = 1; u <= n && !cycle; ++u) {
      if (color[u] == 0) visit(u);
    }
    if (!cycle) return;
    const auto& c = *cycle;
    for (std::size_t i = 0; i < c.size(); ++i) {
      const CellId u = c[i];
      const CellId v = c[(i + 1) % c.size()];
      sol.C(u).erase(v);
      sol.P(v).erase(u);
    }
  }
}

inline void require_distinct_endpoints(const Digraph& g, CellId s, CellId t) {
  const CellId n = g.size();
  if (s < 1 || s > n || t < 1 || t > n) throw InputError("source/target outside [1, " + std::to_string(n) + "]");
  if (s == t) throw InputError("source and target must differ");
}

}  // namespace detail

struct FlowResult {
  std::size_t k = 0;
  FlowSolution solution;
};

/// Maximum number of arc-disjoint s-t paths in the symmetric search digraph.
[[nodiscard]] inline FlowResult max_edge_disjoint(const Digraph& g, CellId s, CellId t, bool resume = false) {
  detail::require_distinct_endpoints(g, s, t);
  detail::UnitNetwork net(g.size());
  for (const auto& [u, v] : g.search_arcs()) net.add_arc(u - 1, v - 1);
  FlowResult r;
  r.k = net.max_flow(s - 1, t - 1, resume);
  r.solution = FlowSolution(g.size());
  for (const auto& [u, v] : net.flow_arcs()) r.solution.add_arc(static_cast<CellId>(u + 1), static_cast<CellId>(v + 1));
  detail::cancel_cycles(r.solution);
  r.solution.k = r.k;
  return r;
}

/// Maximum number of internally node-disjoint s-t paths, computed on the
/// split network where every cell other than s and t becomes entry -> exit.
[[nodiscard]] inline FlowResult max_node_disjoint(const Digraph& g, CellId s, CellId t) {
  detail::require_distinct_endpoints(g, s, t);
  const CellId n = g.size();
  auto entry = [&](CellId v) -> std::size_t { return 2 * (v - 1); };
  auto exit = [&](CellId v) -> std::size_t { return (v == s || v == t) ? 2 * (v - 1) : 2 * (v - 1) + 1; };

  detail::UnitNetwork net(2 * n);
  for (CellId v = 1; v <= n; ++v) {
    if (v != s && v != t) net.add_arc(entry(v), exit(v));
  }
  for (const auto& [u, v] : g.search_arcs()) net.add_arc(exit(u), entry(v));

  FlowResult r;
  r.k = net.max_flow(entry(s), entry(t), false);
  r.solution = FlowSolution(n);
  for (const auto& [a, b] : net.flow_arcs()) {
    const auto u = static_cast<CellId>(a / 2 + 1);
    const auto v = static_cast<CellId>(b / 2 + 1);
    if (u != v) r.solution.add_arc(u, v);
  }
  detail::cancel_cycles(r.solution);
  r.solution.k = r.k;
  return r;
}

/// Size of the smallest cell set, excluding s and t, whose removal cuts every
/// s-t path of the search digraph. nullopt when s and t are adjacent (no
/// such set exists). Exponential; limited to 12 cells.
[[nodiscard]] inline std::optional<std::size_t> min_node_cut_bruteforce(const Digraph& g, CellId s, CellId t) {
  detail::require_distinct_endpoints(g, s, t);
  const CellId n = g.size();
  if (n > 12) throw InputError("brute-force node cut is limited to 12 cells, got " + std::to_string(n));
  if (g.adjacent(s, t)) return std::nullopt;

  std::vector<CellId> interior;
  for (CellId v = 1; v <= n; ++v) {
    if (v != s && v != t) interior.push_back(v);
  }
  auto connected = [&](std::uint32_t removed_mask) {
    std::vector<char> seen(n + 1, 0);
    for (std::size_t i = 0; i < interior.size(); ++i) {
      if (removed_mask & (1u << i)) seen[interior[i]] = 1;
    }
    std::queue<CellId> q;
    q.push(s);
    seen[s] = 1;
    while (!q.empty()) {
      const CellId u = q.front();
      q.pop();
      if (u == t) return true;
      for (CellId v : g.neighbors(u)) {
        if (!seen[v]) {
          seen[v] = 1;
          q.push(v);
        }
      }
    }
    return false;
  };

  std::size_t best = interior.size();
  for (std::uint32_t mask = 0; mask < (1u << interior.size()); ++mask) {
    const auto size = static_cast<std::size_t>(__builtin_popcount(mask));
    if (size < best && !connected(mask)) best = size;
  }
  return best;
}

struct Violation {
  std::string family;
  CellId cell = 0;
  std::string detail;

  friend bool operator==(const Violation&, const Violation&) = default;
};

// One line per violation: family, cell, detail.
inline std::ostream& operator<<(std::ostream& os, const Violation& v) {
  return os << v.family << "\tσ" << v.cell << '\t' << v.detail;
}

namespace detail {

inline std::string obj(char base, CellId j) { return std::string(1, base) + "_" + std::to_string(j); }

inline void check_common(const FlowSolution& sol, const Digraph& g, CellId s, CellId t,
                         std::vector<Violation>& out) {
  const CellId n = g.size();
  if (sol.size() != n) {
    out.push_back({"flow-arcs", 0, "solution has " + std::to_string(sol.size()) + " cells, module has " +
                                       std::to_string(n)});
    return;
  }
  for (CellId i = 1; i <= n; ++i) {
    for (CellId j : sol.C(i)) {
      if (j < 1 || j > n) {
        out.push_back({"flow-arcs", i, obj('c', j) + " names no cell"});
        continue;
      }
      if (j == i) out.push_back({"flow-arcs", i, obj('c', i) + " in C_" + std::to_string(i)});
      if (!sol.P(j).count(i)) {
        out.push_back({"flow-arcs", i, obj('c', j) + " in C_" + std::to_string(i) + " but " + obj('p', i) +
                                           " not in P_" + std::to_string(j)});
      }
      if (j != i && !g.adjacent(i, j)) {
        out.push_back({"flow-arcs", i, obj('c', j) + " names a cell that is not a neighbor"});
      }
    }
    for (CellId j : sol.P(i)) {
      if (j < 1 || j > n) {
        out.push_back({"flow-arcs", i, obj('p', j) + " names no cell"});
        continue;
      }
      if (j == i) out.push_back({"flow-arcs", i, obj('p', i) + " in P_" + std::to_string(i)});
      if (!sol.C(j).count(i)) {
        out.push_back({"flow-arcs", i, obj('p', j) + " in P_" + std::to_string(i) + " but " + obj('c', i) +
                                           " not in C_" + std::to_string(j)});
      }
    }
  }
  if (!sol.P(s).empty()) out.push_back({"source-and-target", s, "P_s is not empty"});
  if (!sol.C(t).empty()) out.push_back({"source-and-target", t, "C_t is not empty"});
  if (sol.C(s).size() != sol.P(t).size()) {
    out.push_back({"source-and-target", s, "|C_s| = " + std::to_string(sol.C(s).size()) + " but |P_t| = " +
                                               std::to_string(sol.P(t).size())});
  }
  if (sol.k != sol.C(s).size()) {
    out.push_back({"source-and-target", s, "k = " + std::to_string(sol.k) + " but |C_s| = " +
                                               std::to_string(sol.C(s).size())});
  }
}

}  // namespace detail

/// Checks the edge-disjoint output constraints. Empty result means valid.
///
/// The path condition iterates S(I) = union of C_i over i in I, starting from
/// every cell with t absorbing; after n - 1 rounds only t may remain, which
/// rules out flow cycles anywhere in the module.
[[nodiscard]] inline std::vector<Violation> validate_edge(const FlowSolution& sol, const Digraph& g, CellId s,
                                                          CellId t) {
  std::vector<Violation> out;
  detail::check_common(sol, g, s, t, out);
  if (!out.empty() && sol.size() != g.size()) return out;
  const CellId n = g.size();
  for (CellId i = 1; i <= n; ++i) {
    if (i == s || i == t) continue;
    if (sol.C(i).size() != sol.P(i).size()) {
      out.push_back({"in-flow-out-flow", i, "|C_i| = " + std::to_string(sol.C(i).size()) + " but |P_i| = " +
                                                std::to_string(sol.P(i).size())});
    }
  }

  std::set<CellId> frontier;
  for (CellId i = 1; i <= n; ++i) frontier.insert(i);
  for (CellId round = 1; round < n; ++round) {
    std::set<CellId> next;
    for (CellId i : frontier) {
      if (i == t) {
        next.insert(t);
        continue;
      }
      for (CellId j : sol.C(i)) {
        if (j >= 1 && j <= n) next.insert(j);
      }
    }
    frontier = std::move(next);
  }
  for (CellId i : frontier) {
    if (i != t) out.push_back({"only-paths", i, "still reachable after n-1 successor rounds (flow cycle)"});
  }
  return out;
}

/// Checks the node-disjoint output constraints. Empty result means valid.
[[nodiscard]] inline std::vector<Violation> validate_node(const FlowSolution& sol, const Digraph& g, CellId s,
                                                          CellId t) {
  std::vector<Violation> out;
  detail::check_common(sol, g, s, t, out);
  if (!out.empty() && sol.size() != g.size()) return out;
  const CellId n = g.size();
  for (CellId i = 1; i <= n; ++i) {
    if (i == s || i == t) continue;
    if (sol.C(i).size() != sol.P(i).size() || sol.C(i).size() > 1) {
      out.push_back({"node-disjoint", i, "|C_i| = " + std::to_string(sol.C(i).size()) + ", |P_i| = " +
                                             std::to_string(sol.P(i).size()) + "; need equal and <= 1"});
    }
  }

  auto successor = [&](CellId i) -> CellId {
    if (i == s || i == t || sol.C(i).empty()) return t;
    return *sol.C(i).begin();
  };
  for (CellId i = 1; i <= n; ++i) {
    CellId cur = i;
    for (CellId round = 1; round < n; ++round) {
      cur = successor(cur);
      if (cur < 1 || cur > n) break;
    }
    if (cur != t) out.push_back({"only-paths", i, "S^(n-1)(i) = " + std::to_string(cur) + ", expected t"});
  }
  return out;
}

/// Rebuilds k arc-disjoint s-t paths from the P/C sets. Each traversal
/// leaves a cell through its smallest not-yet-used successor; a walk that
/// repeats a cell means the flow holds a cycle.
[[nodiscard]] inline std::vector<std::vector<CellId>> extract_paths(const FlowSolution& sol, CellId s, CellId t) {
  const CellId n = sol.size();
  if (s < 1 || s > n || t < 1 || t > n) throw ContractViolation("extract_paths: source/target out of range");
  std::vector<std::set<CellId>> remaining = sol.succs;
  std::vector<std::vector<CellId>> paths;
  const std::set<CellId> starts = sol.C(s);
  for (CellId first : starts) {
    remaining[s - 1].erase(first);
    std::vector<CellId> path{s, first};
    std::set<CellId> seen{s, first};
    CellId cur = first;
    while (cur != t) {
      if (cur < 1 || cur > n) throw ContractViolation("extract_paths: successor names no cell");
      auto& out = remaining[cur - 1];
      if (out.empty()) {
        throw ContractViolation("extract_paths: dead end at cell " + std::to_string(cur));
      }
      cur = *out.begin();
      out.erase(out.begin());
      if (!seen.insert(cur).second) {
        throw ContractViolation("extract_paths: walk returns to cell " + std::to_string(cur));
      }
      path.push_back(cur);
    }
    paths.push_back(std::move(path));
  }
  for (CellId i = 1; i <= n; ++i) {
    if (!remaining[i - 1].empty()) {
      throw ContractViolation("extract_paths: flow arcs out of cell " + std::to_string(i) + " lie on no s-t path");
    }
  }
  return paths;
}

/// Reads P_i / C_i off the p_j / c_j objects of a halted configuration.
/// k is |C_source|.
[[nodiscard]] inline FlowSolution solution_from_configuration(const Configuration& final, CellId source) {
  const CellId n = final.size();
  if (source < 1 || source > n) throw InputError("source outside [1, " + std::to_string(n) + "]");
  FlowSolution sol(n);
  for (CellId i = 1; i <= n; ++i) {
    for (const auto& [obj, count] : final.cell(i).contents) {
      if (obj.base() != 'p' && obj.base() != 'c') continue;
      if (count != 1) {
        throw MalformedOutput("cell " + std::to_string(i) + " holds " + std::to_string(count) + " copies of " +
                              obj.str());
      }
      (obj.base() == 'p' ? sol.P(i) : sol.C(i)).insert(obj.index());
    }
  }
  sol.k = sol.C(source).size();
  return sol;
}

}  // namespace pmod
