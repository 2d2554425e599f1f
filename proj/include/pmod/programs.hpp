#pragma once

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

#include "pmod/digraph.hpp"
#include "pmod/engine.hpp"
#include "pmod/error.hpp"
#include "pmod/rules.hpp"

namespace pmod {

enum class Phase2 { edge_disjoint, node_disjoint };

struct ProgramKind {
  Phase2 phase2 = Phase2::edge_disjoint;
  bool optimized = false;  // skip source arcs that already failed
  bool literal = false;    // node program without the revisit guard

  friend bool operator==(const ProgramKind&, const ProgramKind&) = default;
};

[[nodiscard]] inline std::string to_string(ProgramKind k) {
  std::string s = k.phase2 == Phase2::edge_disjoint ? "edge" : "node";
  if (k.optimized) s += "+optimized";
  if (k.literal && k.phase2 == Phase2::node_disjoint) s += "+literal";
  return s;
}

namespace tables {

struct Row {
  RuleGroup group;
  std::string_view text;
  JRange j_range = JRange::others;
};

// Phase I: neighbor discovery, states s0..s4.
//
// 3.2 purges every u token, including the target's own u_i: with a neighbor
// farther from the source than itself the target keeps receiving u_i after
// leaving s0, and a leftover u_i would restart discovery once the target
// returns to s0 at the end.
inline constexpr Row kDiscovery[] = {
    {{0, 1}, "s0 g_i ->min s0"},
    {{0, 2}, "s0 g_j ->min s1 a k (u_j)<->repl"},
    {{0, 3}, "s0 u_i ->min s1 a z (u_i)<->repl"},
    {{0, 4}, "s0 u_i ->max s1"},
    {{0, 5}, "s0 u_j ->min s1 a (u_j)<->repl"},
    {{1, 1}, "s1 a ->min s2 a (n_i)<->repl"},
    {{2, 1}, "s2 a ->min s3 a"},
    {{3, 1}, "s3 a ->min s4 a"},
    {{3, 2}, "s3 u_j ->max s4", JRange::all_cells},
};

// Phase II: depth-first augmenting-path search, states s4..s13.
inline constexpr Row kSearchHead[] = {
    {{4, 1}, "s4 k ->min s5 k"},
    {{4, 2}, "s4 z ->min s6 z"},
    {{4, 3}, "s4 a ->min s7 a"},

    {{5, 1}, "s5 a n_j ->min s5 d_j (f_i)<->j"},
    {{5, 2}, "s5 d_j y_j ->min s12 a c_j w w (v)<->repl"},
    {{5, 3}, "s5 d_j x_j ->min s5 a m_j"},
    {{5, 4}, "s5 b_j ->min s5 (x_i)<->j"},
    {{5, 5}, "s5 f_j ->min s5 (x_i)<->j"},
    {{5, 6}, "s5 a k ->min s13 a a w w (a)<->repl"},

    {{6, 1}, "s6 n_j f_j ->min s6 p_j (y_i)<->j"},
    {{6, 2}, "s6 v ->min s12 w w (v)<->repl"},
    {{6, 3}, "s6 a a z ->min s13 a a w w (a)<->repl"},
};

inline constexpr Row kOptimizedSourceRetry = {{5, 3}, "s5 d_j x_j ->min s5 a"};

inline constexpr Row kEdgeIntermediate[] = {
    {{7, 1}, "s7 v ->min s12 w w (v)<->repl"},
    {{7, 2}, "s7 a a ->min s13 a a w w (a)<->repl"},
    {{7, 3}, "s7 n_j f_j ->min s8 q_j"},
    {{7, 4}, "s7 c_j b_j ->min s8 e_j"},
    {{7, 5}, "s7 h_j ->min s11 c_j (x_i)<->j"},
    {{7, 6}, "s7 p_j q_k ->min s10 p_j q_k"},
    {{7, 7}, "s7 q_j ->min s7 m_j (x_i)<->j"},
    {{7, 8}, "s7 f_j ->min s7 (x_i)<->j"},
};

// Unit node capacity without splitting cells.
inline constexpr Row kNodeIntermediate[] = {
    {{7, 1}, "s7 v ->min s12 w w (v)<->repl"},
    {{7, 2}, "s7 a a ->min s13 a a w w (a)<->repl"},
    {{7, 3}, "s7 n_j f_j p_k ->min s10 q_j p_k"},
    {{7, 4}, "s7 n_j f_j ->min s8 q_j"},
    {{7, 5}, "s7 c_j b_j ->min s8 e_j"},
    {{7, 6}, "s7 h_j ->min s8 e_j"},
    {{7, 7}, "s7 r_j ->min s11 r_j"},
    {{7, 8}, "s7 q_j ->min s7 m_j (x_i)<->j"},
    {{7, 9}, "s7 f_j ->min s7 (x_i)<->j"},
};

// Inserted right after node rule 7.3. Once the pushback from a flow cell has
// failed, p_k is parked as t_k until the stage ends and 7.3 no longer
// matches; without this rule a second non-flow visit falls through to 7.4 and
// the cell forwards a second unit of flow.
inline constexpr Row kNodeRevisitGuard = {{7, 10}, "s7 n_j f_j t_k ->min s7 m_j t_k (x_i)<->j"};

inline constexpr Row kSearchTail[] = {
    {{8, 1}, "s8 a n_j ->min s9 a d_j (f_i)<->j"},
    {{8, 2}, "s8 a ->min s10 a"},

    {{9, 1}, "s9 d_j y_j e_k ->min s7 c_j m_k (y_i)<->k"},
    {{9, 2}, "s9 d_j y_j q_k ->min s7 c_j p_k (y_i)<->k"},
    {{9, 3}, "s9 d_j x_j ->min s8 m_j"},
    {{9, 4}, "s9 c_j b_j ->min s9 c_j (x_i)<->j"},
    {{9, 5}, "s9 n_j f_j ->min s9 m_j (x_i)<->j"},

    {{10, 1}, "s10 a p_j ->min s11 a r_j (b_i)<->j"},
    {{10, 2}, "s10 a e_j ->min s7 a c_j (x_i)<->j"},
    {{10, 3}, "s10 a q_j ->min s7 a m_j (x_i)<->j"},

    {{11, 1}, "s11 r_j y_j e_k ->min s7 m_j m_k (y_i)<->k"},
    {{11, 2}, "s11 r_j y_j q_k ->min s7 m_j p_k (y_i)<->k"},
    {{11, 3}, "s11 r_j x_j ->min s10 t_j"},
    {{11, 4}, "s11 c_j b_j ->min s7 h_j"},
    {{11, 5}, "s11 n_j f_j ->min s11 m_j (x_i)<->j"},

    {{12, 1}, "s12 w ->min s12"},
    {{12, 2}, "s12 v ->max s12"},
    {{12, 3}, "s12 m_j ->min s12 n_j"},
    {{12, 4}, "s12 t_j ->min s12 p_j"},
    {{12, 5}, "s12 k ->min s5 k"},
    {{12, 6}, "s12 z ->min s6 z"},
    {{12, 7}, "s12 a ->min s7 a"},

    {{13, 1}, "s13 w ->min s13"},
    {{13, 2}, "s13 a ->max s0"},
    {{13, 3}, "s13 t_j ->min s0 p_j"},
    {{13, 4}, "s13 n_j ->min s0"},
    {{13, 5}, "s13 m_j ->min s0"},
};

}  // namespace tables

namespace detail {

template <typename Rows>
void append(std::vector<RuleTemplate>& out, const Rows& rows) {
  for (const auto& row : rows) out.push_back(parse_template(row.group, row.text, row.j_range));
}

}  // namespace detail

[[nodiscard]] inline std::vector<RuleTemplate> discovery_templates() {
  std::vector<RuleTemplate> out;
  detail::append(out, tables::kDiscovery);
  return out;
}

[[nodiscard]] inline std::vector<RuleTemplate> program_templates(ProgramKind kind) {
  std::vector<RuleTemplate> out = discovery_templates();
  detail::append(out, tables::kSearchHead);
  if (kind.optimized) {
    for (auto& t : out) {
      if (t.group == tables::kOptimizedSourceRetry.group) {
        t = parse_template(tables::kOptimizedSourceRetry.group, tables::kOptimizedSourceRetry.text);
      }
    }
  }
  if (kind.phase2 == Phase2::edge_disjoint) {
    detail::append(out, tables::kEdgeIntermediate);
  } else {
    detail::append(out, tables::kNodeIntermediate);
    if (!kind.literal) {
      const auto after = std::find_if(out.begin(), out.end(), [](const RuleTemplate& t) {
        return t.group == RuleGroup{7, 3};
      });
      const auto& g = tables::kNodeRevisitGuard;
      out.insert(after + 1, parse_template(g.group, g.text, g.j_range));
    }
  }
  detail::append(out, tables::kSearchTail);
  return out;
}

[[nodiscard]] inline std::vector<RuleTemplate> edge_disjoint_templates(bool optimized) {
  return program_templates({Phase2::edge_disjoint, optimized});
}

[[nodiscard]] inline std::vector<RuleTemplate> node_disjoint_templates(bool optimized, bool literal = false) {
  return program_templates({Phase2::node_disjoint, optimized, literal});
}

/// Source cell holds g_t, every other cell is empty, all in s0.
[[nodiscard]] inline Configuration initial_configuration(const Digraph& g, CellId s, CellId t) {
  const CellId n = g.size();
  if (s < 1 || s > n) throw InputError("source " + std::to_string(s) + " outside [1, " + std::to_string(n) + "]");
  if (t < 1 || t > n) throw InputError("target " + std::to_string(t) + " outside [1, " + std::to_string(n) + "]");
  Configuration c;
  c.cells.assign(n, CellSnapshot{StateId(0), {}});
  c.inflight.assign(n, Multiset{});
  c.cell(s).contents.insert(ObjectInstance('g', t));
  return c;
}

[[nodiscard]] inline Engine make_engine(const Digraph& g, const std::vector<RuleTemplate>& templates,
                                        const InstanceOrder& order = {}) {
  std::vector<std::vector<Rule>> rules;
  rules.reserve(g.size());
  for (CellId i = 1; i <= g.size(); ++i) rules.push_back(build_rule_order(templates, i, g.size(), order));
  return Engine(std::move(rules), g.neighbor_table());
}

// Step budget used when none is given: 20 m n, with a floor for tiny modules.
[[nodiscard]] inline std::size_t default_max_steps(const Digraph& g) {
  return std::max<std::size_t>(20 * g.arc_count() * g.size(), 64);
}

}  // namespace pmod
