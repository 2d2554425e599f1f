#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pmod/digraph.hpp"
#include "pmod/engine.hpp"
#include "pmod/flow.hpp"
#include "pmod/graph_io.hpp"
#include "pmod/programs.hpp"

namespace pmod {

struct RunOptions {
  std::size_t max_steps = 0;  // 0: default_max_steps(g)
  bool keep_trace = false;
  InstanceOrder order;        // empty: ascending
  Engine::Observer observer;
};

struct ProgramRun {
  RunResult result;
  std::optional<FlowSolution> solution;  // set when the run halted
};

/// Builds the program for `kind`, runs it from g_t in the source and reads
/// the P/C sets off the halted configuration.
[[nodiscard]] inline ProgramRun run_program(const Digraph& g, CellId s, CellId t, ProgramKind kind,
                                            const RunOptions& opts = {}) {
  Configuration init = initial_configuration(g, s, t);
  const Engine engine = make_engine(g, program_templates(kind), opts.order);
  const std::size_t budget = opts.max_steps ? opts.max_steps : default_max_steps(g);
  ProgramRun out;
  out.result = engine.run(std::move(init), budget, opts.keep_trace, opts.observer);
  if (out.result.halted) out.solution = solution_from_configuration(out.result.final, s);
  return out;
}

struct VerifyReport {
  bool passed = false;
  bool halted = false;
  std::size_t steps = 0;
  std::size_t distributed_k = 0;
  std::size_t oracle_k = 0;
  std::vector<Violation> violations;
  std::vector<std::string> problems;  // everything that is not a constraint violation
  std::optional<FlowSolution> solution;
  std::vector<std::vector<CellId>> paths;
};

/// Runs the distributed program and the matching centralized oracle, then
/// checks counts, output constraints and path reconstruction.
/// `tamper`, when set, edits the distributed solution before checking.
[[nodiscard]] inline VerifyReport verify(const Digraph& g, CellId s, CellId t, ProgramKind kind,
                                         const RunOptions& opts = {},
                                         const std::function<void(FlowSolution&)>& tamper = {}) {
  detail::require_distinct_endpoints(g, s, t);
  VerifyReport rep;
  ProgramRun run;
  try {
    run = run_program(g, s, t, kind, opts);
  } catch (const MalformedOutput& e) {
    rep.problems.push_back(e.what());
    return rep;
  }
  rep.halted = run.result.halted;
  rep.steps = run.result.steps();
  if (!rep.halted) {
    rep.problems.push_back("no quiescence within " + std::to_string(rep.steps) + " steps");
    return rep;
  }

  FlowSolution sol = *run.solution;
  if (tamper) tamper(sol);
  rep.distributed_k = sol.k;

  const bool edge = kind.phase2 == Phase2::edge_disjoint;
  rep.oracle_k = edge ? max_edge_disjoint(g, s, t, kind.optimized).k : max_node_disjoint(g, s, t).k;
  if (rep.oracle_k != rep.distributed_k) {
    rep.problems.push_back("path count " + std::to_string(rep.distributed_k) + " differs from oracle " +
                           std::to_string(rep.oracle_k));
  }
  if (!run.result.final.inflight_empty()) rep.problems.push_back("messages still in flight at quiescence");

  rep.violations = edge ? validate_edge(sol, g, s, t) : validate_node(sol, g, s, t);
  if (rep.violations.empty()) {
    try {
      rep.paths = extract_paths(sol, s, t);
    } catch (const ContractViolation& e) {
      rep.problems.push_back(e.what());
    }
  }
  rep.solution = std::move(sol);
  rep.passed = rep.problems.empty() && rep.violations.empty();
  return rep;
}

/// Uniform random structural digraph: m distinct cell pairs, each oriented
/// at random, so no self-loops or symmetric pairs. m is capped at n(n-1)/2.
template <typename Rng>
[[nodiscard]] Digraph random_digraph(CellId n, std::size_t m, Rng& rng) {
  std::vector<Arc> pairs;
  for (CellId u = 1; u <= n; ++u) {
    for (CellId v = u + 1; v <= n; ++v) pairs.emplace_back(u, v);
  }
  std::shuffle(pairs.begin(), pairs.end(), rng);
  pairs.resize(std::min(m, pairs.size()));
  std::bernoulli_distribution flip(0.5);
  for (auto& a : pairs) {
    if (flip(rng)) std::swap(a.first, a.second);
  }
  return Digraph(n, std::move(pairs));
}

[[nodiscard]] inline bool reachable(const Digraph& g, CellId s, CellId t) {
  std::vector<char> seen(g.size() + 1, 0);
  std::vector<CellId> stack{s};
  seen[s] = 1;
  while (!stack.empty()) {
    const CellId u = stack.back();
    stack.pop_back();
    if (u == t) return true;
    for (CellId v : g.neighbors(u)) {
      if (!seen[v]) {
        seen[v] = 1;
        stack.push_back(v);
      }
    }
  }
  return false;
}

struct FuzzCase {
  Digraph graph;
  CellId s = 0;
  CellId t = 0;
};

/// Case `iteration` of a fuzz run, reproducible from (seed + iteration).
/// Redraws a few times looking for a graph where t is reachable from s and
/// otherwise keeps the last draw (a k = 0 case).
[[nodiscard]] inline FuzzCase fuzz_case(std::uint64_t seed, std::uint64_t iteration, CellId n, std::size_t m) {
  std::mt19937_64 rng(seed + iteration);
  std::uniform_int_distribution<CellId> cell(1, n);
  FuzzCase c;
  for (int attempt = 0; attempt < 8; ++attempt) {
    c.graph = random_digraph(n, m, rng);
    c.s = cell(rng);
    do {
      c.t = cell(rng);
    } while (c.t == c.s);
    if (reachable(c.graph, c.s, c.t)) break;
  }
  return c;
}

struct FuzzOptions {
  CellId cells = 6;
  std::size_t arcs = 9;
  std::size_t iterations = 100;
  std::uint64_t seed = 1;
  std::vector<ProgramKind> kinds{{Phase2::edge_disjoint, false}, {Phase2::node_disjoint, false}};
};

struct FuzzFailure {
  std::uint64_t iteration = 0;
  ProgramKind kind;
  CellId s = 0;
  CellId t = 0;
  std::string graph_text;
  VerifyReport report;
};

struct FuzzSummary {
  std::size_t runs = 0;
  std::size_t passed = 0;
  std::vector<FuzzFailure> failures;
  double max_step_ratio = 0.0;  // steps / (m n), over graphs with m > 0
  std::size_t max_steps = 0;

  [[nodiscard]] std::string str() const {
    std::ostringstream os;
    os << "runs=" << runs << " passed=" << passed << " failed=" << failures.size() << " max_steps=" << max_steps
       << " max_step_ratio=" << max_step_ratio;
    return os.str();
  }
};

[[nodiscard]] inline FuzzSummary fuzz(const FuzzOptions& opts) {
  if (opts.cells < 2) throw InputError("fuzz needs at least 2 cells");
  FuzzSummary sum;
  for (std::uint64_t it = 0; it < opts.iterations; ++it) {
    const FuzzCase c = fuzz_case(opts.seed, it, opts.cells, opts.arcs);
    const double mn = static_cast<double>(c.graph.arc_count()) * c.graph.size();
    for (const ProgramKind& kind : opts.kinds) {
      VerifyReport rep = verify(c.graph, c.s, c.t, kind);
      ++sum.runs;
      sum.max_steps = std::max(sum.max_steps, rep.steps);
      if (mn > 0) sum.max_step_ratio = std::max(sum.max_step_ratio, static_cast<double>(rep.steps) / mn);
      if (rep.passed) {
        ++sum.passed;
      } else {
        sum.failures.push_back({it, kind, c.s, c.t, format_graph(c.graph), std::move(rep)});
      }
    }
  }
  return sum;
}

}  // namespace pmod
