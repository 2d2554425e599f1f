// pmod: run the disjoint-paths P module programs and check them against
// the flow oracles.
//
//   pmod run    --graph FILE --source S --target T [--mode edge|node] ...
//   pmod verify --graph FILE --source S --target T [--mode edge|node] ...
//   pmod fuzz   --cells N --arcs M --iters I --seed SEED [--mode both] ...
//
// Exit status: 0 verified / halted, 1 mismatch or no quiescence, 2 input error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "pmod/verify.hpp"

namespace {

using namespace pmod;

constexpr int kOk = 0;
constexpr int kMismatch = 1;
constexpr int kInputError = 2;

struct ProgramFlags {
  std::string graph;
  CellId source = 0;
  CellId target = 0;
  std::string mode = "edge";
  bool optimized = false;
  bool literal = false;
  bool trace = false;
  std::size_t max_steps = 0;
  std::string order = "ascending";
  std::uint64_t seed = 0;
  std::string prefer;
};

void add_program_flags(CLI::App* cmd, ProgramFlags& f) {
  cmd->add_option("--graph", f.graph, "Graph file: 'n m' header, then m lines 'u v'")->required();
  cmd->add_option("--source", f.source, "Source cell ID")->required();
  cmd->add_option("--target", f.target, "Target cell ID")->required();
  cmd->add_option("--mode", f.mode, "edge or node")->check(CLI::IsMember({"edge", "node"}));
  cmd->add_flag("--optimized", f.optimized, "Skip source arcs that already failed");
  cmd->add_flag("--literal", f.literal, "Node program without the revisit guard");
  cmd->add_flag("--trace", f.trace, "Print the configuration of every step");
  cmd->add_option("--max-steps", f.max_steps, "Step budget (default 20 m n)");
  cmd->add_option("--order", f.order, "Rule instance order: ascending, descending or shuffled")
      ->check(CLI::IsMember({"ascending", "descending", "shuffled"}));
  cmd->add_option("--seed", f.seed, "Seed for --order shuffled");
  cmd->add_option("--prefer", f.prefer,
                  "Per-cell neighbor preference, cells separated by '/', e.g. 4,2/1,3,4/...");
}

Digraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open graph file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_graph(text.str());
  } catch (const ParseError& e) {
    throw InputError(path + ":" + std::to_string(e.line()) + ": " + e.what());
  }
}

InstanceOrder parse_prefer(const std::string& text, CellId n) {
  std::vector<std::vector<CellId>> ranks;
  std::stringstream cells(text);
  std::string cell;
  while (std::getline(cells, cell, '/')) {
    std::vector<CellId> pref;
    std::stringstream ids(cell);
    std::string id;
    while (std::getline(ids, id, ',')) {
      if (id.empty()) continue;
      std::size_t used = 0;
      unsigned long v = 0;
      try {
        v = std::stoul(id, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != id.size() || v < 1 || v > n) throw InputError("--prefer: bad cell ID '" + id + "'");
      pref.push_back(static_cast<CellId>(v));
    }
    ranks.push_back(std::move(pref));
  }
  if (ranks.size() > n) throw InputError("--prefer lists more cells than the graph has");
  return preference_order(std::move(ranks));
}

InstanceOrder make_order(const ProgramFlags& f, CellId n) {
  if (!f.prefer.empty()) return parse_prefer(f.prefer, n);
  if (f.order == "descending") return descending_order();
  if (f.order == "shuffled") return shuffled_order(f.seed);
  return ascending_order();
}

ProgramKind kind_of(const ProgramFlags& f) {
  return {f.mode == "node" ? Phase2::node_disjoint : Phase2::edge_disjoint, f.optimized, f.literal};
}

std::string set_str(const std::set<CellId>& s) {
  std::string out = "{";
  for (CellId v : s) out += (out.size() > 1 ? "," : "") + std::to_string(v);
  return out + "}";
}

void print_solution(const FlowSolution& sol) {
  std::cout << "k=" << sol.k << '\n';
  for (CellId i = 1; i <= sol.size(); ++i) {
    std::cout << "σ" << i << " P=" << set_str(sol.P(i)) << " C=" << set_str(sol.C(i)) << '\n';
  }
}

void print_paths(const std::vector<std::vector<CellId>>& paths) {
  for (const auto& p : paths) {
    std::cout << "path ";
    for (std::size_t i = 0; i < p.size(); ++i) std::cout << (i ? "." : "") << p[i];
    std::cout << '\n';
  }
}

int cmd_run(const ProgramFlags& f) {
  const Digraph g = load_graph(f.graph);
  RunOptions opts;
  opts.max_steps = f.max_steps;
  opts.keep_trace = f.trace;
  opts.order = make_order(f, g.size());
  const ProgramKind kind = kind_of(f);
  const ProgramRun run = run_program(g, f.source, f.target, kind, opts);

  if (f.trace) write_trace(std::cout, run.result.trace, g.size());
  std::cout << "program=" << to_string(kind) << " steps=" << run.result.steps()
            << " halted=" << (run.result.halted ? "yes" : "no") << '\n';
  if (!run.result.halted) {
    std::cerr << "no quiescence within " << run.result.steps() << " steps\n";
    return kMismatch;
  }
  print_solution(*run.solution);
  return kOk;
}

int cmd_verify(const ProgramFlags& f, bool corrupt) {
  const Digraph g = load_graph(f.graph);
  RunOptions opts;
  opts.max_steps = f.max_steps;
  opts.order = make_order(f, g.size());
  const ProgramKind kind = kind_of(f);

  // Test hook: forget the predecessor end of the first flow arc.
  std::function<void(FlowSolution&)> tamper;
  if (corrupt) {
    tamper = [](FlowSolution& sol) {
      const auto arcs = sol.arcs();
      if (!arcs.empty()) sol.P(arcs.front().second).erase(arcs.front().first);
    };
  }

  const VerifyReport rep = verify(g, f.source, f.target, kind, opts, tamper);
  std::cout << "program=" << to_string(kind) << " steps=" << rep.steps << " halted=" << (rep.halted ? "yes" : "no")
            << " k=" << rep.distributed_k << " oracle_k=" << rep.oracle_k << '\n';
  for (const auto& v : rep.violations) std::cout << "violation\t" << v << '\n';
  for (const auto& p : rep.problems) std::cout << "problem\t" << p << '\n';
  print_paths(rep.paths);
  std::cout << (rep.passed ? "PASS" : "FAIL") << '\n';
  return rep.passed ? kOk : kMismatch;
}

struct FuzzFlags {
  CellId cells = 6;
  std::size_t arcs = 9;
  std::size_t iters = 100;
  std::uint64_t seed = 1;
  std::string mode = "both";
  std::string optimized = "plain";
  bool literal = false;
};

int cmd_fuzz(const FuzzFlags& f) {
  FuzzOptions opts;
  opts.cells = f.cells;
  opts.arcs = f.arcs;
  opts.iterations = f.iters;
  opts.seed = f.seed;
  opts.kinds.clear();
  for (Phase2 ph : {Phase2::edge_disjoint, Phase2::node_disjoint}) {
    if (f.mode != "both" && (ph == Phase2::node_disjoint) != (f.mode == "node")) continue;
    for (bool opt : {false, true}) {
      if (f.optimized != "both" && opt != (f.optimized == "on")) continue;
      opts.kinds.push_back({ph, opt, f.literal});
    }
  }

  const FuzzSummary sum = fuzz(opts);
  for (const auto& fail : sum.failures) {
    std::cout << "FAIL iteration=" << fail.iteration << " program=" << to_string(fail.kind) << " source=" << fail.s
              << " target=" << fail.t << '\n';
    for (const auto& v : fail.report.violations) std::cout << "  violation\t" << v << '\n';
    for (const auto& p : fail.report.problems) std::cout << "  problem\t" << p << '\n';
    std::istringstream graph(fail.graph_text);
    for (std::string line; std::getline(graph, line);) std::cout << "  | " << line << '\n';
  }
  std::cout << sum.str() << '\n';
  return sum.failures.empty() ? kOk : kMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simple P module simulator for edge- and node-disjoint paths"};
  app.require_subcommand(1);

  ProgramFlags run_flags;
  auto* run = app.add_subcommand("run", "Run a program and print the P/C sets");
  add_program_flags(run, run_flags);

  ProgramFlags verify_flags;
  bool corrupt = false;
  auto* ver = app.add_subcommand("verify", "Run a program and check it against the oracle");
  add_program_flags(ver, verify_flags);
  ver->add_flag("--corrupt", corrupt, "Test hook: damage the solution before checking");

  FuzzFlags fuzz_flags;
  auto* fz = app.add_subcommand("fuzz", "Verify random digraphs");
  fz->add_option("--cells", fuzz_flags.cells, "Cells per graph (>= 2)");
  fz->add_option("--arcs", fuzz_flags.arcs, "Structural arcs per graph");
  fz->add_option("--iters", fuzz_flags.iters, "Number of graphs");
  fz->add_option("--seed", fuzz_flags.seed, "Base seed; graph i uses seed + i");
  fz->add_option("--mode", fuzz_flags.mode, "edge, node or both")->check(CLI::IsMember({"edge", "node", "both"}));
  fz->add_option("--optimized", fuzz_flags.optimized, "plain, on or both")
      ->check(CLI::IsMember({"plain", "on", "both"}));
  fz->add_flag("--literal", fuzz_flags.literal, "Node program without the revisit guard");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*run) return cmd_run(run_flags);
    if (*ver) return cmd_verify(verify_flags, corrupt);
    return cmd_fuzz(fuzz_flags);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const ContractViolation& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
}
