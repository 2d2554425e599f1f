// Step-by-step replay of the two published trace tables on the six-cell
// module. The tables were produced with a per-cell neighbor preference that
// differs from ascending order; with that preference every row matches.

#include <catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "pmod/verify.hpp"

using namespace pmod;

namespace {

const std::vector<std::vector<CellId>> kTraceOrder{{4, 2}, {1, 3, 4}, {2, 6, 5}, {3, 2, 5}, {4, 3, 6}, {3, 5}};

Digraph fig6a() { return parse_graph("6 9\n1 2\n1 4\n2 3\n2 4\n3 4\n3 5\n3 6\n4 5\n5 6\n"); }

std::vector<TraceRow> load_trace(const std::string& name) {
  std::ifstream in(std::string(PMOD_TEST_DATA) + "/" + name);
  REQUIRE(in);
  std::vector<TraceRow> rows;
  std::string line;
  std::getline(in, line);
  REQUIRE(line.rfind("Step\\Cell\t", 0) == 0);
  while (std::getline(in, line)) {
    std::istringstream cols(line);
    std::string col;
    TraceRow row;
    std::getline(cols, col, '\t');
    row.step = std::stoul(col);
    while (std::getline(cols, col, '\t')) row.rendered.push_back(col);
    rows.push_back(std::move(row));
  }
  return rows;
}

void replay(ProgramKind kind, const std::string& file, std::size_t steps) {
  const auto want = load_trace(file);
  REQUIRE(want.size() == steps + 1);
  RunOptions opts;
  opts.keep_trace = true;
  opts.order = preference_order(kTraceOrder);
  const ProgramRun run = run_program(fig6a(), 1, 6, kind, opts);
  REQUIRE(run.result.halted);
  CHECK(run.result.steps() == steps);
  REQUIRE(run.result.trace.size() == want.size());
  for (std::size_t s = 0; s < want.size(); ++s) {
    INFO("step " << s);
    REQUIRE(run.result.trace[s].step == want[s].step);
    REQUIRE(run.result.trace[s].rendered == want[s].rendered);
  }
}

Configuration from_row(const TraceRow& row) {
  // Rebuild a configuration from rendered cells ("s_0 c_2c_4").
  Configuration c;
  c.step = row.step;
  for (const auto& cell : row.rendered) {
    const auto space = cell.find(' ');
    CellSnapshot snap{StateId(std::stoi(cell.substr(2, space - 2))), {}};
    if (space != std::string::npos) {
      const std::string body = cell.substr(space + 1);
      std::size_t i = 0;
      while (i < body.size()) {
        const char base = body[i++];
        CellId idx = 0;
        if (i < body.size() && body[i] == '_') {
          ++i;
          while (i < body.size() && std::isdigit(static_cast<unsigned char>(body[i]))) idx = idx * 10 + (body[i++] - '0');
        }
        std::uint32_t count = 1;
        if (i < body.size() && body[i] == '^') {
          ++i;
          count = 0;
          while (i < body.size() && std::isdigit(static_cast<unsigned char>(body[i]))) count = count * 10 + (body[i++] - '0');
        }
        snap.contents.insert(idx ? ObjectInstance(base, idx) : ObjectInstance(base), count);
      }
    }
    c.cells.push_back(std::move(snap));
  }
  c.inflight.assign(c.cells.size(), {});
  return c;
}

}  // namespace

TEST_CASE("edge trace replays row for row") { replay({Phase2::edge_disjoint, false}, "edge_trace.tsv", 61); }

TEST_CASE("node trace replays row for row") { replay({Phase2::node_disjoint, false}, "node_trace.tsv", 59); }

TEST_CASE("node trace replays with the unguarded table too") {
  replay({Phase2::node_disjoint, false, true}, "node_trace.tsv", 59);
}

TEST_CASE("rendered rows parse back to the same cells") {
  for (const auto& row : load_trace("edge_trace.tsv")) REQUIRE(render_row(from_row(row)).rendered == row.rendered);
}

TEST_CASE("final trace rows give the published output tables") {
  const Digraph g = fig6a();
  const auto edge_rows = load_trace("edge_trace.tsv");
  const FlowSolution e = solution_from_configuration(from_row(edge_rows.back()), 1);
  CHECK(e.k == 2);
  CHECK(e.C(1) == std::set<CellId>{2, 4});
  CHECK(e.P(3) == std::set<CellId>{2, 4});
  CHECK(e.C(3) == std::set<CellId>{5, 6});
  CHECK(e.P(5) == std::set<CellId>{3});
  CHECK(e.P(6) == std::set<CellId>{3, 5});
  CHECK(validate_edge(e, g, 1, 6).empty());

  const auto node_rows = load_trace("node_trace.tsv");
  const FlowSolution n = solution_from_configuration(from_row(node_rows.back()), 1);
  CHECK(n.k == 2);
  CHECK(n.P(4) == std::set<CellId>{1});
  CHECK(n.C(4) == std::set<CellId>{5});
  CHECK(n.P(5) == std::set<CellId>{4});
  CHECK(n.C(5) == std::set<CellId>{6});
  CHECK(n.C(3) == std::set<CellId>{6});
  CHECK(validate_node(n, g, 1, 6).empty());
}

TEST_CASE("published-order edge run holds the published sigma 3") {
  RunOptions opts;
  opts.order = preference_order(kTraceOrder);
  for (bool optimized : {false, true}) {
    const ProgramRun run = run_program(fig6a(), 1, 6, {Phase2::edge_disjoint, optimized}, opts);
    REQUIRE(run.solution);
    CHECK(run.solution->k == 2);
    CHECK(run.solution->P(3) == std::set<CellId>{2, 4});
    CHECK(run.solution->C(3) == std::set<CellId>{5, 6});
  }
}

TEST_CASE("any instance order gives a valid maximum on the six-cell module") {
  std::vector<InstanceOrder> orders{ascending_order(), descending_order(), preference_order(kTraceOrder)};
  for (std::uint64_t seed = 1; seed <= 20; ++seed) orders.push_back(shuffled_order(seed));
  for (const auto& order : orders) {
    RunOptions opts;
    opts.order = order;
    for (ProgramKind kind : {ProgramKind{Phase2::edge_disjoint, false}, ProgramKind{Phase2::node_disjoint, false}}) {
      const VerifyReport r = verify(fig6a(), 1, 6, kind, opts);
      REQUIRE(r.passed);
      REQUIRE(r.distributed_k == 2);
    }
  }
}
