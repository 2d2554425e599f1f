#include <catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <random>

#include "pmod/verify.hpp"

using namespace pmod;

namespace {

struct Case {
  Digraph g;
  CellId s;
  CellId t;
};

std::vector<Case> corpus(std::uint64_t seed, std::size_t count) {
  std::vector<Case> out;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const CellId n = 2 + static_cast<CellId>(rng() % 7);
    const std::size_t max_m = n * (n - 1) / 2;
    const std::size_t m = std::min<std::size_t>(max_m, n - 1 + rng() % (n + 2));
    const FuzzCase c = fuzz_case(seed * 1000 + i, 0, n, m);
    out.push_back({c.graph, c.s, c.t});
  }
  return out;
}

const std::vector<ProgramKind> kAll{{Phase2::edge_disjoint, false},
                                    {Phase2::edge_disjoint, true},
                                    {Phase2::node_disjoint, false},
                                    {Phase2::node_disjoint, true}};

}  // namespace

TEST_CASE("distributed path count equals the oracle, and only path shape can fail") {
  for (const auto& c : corpus(1, 150)) {
    for (ProgramKind kind : kAll) {
      const VerifyReport r = verify(c.g, c.s, c.t, kind);
      INFO(to_string(kind) << " s=" << c.s << " t=" << c.t << "\n" << format_graph(c.g));
      REQUIRE(r.halted);
      REQUIRE(r.distributed_k == r.oracle_k);
      for (const auto& v : r.violations) REQUIRE(v.family == "only-paths");
    }
  }
}

TEST_CASE("guarded node program never exceeds unit capacity") {
  for (const auto& c : corpus(2, 200)) {
    const VerifyReport r = verify(c.g, c.s, c.t, {Phase2::node_disjoint, false});
    REQUIRE(r.solution);
    for (CellId i = 1; i <= c.g.size(); ++i) {
      if (i == c.s || i == c.t) continue;
      REQUIRE(r.solution->C(i).size() <= 1);
      REQUIRE(r.solution->C(i).size() == r.solution->P(i).size());
    }
  }
}

TEST_CASE("optimized programs and the resuming oracle give the same count") {
  for (const auto& c : corpus(3, 200)) {
    REQUIRE(max_edge_disjoint(c.g, c.s, c.t, true).k == max_edge_disjoint(c.g, c.s, c.t, false).k);
    for (Phase2 ph : {Phase2::edge_disjoint, Phase2::node_disjoint}) {
      const auto plain = run_program(c.g, c.s, c.t, {ph, false});
      const auto opt = run_program(c.g, c.s, c.t, {ph, true});
      REQUIRE(plain.solution);
      REQUIRE(opt.solution);
      REQUIRE(plain.solution->k == opt.solution->k);
    }
  }
}

TEST_CASE("node count equals the minimum node cut") {
  std::size_t checked = 0;
  for (const auto& c : corpus(4, 500)) {
    if (c.g.adjacent(c.s, c.t)) continue;
    ++checked;
    const auto r = run_program(c.g, c.s, c.t, {Phase2::node_disjoint, false});
    REQUIRE(r.solution);
    REQUIRE(min_node_cut_bruteforce(c.g, c.s, c.t) == std::optional<std::size_t>(r.solution->k));
  }
  CHECK(checked >= 100);
}

TEST_CASE("runs stay within 20 m n steps") {
  for (const auto& c : corpus(5, 150)) {
    for (ProgramKind kind : kAll) {
      const auto r = run_program(c.g, c.s, c.t, kind);
      REQUIRE(r.result.halted);
      REQUIRE(r.result.steps() <= default_max_steps(c.g));
      if (c.g.arc_count() > 0) REQUIRE(r.result.steps() <= 20 * c.g.arc_count() * c.g.size());
    }
  }
}

TEST_CASE("weak priority and object balance hold at every step") {
  for (const auto& c : corpus(6, 80)) {
    for (ProgramKind kind : kAll) {
      const Engine e = make_engine(c.g, program_templates(kind));
      const CellId n = c.g.size();
      auto obs = [&](const Configuration& before, const StepLog& log, const Configuration& after) {
        std::vector<Multiset> received(n);
        for (CellId i = 1; i <= n; ++i) {
          for (const auto& d : log.cells[i - 1].sent) {
            REQUIRE(c.g.adjacent(i, d.to));
            received[d.to - 1] = add(received[d.to - 1], d.message);
          }
        }
        for (CellId i = 1; i <= n; ++i) {
          const CellLog& cl = log.cells[i - 1];
          for (const auto& f : cl.fired) {
            REQUIRE(e.rules(i)[f.rule].to == e.rules(i)[cl.fired.front().rule].to);
            REQUIRE(e.rules(i)[f.rule].from == before.cell(i).state);
          }
          if (!cl.fired.empty()) REQUIRE(after.cell(i).state == e.rules(i)[cl.fired.front().rule].to);
          REQUIRE(after.cell(i).contents ==
                  add(add(subtract(before.cell(i).contents, cl.consumed), cl.produced), received[i - 1]));
        }
      };
      const RunResult r = e.run(initial_configuration(c.g, c.s, c.t), default_max_steps(c.g), false, obs);
      REQUIRE(r.halted);
      REQUIRE(r.final.inflight_empty());
    }
  }
}

TEST_CASE("cell evaluation order never changes a step") {
  std::mt19937 rng(7);
  for (const auto& c : corpus(7, 30)) {
    const Engine e = make_engine(c.g, program_templates({Phase2::node_disjoint, false}));
    std::vector<CellId> order(c.g.size());
    std::iota(order.begin(), order.end(), CellId{1});
    Configuration cur = initial_configuration(c.g, c.s, c.t);
    for (int s = 0; s < 200; ++s) {
      std::shuffle(order.begin(), order.end(), rng);
      StepLog log;
      const Configuration a = e.step(cur, &log);
      REQUIRE(a == e.step(cur, order));
      if (!log.any_fired()) break;
      cur = a;
    }
  }
}

TEST_CASE("runs are reproducible") {
  for (const auto& c : corpus(8, 40)) {
    RunOptions opts;
    opts.keep_trace = true;
    const auto a = run_program(c.g, c.s, c.t, {Phase2::edge_disjoint, false}, opts);
    const auto b = run_program(c.g, c.s, c.t, {Phase2::edge_disjoint, false}, opts);
    REQUIRE(a.result.final == b.result.final);
    REQUIRE(a.result.trace.size() == b.result.trace.size());
    for (std::size_t i = 0; i < a.result.trace.size(); ++i) REQUIRE(a.result.trace[i].rendered == b.result.trace[i].rendered);
  }
}

TEST_CASE("path count does not depend on the instance order") {
  for (const auto& c : corpus(9, 60)) {
    const std::size_t oracle_e = max_edge_disjoint(c.g, c.s, c.t).k;
    const std::size_t oracle_n = max_node_disjoint(c.g, c.s, c.t).k;
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      RunOptions opts;
      opts.order = shuffled_order(seed);
      const auto e = run_program(c.g, c.s, c.t, {Phase2::edge_disjoint, false}, opts);
      const auto n = run_program(c.g, c.s, c.t, {Phase2::node_disjoint, false}, opts);
      REQUIRE(e.solution);
      REQUIRE(n.solution);
      REQUIRE(e.solution->k == oracle_e);
      REQUIRE(n.solution->k == oracle_n);
    }
  }
}
