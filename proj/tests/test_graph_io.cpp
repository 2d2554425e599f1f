#include <catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "pmod/graph_io.hpp"

using namespace pmod;

namespace {

// Line number and message of the ParseError thrown for `text`.
std::pair<std::size_t, std::string> error_of(const std::string& text) {
  try {
    (void)parse_graph(text);
  } catch (const ParseError& e) {
    return {e.line(), e.what()};
  }
  FAIL("no ParseError for: " << text);
  return {};
}

bool mentions(const std::string& s, const std::string& word) { return s.find(word) != std::string::npos; }

}  // namespace

TEST_CASE("parse the six-cell module") {
  const Digraph g = parse_graph("6 9\n1 2\n1 4\n2 3\n2 4\n3 4\n3 5\n3 6\n4 5\n5 6");
  CHECK(g.size() == 6);
  CHECK(g.arc_count() == 9);
  CHECK(g.neighbors(1) == std::vector<CellId>{2, 4});
  CHECK(g.neighbors(2) == std::vector<CellId>{1, 3, 4});
  CHECK(g.neighbors(3) == std::vector<CellId>{2, 4, 5, 6});
  CHECK(g.neighbors(4) == std::vector<CellId>{1, 2, 3, 5});
  CHECK(g.neighbors(5) == std::vector<CellId>{3, 4, 6});
  CHECK(g.neighbors(6) == std::vector<CellId>{3, 5});
  CHECK(g.search_arcs().size() == 18);
  CHECK(g.adjacent(4, 1));
  CHECK_FALSE(g.adjacent(1, 3));
}

TEST_CASE("comments, blank lines and CRLF are accepted") {
  const Digraph g = parse_graph("# a comment\n\n3 2\r\n  1 2 \r\n# mid\n3 2\n\n");
  CHECK(g.size() == 3);
  CHECK(g.arcs() == std::vector<Arc>{{1, 2}, {3, 2}});
  CHECK(parse_graph("2 0\n").arc_count() == 0);
}

TEST_CASE("format_graph round-trips") {
  const Digraph g = parse_graph("4 3\n2 1\n3 4\n1 3\n");
  const Digraph h = parse_graph(format_graph(g));
  CHECK(h.arcs() == g.arcs());
  CHECK(h.size() == g.size());
}

TEST_CASE("parse errors carry a line number and a distinct diagnostic") {
  auto [l1, m1] = error_of("2 2\n1 2\n1 2\n");
  CHECK(l1 == 3);
  CHECK(mentions(m1, "duplicate"));

  auto [l2, m2] = error_of("2 2\n1 2\n2 1\n");
  CHECK(l2 == 3);
  CHECK(mentions(m2, "symmetric"));

  auto [l3, m3] = error_of("3 1\n2 2\n");
  CHECK(l3 == 2);
  CHECK(mentions(m3, "self-loop"));

  auto [l4, m4] = error_of("3 1\n1 4\n");
  CHECK(l4 == 2);
  CHECK(mentions(m4, "out of range"));

  auto [l5, m5] = error_of("3 1\n0 1\n");
  CHECK(l5 == 2);
  CHECK(mentions(m5, "out of range"));

  auto [l6, m6] = error_of("3\n");
  CHECK(l6 == 1);
  CHECK(mentions(m6, "two integers"));

  auto [l7, m7] = error_of("3 1\n1 x\n");
  CHECK(l7 == 2);
  CHECK(mentions(m7, "non-negative integers"));

  auto [l8, m8] = error_of("3 1\n1 2\n2 3\n");
  CHECK(l8 == 3);
  CHECK(mentions(m8, "more arc lines"));

  CHECK(mentions(error_of("3 2\n1 2\n").second, "announces 2"));
  CHECK(mentions(error_of("# only a comment\n").second, "header"));

  auto [l11, m11] = error_of("0 0\n");
  CHECK(l11 == 1);
  CHECK(mentions(m11, "at least 1"));

  CHECK(error_of("3 1\n1 -2\n").first == 2);
}

TEST_CASE("parse errors are input errors") {
  CHECK_THROWS_AS(parse_graph("2 1\n1 1\n"), InputError);
}

TEST_CASE("Digraph validates its arcs") {
  CHECK_THROWS_AS(Digraph(2, {{1, 1}}), InputError);
  CHECK_THROWS_AS(Digraph(2, {{1, 3}}), InputError);
  CHECK_THROWS_AS(Digraph(2, {{1, 2}, {1, 2}}), InputError);
  CHECK_THROWS_AS(Digraph(2, {{1, 2}, {2, 1}}), InputError);
}

TEST_CASE("sample graph files parse") {
  for (const char* name : {"fig6a", "fig1", "bowtie", "disconnected", "flow_cycle", "node_revisit"}) {
    std::ifstream in(std::string(PMOD_SAMPLES) + "/" + name + ".txt");
    REQUIRE(in);
    std::ostringstream text;
    text << in.rdbuf();
    INFO(name);
    CHECK_NOTHROW(parse_graph(text.str()));
  }
}
