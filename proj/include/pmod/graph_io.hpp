#pragma once

#include <charconv>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pmod/digraph.hpp"
#include "pmod/error.hpp"

namespace pmod {

namespace detail {

inline std::vector<std::string_view> fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

inline bool to_uint(std::string_view s, std::uint64_t& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace detail

/// Parses the graph file format:
///
///   # comment
///   n m
///   u v        (m lines, structural arc u -> v, 1-based)
///
/// Blank lines and lines starting with '#' are skipped.
[[nodiscard]] inline Digraph parse_graph(std::string_view text) {
  std::size_t line_no = 0;
  bool have_header = false;
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  std::vector<Arc> arcs;
  std::set<Arc> seen;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    const auto f = detail::fields(line);
    if (f.empty() || f[0].front() == '#') {
      if (end == text.size()) break;
      continue;
    }
    if (f.size() != 2) throw ParseError(line_no, "expected two integers, got " + std::to_string(f.size()) + " fields");
    std::uint64_t a = 0;
    std::uint64_t b = 0;
    if (!detail::to_uint(f[0], a) || !detail::to_uint(f[1], b)) {
      throw ParseError(line_no, "expected two non-negative integers");
    }

    if (!have_header) {
      if (a == 0) throw ParseError(line_no, "header: cell count must be at least 1");
      if (a > 100000) throw ParseError(line_no, "header: cell count too large");
      n = a;
      m = b;
      have_header = true;
    } else {
      if (arcs.size() == m) throw ParseError(line_no, "more arc lines than the header's m = " + std::to_string(m));
      if (a < 1 || a > n || b < 1 || b > n) {
        throw ParseError(line_no, "cell ID out of range [1, " + std::to_string(n) + "]");
      }
      const Arc arc{static_cast<CellId>(a), static_cast<CellId>(b)};
      if (arc.first == arc.second) throw ParseError(line_no, "self-loop on cell " + std::to_string(a));
      if (seen.count(arc)) throw ParseError(line_no, "duplicate arc " + std::to_string(a) + " " + std::to_string(b));
      if (seen.count({arc.second, arc.first})) {
        throw ParseError(line_no, "symmetric pair: arc " + std::to_string(b) + " " + std::to_string(a) +
                                      " already present");
      }
      seen.insert(arc);
      arcs.push_back(arc);
    }
    if (end == text.size()) break;
  }
  if (!have_header) throw ParseError(line_no, "missing 'n m' header");
  if (arcs.size() != m) {
    throw ParseError(line_no, "header announces " + std::to_string(m) + " arcs, found " + std::to_string(arcs.size()));
  }
  return Digraph(static_cast<CellId>(n), std::move(arcs));
}

[[nodiscard]] inline std::string format_graph(const Digraph& g) {
  std::ostringstream os;
  os << g.size() << ' ' << g.arc_count() << '\n';
  for (const auto& [u, v] : g.arcs()) os << u << ' ' << v << '\n';
  return os.str();
}

}  // namespace pmod
