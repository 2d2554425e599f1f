#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pmod/error.hpp"
#include "pmod/multiset.hpp"

namespace pmod {

using Arc = std::pair<CellId, CellId>;

/// Structural relation of a module plus its derived symmetric search digraph.
///
/// Arcs are 1-based and must be irreflexive, duplicate-free and free of
/// symmetric pairs. Paths are searched on the symmetric closure, so the
/// direction of a structural arc only matters for serialization.
class Digraph {
 public:
  Digraph() = default;

  Digraph(CellId n, std::vector<Arc> arcs) : n_(n), arcs_(std::move(arcs)), neighbors_(n) {
    std::set<Arc> seen;
    for (const auto& [u, v] : arcs_) {
      if (u < 1 || u > n_ || v < 1 || v > n_) {
        throw InputError("arc (" + std::to_string(u) + "," + std::to_string(v) + ") outside [1, " +
                         std::to_string(n_) + "]");
      }
      if (u == v) throw InputError("self-loop on cell " + std::to_string(u));
      if (seen.count({u, v})) {
        throw InputError("duplicate arc (" + std::to_string(u) + "," + std::to_string(v) + ")");
      }
      if (seen.count({v, u})) {
        throw InputError("symmetric pair (" + std::to_string(u) + "," + std::to_string(v) + ")");
      }
      seen.insert({u, v});
      neighbors_[u - 1].push_back(v);
      neighbors_[v - 1].push_back(u);
    }
    for (auto& nb : neighbors_) std::sort(nb.begin(), nb.end());
  }

  [[nodiscard]] CellId size() const noexcept { return n_; }
  [[nodiscard]] std::size_t arc_count() const noexcept { return arcs_.size(); }
  [[nodiscard]] const std::vector<Arc>& arcs() const noexcept { return arcs_; }

  // delta(i) and its inverse, ascending.
  [[nodiscard]] const std::vector<CellId>& neighbors(CellId i) const { return neighbors_.at(i - 1); }
  [[nodiscard]] const std::vector<std::vector<CellId>>& neighbor_table() const noexcept { return neighbors_; }

  [[nodiscard]] bool adjacent(CellId u, CellId v) const {
    const auto& nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  // {(u,v), (v,u) | (u,v) in delta}, sorted.
  [[nodiscard]] std::vector<Arc> search_arcs() const {
    std::vector<Arc> out;
    out.reserve(2 * arcs_.size());
    for (const auto& [u, v] : arcs_) {
      out.emplace_back(u, v);
      out.emplace_back(v, u);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  CellId n_ = 0;
  std::vector<Arc> arcs_;
  std::vector<std::vector<CellId>> neighbors_;
};

}  // namespace pmod
