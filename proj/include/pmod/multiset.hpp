#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pmod/error.hpp"

namespace pmod {

// Cell IDs are 1-based, as in the trace tables.
using CellId = std::uint32_t;

struct StateId {
  std::uint8_t value = 0;

  constexpr StateId() = default;
  constexpr explicit StateId(int v) : value(static_cast<std::uint8_t>(v)) {}

  friend constexpr auto operator<=>(StateId, StateId) = default;
};

inline std::ostream& operator<<(std::ostream& os, StateId s) {
  return os << 's' << static_cast<int>(s.value);
}

namespace alphabet {

inline constexpr std::string_view kPlain = "akvwz";
inline constexpr std::string_view kIndexed = "bcdefghmnpqrtuxy";

[[nodiscard]] constexpr bool is_plain(char base) noexcept {
  return kPlain.find(base) != std::string_view::npos;
}

[[nodiscard]] constexpr bool is_indexed(char base) noexcept {
  return kIndexed.find(base) != std::string_view::npos;
}

}  // namespace alphabet

/// An atomic object: a base symbol with an optional cell-ID subscript.
///
/// The alphabet is closed. Plain symbols never carry an index and indexed
/// families always do; any other combination throws at construction.
class ObjectInstance {
 public:
  constexpr ObjectInstance() = default;

  constexpr explicit ObjectInstance(char base) : base_(base) {
    if (!alphabet::is_plain(base)) {
      throw ContractViolation(std::string("object '") + base +
                              "' is not a plain symbol of the alphabet");
    }
  }

  constexpr ObjectInstance(char base, CellId index) : base_(base), index_(index) {
    if (!alphabet::is_indexed(base)) {
      throw ContractViolation(std::string("object '") + base +
                              "' is not an indexed family of the alphabet");
    }
    if (index == 0) {
      throw ContractViolation(std::string("object '") + base + "' needs a cell index >= 1");
    }
  }

  [[nodiscard]] constexpr char base() const noexcept { return base_; }
  [[nodiscard]] constexpr bool indexed() const noexcept { return index_ != 0; }
  // 0 when unindexed.
  [[nodiscard]] constexpr CellId index() const noexcept { return index_; }

  // Base alphabetical, then index ascending; unindexed sorts first.
  friend constexpr auto operator<=>(const ObjectInstance&, const ObjectInstance&) = default;

  [[nodiscard]] std::string str() const {
    std::string out(1, base_);
    if (indexed()) {
      out += '_';
      out += std::to_string(index_);
    }
    return out;
  }

 private:
  char base_ = 'a';
  CellId index_ = 0;
};

/// Counted bag of objects, kept as a sorted flat vector with no zero counts.
class Multiset {
 public:
  using Entry = std::pair<ObjectInstance, std::uint32_t>;

  Multiset() = default;

  Multiset(std::initializer_list<Entry> entries) {
    for (const auto& [obj, count] : entries) insert(obj, count);
  }

  void insert(const ObjectInstance& obj, std::uint32_t count = 1) {
    if (count == 0) return;
    auto it = lower(obj);
    if (it != entries_.end() && it->first == obj) {
      it->second += count;
    } else {
      entries_.insert(it, {obj, count});
    }
  }

  // Removes up to `count` copies; returns how many were removed.
  std::uint32_t erase(const ObjectInstance& obj, std::uint32_t count = 1) {
    auto it = lower(obj);
    if (it == entries_.end() || it->first != obj) return 0;
    const auto removed = std::min(count, it->second);
    it->second -= removed;
    if (it->second == 0) entries_.erase(it);
    return removed;
  }

  [[nodiscard]] std::uint32_t count(const ObjectInstance& obj) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), obj,
                               [](const Entry& e, const ObjectInstance& o) { return e.first < o; });
    return (it != entries_.end() && it->first == obj) ? it->second : 0;
  }

  [[nodiscard]] bool empty() const noexcept { return entries_.empty(); }
  // Number of distinct objects.
  [[nodiscard]] std::size_t distinct() const noexcept { return entries_.size(); }
  [[nodiscard]] std::uint64_t total() const noexcept {
    std::uint64_t sum = 0;
    for (const auto& e : entries_) sum += e.second;
    return sum;
  }

  [[nodiscard]] auto begin() const noexcept { return entries_.begin(); }
  [[nodiscard]] auto end() const noexcept { return entries_.end(); }

  friend bool operator==(const Multiset&, const Multiset&) = default;

 private:
  std::vector<Entry>::iterator lower(const ObjectInstance& obj) {
    return std::lower_bound(entries_.begin(), entries_.end(), obj,
                            [](const Entry& e, const ObjectInstance& o) { return e.first < o; });
  }

  std::vector<Entry> entries_;
};

/// Multiset inclusion: every object of `needle` occurs at least as often in `haystack`.
[[nodiscard]] inline bool contains(const Multiset& haystack, const Multiset& needle) {
  auto h = haystack.begin();
  for (const auto& [obj, count] : needle) {
    while (h != haystack.end() && h->first < obj) ++h;
    if (h == haystack.end() || h->first != obj || h->second < count) return false;
  }
  return true;
}

[[nodiscard]] inline Multiset add(Multiset a, const Multiset& b) {
  for (const auto& [obj, count] : b) a.insert(obj, count);
  return a;
}

[[nodiscard]] inline Multiset subtract(Multiset a, const Multiset& b) {
  if (!contains(a, b)) throw ContractViolation("subtract: right operand is not a sub-multiset");
  for (const auto& [obj, count] : b) a.erase(obj, count);
  return a;
}

/// Trace-table notation, e.g. "s_2 aku_6^2". An empty multiset renders as "s_<state>".
[[nodiscard]] inline std::string render_canonical(StateId state, const Multiset& m) {
  std::string out = "s_" + std::to_string(state.value);
  if (m.empty()) return out;
  out += ' ';
  for (const auto& [obj, count] : m) {
    out += obj.str();
    if (count > 1) {
      out += '^';
      out += std::to_string(count);
    }
  }
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const Multiset& m) {
  os << '{';
  bool first = true;
  for (const auto& [obj, count] : m) {
    if (!first) os << ", ";
    first = false;
    os << obj.str() << ':' << count;
  }
  return os << '}';
}

}  // namespace pmod
