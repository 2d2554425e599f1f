#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pmod/error.hpp"
#include "pmod/multiset.hpp"

namespace pmod {

enum class Mode : std::uint8_t { min, max };

// How a rule's index position is resolved against the owning cell.
struct IndexRef {
  enum class Kind : std::uint8_t { none, self, j, k, literal };

  Kind kind = Kind::none;
  CellId literal = 0;

  friend bool operator==(const IndexRef&, const IndexRef&) = default;
};

struct PatternObject {
  char base = 'a';
  IndexRef index;
};

enum class Transfer : std::uint8_t { none, broadcast, targeted };

// Rule number as printed in the listings, e.g. {5, 3} for "5.3".
struct RuleGroup {
  int state = 0;
  int ordinal = 0;

  friend auto operator<=>(const RuleGroup&, const RuleGroup&) = default;

  [[nodiscard]] std::string str() const {
    return std::to_string(state) + "." + std::to_string(ordinal);
  }
};

// Which cells the variable J ranges over.
enum class JRange : std::uint8_t {
  others,     // every cell except the owner
  all_cells,  // owner included
};

/// Generic rule `s x ->mode s' x' (u)<->target` with index variables.
struct RuleTemplate {
  RuleGroup group;
  StateId from;
  std::vector<PatternObject> lhs;
  Mode mode = Mode::min;
  StateId to;
  std::vector<PatternObject> rhs;
  std::vector<PatternObject> message;
  Transfer transfer = Transfer::none;
  IndexRef target;  // meaningful only for Transfer::targeted
  JRange j_range = JRange::others;

  [[nodiscard]] bool uses(IndexRef::Kind kind) const {
    auto in = [kind](const std::vector<PatternObject>& v) {
      return std::any_of(v.begin(), v.end(),
                         [kind](const PatternObject& p) { return p.index.kind == kind; });
    };
    return in(lhs) || in(rhs) || in(message) ||
           (transfer == Transfer::targeted && target.kind == kind);
  }
};

struct Binding {
  CellId j = 0;
  CellId k = 0;

  friend bool operator==(const Binding&, const Binding&) = default;
};

/// A template with every index resolved for one owning cell.
struct Rule {
  RuleGroup group;
  CellId owner = 0;
  Binding binding;
  StateId from;
  Multiset lhs;
  Mode mode = Mode::min;
  StateId to;
  Multiset rhs;
  Multiset message;
  Transfer transfer = Transfer::none;
  CellId target = 0;  // recipient for Transfer::targeted
  std::string text;   // listing notation with indices substituted
};

namespace detail {

inline IndexRef parse_index(std::string_view s, std::string_view rule_text) {
  if (s == "i") return {IndexRef::Kind::self, 0};
  if (s == "j") return {IndexRef::Kind::j, 0};
  if (s == "k") return {IndexRef::Kind::k, 0};
  if (!s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); })) {
    return {IndexRef::Kind::literal, static_cast<CellId>(std::stoul(std::string(s)))};
  }
  throw ContractViolation("bad index '" + std::string(s) + "' in rule: " + std::string(rule_text));
}

inline PatternObject parse_object(std::string_view tok, std::string_view rule_text) {
  if (tok.empty()) throw ContractViolation("empty object in rule: " + std::string(rule_text));
  PatternObject p{tok[0], {}};
  if (tok.size() == 1) {
    if (!alphabet::is_plain(p.base)) {
      throw ContractViolation("'" + std::string(tok) + "' is not a plain object: " + std::string(rule_text));
    }
    return p;
  }
  if (tok[1] != '_' || !alphabet::is_indexed(p.base)) {
    throw ContractViolation("'" + std::string(tok) + "' is not an object: " + std::string(rule_text));
  }
  p.index = parse_index(tok.substr(2), rule_text);
  return p;
}

inline StateId parse_state(std::string_view tok, std::string_view rule_text) {
  if (tok.size() < 2 || tok[0] != 's') {
    throw ContractViolation("expected a state in rule: " + std::string(rule_text));
  }
  return StateId(std::stoi(std::string(tok.substr(1))));
}

inline std::string index_str(const IndexRef& r) {
  switch (r.kind) {
    case IndexRef::Kind::self: return "i";
    case IndexRef::Kind::j: return "j";
    case IndexRef::Kind::k: return "k";
    case IndexRef::Kind::literal: return std::to_string(r.literal);
    case IndexRef::Kind::none: break;
  }
  return "";
}

inline CellId resolve(const IndexRef& r, CellId owner, Binding b) {
  switch (r.kind) {
    case IndexRef::Kind::self: return owner;
    case IndexRef::Kind::j: return b.j;
    case IndexRef::Kind::k: return b.k;
    case IndexRef::Kind::literal: return r.literal;
    case IndexRef::Kind::none: break;
  }
  return 0;
}

template <typename IndexFn>
std::string render_side(const std::vector<PatternObject>& side, IndexFn&& idx) {
  std::string out;
  for (const auto& p : side) {
    if (!out.empty()) out += ' ';
    out += p.base;
    if (p.index.kind != IndexRef::Kind::none) out += "_" + idx(p.index);
  }
  return out;
}

template <typename IndexFn>
std::string render_rule(const RuleTemplate& t, IndexFn&& idx) {
  std::string out = t.group.str() + ": s" + std::to_string(t.from.value);
  if (!t.lhs.empty()) out += " " + render_side(t.lhs, idx);
  out += t.mode == Mode::min ? " ->min s" : " ->max s";
  out += std::to_string(t.to.value);
  if (!t.rhs.empty()) out += " " + render_side(t.rhs, idx);
  if (t.transfer != Transfer::none) {
    out += " (" + render_side(t.message, idx) + ")<->";
    out += t.transfer == Transfer::broadcast ? std::string("repl") : idx(t.target);
  }
  return out;
}

}  // namespace detail

/// Parses one line of listing notation:
///
///   "s5 a n_j ->min s5 d_j (f_i)<->j"
///   "s5 d_j y_j ->min s12 a c_j w w (v)<->repl"
///
/// Subscript `i` is the owning cell, `j`/`k` are expansion variables and
/// digits are literal cell IDs. Malformed text is a programming error in a
/// rule table, so it throws ContractViolation.
[[nodiscard]] inline RuleTemplate parse_template(RuleGroup group, std::string_view text,
                                                 JRange j_range = JRange::others) {
  RuleTemplate t;
  t.group = group;
  t.j_range = j_range;

  std::string body(text);
  std::string message_part;
  if (auto open = body.find('('); open != std::string::npos) {
    message_part = body.substr(open);
    body.erase(open);
  }

  std::istringstream in(body);
  std::string tok;
  if (!(in >> tok)) throw ContractViolation("empty rule text");
  t.from = detail::parse_state(tok, text);
  bool arrow = false;
  while (in >> tok) {
    if (tok == "->min" || tok == "->max") {
      t.mode = tok == "->min" ? Mode::min : Mode::max;
      arrow = true;
      break;
    }
    t.lhs.push_back(detail::parse_object(tok, text));
  }
  if (!arrow || !(in >> tok)) throw ContractViolation("missing '->min/->max s<n>' in rule: " + std::string(text));
  t.to = detail::parse_state(tok, text);
  while (in >> tok) t.rhs.push_back(detail::parse_object(tok, text));

  if (!message_part.empty()) {
    const auto close = message_part.find(")<->");
    if (close == std::string::npos) throw ContractViolation("bad transfer in rule: " + std::string(text));
    std::istringstream msg(message_part.substr(1, close - 1));
    while (msg >> tok) t.message.push_back(detail::parse_object(tok, text));
    std::string target = message_part.substr(close + 4);
    while (!target.empty() && std::isspace(static_cast<unsigned char>(target.back()))) target.pop_back();
    if (target == "repl") {
      t.transfer = Transfer::broadcast;
    } else {
      t.transfer = Transfer::targeted;
      t.target = detail::parse_index(target, text);
    }
    if (t.message.empty()) throw ContractViolation("empty message in rule: " + std::string(text));
  }

  if (t.lhs.empty()) throw ContractViolation("rule consumes nothing: " + std::string(text));
  if (t.uses(IndexRef::Kind::k) && !t.uses(IndexRef::Kind::j)) {
    throw ContractViolation("variable k without j in rule: " + std::string(text));
  }
  return t;
}

/// Listing notation of a template, e.g. "5.3: s5 d_j x_j ->min s5 a m_j".
[[nodiscard]] inline std::string dump(const RuleTemplate& t) {
  return detail::render_rule(t, detail::index_str);
}

/// Reorders the J/K bindings of one template for one cell before expansion.
/// The bindings arrive in ascending (j, k) order.
using InstanceOrder = std::function<void(CellId owner, const RuleTemplate&, std::vector<Binding>&)>;

[[nodiscard]] inline InstanceOrder ascending_order() {
  return [](CellId, const RuleTemplate&, std::vector<Binding>&) {};
}

[[nodiscard]] inline InstanceOrder descending_order() {
  return [](CellId, const RuleTemplate&, std::vector<Binding>& b) { std::reverse(b.begin(), b.end()); };
}

// Independent pseudo-random permutation per (owner, template).
[[nodiscard]] inline InstanceOrder shuffled_order(std::uint64_t seed) {
  return [seed](CellId owner, const RuleTemplate& t, std::vector<Binding>& b) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), owner,
                      static_cast<std::uint32_t>(t.group.state), static_cast<std::uint32_t>(t.group.ordinal)};
    std::mt19937_64 rng(seq);
    std::shuffle(b.begin(), b.end(), rng);
  };
}

/// Per-owner preference list: `ranks[owner - 1]` names cells from most to
/// least preferred. Bindings are sorted by (rank of j, rank of k); unlisted
/// cells keep ascending order after the listed ones.
[[nodiscard]] inline InstanceOrder preference_order(std::vector<std::vector<CellId>> ranks) {
  return [ranks = std::move(ranks)](CellId owner, const RuleTemplate&, std::vector<Binding>& b) {
    if (owner > ranks.size()) return;
    const auto& pref = ranks[owner - 1];
    auto rank = [&pref](CellId c) -> std::size_t {
      const auto it = std::find(pref.begin(), pref.end(), c);
      return it == pref.end() ? pref.size() + c : static_cast<std::size_t>(it - pref.begin());
    };
    std::stable_sort(b.begin(), b.end(), [&rank](const Binding& x, const Binding& y) {
      return std::pair(rank(x.j), rank(x.k)) < std::pair(rank(y.j), rank(y.k));
    });
  };
}

/// Expands a template for cell `owner` of an `n`-cell module.
///
/// J runs over the cells allowed by the template's JRange in ascending order;
/// templates that also use K expand over ordered pairs (j, k) with j != k and
/// neither equal to the owner, lexicographically. `order` may permute the
/// bindings afterwards.
[[nodiscard]] inline std::vector<Rule> instantiate(const RuleTemplate& t, CellId owner, CellId n,
                                                   const InstanceOrder& order = {}) {
  if (owner < 1 || owner > n) {
    throw ContractViolation("instantiate: owner " + std::to_string(owner) + " outside [1, " +
                            std::to_string(n) + "]");
  }

  std::vector<Binding> bindings;
  const bool has_j = t.uses(IndexRef::Kind::j);
  const bool has_k = t.uses(IndexRef::Kind::k);
  if (!has_j) {
    bindings.push_back({});
  } else {
    const bool j_may_be_owner = !has_k && t.j_range == JRange::all_cells;
    for (CellId j = 1; j <= n; ++j) {
      if (j == owner && !j_may_be_owner) continue;
      if (!has_k) {
        bindings.push_back({j, 0});
        continue;
      }
      for (CellId k = 1; k <= n; ++k) {
        if (k != j && k != owner) bindings.push_back({j, k});
      }
    }
  }
  if (order && bindings.size() > 1) order(owner, t, bindings);

  std::vector<Rule> out;
  out.reserve(bindings.size());
  for (const Binding& b : bindings) {
    auto materialize = [&](const std::vector<PatternObject>& side) {
      Multiset m;
      for (const auto& p : side) {
        if (p.index.kind == IndexRef::Kind::none) {
          m.insert(ObjectInstance(p.base));
        } else {
          const CellId idx = detail::resolve(p.index, owner, b);
          if (idx < 1 || idx > n) {
            throw ContractViolation("rule " + t.group.str() + " resolves index " + std::to_string(idx) +
                                    " outside [1, " + std::to_string(n) + "]");
          }
          m.insert(ObjectInstance(p.base, idx));
        }
      }
      return m;
    };

    Rule r;
    r.group = t.group;
    r.owner = owner;
    r.binding = b;
    r.from = t.from;
    r.lhs = materialize(t.lhs);
    r.mode = t.mode;
    r.to = t.to;
    r.rhs = materialize(t.rhs);
    r.message = materialize(t.message);
    r.transfer = t.transfer;
    if (t.transfer == Transfer::targeted) r.target = detail::resolve(t.target, owner, b);
    r.text = detail::render_rule(t, [&](const IndexRef& ref) {
      return std::to_string(detail::resolve(ref, owner, b));
    });
    out.push_back(std::move(r));
  }
  return out;
}

/// Weak-priority order of one cell: template expansions concatenated in table order.
[[nodiscard]] inline std::vector<Rule> build_rule_order(const std::vector<RuleTemplate>& templates,
                                                        CellId owner, CellId n,
                                                        const InstanceOrder& order = {}) {
  std::vector<Rule> rules;
  for (const auto& t : templates) {
    auto expanded = instantiate(t, owner, n, order);
    rules.insert(rules.end(), std::make_move_iterator(expanded.begin()),
                 std::make_move_iterator(expanded.end()));
  }
  return rules;
}

}  // namespace pmod
