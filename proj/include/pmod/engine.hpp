#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pmod/error.hpp"
#include "pmod/multiset.hpp"
#include "pmod/rules.hpp"

namespace pmod {

struct CellSnapshot {
  StateId state;
  Multiset contents;

  friend bool operator==(const CellSnapshot&, const CellSnapshot&) = default;
};

/// One synchronous step of the whole module. Messages produced by the step
/// that led here are already merged into `cells`; `inflight` keeps a copy per
/// recipient so delivery can be audited.
struct Configuration {
  std::size_t step = 0;
  std::vector<CellSnapshot> cells;  // cells[i - 1] is cell i
  std::vector<Multiset> inflight;   // same indexing

  [[nodiscard]] const CellSnapshot& cell(CellId i) const { return cells.at(i - 1); }
  [[nodiscard]] CellSnapshot& cell(CellId i) { return cells.at(i - 1); }
  [[nodiscard]] CellId size() const noexcept { return static_cast<CellId>(cells.size()); }

  [[nodiscard]] bool inflight_empty() const {
    return std::all_of(inflight.begin(), inflight.end(), [](const Multiset& m) { return m.empty(); });
  }

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

struct TraceRow {
  std::size_t step = 0;
  std::vector<std::string> rendered;
};

[[nodiscard]] inline TraceRow render_row(const Configuration& c) {
  TraceRow row{c.step, {}};
  row.rendered.reserve(c.cells.size());
  for (const auto& cell : c.cells) row.rendered.push_back(render_canonical(cell.state, cell.contents));
  return row;
}

/// Tab-separated trace table with a "Step\Cell" header.
inline void write_trace(std::ostream& os, const std::vector<TraceRow>& rows, CellId n) {
  os << "Step\\Cell";
  for (CellId i = 1; i <= n; ++i) os << "\tσ" << i;
  os << '\n';
  for (const auto& row : rows) {
    os << row.step;
    for (const auto& s : row.rendered) os << '\t' << s;
    os << '\n';
  }
}

struct FiredRule {
  std::size_t rule = 0;  // index into the cell's rule list
  std::uint32_t times = 0;
};

struct Delivery {
  CellId to = 0;
  Multiset message;
};

// What one cell did during one step.
struct CellLog {
  std::vector<FiredRule> fired;
  Multiset consumed;
  Multiset produced;
  std::vector<Delivery> sent;
  Multiset discarded;  // targeted messages whose recipient is not a neighbor
};

struct StepLog {
  std::vector<CellLog> cells;

  [[nodiscard]] bool any_fired() const {
    return std::any_of(cells.begin(), cells.end(), [](const CellLog& c) { return !c.fired.empty(); });
  }
};

struct RunResult {
  Configuration final;
  std::vector<TraceRow> trace;
  bool halted = false;

  [[nodiscard]] std::size_t steps() const noexcept { return final.step; }
};

/// Synchronous executor of a simple P module.
///
/// Every cell reads only its own snapshot, so cells can be evaluated in any
/// order (or concurrently) with the same outcome. Within a cell the rule
/// list is scanned once in weak-priority order: the first applicable rule
/// fixes the target state and later rules fire only if they share it.
/// Objects produced during a step become usable in the next one.
class Engine {
 public:
  using Observer = std::function<void(const Configuration& before, const StepLog&, const Configuration& after)>;

  Engine(std::vector<std::vector<Rule>> rules, std::vector<std::vector<CellId>> neighbors)
      : rules_(std::move(rules)), neighbors_(std::move(neighbors)) {
    if (rules_.size() != neighbors_.size()) {
      throw ContractViolation("engine: rule lists and neighbor sets disagree on the cell count");
    }
    for (auto& nb : neighbors_) std::sort(nb.begin(), nb.end());
    by_state_.resize(rules_.size());
    for (std::size_t c = 0; c < rules_.size(); ++c) {
      for (std::size_t r = 0; r < rules_[c].size(); ++r) {
        if (rules_[c][r].owner != c + 1) {
          throw ContractViolation("engine: rule " + rules_[c][r].text + " placed in cell " + std::to_string(c + 1));
        }
        by_state_[c][rules_[c][r].from.value].push_back(r);
      }
    }
  }

  [[nodiscard]] CellId size() const noexcept { return static_cast<CellId>(rules_.size()); }
  [[nodiscard]] const std::vector<Rule>& rules(CellId i) const { return rules_.at(i - 1); }
  [[nodiscard]] const std::vector<CellId>& neighbors(CellId i) const { return neighbors_.at(i - 1); }

  [[nodiscard]] Configuration step(const Configuration& config, StepLog* log = nullptr) const {
    std::vector<CellId> order(size());
    std::iota(order.begin(), order.end(), CellId{1});
    return step(config, order, log);
  }

  // Evaluates cells in the given order; the result does not depend on it.
  [[nodiscard]] Configuration step(const Configuration& config, std::span<const CellId> evaluation_order,
                                   StepLog* log = nullptr) const {
    check(config);
    const CellId n = size();
    std::vector<CellSnapshot> next(n);
    std::vector<CellLog> logs(n);
    for (CellId i : evaluation_order) {
      logs[i - 1] = evolve(i, config.cell(i), next[i - 1]);
    }

    Configuration out;
    out.step = config.step + 1;
    out.inflight.assign(n, Multiset{});
    for (CellId i = 1; i <= n; ++i) {
      for (const auto& d : logs[i - 1].sent) out.inflight[d.to - 1] = add(std::move(out.inflight[d.to - 1]), d.message);
    }
    for (CellId i = 1; i <= n; ++i) next[i - 1].contents = add(std::move(next[i - 1].contents), out.inflight[i - 1]);
    out.cells = std::move(next);
    if (log) log->cells = std::move(logs);
    return out;
  }

  /// Steps until no rule is applicable anywhere, or until `max_steps` steps
  /// have run (halted = false).
  [[nodiscard]] RunResult run(Configuration initial, std::size_t max_steps, bool keep_trace = true,
                              const Observer& observer = {}) const {
    if (max_steps < 1) throw ContractViolation("run: max_steps must be >= 1");
    RunResult result;
    if (keep_trace) result.trace.push_back(render_row(initial));
    Configuration current = std::move(initial);
    StepLog log;
    for (;;) {
      Configuration next = step(current, &log);
      if (!log.any_fired()) {
        result.halted = true;
        break;
      }
      if (current.step >= max_steps) break;
      if (observer) observer(current, log, next);
      current = std::move(next);
      if (keep_trace) result.trace.push_back(render_row(current));
    }
    result.final = std::move(current);
    return result;
  }

 private:
  void check(const Configuration& config) const {
    if (config.cells.size() != rules_.size()) {
      throw ContractViolation("engine: configuration has " + std::to_string(config.cells.size()) +
                              " cells, module has " + std::to_string(rules_.size()));
    }
  }

  CellLog evolve(CellId id, const CellSnapshot& snapshot, CellSnapshot& next) const {
    CellLog log;
    Multiset available = snapshot.contents;
    std::optional<StateId> committed;
    const auto& rules = rules_[id - 1];
    const auto& nb = neighbors_[id - 1];

    for (std::size_t r : by_state_[id - 1][snapshot.state.value]) {
      const Rule& rule = rules[r];
      if (committed && rule.to != *committed) continue;
      if (!contains(available, rule.lhs)) continue;

      std::uint32_t times = 1;
      if (rule.mode == Mode::max) {
        times = UINT32_MAX;
        for (const auto& [obj, count] : rule.lhs) times = std::min(times, available.count(obj) / count);
      }
      committed = rule.to;
      log.fired.push_back({r, times});

      for (const auto& [obj, count] : rule.lhs) {
        available.erase(obj, count * times);
        log.consumed.insert(obj, count * times);
      }
      for (const auto& [obj, count] : rule.rhs) log.produced.insert(obj, count * times);

      if (rule.transfer == Transfer::none) continue;
      Multiset message;
      for (const auto& [obj, count] : rule.message) message.insert(obj, count * times);
      if (rule.transfer == Transfer::broadcast) {
        for (CellId to : nb) log.sent.push_back({to, message});
      } else if (std::binary_search(nb.begin(), nb.end(), rule.target)) {
        log.sent.push_back({rule.target, std::move(message)});
      } else {
        log.discarded = add(std::move(log.discarded), message);
      }
    }

    next.state = committed.value_or(snapshot.state);
    next.contents = add(std::move(available), log.produced);
    return log;
  }

  std::vector<std::vector<Rule>> rules_;
  std::vector<std::vector<CellId>> neighbors_;
  // Per cell, per from-state: rule indices in priority order.
  std::vector<std::array<std::vector<std::size_t>, 256>> by_state_;
};

}  // namespace pmod
