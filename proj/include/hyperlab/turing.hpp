#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "hyperlab/error.hpp"

namespace hyperlab::tm {

using Symbol = char;
using StateId = std::size_t;
using Position = std::int64_t;

enum class Move { left, none, right };

constexpr Position offset(Move m) noexcept {
  return m == Move::left ? -1 : (m == Move::right ? 1 : 0);
}

constexpr char move_code(Move m) noexcept {
  return m == Move::left ? 'l' : (m == Move::right ? 'r' : 'n');
}

/// δ(s, a₁..aₙ) = ⟨s', b₁..bₙ, m⟩. One move shared by every head.
struct Transition {
  StateId to;
  std::string write;
  Move move;
};

struct OracleStates {
  StateId ask;
  StateId yes;
  StateId no;
};

class TuringMachine {
 public:
  std::size_t tape_count() const noexcept { return tape_count_; }
  Symbol blank() const noexcept { return blank_; }
  StateId initial() const noexcept { return initial_; }
  std::size_t state_count() const noexcept { return state_names_.size(); }
  const std::string& state_name(StateId s) const { return state_names_.at(s); }
  bool is_final(StateId s) const { return finals_.at(s); }
  bool in_alphabet(Symbol a) const noexcept { return alphabet_.contains(a); }
  const std::set<Symbol>& alphabet() const noexcept { return alphabet_; }
  bool one_sided() const noexcept { return one_sided_; }
  const std::optional<OracleStates>& oracle_states() const noexcept { return oracle_; }
  const std::optional<StateId>& input_state() const noexcept { return input_state_; }
  std::size_t transition_count() const noexcept { return delta_.size(); }

  StateId state(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) fail(ErrorKind::validation, "unknown state '" + std::string(name) + "'");
    return it->second;
  }

  /// nullptr when δ is undefined at (s, read).
  const Transition* find(StateId s, std::string_view read) const {
    auto it = delta_.find(key(s, read));
    return it == delta_.end() ? nullptr : &it->second;
  }

  friend TuringMachine load_machine(const nlohmann::json& doc);

 private:
  static std::string key(StateId s, std::string_view read) {
    std::string k = std::to_string(s);
    k.push_back(':');
    k.append(read);
    return k;
  }

  std::size_t tape_count_ = 1;
  Symbol blank_ = '_';
  std::set<Symbol> alphabet_;
  std::vector<std::string> state_names_;
  std::unordered_map<std::string, StateId> index_;
  std::vector<bool> finals_;
  StateId initial_ = 0;
  std::unordered_map<std::string, Transition> delta_;
  std::optional<OracleStates> oracle_;
  std::optional<StateId> input_state_;
  bool one_sided_ = false;
};

namespace detail {
inline Symbol parse_symbol(const nlohmann::json& j, const char* what) {
  if (!j.is_string() || j.get_ref<const std::string&>().size() != 1)
    fail(ErrorKind::validation, std::string(what) + " must be a one-character string");
  return j.get_ref<const std::string&>()[0];
}

inline std::string parse_symbols(const nlohmann::json& j, std::size_t tapes, const char* what) {
  if (tapes == 1 && j.is_string()) return std::string(1, parse_symbol(j, what));
  if (!j.is_array() || j.size() != tapes)
    fail(ErrorKind::validation,
         std::string(what) + " must list one symbol per tape (" + std::to_string(tapes) + ")");
  std::string out;
  for (const auto& s : j) out.push_back(parse_symbol(s, what));
  return out;
}

inline Move parse_move(const nlohmann::json& j) {
  const auto m = j.get<std::string>();
  if (m == "l") return Move::left;
  if (m == "n") return Move::none;
  if (m == "r") return Move::right;
  fail(ErrorKind::validation, "move must be one of l, n, r; got '" + m + "'");
}
}  // namespace detail

/// Validates and builds a machine from its JSON document:
///   {"blank":"_","alphabet":[...],"states":[...],"initial":"s0","finals":[...],
///    "tapes":1?,"one_sided":false?,"input_state":"q"?,
///    "oracle_states":{"ask":...,"yes":...,"no":...}?,
///    "transitions":[{"from":"s0","read":"1","to":"s0","write":"1","move":"r"}, ...]}
/// With "tapes" > 1, "read" and "write" are arrays with one symbol per tape.
inline TuringMachine load_machine(const nlohmann::json& doc) {
  TuringMachine m;
  try {
    m.tape_count_ = doc.value("tapes", std::size_t{1});
    if (m.tape_count_ == 0) fail(ErrorKind::validation, "a machine needs at least one tape");
    m.one_sided_ = doc.value("one_sided", false);

    for (const auto& a : doc.at("alphabet")) {
      const Symbol s = detail::parse_symbol(a, "alphabet entry");
      if (!m.alphabet_.insert(s).second)
        fail(ErrorKind::validation, std::string("duplicate alphabet symbol '") + s + "'");
    }
    m.blank_ = detail::parse_symbol(doc.at("blank"), "blank");
    if (!m.alphabet_.contains(m.blank_))
      fail(ErrorKind::validation, "blank symbol must be declared in the alphabet");

    for (const auto& s : doc.at("states")) {
      const auto name = s.get<std::string>();
      if (!m.index_.emplace(name, m.state_names_.size()).second)
        fail(ErrorKind::validation, "duplicate state '" + name + "'");
      m.state_names_.push_back(name);
    }
    if (m.state_names_.empty()) fail(ErrorKind::validation, "a machine needs at least one state");
    m.finals_.assign(m.state_names_.size(), false);

    m.initial_ = m.state(doc.at("initial").get<std::string>());
    for (const auto& f : doc.at("finals")) m.finals_[m.state(f.get<std::string>())] = true;

    if (doc.contains("oracle_states")) {
      const auto& o = doc.at("oracle_states");
      m.oracle_ = OracleStates{m.state(o.at("ask").get<std::string>()),
                               m.state(o.at("yes").get<std::string>()),
                               m.state(o.at("no").get<std::string>())};
      if (m.finals_[m.oracle_->ask])
        fail(ErrorKind::validation, "the oracle query state cannot be final");
    }
    if (doc.contains("input_state")) {
      m.input_state_ = m.state(doc.at("input_state").get<std::string>());
      if (m.finals_[*m.input_state_])
        fail(ErrorKind::validation, "the input-request state cannot be final");
    }

    for (const auto& t : doc.at("transitions")) {
      const StateId from = m.state(t.at("from").get<std::string>());
      const StateId to = m.state(t.at("to").get<std::string>());
      const auto read = detail::parse_symbols(t.at("read"), m.tape_count_, "read");
      const auto write = detail::parse_symbols(t.at("write"), m.tape_count_, "write");
      for (Symbol s : read + write)
        if (!m.alphabet_.contains(s))
          fail(ErrorKind::validation, std::string("symbol '") + s + "' is not in the alphabet");
      const Move move = detail::parse_move(t.at("move"));
      if (!m.delta_.emplace(TuringMachine::key(from, read), Transition{to, write, move}).second)
        fail(ErrorKind::determinism, "two transitions for (" + m.state_names_[from] + ", '" + read +
                                         "')");
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::validation, std::string("malformed machine document: ") + e.what());
  }
  return m;
}

inline TuringMachine load_machine_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open machine file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::validation, "machine file is not valid JSON: " + std::string(e.what()));
  }
  return load_machine(doc);
}

// ---------------------------------------------------------------------------

/// Sparse tape: only non-blank cells are stored.
class Tape {
 public:
  Symbol read(Position p, Symbol blank) const {
    auto it = cells_.find(p);
    return it == cells_.end() ? blank : it->second;
  }

  void write(Position p, Symbol s, Symbol blank) {
    if (s == blank)
      cells_.erase(p);
    else
      cells_[p] = s;
  }

  std::size_t non_blank_count() const noexcept { return cells_.size(); }
  const std::map<Position, Symbol>& cells() const noexcept { return cells_; }

  /// Non-blank symbols strictly left of `head`.
  std::uint64_t marks_left_of(Position head) const {
    return static_cast<std::uint64_t>(std::distance(cells_.begin(), cells_.lower_bound(head)));
  }

  /// Contents from the leftmost to the rightmost non-blank cell.
  std::string render(Symbol blank) const {
    if (cells_.empty()) return {};
    std::string out;
    for (Position p = cells_.begin()->first; p <= cells_.rbegin()->first; ++p) out.push_back(read(p, blank));
    return out;
  }

  friend bool operator==(const Tape&, const Tape&) = default;

 private:
  std::map<Position, Symbol> cells_;
};

struct Configuration {
  std::vector<Tape> tapes;
  std::vector<Position> heads;
  StateId state = 0;
  std::uint64_t steps = 0;

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

/// Input goes on tape 0 starting at cell 0; every head starts at 0.
inline Configuration initial_configuration(const TuringMachine& m, std::string_view input) {
  Configuration c;
  c.tapes.resize(m.tape_count());
  c.heads.assign(m.tape_count(), 0);
  c.state = m.initial();
  for (std::size_t i = 0; i < input.size(); ++i) {
    if (!m.in_alphabet(input[i]))
      fail(ErrorKind::validation, std::string("input symbol '") + input[i] + "' is not in the alphabet");
    c.tapes[0].write(static_cast<Position>(i), input[i], m.blank());
  }
  return c;
}

inline std::string scanned(const TuringMachine& m, const Configuration& c) {
  std::string read;
  for (std::size_t t = 0; t < m.tape_count(); ++t) read.push_back(c.tapes[t].read(c.heads[t], m.blank()));
  return read;
}

/// Applies δ in place. Returns false (configuration untouched) when δ is
/// undefined at the scanned symbols.
inline bool advance(const TuringMachine& m, Configuration& c) {
  if (m.is_final(c.state))
    fail(ErrorKind::already_halted, "machine is in final state '" + m.state_name(c.state) + "'");
  const Transition* t = m.find(c.state, scanned(m, c));
  if (t == nullptr) return false;
  const Position delta = offset(t->move);
  if (m.one_sided())
    for (Position h : c.heads)
      if (h + delta < 0) fail(ErrorKind::domain, "head moved left of cell 0 on a one-sided tape");
  for (std::size_t k = 0; k < m.tape_count(); ++k) {
    c.tapes[k].write(c.heads[k], t->write[k], m.blank());
    c.heads[k] += delta;
  }
  c.state = t->to;
  ++c.steps;
  return true;
}

/// Pure single step; std::nullopt signals Stuck.
inline std::optional<Configuration> step(const TuringMachine& m, const Configuration& c) {
  Configuration next = c;
  if (!advance(m, next)) return std::nullopt;
  return next;
}

// ---------------------------------------------------------------------------

enum class Outcome { halted, out_of_fuel, stuck };

constexpr std::string_view to_string(Outcome o) noexcept {
  switch (o) {
    case Outcome::halted: return "Halted";
    case Outcome::out_of_fuel: return "OutOfFuel";
    case Outcome::stuck: return "Stuck";
  }
  return "?";
}

struct RunOptions {
  std::uint64_t fuel = 1'000'000;
  bool record_trace = false;
  std::size_t trace_cap = 10'000;
};

struct RunOutcome {
  Outcome kind = Outcome::stuck;
  Configuration final;
  std::vector<Configuration> trace;
  std::uint64_t oracle_queries = 0;
};

/// Opaque total predicate over the naturals. The engine never inspects it.
using Oracle = std::function<bool(std::uint64_t)>;

class OracleMachine {
 public:
  OracleMachine(TuringMachine machine, Oracle oracle)
      : machine_(std::move(machine)), oracle_(std::move(oracle)) {}

  const TuringMachine& machine() const noexcept { return machine_; }
  const OracleStates& states() const noexcept { return *machine_.oracle_states(); }
  bool query(std::uint64_t n) const { return oracle_(n); }

 private:
  TuringMachine machine_;
  Oracle oracle_;
};

inline OracleMachine attach_oracle(TuringMachine m, Oracle oracle) {
  if (!m.oracle_states())
    fail(ErrorKind::configuration, "machine declares no oracle_states (ask/yes/no)");
  if (!oracle) fail(ErrorKind::configuration, "empty oracle");
  return OracleMachine(std::move(m), std::move(oracle));
}

namespace detail {
inline RunOutcome run_from(const TuringMachine& m, Configuration c, const RunOptions& opts,
                           const OracleMachine* om) {
  RunOutcome out;
  auto record = [&](const Configuration& cfg) {
    if (opts.record_trace && out.trace.size() < opts.trace_cap) out.trace.push_back(cfg);
  };
  record(c);
  const std::uint64_t budget_end = c.steps + opts.fuel;
  for (;;) {
    if (om != nullptr && c.state == om->states().ask) {
      // Queries are free: no step, no fuel.
      const bool answer = om->query(c.tapes[0].marks_left_of(c.heads[0]));
      ++out.oracle_queries;
      c.state = answer ? om->states().yes : om->states().no;
      record(c);
      continue;
    }
    if (m.is_final(c.state)) {
      out.kind = Outcome::halted;
      break;
    }
    if (c.steps >= budget_end) {
      out.kind = Outcome::out_of_fuel;
      break;
    }
    if (!advance(m, c)) {
      out.kind = Outcome::stuck;
      break;
    }
    record(c);
  }
  out.final = std::move(c);
  return out;
}
}  // namespace detail

inline RunOutcome run(const TuringMachine& m, std::string_view input, const RunOptions& opts = {}) {
  return detail::run_from(m, initial_configuration(m, input), opts, nullptr);
}

inline RunOutcome run(const OracleMachine& om, std::string_view input, const RunOptions& opts = {}) {
  return detail::run_from(om.machine(), initial_configuration(om.machine(), input), opts, &om);
}

// ---------------------------------------------------------------------------
// Coupled machines: input keeps arriving after the computation starts.

enum class SessionStatus { running, waiting, halted, stuck };

constexpr std::string_view to_string(SessionStatus s) noexcept {
  switch (s) {
    case SessionStatus::running: return "Running";
    case SessionStatus::waiting: return "Waiting";
    case SessionStatus::halted: return "Halted";
    case SessionStatus::stuck: return "Stuck";
  }
  return "?";
}

/// When control is in the machine's input state, the oldest queued symbol is
/// written under head 0 and δ is applied to it as usual. With an empty queue
/// the session reports Waiting and does not step. `feed` may be called from
/// another thread; `advance` belongs to the owning thread.
class CoupledSession {
 public:
  explicit CoupledSession(TuringMachine machine, std::string_view input = {})
      : machine_(std::move(machine)) {
    if (!machine_.input_state())
      fail(ErrorKind::configuration, "machine declares no input_state");
    config_ = initial_configuration(machine_, input);
    if (machine_.is_final(config_.state)) {
      status_ = SessionStatus::halted;
      closed_ = true;
    }
  }

  void feed(Symbol s) {
    if (!machine_.in_alphabet(s))
      fail(ErrorKind::validation, std::string("fed symbol '") + s + "' is not in the alphabet");
    std::lock_guard lock(mutex_);
    if (closed_) fail(ErrorKind::session_closed, "session has terminated");
    queue_.push_back(s);
  }

  /// Runs at most `max_steps` transitions, stopping early on Waiting,
  /// Halted or Stuck.
  SessionStatus advance(std::uint64_t max_steps) {
    for (std::uint64_t i = 0; i < max_steps; ++i) {
      if (status_ == SessionStatus::halted || status_ == SessionStatus::stuck) return status_;
      if (config_.state == *machine_.input_state()) {
        std::optional<Symbol> next;
        {
          std::lock_guard lock(mutex_);
          if (!queue_.empty()) {
            next = queue_.front();
            queue_.pop_front();
          }
        }
        if (!next) return status_ = SessionStatus::waiting;
        config_.tapes[0].write(config_.heads[0], *next, machine_.blank());
      }
      if (!tm::advance(machine_, config_)) {
        close(SessionStatus::stuck);
      } else if (machine_.is_final(config_.state)) {
        close(SessionStatus::halted);
      } else {
        status_ = SessionStatus::running;
      }
    }
    return status_;
  }

  SessionStatus status() const noexcept { return status_; }
  const Configuration& configuration() const noexcept { return config_; }
  const TuringMachine& machine() const noexcept { return machine_; }

  std::size_t pending() const {
    std::lock_guard lock(mutex_);
    return queue_.size();
  }

 private:
  void close(SessionStatus s) {
    status_ = s;
    std::lock_guard lock(mutex_);
    closed_ = true;
  }

  TuringMachine machine_;
  Configuration config_;
  SessionStatus status_ = SessionStatus::running;
  mutable std::mutex mutex_;
  std::deque<Symbol> queue_;
  bool closed_ = false;
};

}  // namespace hyperlab::tm
