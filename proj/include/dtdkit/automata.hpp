#pragma once

// Finite automata over dense integer alphabets {0, …, n−1}.
//
// The same machinery serves tag alphabets A, letter alphabets T = A ∪ Ā
// (symbol = Letter::code()), nonterminal alphabets and state-pair alphabets.
// States are dense ids in construction order and every algorithm iterates in
// id/symbol order, so results are reproducible.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <span>
#include <utility>
#include <vector>

#include "dtdkit/error.hpp"

namespace dtdkit {

using State = std::uint32_t;
using Symbol = std::uint32_t;
using Word = std::vector<Symbol>;

inline constexpr State no_state = std::numeric_limits<State>::max();

/// Deterministic automaton, possibly partial (missing transitions reject).
class Dfa {
 public:
  explicit Dfa(std::size_t alphabet_size = 0) : alphabet_size_(alphabet_size) { add_state(false); }

  static Dfa empty(std::size_t alphabet_size) { return Dfa(alphabet_size); }

  static Dfa epsilon(std::size_t alphabet_size) {
    Dfa d(alphabet_size);
    d.set_final(0, true);
    return d;
  }

  /// Σ'* for the symbols flagged in `allowed` (all symbols when empty).
  static Dfa star_of(std::size_t alphabet_size, const std::vector<char>& allowed = {}) {
    Dfa d = epsilon(alphabet_size);
    for (Symbol s = 0; s < alphabet_size; ++s)
      if (allowed.empty() || allowed[s]) d.set_transition(0, s, 0);
    return d;
  }

  static Dfa universal(std::size_t alphabet_size) { return star_of(alphabet_size); }

  /// Trie automaton accepting exactly `words`.
  static Dfa from_words(std::size_t alphabet_size, std::span<const Word> words) {
    Dfa d(alphabet_size);
    for (const auto& w : words) {
      State p = d.initial();
      for (Symbol s : w) {
        if (s >= alphabet_size) throw Error(ErrorCode::alphabet_mismatch, "symbol out of range");
        State q = d.next(p, s);
        if (q == no_state) {
          q = d.add_state(false);
          d.set_transition(p, s, q);
        }
        p = q;
      }
      d.set_final(p, true);
    }
    return d;
  }

  State add_state(bool final = false) {
    const auto id = static_cast<State>(final_.size());
    final_.push_back(final ? 1 : 0);
    delta_.resize(delta_.size() + alphabet_size_, no_state);
    return id;
  }

  void set_transition(State p, Symbol s, State q) { delta_.at(index(p, s)) = q; }
  State next(State p, Symbol s) const { return delta_[index(p, s)]; }

  void set_final(State p, bool f) { final_.at(p) = f ? 1 : 0; }
  bool is_final(State p) const { return final_.at(p) != 0; }
  void set_initial(State p) { initial_ = p; }
  State initial() const noexcept { return initial_; }

  std::size_t state_count() const noexcept { return final_.size(); }
  std::size_t alphabet_size() const noexcept { return alphabet_size_; }

  /// Runs w from `from`; no_state when the run falls off a missing transition.
  State run(std::span<const Symbol> w, State from) const {
    State p = from;
    for (Symbol s : w) {
      if (p == no_state) return no_state;
      p = next(p, s);
    }
    return p;
  }
  State run(std::span<const Symbol> w) const { return run(w, initial_); }

  bool accepts(std::span<const Symbol> w) const {
    const State p = run(w);
    return p != no_state && is_final(p);
  }

  bool is_total() const {
    return std::none_of(delta_.begin(), delta_.end(), [](State q) { return q == no_state; });
  }

  friend bool operator==(const Dfa&, const Dfa&) = default;

 private:
  std::size_t index(State p, Symbol s) const { return static_cast<std::size_t>(p) * alphabet_size_ + s; }

  std::size_t alphabet_size_;
  std::vector<State> delta_;
  std::vector<char> final_;
  State initial_ = 0;
};

/// Nondeterministic automaton with ε-moves.
class Nfa {
 public:
  explicit Nfa(std::size_t alphabet_size = 0) : alphabet_size_(alphabet_size) {}

  State add_state(bool final = false) {
    trans_.emplace_back();
    eps_.emplace_back();
    final_.push_back(final ? 1 : 0);
    return static_cast<State>(final_.size() - 1);
  }
  void add_transition(State p, Symbol s, State q) {
    if (s >= alphabet_size_) throw Error(ErrorCode::alphabet_mismatch, "symbol out of range");
    trans_.at(p).emplace_back(s, q);
  }
  void add_epsilon(State p, State q) { eps_.at(p).push_back(q); }
  void add_initial(State p) { initial_.push_back(p); }
  void set_final(State p, bool f) { final_.at(p) = f ? 1 : 0; }

  bool is_final(State p) const { return final_.at(p) != 0; }
  const std::vector<State>& initials() const noexcept { return initial_; }
  const std::vector<std::pair<Symbol, State>>& transitions(State p) const { return trans_.at(p); }
  const std::vector<State>& epsilons(State p) const { return eps_.at(p); }
  std::size_t state_count() const noexcept { return final_.size(); }
  std::size_t alphabet_size() const noexcept { return alphabet_size_; }

  /// Copies all states of `other` into this automaton; returns the id offset.
  State absorb(const Nfa& other) {
    const auto offset = static_cast<State>(state_count());
    for (State p = 0; p < other.state_count(); ++p) add_state(other.is_final(p));
    for (State p = 0; p < other.state_count(); ++p) {
      for (auto [s, q] : other.transitions(p)) add_transition(p + offset, s, q + offset);
      for (State q : other.epsilons(p)) add_epsilon(p + offset, q + offset);
    }
    return offset;
  }

 private:
  std::size_t alphabet_size_;
  std::vector<std::vector<std::pair<Symbol, State>>> trans_;
  std::vector<std::vector<State>> eps_;
  std::vector<char> final_;
  std::vector<State> initial_;
};

inline Nfa to_nfa(const Dfa& d) {
  Nfa n(d.alphabet_size());
  for (State p = 0; p < d.state_count(); ++p) n.add_state(d.is_final(p));
  for (State p = 0; p < d.state_count(); ++p)
    for (Symbol s = 0; s < d.alphabet_size(); ++s)
      if (State q = d.next(p, s); q != no_state) n.add_transition(p, s, q);
  n.add_initial(d.initial());
  return n;
}

namespace detail {

inline std::vector<State> epsilon_closure(const Nfa& n, std::vector<State> set) {
  std::vector<char> seen(n.state_count(), 0);
  std::vector<State> stack;
  for (State p : set) {
    if (!seen[p]) {
      seen[p] = 1;
      stack.push_back(p);
    }
  }
  while (!stack.empty()) {
    State p = stack.back();
    stack.pop_back();
    for (State q : n.epsilons(p)) {
      if (!seen[q]) {
        seen[q] = 1;
        stack.push_back(q);
      }
    }
  }
  std::vector<State> out;
  for (State p = 0; p < n.state_count(); ++p)
    if (seen[p]) out.push_back(p);
  return out;
}

}  // namespace detail

/// Subset construction over reachable subsets. The empty subset is left out,
/// so the result is partial.
inline Dfa determinize(const Nfa& n) {
  const std::size_t k = n.alphabet_size();
  Dfa d(k);
  std::map<std::vector<State>, State> ids;
  std::vector<std::vector<State>> sets;
  auto start = detail::epsilon_closure(n, n.initials());
  ids.emplace(start, 0);
  sets.push_back(start);
  d.set_final(0, std::any_of(start.begin(), start.end(), [&](State p) { return n.is_final(p); }));
  for (std::size_t i = 0; i < sets.size(); ++i) {
    std::vector<std::vector<State>> succ(k);
    for (State p : sets[i])
      for (auto [s, q] : n.transitions(p)) succ[s].push_back(q);
    for (Symbol s = 0; s < k; ++s) {
      if (succ[s].empty()) continue;
      auto target = detail::epsilon_closure(n, std::move(succ[s]));
      auto [it, inserted] = ids.emplace(target, static_cast<State>(sets.size()));
      if (inserted) {
        const bool fin = std::any_of(target.begin(), target.end(), [&](State p) { return n.is_final(p); });
        d.add_state(fin);
        sets.push_back(target);
      }
      d.set_transition(static_cast<State>(i), s, it->second);
    }
  }
  return d;
}

inline std::vector<char> reachable_states(const Dfa& d) {
  std::vector<char> seen(d.state_count(), 0);
  std::vector<State> stack{d.initial()};
  seen[d.initial()] = 1;
  while (!stack.empty()) {
    State p = stack.back();
    stack.pop_back();
    for (Symbol s = 0; s < d.alphabet_size(); ++s) {
      State q = d.next(p, s);
      if (q != no_state && !seen[q]) {
        seen[q] = 1;
        stack.push_back(q);
      }
    }
  }
  return seen;
}

inline std::vector<char> coreachable_states(const Dfa& d) {
  std::vector<std::vector<State>> pred(d.state_count());
  for (State p = 0; p < d.state_count(); ++p)
    for (Symbol s = 0; s < d.alphabet_size(); ++s)
      if (State q = d.next(p, s); q != no_state) pred[q].push_back(p);
  std::vector<char> seen(d.state_count(), 0);
  std::vector<State> stack;
  for (State p = 0; p < d.state_count(); ++p) {
    if (d.is_final(p)) {
      seen[p] = 1;
      stack.push_back(p);
    }
  }
  while (!stack.empty()) {
    State q = stack.back();
    stack.pop_back();
    for (State p : pred[q]) {
      if (!seen[p]) {
        seen[p] = 1;
        stack.push_back(p);
      }
    }
  }
  return seen;
}

/// Keeps only useful (reachable and co-reachable) states. States keep their
/// relative order; the result is partial.
inline Dfa trim(const Dfa& d) {
  const auto reach = reachable_states(d);
  const auto coreach = coreachable_states(d);
  if (!(reach[d.initial()] && coreach[d.initial()])) return Dfa::empty(d.alphabet_size());
  std::vector<State> remap(d.state_count(), no_state);
  Dfa out(d.alphabet_size());
  remap[d.initial()] = 0;
  out.set_final(0, d.is_final(d.initial()));
  for (State p = 0; p < d.state_count(); ++p)
    if (p != d.initial() && reach[p] && coreach[p]) remap[p] = out.add_state(d.is_final(p));
  for (State p = 0; p < d.state_count(); ++p) {
    if (remap[p] == no_state) continue;
    for (Symbol s = 0; s < d.alphabet_size(); ++s) {
      State q = d.next(p, s);
      if (q != no_state && remap[q] != no_state) out.set_transition(remap[p], s, remap[q]);
    }
  }
  return out;
}

/// Adds an explicit dead state when some transition is missing.
inline Dfa totalize(const Dfa& d) {
  if (d.is_total()) return d;
  Dfa out = d;
  const State dead = out.add_state(false);
  for (State p = 0; p < out.state_count(); ++p)
    for (Symbol s = 0; s < out.alphabet_size(); ++s)
      if (out.next(p, s) == no_state) out.set_transition(p, s, dead);
  return out;
}

/// Canonical minimal total DFA: Moore refinement, then states renumbered in
/// breadth-first order from the initial state (symbols in increasing order).
/// Two DFAs accept the same language iff their minimizations compare equal.
inline Dfa minimize(const Dfa& input) {
  const Dfa d = totalize(input);
  const std::size_t k = d.alphabet_size();
  const auto reach = reachable_states(d);
  std::vector<State> cls(d.state_count(), 0);
  for (State p = 0; p < d.state_count(); ++p) cls[p] = d.is_final(p) ? 1 : 0;
  std::size_t classes = 0;
  for (;;) {
    std::map<std::vector<State>, State> sig_ids;
    std::vector<State> next_cls(d.state_count(), no_state);
    for (State p = 0; p < d.state_count(); ++p) {
      if (!reach[p]) continue;
      std::vector<State> sig;
      sig.reserve(k + 1);
      sig.push_back(cls[p]);
      for (Symbol s = 0; s < k; ++s) sig.push_back(cls[d.next(p, s)]);
      auto [it, _] = sig_ids.emplace(std::move(sig), static_cast<State>(sig_ids.size()));
      next_cls[p] = it->second;
    }
    const std::size_t count = sig_ids.size();
    cls = std::move(next_cls);
    for (State p = 0; p < d.state_count(); ++p)
      if (!reach[p]) cls[p] = 0;
    if (count == classes) break;
    classes = count;
  }
  // Canonical renumbering.
  std::vector<State> order(classes, no_state);
  std::vector<State> rep(classes, no_state);
  for (State p = 0; p < d.state_count(); ++p)
    if (reach[p] && rep[cls[p]] == no_state) rep[cls[p]] = p;
  Dfa out(k);
  std::deque<State> queue;
  order[cls[d.initial()]] = 0;
  out.set_final(0, d.is_final(d.initial()));
  queue.push_back(cls[d.initial()]);
  while (!queue.empty()) {
    State c = queue.front();
    queue.pop_front();
    State p = rep[c];
    for (Symbol s = 0; s < k; ++s) {
      State qc = cls[d.next(p, s)];
      if (order[qc] == no_state) {
        order[qc] = out.add_state(d.is_final(rep[qc]));
        queue.push_back(qc);
      }
      out.set_transition(order[c], s, order[qc]);
    }
  }
  return out;
}

inline Dfa complement(const Dfa& d) {
  Dfa out = totalize(d);
  for (State p = 0; p < out.state_count(); ++p) out.set_final(p, !out.is_final(p));
  return out;
}

enum class BoolOp { intersection, union_, difference, symmetric_difference };

/// Product construction over reachable state pairs.
inline Dfa combine(const Dfa& x_in, const Dfa& y_in, BoolOp op) {
  if (x_in.alphabet_size() != y_in.alphabet_size())
    throw Error(ErrorCode::alphabet_mismatch, "combine: alphabet sizes differ");
  const Dfa x = totalize(x_in);
  const Dfa y = totalize(y_in);
  const std::size_t k = x.alphabet_size();
  auto accept = [op](bool a, bool b) {
    switch (op) {
      case BoolOp::intersection: return a && b;
      case BoolOp::union_: return a || b;
      case BoolOp::difference: return a && !b;
      case BoolOp::symmetric_difference: return a != b;
    }
    return false;
  };
  Dfa out(k);
  std::map<std::pair<State, State>, State> ids;
  std::vector<std::pair<State, State>> pairs{{x.initial(), y.initial()}};
  ids.emplace(pairs[0], 0);
  out.set_final(0, accept(x.is_final(x.initial()), y.is_final(y.initial())));
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto [p, q] = pairs[i];
    for (Symbol s = 0; s < k; ++s) {
      std::pair<State, State> t{x.next(p, s), y.next(q, s)};
      auto [it, inserted] = ids.emplace(t, static_cast<State>(pairs.size()));
      if (inserted) {
        out.add_state(accept(x.is_final(t.first), y.is_final(t.second)));
        pairs.push_back(t);
      }
      out.set_transition(static_cast<State>(i), s, it->second);
    }
  }
  return out;
}

/// Shortest accepted word, least in symbol order among the shortest.
inline std::optional<Word> shortest_word(const Dfa& d) {
  std::vector<State> parent(d.state_count(), no_state);
  std::vector<Symbol> via(d.state_count(), 0);
  std::vector<char> seen(d.state_count(), 0);
  std::deque<State> queue{d.initial()};
  seen[d.initial()] = 1;
  while (!queue.empty()) {
    State p = queue.front();
    queue.pop_front();
    if (d.is_final(p)) {
      Word w;
      for (State c = p; c != d.initial(); c = parent[c]) w.push_back(via[c]);
      std::reverse(w.begin(), w.end());
      return w;
    }
    for (Symbol s = 0; s < d.alphabet_size(); ++s) {
      State q = d.next(p, s);
      if (q != no_state && !seen[q]) {
        seen[q] = 1;
        parent[q] = p;
        via[q] = s;
        queue.push_back(q);
      }
    }
  }
  return std::nullopt;
}

inline bool is_empty(const Dfa& d) { return !shortest_word(d).has_value(); }

/// True iff the language is finite: the useful part has no cycle.
inline bool is_finite(const Dfa& d) {
  const Dfa t = trim(d);
  // 0 = unvisited, 1 = on stack, 2 = done
  std::vector<char> color(t.state_count(), 0);
  std::vector<std::pair<State, Symbol>> stack{{t.initial(), 0}};
  color[t.initial()] = 1;
  while (!stack.empty()) {
    auto& [p, s] = stack.back();
    if (s == t.alphabet_size()) {
      color[p] = 2;
      stack.pop_back();
      continue;
    }
    State q = t.next(p, s++);
    if (q == no_state) continue;
    if (color[q] == 1) return false;
    if (color[q] == 0) {
      color[q] = 1;
      stack.emplace_back(q, 0);
    }
  }
  return true;
}

struct Comparison {
  bool holds = true;
  /// Shortest word witnessing failure (least in symbol order among the shortest).
  std::optional<Word> counterexample;
};

inline Comparison compare_subset(const Dfa& x, const Dfa& y) {
  auto w = shortest_word(combine(x, y, BoolOp::difference));
  return {!w.has_value(), w};
}

inline Comparison compare_equal(const Dfa& x, const Dfa& y) {
  auto w = shortest_word(combine(x, y, BoolOp::symmetric_difference));
  return {!w.has_value(), w};
}

inline bool language_equal(const Dfa& x, const Dfa& y) { return compare_equal(x, y).holds; }

/// All accepted words of length ≤ max_len in length-lexicographic order.
inline std::vector<Word> enumerate(const Dfa& d, std::size_t max_len) {
  const std::size_t n = d.state_count();
  // can[r][p]: some accepted word of length exactly r leaves p.
  std::vector<std::vector<char>> can(max_len + 1, std::vector<char>(n, 0));
  for (State p = 0; p < n; ++p) can[0][p] = d.is_final(p);
  for (std::size_t r = 1; r <= max_len; ++r)
    for (State p = 0; p < n; ++p)
      for (Symbol s = 0; s < d.alphabet_size() && !can[r][p]; ++s)
        if (State q = d.next(p, s); q != no_state && can[r - 1][q]) can[r][p] = 1;
  std::vector<Word> out;
  Word cur;
  auto dfs = [&](auto&& self, State p, std::size_t remaining) -> void {
    if (remaining == 0) {
      out.push_back(cur);
      return;
    }
    for (Symbol s = 0; s < d.alphabet_size(); ++s) {
      State q = d.next(p, s);
      if (q == no_state || !can[remaining - 1][q]) continue;
      cur.push_back(s);
      self(self, q, remaining - 1);
      cur.pop_back();
    }
  };
  for (std::size_t len = 0; len <= max_len; ++len)
    if (can[len][d.initial()]) dfs(dfs, d.initial(), len);
  return out;
}

/// Image under the finite substitution s ↦ f[s] ⊆ {0, …, target_size−1}.
inline Nfa map_alphabet(const Dfa& d, std::size_t target_size, const std::vector<std::vector<Symbol>>& f) {
  if (f.size() != d.alphabet_size()) throw Error(ErrorCode::alphabet_mismatch, "map_alphabet: mapping size differs");
  Nfa n(target_size);
  for (State p = 0; p < d.state_count(); ++p) n.add_state(d.is_final(p));
  for (State p = 0; p < d.state_count(); ++p)
    for (Symbol s = 0; s < d.alphabet_size(); ++s)
      if (State q = d.next(p, s); q != no_state)
        for (Symbol t : f[s]) n.add_transition(p, t, q);
  n.add_initial(d.initial());
  return n;
}

/// Injective relabelling onto a larger alphabet: symbol s becomes mapping[s].
inline Dfa remap_symbols(const Dfa& d, std::size_t target_size, const std::vector<Symbol>& mapping) {
  if (mapping.size() != d.alphabet_size()) throw Error(ErrorCode::alphabet_mismatch, "remap_symbols: mapping size differs");
  Dfa out(target_size);
  for (State p = 1; p < d.state_count(); ++p) out.add_state(false);
  for (State p = 0; p < d.state_count(); ++p) {
    out.set_final(p, d.is_final(p));
    for (Symbol s = 0; s < d.alphabet_size(); ++s)
      if (State q = d.next(p, s); q != no_state) out.set_transition(p, mapping[s], q);
  }
  out.set_initial(d.initial());
  return out;
}

/// Drops every transition whose symbol is not flagged in `allowed`.
inline Dfa restrict_symbols(const Dfa& d, const std::vector<char>& allowed) {
  Dfa out = d;
  for (State p = 0; p < out.state_count(); ++p)
    for (Symbol s = 0; s < out.alphabet_size(); ++s)
      if (!allowed[s]) out.set_transition(p, s, no_state);
  return out;
}

/// Symbols that label at least one useful transition, i.e. occur in some accepted word.
inline std::vector<char> live_symbols(const Dfa& d) {
  const Dfa t = trim(d);
  std::vector<char> live(d.alphabet_size(), 0);
  for (State p = 0; p < t.state_count(); ++p)
    for (Symbol s = 0; s < t.alphabet_size(); ++s)
      if (t.next(p, s) != no_state) live[s] = 1;
  return live;
}

inline Dfa to_min_dfa(const Nfa& n) { return minimize(determinize(n)); }

}  // namespace dtdkit
