#pragma once

// Regular languages K ⊆ D_a given by DFAs over letter codes: Dyck checks,
// good pairs, surfaces, the XML test (two independent procedures) and height.

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dtdkit/automata.hpp"
#include "dtdkit/dfa_io.hpp"
#include "dtdkit/dyck.hpp"
#include "dtdkit/error.hpp"
#include "dtdkit/xml_grammar.hpp"

namespace dtdkit {

namespace detail {

/// Shortest (shortlex) word leading from the initial state to p.
inline std::optional<Word> word_to(const Dfa& d, State target) {
  Dfa copy = d;
  for (State p = 0; p < copy.state_count(); ++p) copy.set_final(p, p == target);
  return shortest_word(copy);
}

/// Shortest (shortlex) word leading from p to a final state.
inline std::optional<Word> word_from(const Dfa& d, State p) {
  Dfa copy = d;
  copy.set_initial(p);
  return shortest_word(copy);
}

inline TaggedWord letters_of(const std::optional<Word>& w) { return w ? to_letters(*w) : TaggedWord{}; }

inline TaggedWord join(std::initializer_list<std::span<const Letter>> parts) {
  TaggedWord out;
  for (auto p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

}  // namespace detail

/// Stack labelling of a trimmed DFA: the unmatched opening tags after any
/// prefix leading to each state.
struct StackLabels {
  bool consistent = true;
  std::vector<std::optional<std::vector<TagId>>> stack;
  /// When inconsistent: an accepted word outside D*.
  TaggedWord counterexample;
  std::string reason;
};

/// Labels each state of a trimmed DFA. Consistency plus empty stacks at final
/// states is equivalent to K ⊆ D*.
inline StackLabels label_stacks(const Dfa& t) {
  StackLabels r;
  const std::size_t n = t.state_count();
  r.stack.assign(n, std::nullopt);
  std::vector<State> parent(n, no_state);
  std::vector<Symbol> via(n, 0);
  auto prefix_to = [&](State p) {
    Word w;
    for (State c = p; c != t.initial(); c = parent[c]) w.push_back(via[c]);
    std::reverse(w.begin(), w.end());
    return to_letters(w);
  };
  auto fail = [&](TaggedWord w, std::string why) {
    r.consistent = false;
    r.counterexample = std::move(w);
    r.reason = std::move(why);
    return r;
  };
  r.stack[t.initial()] = std::vector<TagId>{};
  std::deque<State> queue{t.initial()};
  while (!queue.empty()) {
    const State p = queue.front();
    queue.pop_front();
    const auto& sp = *r.stack[p];
    if (t.is_final(p) && !sp.empty()) {
      return fail(prefix_to(p), "an accepted word leaves tags open");
    }
    for (Symbol s = 0; s < t.alphabet_size(); ++s) {
      const State q = t.next(p, s);
      if (q == no_state) continue;
      const Letter l = Letter::from_code(s);
      std::vector<TagId> sq = sp;
      if (!l.close) {
        sq.push_back(l.tag);
      } else if (sq.empty() || sq.back() != l.tag) {
        auto w = detail::join({prefix_to(p), TaggedWord{l}, detail::letters_of(detail::word_from(t, q))});
        return fail(std::move(w), "a closing tag does not match");
      } else {
        sq.pop_back();
      }
      if (!r.stack[q]) {
        r.stack[q] = std::move(sq);
        parent[q] = p;
        via[q] = s;
        queue.push_back(q);
      } else if (*r.stack[q] != sq) {
        // Two prefixes with different unmatched tags share every completion; at most one completes to D*.
        const auto tail = detail::letters_of(detail::word_from(t, q));
        auto first = detail::join({prefix_to(q), tail});
        auto second = detail::join({prefix_to(p), TaggedWord{l}, tail});
        return fail(is_dyck_word(first) ? std::move(second) : std::move(first),
                    "two paths reach one state with different open tags");
      }
    }
  }
  return r;
}

struct DyckRegularVerdict {
  bool ok = false;
  TagId root = 0;
  std::string reason;
  /// When not ok: an accepted word outside D_root (or outside D when no root is known).
  std::optional<TaggedWord> counterexample;
};

/// Decides K ⊆ D* for a regular K.
inline DyckRegularVerdict check_dyck_star_regular(const TaggedDfa& k) {
  const Dfa t = trim(k.dfa);
  DyckRegularVerdict v;
  const auto labels = label_stacks(t);
  if (!labels.consistent) {
    v.reason = labels.reason;
    v.counterexample = labels.counterexample;
    return v;
  }
  v.ok = true;
  return v;
}

/// Decides K ⊆ D_a for some tag a, and finds a.
inline DyckRegularVerdict check_dyck_regular(const TaggedDfa& k) {
  const Dfa t = trim(k.dfa);
  DyckRegularVerdict v;
  if (is_empty(t)) {
    v.reason = "the language is empty";
    return v;
  }
  if (t.is_final(t.initial())) {
    v.reason = "the empty word is accepted";
    v.counterexample = TaggedWord{};
    return v;
  }
  const auto labels = label_stacks(t);
  if (!labels.consistent) {
    v.reason = labels.reason;
    v.counterexample = labels.counterexample;
    return v;
  }
  std::optional<TagId> root;
  for (Symbol s = 0; s < t.alphabet_size(); ++s) {
    const State q = t.next(t.initial(), s);
    if (q == no_state) continue;
    const Letter l = Letter::from_code(s);
    if (root && *root != l.tag) {
      v.reason = "accepted words start with different tags";
      v.counterexample = detail::join({TaggedWord{l}, detail::letters_of(detail::word_from(t, q))});
      return v;
    }
    root = l.tag;
  }
  // Depth returns to zero only at the end of a word.
  for (State p = 0; p < t.state_count(); ++p) {
    if (p == t.initial() || !labels.stack[p]->empty()) continue;
    for (Symbol s = 0; s < t.alphabet_size(); ++s) {
      const State q = t.next(p, s);
      if (q == no_state) continue;
      v.reason = "an accepted word is a product of several primes";
      v.counterexample = detail::join({detail::letters_of(detail::word_to(t, p)), TaggedWord{Letter::from_code(s)},
                                       detail::letters_of(detail::word_from(t, q))});
      return v;
    }
  }
  v.ok = true;
  v.root = *root;
  return v;
}

/// Least-fixpoint summaries of an XML-grammar read by a DFA: for each tag a and
/// DFA state p, the states q with p →w q for some w ∈ L(X_a), each with the
/// shortlex-least such w. Entries are computed on demand; a query solves the
/// fixpoint over every entry it transitively depends on.
class PrimeSummaries {
 public:
  /// `content` are DFAs over tag ids; `k` reads letter codes of the same tags.
  PrimeSummaries(const std::vector<Dfa>& content, const Dfa& k)
      : content_(content),
        k_(k),
        best_(content.size(), std::vector<std::map<State, TaggedWord>>(k.state_count())),
        demanded_(content.size(), std::vector<char>(k.state_count(), 0)) {}

  const std::map<State, TaggedWord>& from(TagId a, State p) {
    if (!demanded_[a][p]) {
      demand(a, p);
      solve();
    }
    return best_[a][p];
  }

  /// Demands every entry at once.
  void solve_all() {
    for (TagId a = 0; a < content_.size(); ++a)
      for (State p = 0; p < k_.state_count(); ++p) demand(a, p);
    solve();
  }

 private:
  struct ByShortlex {
    bool operator()(const std::pair<TaggedWord, std::size_t>& x, const std::pair<TaggedWord, std::size_t>& y) const {
      if (x.first.size() != y.first.size()) return x.first.size() < y.first.size();
      if (x.first != y.first) return x.first < y.first;
      return x.second < y.second;
    }
  };

  bool relax(TagId a, State p) {
    const State p1 = k_.next(p, Letter::open_of(a).code());
    if (p1 == no_state || is_empty(content_[a])) return false;
    const Dfa& c = content_[a];
    const std::size_t kn = k_.state_count();
    auto node = [&](State cs, State ks) { return static_cast<std::size_t>(cs) * kn + ks; };
    std::vector<std::optional<TaggedWord>> dist(c.state_count() * kn);
    std::set<std::pair<TaggedWord, std::size_t>, ByShortlex> queue;
    dist[node(c.initial(), p1)] = TaggedWord{};
    queue.insert({TaggedWord{}, node(c.initial(), p1)});
    std::vector<char> done(dist.size(), 0);
    bool changed = false;
    while (!queue.empty()) {
      auto [w, x] = *queue.begin();
      queue.erase(queue.begin());
      if (done[x]) continue;
      done[x] = 1;
      const State cs = static_cast<State>(x / kn), ks = static_cast<State>(x % kn);
      if (c.is_final(cs)) {
        const State q = k_.next(ks, Letter::close_of(a).code());
        if (q != no_state) {
          TaggedWord full{Letter::open_of(a)};
          full.insert(full.end(), w.begin(), w.end());
          full.push_back(Letter::close_of(a));
          auto it = best_[a][p].find(q);
          if (it == best_[a][p].end()) {
            best_[a][p].emplace(q, std::move(full));
            changed = true;
          } else if (shortlex_less(full, it->second)) {
            it->second = std::move(full);
            changed = true;
          }
        }
      }
      for (TagId b = 0; b < content_.size(); ++b) {
        const State cn = c.next(cs, b);
        if (cn == no_state) continue;
        demand(b, ks);
        for (const auto& [kq, wb] : best_[b][ks]) {
          const std::size_t y = node(cn, kq);
          if (done[y]) continue;
          TaggedWord nw = w;
          nw.insert(nw.end(), wb.begin(), wb.end());
          if (!dist[y] || shortlex_less(nw, *dist[y])) {
            if (dist[y]) queue.erase({*dist[y], y});
            dist[y] = nw;
            queue.insert({std::move(nw), y});
          }
        }
      }
    }
    return changed;
  }

  void demand(TagId a, State p) {
    if (demanded_[a][p]) return;
    demanded_[a][p] = 1;
    order_.push_back({a, p});
    grew_ = true;
  }

  void solve() {
    for (bool changed = true; changed;) {
      grew_ = false;
      changed = false;
      for (std::size_t i = 0; i < order_.size(); ++i) changed |= relax(order_[i].first, order_[i].second);
      changed |= grew_;
    }
  }

  const std::vector<Dfa>& content_;
  const Dfa& k_;
  std::vector<std::vector<std::map<State, TaggedWord>>> best_;
  std::vector<std::vector<char>> demanded_;
  std::vector<std::pair<TagId, State>> order_;
  bool grew_ = false;
};

/// The grammar X_a → a X* ā of all Dyck primes, as content models.
inline std::vector<Dfa> dyck_prime_content(std::size_t tags) {
  return std::vector<Dfa>(tags, Dfa::universal(tags));
}

struct GoodPair {
  State from = 0, to = 0;
  /// Shortlex-least prime of D_a labelling a path from → to.
  TaggedWord witness;
};

/// States refer to trim(k.dfa).
struct GoodPairTable {
  Dfa trimmed;
  std::vector<std::vector<GoodPair>> pairs;  // per tag, ordered by (from, to)
};

inline GoodPairTable good_pairs(const TaggedDfa& k) {
  const auto check = check_dyck_star_regular(k);
  if (!check.ok) {
    std::string msg = "the language is not contained in D*: " + check.reason;
    if (check.counterexample) msg += " (" + format_word(*check.counterexample, k.tags) + ")";
    throw Error(ErrorCode::not_dyck_subset, msg);
  }
  GoodPairTable table{trim(k.dfa), {}};
  const auto content = dyck_prime_content(k.tags.size());
  PrimeSummaries sums(content, table.trimmed);
  sums.solve_all();
  table.pairs.resize(k.tags.size());
  for (TagId a = 0; a < k.tags.size(); ++a)
    for (State p = 0; p < table.trimmed.state_count(); ++p)
      for (const auto& [q, w] : sums.from(a, p)) table.pairs[a].push_back({p, q, w});
  return table;
}

/// Surfaces of K ⊆ D*: for each a, the traces labelling chains of good pairs
/// between the target of an a-edge and the source of an ā-edge.
inline SurfaceFamily regular_surfaces(const TaggedDfa& k) {
  const auto table = good_pairs(k);
  const Dfa& t = table.trimmed;
  const std::size_t n = k.tags.size();
  Nfa chain(n);
  for (State p = 0; p < t.state_count(); ++p) chain.add_state();
  for (TagId b = 0; b < n; ++b)
    for (const auto& gp : table.pairs[b]) chain.add_transition(gp.from, b, gp.to);
  SurfaceFamily s{k.tags, {}};
  for (TagId a = 0; a < n; ++a) {
    Nfa m = chain;
    for (State p = 0; p < t.state_count(); ++p) {
      if (State q = t.next(p, Letter::open_of(a).code()); q != no_state) m.add_initial(q);
      m.set_final(p, t.next(p, Letter::close_of(a).code()) != no_state);
    }
    s.surface.push_back(to_min_dfa(m));
  }
  return s;
}

struct RegularXmlVerdict {
  bool xml = false;
  TagId root = 0;
  std::optional<XmlGrammar> grammar;
  /// When not xml: a shortest word of the standard language rejected by K.
  std::optional<TaggedWord> counterexample;
};

namespace detail {

inline TagId require_prime_subset(const TaggedDfa& k) {
  const auto v = check_dyck_regular(k);
  if (!v.ok) {
    std::string msg = "the language is not contained in a single D_a: " + v.reason;
    if (v.counterexample) msg += " (" + format_word(*v.counterexample, k.tags) + ")";
    throw Error(ErrorCode::not_dyck_prime_subset, msg);
  }
  return v.root;
}

}  // namespace detail

/// K is XML iff the standard grammar of its surfaces generates a subset of K.
inline RegularXmlVerdict is_xml_regular(const TaggedDfa& k) {
  RegularXmlVerdict v;
  v.root = detail::require_prime_subset(k);
  const auto standard = standard_grammar(regular_surfaces(k), v.root);
  const Dfa outside = complement(k.dfa);
  PrimeSummaries sums(standard.content, outside);
  for (const auto& [q, w] : sums.from(v.root, outside.initial())) {
    if (!outside.is_final(q)) continue;
    if (!v.counterexample || shortlex_less(w, *v.counterexample)) v.counterexample = w;
  }
  v.xml = !v.counterexample;
  if (v.xml) v.grammar = standard;
  return v;
}

/// Product of two total DFAs over the same alphabet, tracking both runs.
inline Dfa pair_product(const Dfa& x, const Dfa& y) {
  Dfa out(x.alphabet_size());
  const std::size_t m = y.state_count();
  for (std::size_t i = 1; i < x.state_count() * m; ++i) out.add_state(false);
  for (State p = 0; p < x.state_count(); ++p)
    for (State q = 0; q < m; ++q)
      for (Symbol s = 0; s < x.alphabet_size(); ++s)
        out.set_transition(static_cast<State>(p * m + q), s, static_cast<State>(x.next(p, s) * m + y.next(q, s)));
  return out;
}

/// Second procedure: with M the minimal trimmed DFA of K, K is XML iff for
/// every tag a all good pairs (p, q) carry the same primes D_a ∩ M_{p,q}.
/// The input is re-minimized, never trusted.
inline RegularXmlVerdict is_xml_regular_contexts(const TaggedDfa& k) {
  RegularXmlVerdict v;
  v.root = detail::require_prime_subset(k);
  const TaggedDfa minimal{k.tags, trim(minimize(k.dfa))};
  const auto table = good_pairs(minimal);
  const Dfa m = totalize(minimal.dfa);
  const std::size_t n = m.state_count();
  const Dfa both = pair_product(m, m);
  const auto content = dyck_prime_content(k.tags.size());
  PrimeSummaries sums(content, both);
  auto accepted_from = [&](State p) {
    Dfa c = m;
    c.set_initial(p);
    return c;
  };
  for (TagId a = 0; a < k.tags.size() && !v.counterexample; ++a) {
    const auto& pairs = table.pairs[a];
    for (std::size_t i = 0; i < pairs.size() && !v.counterexample; ++i) {
      for (std::size_t j = 0; j < pairs.size() && !v.counterexample; ++j) {
        if (i == j) continue;
        const auto& x = pairs[i];
        const auto& y = pairs[j];
        // w ∈ D_a with x.from →w x.to but y.from →w z, z ≠ y.to
        for (const auto& [pq, w] : sums.from(a, static_cast<State>(x.from * n + y.from))) {
          const State q1 = pq / static_cast<State>(n), z = pq % static_cast<State>(n);
          if (q1 != x.to || z == y.to) continue;
          // z and y.to differ in the minimal automaton: find a separating suffix.
          const auto sep = compare_equal(accepted_from(z), accepted_from(y.to));
          const TaggedWord prefix = detail::letters_of(detail::word_to(m, y.from));
          const TaggedWord suffix = detail::letters_of(sep.counterexample);
          // Exactly one of prefix·w·suffix, prefix·w'·suffix is in K; the other is in the standard language.
          const auto with_w = detail::join({prefix, w, suffix});
          const auto with_wy = detail::join({prefix, y.witness, suffix});
          v.counterexample = k.dfa.accepts(to_symbols(with_w)) ? with_wy : with_w;
          break;
        }
      }
    }
  }
  v.xml = !v.counterexample;
  if (v.xml) v.grammar = standard_grammar(regular_surfaces(k), v.root);
  return v;
}

struct HeightReport {
  bool finite = true;
  long height = 0;
  /// When infinite: a cycle of positive weight through a useful state.
  TaggedWord cycle;
  long cycle_weight = 0;
  /// When finite: an accepted word reaching the height (empty when K is empty).
  TaggedWord witness;
};

/// Exact height of K: the longest-path weight to any useful state, infinite
/// when some useful cycle has positive weight.
inline HeightReport regular_height(const TaggedDfa& k) {
  const Dfa t = trim(k.dfa);
  HeightReport r;
  if (is_empty(t)) return r;
  const std::size_t n = t.state_count();
  constexpr long unset = std::numeric_limits<long>::min();
  std::vector<long> dist(n, unset);
  std::vector<State> parent(n, no_state);
  std::vector<Symbol> via(n, 0);
  dist[t.initial()] = 0;
  State updated = no_state;
  for (std::size_t round = 0; round < n; ++round) {
    updated = no_state;
    for (State p = 0; p < n; ++p) {
      if (dist[p] == unset) continue;
      for (Symbol s = 0; s < t.alphabet_size(); ++s) {
        const State q = t.next(p, s);
        if (q == no_state) continue;
        const long w = dist[p] + (Letter::from_code(s).close ? -1 : 1);
        if (w > dist[q]) {
          dist[q] = w;
          parent[q] = p;
          via[q] = s;
          updated = q;
        }
      }
    }
    if (updated == no_state) break;
  }
  if (updated != no_state) {
    // Still relaxing after n rounds: walk back into the positive cycle.
    State c = updated;
    for (std::size_t i = 0; i < n; ++i) c = parent[c];
    Word cyc;
    State x = c;
    do {
      cyc.push_back(via[x]);
      x = parent[x];
    } while (x != c);
    std::reverse(cyc.begin(), cyc.end());
    r.finite = false;
    r.cycle = to_letters(cyc);
    r.cycle_weight = weight_and_height(r.cycle).weight;
    return r;
  }
  State top = t.initial();
  for (State p = 0; p < n; ++p)
    if (dist[p] > dist[top]) top = p;
  r.height = dist[top];
  Word w;
  for (State c = top; c != t.initial(); c = parent[c]) w.push_back(via[c]);
  std::reverse(w.begin(), w.end());
  r.witness = detail::join({to_letters(w), detail::letters_of(detail::word_from(t, top))});
  return r;
}

}  // namespace dtdkit
