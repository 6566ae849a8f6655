#pragma once

// XML-grammars: one nonterminal X_a per tag a with productions X_a → a m ā,
// m ∈ R_a. Nonterminals are identified with tags, so each content model R_a
// is a DFA over the tag alphabet (symbol = TagId).
//
// File format:
//   axiom a
//   a -> (a | b) (a | b)
//   b -> ~e~

#include <algorithm>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dtdkit/automata.hpp"
#include "dtdkit/dyck.hpp"
#include "dtdkit/error.hpp"
#include "dtdkit/regex.hpp"

namespace dtdkit {

struct XmlGrammar {
  TagAlphabet tags;
  /// content[a] accepts R_a; canonical minimal DFAs over tag ids.
  std::vector<Dfa> content;
  TagId axiom = 0;

  std::size_t size() const { return tags.size(); }
  friend bool operator==(const XmlGrammar&, const XmlGrammar&) = default;
};

/// Surfaces S_a, one minimal DFA over tag ids per tag.
struct SurfaceFamily {
  TagAlphabet tags;
  std::vector<Dfa> surface;
  friend bool operator==(const SurfaceFamily&, const SurfaceFamily&) = default;
};

/// Normalizes every content model to its canonical minimal DFA.
inline XmlGrammar make_xml_grammar(TagAlphabet tags, std::vector<Dfa> content, TagId axiom) {
  const std::size_t n = tags.size();
  if (content.size() != n) throw Error(ErrorCode::alphabet_mismatch, "one content model per tag expected");
  if (axiom >= n) throw Error(ErrorCode::alphabet_mismatch, "axiom is not a tag of the alphabet");
  for (auto& d : content) {
    if (d.alphabet_size() != n) throw Error(ErrorCode::alphabet_mismatch, "content model over the wrong alphabet");
    d = minimize(d);
  }
  return {std::move(tags), std::move(content), axiom};
}

inline std::vector<char> productive_tags(const XmlGrammar& g) {
  std::vector<char> prod(g.size(), 0);
  for (bool changed = true; changed;) {
    changed = false;
    for (TagId a = 0; a < g.size(); ++a) {
      if (prod[a] || is_empty(restrict_symbols(g.content[a], prod))) continue;
      prod[a] = 1;
      changed = true;
    }
  }
  return prod;
}

/// Restricts each content model to productive letters and drops inaccessible
/// tags (their content becomes ∅). The alphabet is kept.
inline XmlGrammar reduce(const XmlGrammar& g) {
  const std::size_t n = g.size();
  const auto prod = productive_tags(g);
  if (!prod[g.axiom])
    throw Error(ErrorCode::empty_language, "axiom '" + g.tags.name(g.axiom) + "' is unproductive");
  std::vector<Dfa> restricted(n, Dfa::empty(n));
  for (TagId a = 0; a < n; ++a)
    if (prod[a]) restricted[a] = minimize(restrict_symbols(g.content[a], prod));
  std::vector<char> accessible(n, 0);
  std::vector<TagId> stack{g.axiom};
  accessible[g.axiom] = 1;
  while (!stack.empty()) {
    const TagId a = stack.back();
    stack.pop_back();
    const auto live = live_symbols(restricted[a]);
    for (TagId b = 0; b < n; ++b)
      if (live[b] && !accessible[b]) {
        accessible[b] = 1;
        stack.push_back(b);
      }
  }
  XmlGrammar out{g.tags, {}, g.axiom};
  for (TagId a = 0; a < n; ++a) out.content.push_back(accessible[a] ? restricted[a] : minimize(Dfa::empty(n)));
  return out;
}

inline bool is_reduced(const XmlGrammar& g) {
  try {
    return reduce(g) == g;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::empty_language) return false;
    throw;
  }
}

/// Tags occurring in L(g) (nonempty content after reduction).
inline std::vector<char> active_tags(const XmlGrammar& g) {
  std::vector<char> out(g.size(), 0);
  for (TagId a = 0; a < g.size(); ++a) out[a] = !is_empty(g.content[a]);
  return out;
}

/// S_a = R_a for reduced g.
inline SurfaceFamily surfaces(const XmlGrammar& g) {
  if (!is_reduced(g)) throw Error(ErrorCode::not_reduced, "surfaces require a reduced grammar");
  return {g.tags, g.content};
}

/// The XML-grammar with R_a = S_a, reduced for the given axiom.
inline XmlGrammar standard_grammar(const SurfaceFamily& s, TagId axiom) {
  return reduce(make_xml_grammar(s.tags, s.surface, axiom));
}

/// w ∈ L(X_root). Streaming check with a stack of content-model runs.
inline bool member_from(const XmlGrammar& g, TagId root, std::span<const Letter> w) {
  if (w.empty() || w.front().close || w.front().tag != root) return false;
  struct Frame {
    TagId tag;
    State state;
  };
  std::vector<Frame> stack;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Letter l = w[i];
    if (l.tag >= g.size()) return false;
    if (!l.close) {
      if (!stack.empty()) {
        State& s = stack.back().state;
        s = g.content[stack.back().tag].next(s, l.tag);
        if (s == no_state) return false;
      }
      stack.push_back({l.tag, g.content[l.tag].initial()});
    } else {
      if (stack.empty() || stack.back().tag != l.tag) return false;
      if (!g.content[l.tag].is_final(stack.back().state)) return false;
      stack.pop_back();
      if (stack.empty() && i + 1 != w.size()) return false;
    }
  }
  return stack.empty();
}

inline bool member(const XmlGrammar& g, std::span<const Letter> w) { return member_from(g, g.axiom, w); }

namespace detail {

inline constexpr std::size_t xml_inf = std::numeric_limits<std::size_t>::max();

/// Shortest paths in a content DFA where a b-edge costs weight[b].
/// Forward: from the initial state. Backward: to any final state.
struct WeightedPaths {
  std::vector<std::size_t> dist;
  std::vector<std::pair<State, Symbol>> via;  // predecessor (forward) or successor (backward)
};

inline WeightedPaths weighted_paths(const Dfa& d, const std::vector<std::size_t>& weight, bool backward) {
  const std::size_t n = d.state_count();
  WeightedPaths r{std::vector<std::size_t>(n, xml_inf), std::vector<std::pair<State, Symbol>>(n, {no_state, 0})};
  std::vector<std::vector<std::pair<State, Symbol>>> rev(n);
  if (backward)
    for (State p = 0; p < n; ++p)
      for (Symbol s = 0; s < d.alphabet_size(); ++s)
        if (State q = d.next(p, s); q != no_state) rev[q].push_back({p, s});
  using Item = std::pair<std::size_t, State>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  auto seed = [&](State p) {
    r.dist[p] = 0;
    queue.push({0, p});
  };
  if (backward) {
    for (State p = 0; p < n; ++p)
      if (d.is_final(p)) seed(p);
  } else {
    seed(d.initial());
  }
  std::vector<char> done(n, 0);
  while (!queue.empty()) {
    const auto [c, p] = queue.top();
    queue.pop();
    if (done[p]) continue;
    done[p] = 1;
    auto relax = [&](State q, Symbol s) {
      if (weight[s] == xml_inf) return;
      const std::size_t nc = c + weight[s];
      if (nc < r.dist[q]) {
        r.dist[q] = nc;
        r.via[q] = {p, s};
        queue.push({nc, q});
      }
    };
    if (backward) {
      for (auto [q, s] : rev[p]) relax(q, s);
    } else {
      for (Symbol s = 0; s < d.alphabet_size(); ++s)
        if (State q = d.next(p, s); q != no_state) relax(q, s);
    }
  }
  return r;
}

inline Word forward_path(const WeightedPaths& f, State target) {
  Word w;
  for (State p = target; f.via[p].first != no_state; p = f.via[p].first) w.push_back(f.via[p].second);
  std::reverse(w.begin(), w.end());
  return w;
}

inline Word backward_path(const WeightedPaths& b, State source) {
  Word w;
  for (State p = source; b.via[p].first != no_state; p = b.via[p].first) w.push_back(b.via[p].second);
  return w;
}

}  // namespace detail

/// Shortest words of each L(X_a), and one-hole contexts inside L(X_axiom).
class XmlShortest {
 public:
  explicit XmlShortest(const XmlGrammar& g) : g_(g) {
    const std::size_t n = g.size();
    length_.assign(n, detail::xml_inf);
    children_.assign(n, {});
    for (bool changed = true; changed;) {
      changed = false;
      for (TagId a = 0; a < n; ++a) {
        const auto f = detail::weighted_paths(g.content[a], length_, false);
        std::size_t best = detail::xml_inf;
        State at = no_state;
        for (State p = 0; p < g.content[a].state_count(); ++p)
          if (g.content[a].is_final(p) && f.dist[p] < best) {
            best = f.dist[p];
            at = p;
          }
        if (at != no_state && best + 2 < length_[a]) {
          length_[a] = best + 2;
          children_[a] = detail::forward_path(f, at);
          changed = true;
        }
      }
    }
    // Context search from the axiom.
    ctx_.assign(n, std::nullopt);
    std::vector<std::size_t> cost(n, detail::xml_inf);
    if (length_[g.axiom] == detail::xml_inf) return;
    using Item = std::pair<std::size_t, TagId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    cost[g.axiom] = 0;
    ctx_[g.axiom] = Context{};
    queue.push({0, g.axiom});
    std::vector<char> done(n, 0);
    while (!queue.empty()) {
      const auto [c, a] = queue.top();
      queue.pop();
      if (done[a]) continue;
      done[a] = 1;
      const Dfa& d = g.content[a];
      const auto f = detail::weighted_paths(d, length_, false);
      const auto b = detail::weighted_paths(d, length_, true);
      for (State p = 0; p < d.state_count(); ++p) {
        if (f.dist[p] == detail::xml_inf) continue;
        for (Symbol s = 0; s < d.alphabet_size(); ++s) {
          const State q = d.next(p, s);
          if (q == no_state || b.dist[q] == detail::xml_inf || length_[s] == detail::xml_inf) continue;
          const std::size_t nc = c + 2 + f.dist[p] + b.dist[q];
          if (nc >= cost[s]) continue;
          cost[s] = nc;
          Context x;
          x.left = ctx_[a]->left;
          x.left.push_back(Letter::open_of(a));
          append_children(x.left, detail::forward_path(f, p));
          append_children(x.right, detail::backward_path(b, q));
          x.right.push_back(Letter::close_of(a));
          x.right.insert(x.right.end(), ctx_[a]->right.begin(), ctx_[a]->right.end());
          ctx_[s] = std::move(x);
          queue.push({nc, s});
        }
      }
    }
  }

  bool productive(TagId a) const { return length_[a] != detail::xml_inf; }

  /// A shortest word of L(X_a).
  TaggedWord word(TagId a) const {
    TaggedWord out;
    append_word(out, a);
    return out;
  }

  /// Terminal words around children with the given trace, as a word of L(X_a)
  /// provided the trace is in R_a and every child is productive.
  TaggedWord word_with_trace(TagId a, std::span<const Symbol> trace) const {
    TaggedWord out{Letter::open_of(a)};
    append_children(out, trace);
    out.push_back(Letter::close_of(a));
    return out;
  }

  struct Context {
    TaggedWord left, right;
  };
  /// Shortest context with axiom ⇒* left X_a right, when X_a is reachable.
  const std::optional<Context>& context(TagId a) const { return ctx_[a]; }

  /// Shortest words left, right of children with a trace in R_a having `b` in between.
  std::optional<Context> child_context(TagId a, TagId b) const {
    const Dfa& d = g_.content[a];
    const auto f = detail::weighted_paths(d, length_, false);
    const auto bw = detail::weighted_paths(d, length_, true);
    std::size_t best = detail::xml_inf;
    State at = no_state;
    for (State p = 0; p < d.state_count(); ++p) {
      const State q = d.next(p, b);
      if (q == no_state || f.dist[p] == detail::xml_inf || bw.dist[q] == detail::xml_inf) continue;
      if (f.dist[p] + bw.dist[q] < best) {
        best = f.dist[p] + bw.dist[q];
        at = p;
      }
    }
    if (at == no_state) return std::nullopt;
    Context c;
    append_children(c.left, detail::forward_path(f, at));
    append_children(c.right, detail::backward_path(bw, d.next(at, b)));
    return c;
  }

 private:
  void append_word(TaggedWord& out, TagId a) const {
    if (!productive(a)) throw Error(ErrorCode::empty_language, "tag '" + g_.tags.name(a) + "' is unproductive");
    out.push_back(Letter::open_of(a));
    append_children(out, children_[a]);
    out.push_back(Letter::close_of(a));
  }
  void append_children(TaggedWord& out, std::span<const Symbol> trace) const {
    for (Symbol c : trace) append_word(out, c);
  }

  const XmlGrammar& g_;
  std::vector<std::size_t> length_;
  std::vector<Word> children_;
  std::vector<std::optional<Context>> ctx_;
};

/// Re-expresses g over `target`, which must contain g's tags. New tags get ∅ content.
inline XmlGrammar widen(const XmlGrammar& g, const TagAlphabet& target) {
  const std::size_t n = target.size();
  std::vector<Symbol> mapping(g.size());
  for (TagId a = 0; a < g.size(); ++a) mapping[a] = target.at(g.tags.name(a));
  std::vector<Dfa> content(n, Dfa::empty(n));
  for (TagId a = 0; a < g.size(); ++a) content[mapping[a]] = remap_symbols(g.content[a], n, mapping);
  return make_xml_grammar(target, std::move(content), mapping[g.axiom]);
}

inline TagAlphabet union_alphabet(const TagAlphabet& x, const TagAlphabet& y) {
  TagAlphabet out = x;
  for (const auto& name : y.names()) out.add(name);
  return out;
}

struct InclusionWitness {
  TagId tag = 0;
  /// A trace in S_tag(L1) \ S_tag(L2), over tag ids.
  Word trace;
  /// A word of L1 \ L2 carrying that trace at an a-factor.
  TaggedWord document;
};

struct InclusionResult {
  bool holds = true;
  /// Alphabet the witness refers to (union of both inputs).
  TagAlphabet tags;
  std::optional<InclusionWitness> witness;
};

namespace detail {

inline std::optional<XmlGrammar> reduce_or_empty(const XmlGrammar& g) {
  try {
    return reduce(g);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::empty_language) return std::nullopt;
    throw;
  }
}

inline InclusionWitness witness_for(const XmlGrammar& g, TagId a, Word trace) {
  XmlShortest sh(g);
  InclusionWitness w{a, trace, {}};
  const auto& ctx = sh.context(a);
  w.document = ctx->left;
  const auto mid = sh.word_with_trace(a, trace);
  w.document.insert(w.document.end(), mid.begin(), mid.end());
  w.document.insert(w.document.end(), ctx->right.begin(), ctx->right.end());
  return w;
}

}  // namespace detail

/// L(g1) ⊆ L(g2), decided letterwise on surfaces of the reduced grammars.
inline InclusionResult includes(const XmlGrammar& g1, const XmlGrammar& g2) {
  InclusionResult r;
  r.tags = union_alphabet(g1.tags, g2.tags);
  const auto a = detail::reduce_or_empty(widen(g1, r.tags));
  if (!a) return r;
  const auto b = detail::reduce_or_empty(widen(g2, r.tags));
  if (!b || b->axiom != a->axiom) {
    r.holds = false;
    const auto trace = shortest_word(a->content[a->axiom]);
    r.witness = detail::witness_for(*a, a->axiom, *trace);
    return r;
  }
  for (TagId t = 0; t < r.tags.size(); ++t) {
    auto cmp = compare_subset(a->content[t], b->content[t]);
    if (!cmp.holds) {
      r.holds = false;
      r.witness = detail::witness_for(*a, t, *cmp.counterexample);
      return r;
    }
  }
  return r;
}

struct EqualityResult {
  bool holds = true;
  TagAlphabet tags;
  /// 1: the witness is in L(g1) \ L(g2); 2: in L(g2) \ L(g1).
  int side = 0;
  std::optional<InclusionWitness> witness;
};

inline EqualityResult equals(const XmlGrammar& g1, const XmlGrammar& g2) {
  auto forward = includes(g1, g2);
  if (!forward.holds) return {false, forward.tags, 1, forward.witness};
  auto backward = includes(g2, g1);
  if (!backward.holds) {
    // Re-express the witness over g1 ∪ g2 order.
    EqualityResult r{false, forward.tags, 2, backward.witness};
    auto& w = *r.witness;
    auto retag = [&](TagId t) { return r.tags.at(backward.tags.name(t)); };
    w.tag = retag(w.tag);
    for (auto& s : w.trace) s = retag(s);
    for (auto& l : w.document) l.tag = retag(l.tag);
    return r;
  }
  return {true, forward.tags, 0, std::nullopt};
}

/// L(g1) ∩ L(g2) via letterwise intersection of content models.
inline XmlGrammar intersect(const XmlGrammar& g1, const XmlGrammar& g2) {
  const auto tags = union_alphabet(g1.tags, g2.tags);
  const auto a = widen(g1, tags);
  const auto b = widen(g2, tags);
  if (a.axiom != b.axiom) throw Error(ErrorCode::empty_language, "different axioms give disjoint languages");
  std::vector<Dfa> content;
  for (TagId t = 0; t < tags.size(); ++t) content.push_back(combine(a.content[t], b.content[t], BoolOp::intersection));
  return reduce(make_xml_grammar(tags, std::move(content), a.axiom));
}

struct SequentialResult {
  bool sequential = true;
  /// When not sequential: tags c0 → c1 → … → c0 (first tag not repeated).
  std::vector<TagId> cycle;
  /// When sequential: children before parents.
  std::vector<TagId> order;
};

/// Acyclicity of the dependency graph a → b (b occurs in some word of R_a).
inline SequentialResult is_sequential(const XmlGrammar& input) {
  const XmlGrammar g = reduce(input);
  const std::size_t n = g.size();
  std::vector<std::vector<char>> edge(n);
  for (TagId a = 0; a < n; ++a) edge[a] = live_symbols(g.content[a]);
  const auto active = active_tags(g);
  SequentialResult r;
  std::vector<int> color(n, 0);
  std::vector<TagId> path;
  std::function<bool(TagId)> dfs = [&](TagId a) {
    color[a] = 1;
    path.push_back(a);
    for (TagId b = 0; b < n; ++b) {
      if (!edge[a][b]) continue;
      if (color[b] == 1) {
        auto it = std::find(path.begin(), path.end(), b);
        r.cycle.assign(it, path.end());
        return false;
      }
      if (color[b] == 0 && !dfs(b)) return false;
    }
    path.pop_back();
    color[a] = 2;
    r.order.push_back(a);
    return true;
  };
  if (!dfs(g.axiom)) {
    r.sequential = false;
    r.order.clear();
    return r;
  }
  for (TagId a = 0; a < n; ++a)
    if (active[a] && color[a] == 0) dfs(a);
  return r;
}

/// Trimmed minimal DFA over letter codes for L(g). Requires a sequential grammar.
inline Dfa to_regular(const XmlGrammar& input) {
  const XmlGrammar g = reduce(input);
  const auto seq = is_sequential(g);
  if (!seq.sequential) throw Error(ErrorCode::not_sequential, "the dependency graph has a cycle");
  const std::size_t letters = 2 * g.size();
  std::vector<std::optional<Dfa>> lang(g.size());
  for (TagId a : seq.order) {
    const Dfa& c = g.content[a];
    Nfa n(letters);
    const State start = n.add_state();
    const State end = n.add_state(true);
    n.add_initial(start);
    const State offset = n.state_count();
    for (State p = 0; p < c.state_count(); ++p) n.add_state();
    n.add_transition(start, Letter::open_of(a).code(), offset + c.initial());
    for (State p = 0; p < c.state_count(); ++p) {
      if (c.is_final(p)) n.add_transition(offset + p, Letter::close_of(a).code(), end);
      for (Symbol b = 0; b < c.alphabet_size(); ++b) {
        const State q = c.next(p, b);
        if (q == no_state || !lang[b]) continue;
        const Dfa& sub = *lang[b];
        const State base = n.absorb(to_nfa(sub));
        n.add_epsilon(offset + p, base + sub.initial());
        for (State s = 0; s < sub.state_count(); ++s)
          if (sub.is_final(s)) {
            n.set_final(base + s, false);
            n.add_epsilon(base + s, offset + q);
          }
      }
    }
    lang[a] = to_min_dfa(n);
  }
  return trim(*lang[g.axiom]);
}

/// A word of L(g) with height ≥ min_height, obtained by pumping a dependency cycle.
inline TaggedWord pumped_word(const XmlGrammar& input, std::span<const TagId> cycle, std::size_t min_height) {
  const XmlGrammar g = reduce(input);
  if (cycle.empty()) throw Error(ErrorCode::internal, "empty cycle");
  XmlShortest sh(g);
  const auto& outer = sh.context(cycle.front());
  if (!outer) throw Error(ErrorCode::internal, "cycle tag not reachable");
  TaggedWord left = outer->left;
  std::vector<TaggedWord> rights;
  std::size_t depth = static_cast<std::size_t>(std::count_if(left.begin(), left.end(), [](Letter l) { return !l.close; })) -
                      static_cast<std::size_t>(std::count_if(left.begin(), left.end(), [](Letter l) { return l.close; }));
  std::size_t i = 0;
  while (depth + 1 < min_height) {
    const TagId a = cycle[i % cycle.size()];
    const TagId b = cycle[(i + 1) % cycle.size()];
    const auto cc = sh.child_context(a, b);
    if (!cc) throw Error(ErrorCode::internal, "cycle edge missing from content model");
    left.push_back(Letter::open_of(a));
    left.insert(left.end(), cc->left.begin(), cc->left.end());
    TaggedWord r = cc->right;
    r.push_back(Letter::close_of(a));
    rights.push_back(std::move(r));
    ++depth;
    ++i;
  }
  TaggedWord w = left;
  const auto inner = sh.word(cycle[i % cycle.size()]);
  w.insert(w.end(), inner.begin(), inner.end());
  for (auto it = rights.rbegin(); it != rights.rend(); ++it) w.insert(w.end(), it->begin(), it->end());
  w.insert(w.end(), outer->right.begin(), outer->right.end());
  return w;
}

/// Finite surfaces of a sample: traces of all well-formed factors, per root tag.
inline SurfaceFamily sample_surfaces(const TagAlphabet& tags, std::span<const TaggedWord> words) {
  const std::size_t n = tags.size();
  std::vector<std::vector<Word>> traces(n);
  for (const auto& w : words)
    for (const auto& f : well_formed_factors(w)) {
      auto t = trace(f);
      traces[f.front().tag].push_back(Word(t.begin(), t.end()));
    }
  SurfaceFamily s{tags, {}};
  for (TagId a = 0; a < n; ++a) s.surface.push_back(minimize(Dfa::from_words(n, traces[a])));
  return s;
}

/// Shortlex order on words (length, then letter codes).
inline bool shortlex_less(std::span<const Letter> x, std::span<const Letter> y) {
  if (x.size() != y.size()) return x.size() < y.size();
  return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
}

/// All words of L(X_root) with length ≤ max_len, in shortlex order.
inline std::vector<TaggedWord> enumerate_from(const XmlGrammar& g, TagId root, std::size_t max_len) {
  const std::size_t n = g.size();
  // exact[a][l]: words of L(X_a) of length l
  std::vector<std::vector<std::set<TaggedWord>>> exact(n, std::vector<std::set<TaggedWord>>(max_len + 1));
  for (std::size_t len = 2; len <= max_len; ++len) {
    for (TagId a = 0; a < n; ++a) {
      const Dfa& d = g.content[a];
      // seq[p][r]: child concatenations of length r leading from the initial state to p
      std::vector<std::vector<std::set<TaggedWord>>> seq(d.state_count(), std::vector<std::set<TaggedWord>>(len - 1));
      seq[d.initial()][0].insert(TaggedWord{});
      for (std::size_t r = 0; r + 2 <= len; ++r) {
        for (State p = 0; p < d.state_count(); ++p) {
          if (seq[p][r].empty()) continue;
          for (TagId b = 0; b < n; ++b) {
            const State q = d.next(p, b);
            if (q == no_state) continue;
            for (std::size_t k = 2; r + k <= len - 2; ++k)
              for (const auto& u : seq[p][r])
                for (const auto& v : exact[b][k]) {
                  TaggedWord uv = u;
                  uv.insert(uv.end(), v.begin(), v.end());
                  seq[q][r + k].insert(std::move(uv));
                }
          }
        }
      }
      for (State p = 0; p < d.state_count(); ++p) {
        if (!d.is_final(p)) continue;
        for (const auto& m : seq[p][len - 2]) {
          TaggedWord w{Letter::open_of(a)};
          w.insert(w.end(), m.begin(), m.end());
          w.push_back(Letter::close_of(a));
          exact[a][len].insert(std::move(w));
        }
      }
    }
  }
  std::vector<TaggedWord> out;
  for (std::size_t len = 0; len <= max_len; ++len) out.insert(out.end(), exact[root][len].begin(), exact[root][len].end());
  return out;
}

inline std::vector<TaggedWord> enumerate_language(const XmlGrammar& g, std::size_t max_len) {
  return enumerate_from(g, g.axiom, max_len);
}

// ---------------------------------------------------------------------------
// Text format

inline std::string content_to_string(const Dfa& d, const TagAlphabet& tags) {
  return to_string(dfa_to_regex(d), tags.names());
}

inline std::string format_xml_grammar(const XmlGrammar& g) {
  std::ostringstream out;
  out << "axiom " << g.tags.name(g.axiom) << '\n';
  for (TagId a = 0; a < g.size(); ++a) {
    if (a != g.axiom && is_empty(g.content[a])) continue;
    out << g.tags.name(a) << " -> " << content_to_string(g.content[a], g.tags) << '\n';
  }
  return out.str();
}

inline XmlGrammar parse_xml_grammar(std::string_view text, TagAlphabet tags = {}) {
  struct Rule {
    std::string tag;
    std::string body;
    SourcePos body_pos;
  };
  std::vector<Rule> rules;
  std::optional<std::string> axiom;
  SourcePos axiom_pos{};
  detail::for_each_line(text, [&](std::string_view raw, std::size_t line_no) {
    const auto line = detail::trim(raw);
    if (line.empty() || line.front() == '#') return;
    const std::size_t indent = static_cast<std::size_t>(line.data() - raw.data());
    if (line.substr(0, 6) == "axiom " || line == "axiom") {
      const auto name = detail::trim(line.substr(5));
      if (!is_tag_name(name)) throw parse_error({line_no, indent + 7}, "expected 'axiom <tag>'");
      axiom = std::string(name);
      axiom_pos = {line_no, indent + 7};
      return;
    }
    const auto arrow = line.find("->");
    if (arrow == std::string_view::npos) throw parse_error({line_no, indent + 1}, "expected '<tag> -> <content model>'");
    const auto name = detail::trim(line.substr(0, arrow));
    if (!is_tag_name(name)) throw parse_error({line_no, indent + 1}, "invalid tag name '" + std::string(name) + "'");
    for (const auto& r : rules)
      if (r.tag == name) throw parse_error({line_no, indent + 1}, "duplicate rule for '" + std::string(name) + "'");
    rules.push_back({std::string(name), std::string(line.substr(arrow + 2)), {line_no, indent + arrow + 3}});
  });
  if (!axiom) throw parse_error({1, 1}, "missing 'axiom' line");
  for (const auto& r : rules) tags.add(r.tag);
  if (!tags.find(*axiom)) throw Error(ErrorCode::undeclared_element, "axiom '" + *axiom + "' has no rule");
  const std::size_t n = tags.size();
  std::vector<Dfa> content(n, Dfa::empty(n));
  bool undeclared = false;
  const SymbolResolver resolve = [&](std::string_view tok) -> Symbol {
    if (auto id = tags.find(tok)) return *id;
    undeclared = true;
    throw Error(ErrorCode::undeclared_element, "undeclared tag '" + std::string(tok) + "'");
  };
  for (const auto& r : rules) {
    undeclared = false;
    try {
      content[tags.at(r.tag)] = regex_to_dfa(parse_regex(r.body, resolve, {false, false, r.body_pos}), n);
    } catch (const Error& e) {
      if (undeclared) throw Error(ErrorCode::undeclared_element, e.message());
      throw;
    }
  }
  const TagId root = tags.at(*axiom);
  return make_xml_grammar(std::move(tags), std::move(content), root);
}

}  // namespace dtdkit
