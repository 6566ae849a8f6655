#pragma once

// Document trees, hedge automata over unranked trees, and balanced grammars
// X → a m ā with m a finite or regular set of nonterminal words.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dtdkit/automata.hpp"
#include "dtdkit/cfg.hpp"
#include "dtdkit/dyck.hpp"
#include "dtdkit/error.hpp"
#include "dtdkit/xml_grammar.hpp"

namespace dtdkit {

// ---------------------------------------------------------------------------
// Trees

struct DocTree {
  TagId tag = 0;
  std::vector<DocTree> children;

  std::size_t node_count() const {
    std::size_t n = 1;
    for (const auto& c : children) n += c.node_count();
    return n;
  }
  friend bool operator==(const DocTree&, const DocTree&) = default;
};

inline void encode_into(const DocTree& t, TaggedWord& out) {
  out.push_back(Letter::open_of(t.tag));
  for (const auto& c : t.children) encode_into(c, out);
  out.push_back(Letter::close_of(t.tag));
}

/// Word form a · children · ā.
inline TaggedWord encode(const DocTree& t) {
  TaggedWord out;
  encode_into(t, out);
  return out;
}

/// Tree of a Dyck prime. Throws NotPrime.
inline DocTree decode(std::span<const Letter> w) {
  if (!is_dyck_prime(w)) throw Error(ErrorCode::not_prime, "a tree needs a Dyck prime");
  std::vector<DocTree> stack;
  DocTree root;
  for (Letter l : w) {
    if (!l.close) {
      stack.push_back({l.tag, {}});
    } else {
      DocTree done = std::move(stack.back());
      stack.pop_back();
      if (stack.empty()) root = std::move(done);
      else stack.back().children.push_back(std::move(done));
    }
  }
  return root;
}

// ---------------------------------------------------------------------------
// Hedge automata

using HState = std::uint32_t;

/// A tree whose root has `tag` and whose children evaluate to a word of
/// `horizontal` (a DFA over states) may evaluate to `target`.
struct HedgeRule {
  TagId tag = 0;
  HState target = 0;
  Dfa horizontal;
};

struct HedgeAutomaton {
  TagAlphabet tags;
  std::size_t states = 0;
  std::vector<HedgeRule> rules;
  std::vector<char> accepting;

  HState add_state(bool accept = false) {
    accepting.push_back(accept ? 1 : 0);
    return static_cast<HState>(states++);
  }
};

/// Set of states a tree may evaluate to.
inline std::vector<char> hedge_eval(const HedgeAutomaton& h, const DocTree& t) {
  std::vector<std::vector<char>> kids;
  for (const auto& c : t.children) kids.push_back(hedge_eval(h, c));
  std::vector<char> out(h.states, 0);
  for (const auto& r : h.rules) {
    if (r.tag != t.tag || out[r.target]) continue;
    std::set<State> cur{r.horizontal.initial()};
    for (const auto& k : kids) {
      std::set<State> next;
      for (State p : cur)
        for (HState q = 0; q < h.states; ++q)
          if (k[q])
            if (State s = r.horizontal.next(p, q); s != no_state) next.insert(s);
      cur = std::move(next);
      if (cur.empty()) break;
    }
    if (std::any_of(cur.begin(), cur.end(), [&](State p) { return r.horizontal.is_final(p); })) out[r.target] = 1;
  }
  return out;
}

inline bool hedge_run(const HedgeAutomaton& h, const DocTree& t) {
  if (t.tag >= h.tags.size()) return false;
  const auto s = hedge_eval(h, t);
  for (HState q = 0; q < h.states; ++q)
    if (s[q] && h.accepting[q]) return true;
  return false;
}

/// At most one state per tree: horizontal languages of distinct targets under one tag are disjoint.
inline bool is_deterministic(const HedgeAutomaton& h) {
  for (std::size_t i = 0; i < h.rules.size(); ++i)
    for (std::size_t j = i + 1; j < h.rules.size(); ++j) {
      const auto& x = h.rules[i];
      const auto& y = h.rules[j];
      if (x.tag != y.tag || x.target == y.target) continue;
      if (!is_empty(combine(x.horizontal, y.horizontal, BoolOp::intersection))) return false;
    }
  return true;
}

/// States that some tree evaluates to.
inline std::vector<char> productive_states(const HedgeAutomaton& h) {
  std::vector<char> prod(h.states, 0);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& r : h.rules) {
      if (prod[r.target] || is_empty(restrict_symbols(r.horizontal, prod))) continue;
      prod[r.target] = 1;
      changed = true;
    }
  }
  return prod;
}

inline bool hedge_empty(const HedgeAutomaton& h) {
  const auto prod = productive_states(h);
  for (HState q = 0; q < h.states; ++q)
    if (prod[q] && h.accepting[q]) return false;
  return true;
}

/// Productive states that occur in some accepting run.
inline std::vector<char> useful_states(const HedgeAutomaton& h) {
  const auto prod = productive_states(h);
  std::vector<char> useful(h.states, 0);
  std::vector<HState> stack;
  for (HState q = 0; q < h.states; ++q)
    if (prod[q] && h.accepting[q]) {
      useful[q] = 1;
      stack.push_back(q);
    }
  while (!stack.empty()) {
    const HState q = stack.back();
    stack.pop_back();
    for (const auto& r : h.rules) {
      if (r.target != q) continue;
      const auto live = live_symbols(restrict_symbols(r.horizontal, prod));
      for (HState c = 0; c < h.states; ++c)
        if (live[c] && !useful[c]) {
          useful[c] = 1;
          stack.push_back(c);
        }
    }
  }
  return useful;
}

inline constexpr std::size_t default_hedge_budget = 100000;

/// Subset construction. States of the result are the nonempty sets of input
/// states reached by some tree, sorted lexicographically.
/// `subsets` (when given) receives the input states of each result state.
inline HedgeAutomaton determinize_hedge(const HedgeAutomaton& h, std::size_t budget = default_hedge_budget,
                                        std::vector<std::vector<HState>>* subsets = nullptr) {
  using Subset = std::vector<HState>;
  using Tuple = std::vector<std::vector<State>>;  // per rule of the tag: set of horizontal states
  std::vector<std::vector<std::size_t>> rules_of(h.tags.size());
  for (std::size_t i = 0; i < h.rules.size(); ++i) rules_of[h.rules[i].tag].push_back(i);

  std::vector<Subset> found;
  std::map<Subset, std::size_t> index;
  struct TagProduct {
    std::vector<Tuple> tuples;
    std::vector<std::vector<std::size_t>> next;  // per tuple, per found subset
  };
  std::vector<TagProduct> products(h.tags.size());

  auto output = [&](TagId a, const Tuple& t) {
    Subset s;
    for (std::size_t k = 0; k < rules_of[a].size(); ++k) {
      const auto& r = h.rules[rules_of[a][k]];
      if (std::any_of(t[k].begin(), t[k].end(), [&](State p) { return r.horizontal.is_final(p); }))
        s.push_back(r.target);
    }
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
  };

  for (bool changed = true; changed;) {
    changed = false;
    for (TagId a = 0; a < h.tags.size(); ++a) {
      if (rules_of[a].empty()) continue;
      // Explore the product over the current alphabet `found`.
      const std::size_t alphabet = found.size();
      std::map<Tuple, std::size_t> seen;
      TagProduct prod;
      Tuple init;
      for (auto ri : rules_of[a]) init.push_back({h.rules[ri].horizontal.initial()});
      seen.emplace(init, 0);
      prod.tuples.push_back(init);
      for (std::size_t i = 0; i < prod.tuples.size(); ++i) {
        prod.next.emplace_back(alphabet, 0);
        for (std::size_t s = 0; s < alphabet; ++s) {
          Tuple t;
          bool alive = false;
          for (std::size_t k = 0; k < rules_of[a].size(); ++k) {
            const auto& r = h.rules[rules_of[a][k]];
            std::vector<State> moved;
            for (State p : prod.tuples[i][k])
              for (HState q : found[s])
                if (State x = r.horizontal.next(p, q); x != no_state) moved.push_back(x);
            std::sort(moved.begin(), moved.end());
            moved.erase(std::unique(moved.begin(), moved.end()), moved.end());
            alive |= !moved.empty();
            t.push_back(std::move(moved));
          }
          if (!alive) {
            prod.next[i][s] = no_state;
            continue;
          }
          auto [it, fresh] = seen.emplace(t, prod.tuples.size());
          if (fresh) {
            prod.tuples.push_back(t);
            if (prod.tuples.size() > budget)
              throw Error(ErrorCode::budget_exceeded, "hedge determinization exceeded the state budget");
          }
          prod.next[i][s] = it->second;
        }
      }
      for (const auto& t : prod.tuples) {
        auto s = output(a, t);
        if (s.empty() || index.count(s)) continue;
        index.emplace(s, found.size());
        found.push_back(std::move(s));
        if (found.size() > budget) throw Error(ErrorCode::budget_exceeded, "hedge determinization exceeded the state budget");
        changed = true;
      }
      products[a] = std::move(prod);
    }
  }

  // Canonical numbering: sorted subsets.
  std::vector<std::size_t> order(found.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return found[x] < found[y]; });
  std::vector<HState> rank(found.size());
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<HState>(i);

  HedgeAutomaton out;
  out.tags = h.tags;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& s = found[order[i]];
    out.add_state(std::any_of(s.begin(), s.end(), [&](HState q) { return h.accepting[q] != 0; }));
  }
  if (subsets) {
    subsets->clear();
    for (auto i : order) subsets->push_back(found[i]);
  }
  for (TagId a = 0; a < h.tags.size(); ++a) {
    if (rules_of[a].empty()) continue;
    const auto& prod = products[a];
    std::vector<Subset> outputs;
    for (const auto& t : prod.tuples) outputs.push_back(output(a, t));
    for (std::size_t i = 0; i < order.size(); ++i) {
      const auto& target = found[order[i]];
      if (std::find(outputs.begin(), outputs.end(), target) == outputs.end()) continue;
      Dfa d(out.states);
      for (std::size_t k = 1; k < prod.tuples.size(); ++k) d.add_state(false);
      for (std::size_t k = 0; k < prod.tuples.size(); ++k) {
        d.set_final(static_cast<State>(k), outputs[k] == target);
        for (std::size_t s = 0; s < prod.next[k].size(); ++s)
          if (prod.next[k][s] != no_state)
            d.set_transition(static_cast<State>(k), rank[s], static_cast<State>(prod.next[k][s]));
      }
      out.rules.push_back({a, static_cast<HState>(i), minimize(d)});
    }
  }
  return out;
}

/// For each state, a tree with the fewest nodes evaluating to it (deterministic
/// automata). Among the candidates met during the fixpoint, ties go to the
/// shortlex-least encoding; the result is deterministic but not always the
/// shortlex-least tree of that size.
inline std::vector<std::optional<DocTree>> smallest_trees(const HedgeAutomaton& h) {
  constexpr std::size_t inf = std::numeric_limits<std::size_t>::max();
  std::vector<std::optional<DocTree>> best(h.states);
  std::vector<std::size_t> size(h.states, inf);
  auto better = [](const DocTree& x, std::size_t xs, const std::optional<DocTree>& y, std::size_t ys) {
    if (xs != ys) return xs < ys;
    return shortlex_less(encode(x), encode(*y));
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& r : h.rules) {
      const auto paths = detail::weighted_paths(r.horizontal, size, false);
      std::size_t cost = inf;
      State at = no_state;
      for (State p = 0; p < r.horizontal.state_count(); ++p)
        if (r.horizontal.is_final(p) && paths.dist[p] < cost) {
          cost = paths.dist[p];
          at = p;
        }
      if (at == no_state) continue;
      DocTree t{r.tag, {}};
      for (Symbol q : detail::forward_path(paths, at)) t.children.push_back(*best[q]);
      const std::size_t ts = cost + 1;
      if (size[r.target] == inf || better(t, ts, best[r.target], size[r.target])) {
        if (best[r.target] && *best[r.target] == t) continue;
        best[r.target] = std::move(t);
        size[r.target] = ts;
        changed = true;
      }
    }
  }
  return best;
}

struct HedgeComparison {
  bool equal = true;
  /// A smallest tree accepted by exactly one automaton.
  std::optional<DocTree> counterexample;
  /// 1 when the counterexample is accepted by the first automaton only, 2 otherwise.
  int accepted_by = 0;
};

/// Re-expresses h over a larger tag alphabet.
inline HedgeAutomaton retag(const HedgeAutomaton& h, const TagAlphabet& target) {
  HedgeAutomaton out = h;
  out.tags = target;
  for (auto& r : out.rules) r.tag = target.at(h.tags.name(r.tag));
  return out;
}

/// Language equality; both automata must share the tag alphabet (see retag).
inline HedgeComparison hedge_equal(const HedgeAutomaton& h1, const HedgeAutomaton& h2,
                                   std::size_t budget = default_hedge_budget) {
  if (!(h1.tags == h2.tags)) throw Error(ErrorCode::alphabet_mismatch, "hedge automata over different tag alphabets");
  HedgeAutomaton u;
  u.tags = h1.tags;
  for (HState q = 0; q < h1.states; ++q) u.add_state(h1.accepting[q]);
  for (HState q = 0; q < h2.states; ++q) u.add_state(false);
  const auto offset = static_cast<HState>(h1.states);
  for (const auto& r : h1.rules) {
    std::vector<Symbol> map(h1.states);
    for (HState q = 0; q < h1.states; ++q) map[q] = q;
    u.rules.push_back({r.tag, r.target, remap_symbols(r.horizontal, u.states, map)});
  }
  for (const auto& r : h2.rules) {
    std::vector<Symbol> map(h2.states);
    for (HState q = 0; q < h2.states; ++q) map[q] = q + offset;
    u.rules.push_back({r.tag, r.target + offset, remap_symbols(r.horizontal, u.states, map)});
  }
  std::vector<std::vector<HState>> subsets;
  const auto d = determinize_hedge(u, budget, &subsets);
  const auto trees = smallest_trees(d);
  HedgeComparison out;
  std::size_t best_size = 0;
  for (HState s = 0; s < d.states; ++s) {
    bool in1 = false, in2 = false;
    for (HState q : subsets[s]) {
      if (q < offset) in1 |= h1.accepting[q] != 0;
      else in2 |= h2.accepting[q - offset] != 0;
    }
    if (in1 == in2 || !trees[s]) continue;
    const auto n = trees[s]->node_count();
    if (out.counterexample && (n > best_size || (n == best_size && !shortlex_less(encode(*trees[s]), encode(*out.counterexample)))))
      continue;
    out.equal = false;
    out.counterexample = trees[s];
    out.accepted_by = in1 ? 1 : 2;
    best_size = n;
  }
  return out;
}

/// Surfaces of the accepted language; trims the automaton first.
inline SurfaceFamily hedge_surfaces(const HedgeAutomaton& h) {
  const auto prod = productive_states(h);
  const auto useful = useful_states(h);
  const std::size_t n = h.tags.size();
  // state ↦ tags it can carry as a subtree root
  std::vector<std::vector<Symbol>> tag_of(h.states);
  for (const auto& r : h.rules)
    if (prod[r.target] && !is_empty(restrict_symbols(r.horizontal, prod))) tag_of[r.target].push_back(r.tag);
  for (auto& v : tag_of) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  std::vector<Nfa> per_tag(n, Nfa(n));
  for (const auto& r : h.rules) {
    if (!useful[r.target]) continue;
    const Dfa horizontal = restrict_symbols(r.horizontal, prod);
    if (is_empty(horizontal)) continue;
    const Nfa img = map_alphabet(horizontal, n, tag_of);
    const State base = per_tag[r.tag].absorb(img);
    for (State p : img.initials()) per_tag[r.tag].add_initial(base + p);
  }
  SurfaceFamily s{h.tags, {}};
  for (TagId a = 0; a < n; ++a) s.surface.push_back(to_min_dfa(per_tag[a]));
  return s;
}

inline HedgeAutomaton xml_to_hedge(const XmlGrammar& g) {
  HedgeAutomaton h;
  h.tags = g.tags;
  for (TagId a = 0; a < g.size(); ++a) h.add_state(a == g.axiom);
  for (TagId a = 0; a < g.size(); ++a)
    if (!is_empty(g.content[a])) h.rules.push_back({a, a, g.content[a]});
  return h;
}

// ---------------------------------------------------------------------------
// Balanced grammars

/// Tag-homogeneous balanced grammar: each nonterminal X has one tag and
/// productions X → tag(X) m /tag(X), m ∈ content[X] (a DFA over nonterminals).
struct BalancedGrammar {
  TagAlphabet tags;
  std::vector<std::string> names;
  std::vector<TagId> tag_of;
  std::vector<Dfa> content;
  /// Nonterminals generating the language (copies of one input axiom, one per tag).
  std::vector<NonterminalId> axioms;

  std::size_t size() const { return names.size(); }
};


/// Reinterprets a CFG in balanced form. A nonterminal used under several tags
/// is split into one copy per tag, named X_tag.
inline BalancedGrammar from_cfg(const Cfg& g) {
  std::vector<std::vector<TagId>> tags_of(g.size());
  for (const auto& p : g.productions) {
    const auto& r = p.rhs;
    const bool shape = r.size() >= 2 && r.front().terminal && r.back().terminal && !r.front().letter().close &&
                       r.back().letter().close && r.front().letter().tag == r.back().letter().tag &&
                       std::all_of(r.begin() + 1, r.end() - 1, [](GSymbol s) { return !s.terminal; });
    if (!shape) throw Error(ErrorCode::not_balanced_form, "production '" + format_production(p, g) + "' is not of the form X -> a Y1 … Yn /a");
    auto& v = tags_of[p.lhs];
    if (std::find(v.begin(), v.end(), r.front().letter().tag) == v.end()) v.push_back(r.front().letter().tag);
  }
  for (auto& v : tags_of) std::sort(v.begin(), v.end());
  BalancedGrammar out;
  out.tags = g.tags;
  std::vector<std::map<TagId, NonterminalId>> copy(g.size());
  for (NonterminalId x = 0; x < g.size(); ++x)
    for (TagId a : tags_of[x]) {
      copy[x][a] = static_cast<NonterminalId>(out.names.size());
      out.names.push_back(tags_of[x].size() == 1 ? g.nonterminals[x] : g.nonterminals[x] + "_" + g.tags.name(a));
      out.tag_of.push_back(a);
    }
  const std::size_t n = out.names.size();
  std::vector<std::vector<Symbol>> subst(g.size());
  for (NonterminalId x = 0; x < g.size(); ++x)
    for (auto [a, c] : copy[x]) subst[x].push_back(c);
  std::vector<Nfa> nfas(n, Nfa(n));
  for (auto& f : nfas) {
    const State s = f.add_state();
    f.add_initial(s);
  }
  for (const auto& p : g.productions) {
    const NonterminalId target = copy[p.lhs].at(p.rhs.front().letter().tag);
    Nfa& f = nfas[target];
    State cur = 0;
    for (std::size_t i = 1; i + 1 < p.rhs.size(); ++i) {
      const State nx = f.add_state();
      for (Symbol c : subst[p.rhs[i].id]) f.add_transition(cur, c, nx);
      cur = nx;
    }
    f.set_final(cur, true);
  }
  for (auto& f : nfas) out.content.push_back(to_min_dfa(f));
  for (auto [a, c] : copy[g.axiom]) out.axioms.push_back(c);
  return out;
}

inline HedgeAutomaton to_hedge(const BalancedGrammar& g) {
  HedgeAutomaton h;
  h.tags = g.tags;
  for (NonterminalId x = 0; x < g.size(); ++x)
    h.add_state(std::find(g.axioms.begin(), g.axioms.end(), x) != g.axioms.end());
  for (NonterminalId x = 0; x < g.size(); ++x)
    if (!is_empty(g.content[x])) h.rules.push_back({g.tag_of[x], x, g.content[x]});
  return h;
}

/// Keeps productive and accessible nonterminals (others get ∅ content).
/// Throws EmptyLanguage when no axiom copy is productive.
inline BalancedGrammar reduce(const BalancedGrammar& g) {
  const auto h = to_hedge(g);
  const auto useful = useful_states(h);
  const auto prod = productive_states(h);
  BalancedGrammar out = g;
  bool any = false;
  for (NonterminalId x = 0; x < g.size(); ++x) {
    out.content[x] = useful[x] ? minimize(restrict_symbols(g.content[x], prod)) : minimize(Dfa::empty(g.size()));
  }
  out.axioms.clear();
  for (auto x : g.axioms)
    if (useful[x]) {
      out.axioms.push_back(x);
      any = true;
    }
  if (!any) throw Error(ErrorCode::empty_language, "the axiom generates no tree");
  return out;
}

/// Cfg text form: `X -> a Y Z /a | ...` (content models are finite after from_cfg).
inline std::string format_balanced(const BalancedGrammar& g) {
  std::ostringstream out;
  // A single axiom nonterminal name; several copies are listed as comments.
  out << "axiom " << (g.axioms.empty() ? std::string("?") : g.names[g.axioms.front()]) << '\n';
  for (std::size_t i = 1; i < g.axioms.size(); ++i) out << "# also generates: " << g.names[g.axioms[i]] << '\n';
  for (NonterminalId x = 0; x < g.size(); ++x) {
    if (is_empty(g.content[x])) continue;
    const std::string a = g.tags.name(g.tag_of[x]);
    out << g.names[x] << " -> ";
    if (is_finite(g.content[x])) {
      const auto words = enumerate(g.content[x], g.content[x].state_count());
      for (std::size_t i = 0; i < words.size(); ++i) {
        if (i) out << " | ";
        out << a;
        for (Symbol y : words[i]) out << ' ' << g.names[y];
        out << " /" << a;
      }
    } else {
      out << a << " (" << to_string(dfa_to_regex(g.content[x]), g.names) << ") /" << a;
    }
    out << '\n';
  }
  return out.str();
}

inline BalancedGrammar parse_balanced(std::string_view text, TagAlphabet tags = {}) {
  return from_cfg(parse_cfg(text, std::move(tags)));
}

struct BalancedXmlVerdict {
  bool xml = false;
  /// The XML-grammar generating the same language, when xml.
  std::optional<XmlGrammar> grammar;
  /// When not xml: a tree of the standard language missing from L, or (several
  /// root tags) a tree of L whose root differs from the first root tag.
  std::optional<DocTree> counterexample;
  std::string reason;
};

inline BalancedXmlVerdict is_xml_balanced(const BalancedGrammar& input) {
  const BalancedGrammar g = reduce(input);
  const auto h = to_hedge(g);
  BalancedXmlVerdict v;
  std::vector<TagId> roots;
  for (auto x : g.axioms)
    if (std::find(roots.begin(), roots.end(), g.tag_of[x]) == roots.end()) roots.push_back(g.tag_of[x]);
  if (roots.size() > 1) {
    // L meets two of the disjoint sets D_a.
    HedgeAutomaton only = h;
    for (NonterminalId x = 0; x < g.size(); ++x) only.accepting[x] = only.accepting[x] && g.tag_of[x] == roots[1];
    const auto d = determinize_hedge(only);
    const auto trees = smallest_trees(d);
    for (HState s = 0; s < d.states; ++s)
      if (d.accepting[s] && trees[s] &&
          (!v.counterexample || trees[s]->node_count() < v.counterexample->node_count()))
        v.counterexample = trees[s];
    v.reason = "the language has documents with root '" + g.tags.name(roots[0]) + "' and root '" +
               g.tags.name(roots[1]) + "'";
    return v;
  }
  const auto s = hedge_surfaces(h);
  const auto standard = standard_grammar(s, roots.front());
  const auto cmp = hedge_equal(h, xml_to_hedge(standard));
  if (cmp.equal) {
    v.xml = true;
    v.grammar = standard;
    return v;
  }
  v.counterexample = cmp.counterexample;
  v.reason = cmp.accepted_by == 2 ? "the standard grammar of the surfaces generates a document outside the language"
                                  : "the language has a document outside the standard grammar";
  return v;
}

}  // namespace dtdkit
