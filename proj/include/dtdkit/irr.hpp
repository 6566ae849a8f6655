#pragma once

// The Irr fixpoint: for each nonterminal X, the set of reduced words ρ(w) of
// words w derived from X. Decides L ⊆ D* and L ⊆ D_a.

#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <vector>

#include "dtdkit/cfg.hpp"
#include "dtdkit/dyck.hpp"
#include "dtdkit/error.hpp"

namespace dtdkit {

/// Reduced word → one terminal word that reduces to it.
using ReducedSet = std::map<TaggedWord, TaggedWord>;

/// Terminal context S ⇒* g X d.
struct DerivationContext {
  TaggedWord left, right;
  std::size_t steps = 0;
};

/// For each nonterminal, a context from a derivation S ⇒* gXd with the
/// fewest steps (counting the steps that terminate the side symbols).
inline std::vector<DerivationContext> derivation_contexts(const Cfg& g) {
  const auto shortest = shortest_derivations(g);
  constexpr auto inf = ShortestDerivations::unreachable;
  std::vector<DerivationContext> ctx(g.size());
  std::vector<std::size_t> dist(g.size(), inf);
  using Item = std::pair<std::size_t, NonterminalId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[g.axiom] = 0;
  queue.push({0, g.axiom});
  std::vector<char> done(g.size(), 0);
  while (!queue.empty()) {
    const auto [d, x] = queue.top();
    queue.pop();
    if (done[x]) continue;
    done[x] = 1;
    for (const auto& p : g.productions) {
      if (p.lhs != x) continue;
      std::size_t side = 0;
      bool ok = true;
      for (GSymbol s : p.rhs) {
        if (s.terminal) continue;
        if (shortest.steps[s.id] == inf) ok = false;
        else side += shortest.steps[s.id];
      }
      if (!ok) continue;
      for (std::size_t i = 0; i < p.rhs.size(); ++i) {
        if (p.rhs[i].terminal) continue;
        const NonterminalId z = p.rhs[i].id;
        const std::size_t cost = d + 1 + side - shortest.steps[z];
        if (cost >= dist[z]) continue;
        dist[z] = cost;
        DerivationContext c;
        c.left = ctx[x].left;
        const auto l = shortest.expand(std::span(p.rhs).subspan(0, i));
        c.left.insert(c.left.end(), l.begin(), l.end());
        c.right = shortest.expand(std::span(p.rhs).subspan(i + 1));
        c.right.insert(c.right.end(), ctx[x].right.begin(), ctx[x].right.end());
        c.steps = cost;
        ctx[z] = std::move(c);
        queue.push({cost, z});
      }
    }
  }
  return ctx;
}

enum class IrrStatus { bounded, unbounded, not_dyck_factor };

inline const char* to_string(IrrStatus s) {
  switch (s) {
    case IrrStatus::bounded: return "bounded";
    case IrrStatus::unbounded: return "unbounded";
    case IrrStatus::not_dyck_factor: return "not-dyck-factor";
  }
  return "?";
}

struct IrrReport {
  IrrStatus status = IrrStatus::bounded;
  /// Irr(X) per nonterminal; the stable sets when bounded, the last computed ones otherwise.
  std::vector<ReducedSet> irr;
  /// ℓ_X per nonterminal.
  std::vector<std::size_t> budget;
  std::vector<DerivationContext> contexts;
  /// Iterations until convergence (or until the verdict).
  std::size_t steps = 0;
  /// Set when not bounded: the nonterminal and reduced word that triggered the verdict.
  std::optional<NonterminalId> offender;
  TaggedWord offending_reduced;
  /// Set when not bounded: a word of L(S) outside D*.
  TaggedWord counterexample;
};

inline constexpr std::size_t irr_iteration_cap = 10000;

namespace detail {

/// ρ(σ(α)) for a sentential form α, each entry with a terminal witness.
/// Returns nullopt (with `bad` filled) as soon as a reduced word leaves Ā*A*.
struct BadProduct {
  TaggedWord reduced;
  TaggedWord prefix;       // terminal witness of the partial product
  std::size_t position = 0;  // symbols of α consumed so far
};

inline std::optional<ReducedSet> reduce_substitution(std::span<const GSymbol> alpha, const std::vector<ReducedSet>& irr,
                                                     BadProduct* bad) {
  ReducedSet products{{TaggedWord{}, TaggedWord{}}};
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    ReducedSet next;
    auto insert = [&](TaggedWord u, TaggedWord w) -> bool {
      if (!is_canonical_shape(u)) {
        if (bad) *bad = {std::move(u), std::move(w), i + 1};
        return false;
      }
      next.emplace(std::move(u), std::move(w));
      return true;
    };
    for (const auto& [u, w] : products) {
      if (alpha[i].terminal) {
        TaggedWord uw = u;
        push_reduced(uw, alpha[i].letter());
        TaggedWord ww = w;
        ww.push_back(alpha[i].letter());
        if (!insert(std::move(uw), std::move(ww))) return std::nullopt;
      } else {
        for (const auto& [v, wv] : irr[alpha[i].id]) {
          TaggedWord ww = w;
          ww.insert(ww.end(), wv.begin(), wv.end());
          if (!insert(reduce_concat(u, v), std::move(ww))) return std::nullopt;
        }
      }
    }
    products = std::move(next);
    if (products.empty()) break;
  }
  return products;
}

inline TaggedWord in_context(const DerivationContext& c, const TaggedWord& w) {
  TaggedWord out = c.left;
  out.insert(out.end(), w.begin(), w.end());
  out.insert(out.end(), c.right.begin(), c.right.end());
  return out;
}

}  // namespace detail

/// Irr(U) for a sentential form U, given the Irr sets of the nonterminals.
inline ReducedSet irr_of(std::span<const GSymbol> u, const std::vector<ReducedSet>& irr) {
  detail::BadProduct bad;
  auto r = detail::reduce_substitution(u, irr, &bad);
  if (!r) throw Error(ErrorCode::not_dyck_subset, "reduced word leaves the shape of a Dyck factor");
  return *r;
}

/// Runs the fixpoint on a reduced grammar.
inline IrrReport irr_fixpoint(const Cfg& g) {
  IrrReport rep;
  const auto shortest = shortest_derivations(g);
  rep.contexts = derivation_contexts(g);
  rep.budget.resize(g.size());
  for (NonterminalId x = 0; x < g.size(); ++x)
    rep.budget[x] = dyck_reduce(rep.contexts[x].left).letters.size() + dyck_reduce(rep.contexts[x].right).letters.size();
  rep.irr.assign(g.size(), {});

  for (std::size_t k = 1; k <= irr_iteration_cap; ++k) {
    rep.steps = k;
    auto next = rep.irr;
    for (const auto& p : g.productions) {
      detail::BadProduct bad;
      auto products = detail::reduce_substitution(p.rhs, rep.irr, &bad);
      if (!products) {
        rep.status = IrrStatus::not_dyck_factor;
        rep.offender = p.lhs;
        rep.offending_reduced = bad.reduced;
        // Completing the partial product keeps a factor b ā (b ≠ a) or ā b in the reduction.
        TaggedWord w = bad.prefix;
        const auto rest = shortest.expand(std::span(p.rhs).subspan(bad.position));
        w.insert(w.end(), rest.begin(), rest.end());
        rep.counterexample = detail::in_context(rep.contexts[p.lhs], w);
        return rep;
      }
      for (auto& [u, w] : *products) next[p.lhs].emplace(u, w);
    }
    bool changed = false;
    for (NonterminalId x = 0; x < g.size(); ++x) changed |= next[x].size() != rep.irr[x].size();
    rep.irr = std::move(next);
    if (!changed) return rep;
    for (NonterminalId x = 0; x < g.size(); ++x) {
      for (const auto& [u, w] : rep.irr[x]) {
        if (u.size() > rep.budget[x]) {
          rep.status = IrrStatus::unbounded;
          rep.offender = x;
          rep.offending_reduced = u;
          rep.counterexample = detail::in_context(rep.contexts[x], w);
          return rep;
        }
      }
    }
  }
  throw Error(ErrorCode::internal, "Irr fixpoint exceeded the iteration cap");
}

struct SubsetVerdict {
  bool holds = true;
  /// A word of L outside the target language, when `holds` is false.
  std::optional<TaggedWord> counterexample;
};

/// L(g) ⊆ D*. The empty language is a subset.
inline SubsetVerdict is_dyck_star_subset(const Cfg& g) {
  Cfg r;
  try {
    r = reduce_grammar(g);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::empty_language) return {};
    throw;
  }
  const auto rep = irr_fixpoint(r);
  if (rep.status != IrrStatus::bounded) return {false, rep.counterexample};
  for (const auto& [u, w] : rep.irr[r.axiom])
    if (!u.empty()) return {false, w};
  return {};
}

namespace detail {

/// Decides L(g) ∩ aT* ⊆ D_a, given that g's language is l⁻¹-quotiented by the opening `a` already.
/// `rest` generates a⁻¹L.
inline SubsetVerdict prime_after_open(const Cfg& rest, TagId a) {
  const Letter open = Letter::open_of(a), close = Letter::close_of(a);
  auto prefixed = [&](TaggedWord w) {
    w.insert(w.begin(), open);
    return w;
  };
  Cfg r;
  try {
    r = reduce_grammar(rest);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::empty_language) return {};
    throw;
  }
  if (nullable_nonterminals(r)[r.axiom]) return {false, TaggedWord{open}};
  const auto edges = edge_letters(r);
  for (const auto& [l, w] : edges.last[r.axiom])
    if (l != close) return {false, prefixed(w)};
  auto inner = quotient(r, close, false);
  auto verdict = is_dyck_star_subset(inner);
  if (!verdict.holds) {
    auto w = prefixed(*verdict.counterexample);
    w.push_back(close);
    return {false, w};
  }
  return {};
}

}  // namespace detail

/// L(g) ⊆ D_a.
inline SubsetVerdict is_dyck_prime_subset(const Cfg& g, TagId a) {
  Cfg r;
  try {
    r = reduce_grammar(g);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::empty_language) return {};
    throw;
  }
  if (nullable_nonterminals(r)[r.axiom]) return {false, TaggedWord{}};
  const auto edges = edge_letters(r);
  for (const auto& [l, w] : edges.first[r.axiom])
    if (l != Letter::open_of(a)) return {false, w};
  if (a >= r.tags.size()) return {};
  return detail::prime_after_open(quotient(r, Letter::open_of(a), true), a);
}

/// L(g) ⊆ D = ∪_a D_a.
inline SubsetVerdict is_dyck_subset(const Cfg& g) {
  Cfg r;
  try {
    r = reduce_grammar(g);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::empty_language) return {};
    throw;
  }
  if (nullable_nonterminals(r)[r.axiom]) return {false, TaggedWord{}};
  const auto edges = edge_letters(r);
  for (const auto& [l, w] : edges.first[r.axiom]) {
    if (l.close) return {false, w};
    auto v = detail::prime_after_open(quotient(r, l, true), l.tag);
    if (!v.holds) return v;
  }
  return {};
}

}  // namespace dtdkit
