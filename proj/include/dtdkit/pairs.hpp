#pragma once

// Iterating pairs X ⇒⁺ gXd of grammars generating subsets of D, and the
// flat-pair test for finiteness of surfaces.

#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "dtdkit/cfg.hpp"
#include "dtdkit/irr.hpp"

namespace dtdkit {

enum class PairKind { lifting, flat };

inline const char* to_string(PairKind k) { return k == PairKind::flat ? "flat" : "lifting"; }

/// ρ(g) = x̄ p x.
struct PairShape {
  TaggedWord x;  // over A
  TaggedWord p;  // over A
  PairKind kind() const { return p.empty() ? PairKind::flat : PairKind::lifting; }
};

/// Decomposes the reduced left part of an iterating pair. Returns nullopt when
/// ρ(g) is not of the form x̄ p x.
inline std::optional<PairShape> decompose_pair(std::span<const Letter> g) {
  const auto r = dyck_reduce(g);
  if (!r.canonical) return std::nullopt;
  const auto closers = r.closers();
  const auto openers = r.openers();
  PairShape s;
  for (auto it = closers.rbegin(); it != closers.rend(); ++it) s.x.push_back(Letter::open_of(it->tag));
  if (openers.size() < s.x.size()) return std::nullopt;
  const std::size_t plen = openers.size() - s.x.size();
  if (!std::equal(s.x.begin(), s.x.end(), openers.begin() + static_cast<std::ptrdiff_t>(plen))) return std::nullopt;
  s.p.assign(openers.begin(), openers.begin() + static_cast<std::ptrdiff_t>(plen));
  return s;
}

struct IteratingPair {
  NonterminalId nonterminal = 0;
  /// Skeleton X ⇒⁺ U X U′.
  Sentential left_form, right_form;
  /// Production indices along the spine, in derivation order.
  std::vector<std::size_t> chain;
  /// Terminal words with X ⇒⁺ g X d.
  TaggedWord g, d;
  PairShape shape;
  PairKind kind() const { return shape.kind(); }
};

struct PairAnalysis {
  /// The ε- and unit-free grammar the pairs refer to.
  Cfg grammar;
  IrrReport irr;
  std::vector<IteratingPair> pairs;
};

namespace detail {

struct Skeleton {
  NonterminalId x;
  Sentential left, right;
  std::vector<std::size_t> chain;
};

inline void collect_skeletons(const Cfg& g, NonterminalId root, NonterminalId cur, std::vector<char>& on_spine,
                              Sentential& left, Sentential& right, std::vector<std::size_t>& chain,
                              std::vector<Skeleton>& out) {
  for (std::size_t pi = 0; pi < g.productions.size(); ++pi) {
    const auto& p = g.productions[pi];
    if (p.lhs != cur) continue;
    for (std::size_t i = 0; i < p.rhs.size(); ++i) {
      if (p.rhs[i].terminal) continue;
      const NonterminalId z = p.rhs[i].id;
      if (z != root && on_spine[z]) continue;
      const auto left_size = left.size();
      const Sentential saved_right = right;
      left.insert(left.end(), p.rhs.begin(), p.rhs.begin() + static_cast<std::ptrdiff_t>(i));
      Sentential r(p.rhs.begin() + static_cast<std::ptrdiff_t>(i + 1), p.rhs.end());
      r.insert(r.end(), right.begin(), right.end());
      right = std::move(r);
      chain.push_back(pi);
      if (z == root) {
        out.push_back({root, left, right, chain});
      } else {
        on_spine[z] = 1;
        collect_skeletons(g, root, z, on_spine, left, right, chain, out);
        on_spine[z] = 0;
      }
      chain.pop_back();
      left.resize(left_size);
      right = saved_right;
    }
  }
}

}  // namespace detail

/// Elementary skeletons X ⇒⁺ U X U′ with no nonterminal repeated on the spine,
/// instantiated with u ∈ Irr(U), u′ ∈ Irr(U′).
/// ε- and unit productions are eliminated first so that gd ≠ ε for every pair.
inline PairAnalysis elementary_pairs(const Cfg& input) {
  PairAnalysis out;
  out.grammar = remove_epsilon_and_units(reduce_grammar(input));
  const Cfg& g = out.grammar;
  out.irr = irr_fixpoint(g);
  if (out.irr.status != IrrStatus::bounded)
    throw Error(ErrorCode::not_dyck_subset, std::string("Irr fixpoint is ") + to_string(out.irr.status));

  std::vector<detail::Skeleton> skeletons;
  for (NonterminalId x = 0; x < g.size(); ++x) {
    std::vector<char> on_spine(g.size(), 0);
    on_spine[x] = 1;
    Sentential left, right;
    std::vector<std::size_t> chain;
    detail::collect_skeletons(g, x, x, on_spine, left, right, chain, skeletons);
  }
  std::set<std::tuple<NonterminalId, TaggedWord, TaggedWord>> seen;
  for (const auto& s : skeletons) {
    const auto lefts = irr_of(s.left, out.irr.irr);
    const auto rights = irr_of(s.right, out.irr.irr);
    for (const auto& [u, gw] : lefts) {
      for (const auto& [v, dw] : rights) {
        if (!seen.emplace(s.x, u, v).second) continue;
        auto shape = decompose_pair(u);
        if (!shape) throw Error(ErrorCode::not_dyck_subset, "iterating pair without the x̄px shape");
        out.pairs.push_back({s.x, s.left, s.right, s.chain, gw, dw, std::move(*shape)});
      }
    }
  }
  return out;
}

struct SurfaceFiniteness {
  bool finite = true;
  std::optional<IteratingPair> witness;
  /// Grammar the witness refers to.
  Cfg grammar;
};

/// True iff no elementary iterating pair is flat. Requires L(g) ⊆ D.
inline SurfaceFiniteness surfaces_are_finite(const Cfg& g) {
  const auto v = is_dyck_subset(g);
  if (!v.holds) {
    std::string msg = "language is not contained in D";
    if (v.counterexample) msg += "; counterexample: " + format_word(*v.counterexample, g.tags);
    throw Error(ErrorCode::not_dyck_subset, msg);
  }
  auto analysis = elementary_pairs(g);
  SurfaceFiniteness out;
  out.grammar = analysis.grammar;
  for (auto& p : analysis.pairs) {
    if (p.kind() == PairKind::flat) {
      out.finite = false;
      out.witness = std::move(p);
      break;
    }
  }
  return out;
}

/// Human-readable derivation of a pair's skeleton.
inline std::vector<std::string> describe_chain(const IteratingPair& p, const Cfg& g) {
  std::vector<std::string> out;
  for (auto i : p.chain) out.push_back(format_production(g.productions[i], g));
  return out;
}

}  // namespace dtdkit
