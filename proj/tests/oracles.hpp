#pragma once

// Brute-force reference implementations. None of them calls the decision
// procedures they are used to check.

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "dtdkit/dtdkit.hpp"

namespace oracle {

using namespace dtdkit;

/// ρ by repeated erasure of the leftmost factor a ā.
inline TaggedWord naive_reduce(TaggedWord w) {
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      if (!w[i].close && w[i + 1].close && w[i].tag == w[i + 1].tag) {
        w.erase(w.begin() + static_cast<std::ptrdiff_t>(i), w.begin() + static_cast<std::ptrdiff_t>(i + 2));
        changed = true;
        break;
      }
    }
  }
  return w;
}

inline long weight(std::span<const Letter> w) {
  long s = 0;
  for (Letter l : w) s += l.close ? -1 : 1;
  return s;
}

/// w ∈ D: ρ(w) = ε, w ≠ ε and every proper nonempty prefix has positive weight.
inline bool is_prime(std::span<const Letter> w) {
  if (w.empty() || !naive_reduce(TaggedWord(w.begin(), w.end())).empty()) return false;
  long s = 0;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    s += w[i].close ? -1 : 1;
    if (s <= 0) return false;
  }
  return true;
}

/// Splits a word of D* into primes by prefix weights.
inline std::vector<TaggedWord> split(std::span<const Letter> w) {
  std::vector<TaggedWord> out;
  std::size_t start = 0;
  long s = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    s += w[i].close ? -1 : 1;
    if (s == 0) {
      out.emplace_back(w.begin() + static_cast<std::ptrdiff_t>(start), w.begin() + static_cast<std::ptrdiff_t>(i + 1));
      start = i + 1;
    }
  }
  return out;
}

inline std::vector<TagId> trace_of(std::span<const Letter> prime) {
  std::vector<TagId> out;
  for (const auto& c : split(prime.subspan(1, prime.size() - 2))) out.push_back(c.front().tag);
  return out;
}

/// Every factor of w that is a prime.
inline std::vector<TaggedWord> prime_factors(std::span<const Letter> w) {
  std::vector<TaggedWord> out;
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = i + 2; j <= w.size(); j += 2)
      if (is_prime(w.subspan(i, j - i))) out.emplace_back(w.begin() + static_cast<std::ptrdiff_t>(i), w.begin() + static_cast<std::ptrdiff_t>(j));
  return out;
}

/// All primes over `ntags` tags with at most `max_len` letters, by length.
inline std::vector<TaggedWord> all_primes(std::size_t ntags, std::size_t max_len) {
  // forests[n]: products of primes of total length n.
  std::vector<std::vector<TaggedWord>> forests(max_len + 1), primes(max_len + 1);
  forests[0].push_back({});
  for (std::size_t n = 2; n <= max_len; n += 2) {
    for (TagId a = 0; a < ntags; ++a)
      for (const auto& f : forests[n - 2]) {
        TaggedWord w{Letter::open_of(a)};
        w.insert(w.end(), f.begin(), f.end());
        w.push_back(Letter::close_of(a));
        primes[n].push_back(std::move(w));
      }
    for (std::size_t k = 2; k <= n; k += 2)
      for (const auto& p : primes[k])
        for (const auto& f : forests[n - k]) {
          TaggedWord w = p;
          w.insert(w.end(), f.begin(), f.end());
          forests[n].push_back(std::move(w));
        }
  }
  std::vector<TaggedWord> out;
  for (auto& v : primes)
    for (auto& w : v) out.push_back(std::move(w));
  return out;
}

/// Every word over T of length ≤ max_len.
inline std::vector<TaggedWord> all_words(std::size_t ntags, std::size_t max_len) {
  std::vector<TaggedWord> out{{}};
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].size() == max_len) continue;
    for (std::uint32_t c = 0; c < 2 * ntags; ++c) {
      auto w = out[i];
      w.push_back(Letter::from_code(c));
      out.push_back(std::move(w));
    }
  }
  return out;
}

/// End positions of matches of r starting at i.
inline std::set<std::size_t> regex_ends(const Regex& r, std::span<const Symbol> w, std::size_t i) {
  switch (r->kind) {
    case RegexKind::empty: return {};
    case RegexKind::epsilon: return {i};
    case RegexKind::symbol:
      if (i < w.size() && w[i] == r->symbol) return {i + 1};
      return {};
    case RegexKind::concat: {
      std::set<std::size_t> cur{i};
      for (const auto& item : r->items) {
        std::set<std::size_t> next;
        for (auto p : cur)
          for (auto q : regex_ends(item, w, p)) next.insert(q);
        cur = std::move(next);
      }
      return cur;
    }
    case RegexKind::alt: {
      std::set<std::size_t> out;
      for (const auto& item : r->items)
        for (auto q : regex_ends(item, w, i)) out.insert(q);
      return out;
    }
    case RegexKind::star:
    case RegexKind::plus: {
      std::set<std::size_t> out;
      if (r->kind == RegexKind::star) out.insert(i);
      std::vector<std::size_t> todo{i};
      std::set<std::size_t> seen{i};
      while (!todo.empty()) {
        const auto p = todo.back();
        todo.pop_back();
        for (auto q : regex_ends(r->items[0], w, p)) {
          out.insert(q);
          if (seen.insert(q).second) todo.push_back(q);
        }
      }
      return out;
    }
    case RegexKind::optional: {
      auto out = regex_ends(r->items[0], w, i);
      out.insert(i);
      return out;
    }
  }
  return {};
}

inline bool regex_match(const Regex& r, std::span<const Symbol> w) { return regex_ends(r, w, 0).count(w.size()) > 0; }

/// An XML-grammar kept as regular expressions, for oracles that avoid automata.
struct XmlSpec {
  TagAlphabet tags;
  std::vector<Regex> content;
  TagId axiom = 0;

  XmlGrammar grammar() const {
    std::vector<Dfa> d;
    for (const auto& r : content) d.push_back(regex_to_dfa(r, tags.size()));
    return make_xml_grammar(tags, std::move(d), axiom);
  }
};

inline bool node_ok(const XmlSpec& g, std::span<const Letter> prime) {
  const TagId a = prime.front().tag;
  if (a >= g.tags.size()) return false;
  const auto children = split(prime.subspan(1, prime.size() - 2));
  Word t;
  for (const auto& c : children) t.push_back(c.front().tag);
  if (!regex_match(g.content[a], t)) return false;
  return std::all_of(children.begin(), children.end(), [&](const TaggedWord& c) { return node_ok(g, c); });
}

inline bool xml_member(const XmlSpec& g, std::span<const Letter> w) {
  return is_prime(w) && w.front().tag == g.axiom && node_ok(g, w);
}

/// Words of L(g) with at most max_len letters, by least fixpoint over lengths.
inline std::set<TaggedWord> cfg_words(const Cfg& g, std::size_t max_len) {
  std::vector<std::set<TaggedWord>> lang(g.size());
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& p : g.productions) {
      std::set<TaggedWord> cur{{}};
      for (const auto& s : p.rhs) {
        std::set<TaggedWord> next;
        for (const auto& u : cur) {
          if (s.terminal) {
            if (u.size() < max_len) {
              auto v = u;
              v.push_back(s.letter());
              next.insert(std::move(v));
            }
          } else {
            for (const auto& x : lang[s.id]) {
              if (u.size() + x.size() > max_len) continue;
              auto v = u;
              v.insert(v.end(), x.begin(), x.end());
              next.insert(std::move(v));
            }
          }
        }
        cur = std::move(next);
      }
      for (auto& w : cur) changed |= lang[p.lhs].insert(w).second;
    }
  }
  return lang[g.axiom];
}

/// w ∈ L(g): least fixpoint of "X derives w[i..j)".
inline bool cfg_member(const Cfg& g, std::span<const Letter> w) {
  const std::size_t n = w.size();
  std::vector<std::vector<std::vector<char>>> derives(g.size(), std::vector<std::vector<char>>(n + 1, std::vector<char>(n + 1, 0)));
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& p : g.productions)
      for (std::size_t i = 0; i <= n; ++i) {
        std::vector<char> cur(n + 1, 0);
        cur[i] = 1;
        for (const auto& s : p.rhs) {
          std::vector<char> next(n + 1, 0);
          for (std::size_t j = i; j <= n; ++j) {
            if (!cur[j]) continue;
            if (s.terminal) {
              if (j < n && w[j] == s.letter()) next[j + 1] = 1;
            } else {
              for (std::size_t k = j; k <= n; ++k)
                if (derives[s.id][j][k]) next[k] = 1;
            }
          }
          cur = std::move(next);
        }
        for (std::size_t j = i; j <= n; ++j)
          if (cur[j] && !derives[p.lhs][i][j]) {
            derives[p.lhs][i][j] = 1;
            changed = true;
          }
      }
  }
  return derives[g.axiom][0][n];
}

/// Words of a DFA with at most max_len symbols, by depth-first search that
/// skips states from which no final state is reachable.
inline std::set<Word> dfa_words(const Dfa& d, std::size_t max_len) {
  std::vector<char> live(d.state_count(), 0);
  for (State p = 0; p < d.state_count(); ++p) live[p] = d.is_final(p);
  for (bool changed = true; changed;) {
    changed = false;
    for (State p = 0; p < d.state_count(); ++p)
      for (Symbol s = 0; s < d.alphabet_size() && !live[p]; ++s)
        if (const State q = d.next(p, s); q != no_state && live[q]) live[p] = changed = true;
  }
  std::set<Word> out;
  Word w;
  std::function<void(State)> go = [&](State p) {
    if (d.is_final(p)) out.insert(w);
    if (w.size() == max_len) return;
    for (Symbol s = 0; s < d.alphabet_size(); ++s) {
      const State q = d.next(p, s);
      if (q == no_state || !live[q]) continue;
      w.push_back(s);
      go(q);
      w.pop_back();
    }
  };
  go(d.initial());
  return out;
}

inline std::set<TaggedWord> dfa_letter_words(const Dfa& d, std::size_t max_len) {
  std::set<TaggedWord> out;
  for (const auto& w : dfa_words(d, max_len)) out.insert(to_letters(w));
  return out;
}

/// Traces of all well-formed factors of the given words, grouped by root tag.
inline std::vector<std::set<Word>> factor_traces(std::size_t ntags, const std::vector<TaggedWord>& words) {
  std::vector<std::set<Word>> out(ntags);
  for (const auto& w : words)
    for (const auto& f : prime_factors(w)) {
      auto t = trace_of(f);
      out[f.front().tag].insert(Word(t.begin(), t.end()));
    }
  return out;
}

/// Longest trace among well-formed factors of the words.
inline std::size_t trace_width(const std::vector<TaggedWord>& words) {
  std::size_t best = 0;
  for (const auto& w : words)
    for (const auto& f : prime_factors(w)) best = std::max(best, trace_of(f).size());
  return best;
}

}  // namespace oracle
