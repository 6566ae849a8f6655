#pragma once

// Finite context-free grammars over T = A ∪ Ā.
//
// File format:
//   axiom S
//   S -> a S /a | a /a
//   T -> ~e~
// Uppercase-initial identifiers are nonterminals, `a` and `/a` are terminals,
// `|` separates alternatives and `~e~` is the empty right-hand side.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dtdkit/dyck.hpp"
#include "dtdkit/error.hpp"

namespace dtdkit {

using NonterminalId = std::uint32_t;

/// A grammar symbol: a terminal letter or a nonterminal.
struct GSymbol {
  bool terminal = false;
  std::uint32_t id = 0;  // Letter::code() for terminals

  static GSymbol term(Letter l) { return {true, l.code()}; }
  static GSymbol var(NonterminalId n) { return {false, n}; }
  Letter letter() const { return Letter::from_code(id); }

  friend bool operator==(GSymbol, GSymbol) = default;
  friend auto operator<=>(GSymbol, GSymbol) = default;
};

using Sentential = std::vector<GSymbol>;

struct Production {
  NonterminalId lhs = 0;
  Sentential rhs;
  friend bool operator==(const Production&, const Production&) = default;
};

struct Cfg {
  TagAlphabet tags;
  std::vector<std::string> nonterminals;
  std::vector<Production> productions;
  NonterminalId axiom = 0;

  NonterminalId add_nonterminal(const std::string& name) {
    if (auto id = find_nonterminal(name)) return *id;
    nonterminals.push_back(name);
    return static_cast<NonterminalId>(nonterminals.size() - 1);
  }
  std::optional<NonterminalId> find_nonterminal(const std::string& name) const {
    auto it = std::find(nonterminals.begin(), nonterminals.end(), name);
    if (it == nonterminals.end()) return std::nullopt;
    return static_cast<NonterminalId>(it - nonterminals.begin());
  }
  std::size_t size() const { return nonterminals.size(); }
};

inline bool is_nonterminal_name(std::string_view s) {
  return !s.empty() && s.front() >= 'A' && s.front() <= 'Z' && is_tag_name(s);
}

inline std::string format_sentential(const Sentential& s, const Cfg& g) {
  if (s.empty()) return "~e~";
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ' ';
    out += s[i].terminal ? letter_token(s[i].letter(), g.tags) : g.nonterminals[s[i].id];
  }
  return out;
}

inline std::string format_production(const Production& p, const Cfg& g) {
  return g.nonterminals[p.lhs] + " -> " + format_sentential(p.rhs, g);
}

inline std::string format_cfg(const Cfg& g) {
  std::ostringstream out;
  out << "axiom " << g.nonterminals[g.axiom] << '\n';
  for (NonterminalId x = 0; x < g.size(); ++x) {
    bool first = true;
    for (const auto& p : g.productions) {
      if (p.lhs != x) continue;
      out << (first ? g.nonterminals[x] + " -> " : " | ") << format_sentential(p.rhs, g);
      first = false;
    }
    if (!first) out << '\n';
  }
  return out.str();
}

inline Cfg parse_cfg(std::string_view text, TagAlphabet tags = {}, bool extend_tags = true) {
  Cfg g;
  g.tags = std::move(tags);
  std::optional<std::string> axiom_name;
  std::size_t axiom_line = 0;
  detail::for_each_line(text, [&](std::string_view raw, std::size_t line_no) {
    auto line = detail::trim(raw);
    if (line.empty() || line.front() == '#') return;
    std::istringstream in{std::string(line)};
    std::string head;
    in >> head;
    if (head == "axiom") {
      std::string name, extra;
      if (!(in >> name) || (in >> extra)) throw parse_error({line_no, 1}, "expected 'axiom <Nonterminal>'");
      if (!is_nonterminal_name(name)) throw parse_error({line_no, 7}, "axiom must be an uppercase-initial identifier");
      axiom_name = name;
      axiom_line = line_no;
      return;
    }
    if (!is_nonterminal_name(head)) throw parse_error({line_no, 1}, "expected a nonterminal or 'axiom', got '" + head + "'");
    std::string arrow;
    if (!(in >> arrow) || arrow != "->") throw parse_error({line_no, head.size() + 2}, "expected '->'");
    const NonterminalId lhs = g.add_nonterminal(head);
    Sentential rhs;
    bool pending = true;
    auto flush = [&] {
      if (!pending) throw parse_error({line_no, 1}, "empty alternative (write ~e~ for the empty word)");
      g.productions.push_back({lhs, rhs});
      rhs.clear();
    };
    bool saw_any = false;
    pending = false;
    std::string tok;
    while (in >> tok) {
      if (tok == "|") {
        flush();
        pending = false;
        continue;
      }
      pending = true;
      saw_any = true;
      if (tok == "~e~") continue;
      if (is_nonterminal_name(tok)) {
        rhs.push_back(GSymbol::var(g.add_nonterminal(tok)));
      } else {
        try {
          rhs.push_back(GSymbol::term(parse_letter(tok, g.tags, extend_tags)));
        } catch (const Error& e) {
          throw parse_error({line_no, 1}, e.message());
        }
      }
    }
    if (!saw_any) throw parse_error({line_no, 1}, "missing right-hand side");
    flush();
  });
  if (!axiom_name) throw parse_error({1, 1}, "missing 'axiom' line");
  auto ax = g.find_nonterminal(*axiom_name);
  if (!ax) throw parse_error({axiom_line, 7}, "axiom '" + *axiom_name + "' has no productions");
  g.axiom = *ax;
  return g;
}

/// Keeps productive and accessible nonterminals. Throws EmptyLanguage when the
/// axiom is unproductive.
inline Cfg reduce_grammar(const Cfg& g) {
  const std::size_t n = g.size();
  std::vector<char> productive(n, 0);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& p : g.productions) {
      if (productive[p.lhs]) continue;
      if (std::all_of(p.rhs.begin(), p.rhs.end(), [&](GSymbol s) { return s.terminal || productive[s.id]; })) {
        productive[p.lhs] = 1;
        changed = true;
      }
    }
  }
  if (!productive[g.axiom]) throw Error(ErrorCode::empty_language, "the axiom generates no terminal word");
  auto usable = [&](const Production& p) {
    return productive[p.lhs] &&
           std::all_of(p.rhs.begin(), p.rhs.end(), [&](GSymbol s) { return s.terminal || productive[s.id]; });
  };
  std::vector<char> accessible(n, 0);
  accessible[g.axiom] = 1;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& p : g.productions) {
      if (!accessible[p.lhs] || !usable(p)) continue;
      for (GSymbol s : p.rhs) {
        if (!s.terminal && !accessible[s.id]) {
          accessible[s.id] = 1;
          changed = true;
        }
      }
    }
  }
  Cfg out;
  out.tags = g.tags;
  std::vector<NonterminalId> remap(n, std::numeric_limits<NonterminalId>::max());
  for (NonterminalId x = 0; x < n; ++x)
    if (accessible[x]) remap[x] = out.add_nonterminal(g.nonterminals[x]);
  for (const auto& p : g.productions) {
    if (!accessible[p.lhs] || !usable(p)) continue;
    Production q{remap[p.lhs], {}};
    for (GSymbol s : p.rhs) q.rhs.push_back(s.terminal ? s : GSymbol::var(remap[s.id]));
    if (std::find(out.productions.begin(), out.productions.end(), q) == out.productions.end())
      out.productions.push_back(std::move(q));
  }
  out.axiom = remap[g.axiom];
  return out;
}

inline std::vector<char> nullable_nonterminals(const Cfg& g) {
  std::vector<char> nullable(g.size(), 0);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& p : g.productions) {
      if (nullable[p.lhs]) continue;
      if (std::all_of(p.rhs.begin(), p.rhs.end(), [&](GSymbol s) { return !s.terminal && nullable[s.id]; })) {
        nullable[p.lhs] = 1;
        changed = true;
      }
    }
  }
  return nullable;
}

/// For every nonterminal: a terminal word it derives with the fewest
/// derivation steps, and that step count. Unproductive nonterminals get
/// `unreachable` steps.
struct ShortestDerivations {
  static constexpr std::size_t unreachable = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> steps;
  std::vector<TaggedWord> words;

  TaggedWord expand(std::span<const GSymbol> s) const {
    TaggedWord out;
    for (GSymbol x : s) {
      if (x.terminal) out.push_back(x.letter());
      else out.insert(out.end(), words[x.id].begin(), words[x.id].end());
    }
    return out;
  }
};

inline ShortestDerivations shortest_derivations(const Cfg& g) {
  ShortestDerivations r;
  r.steps.assign(g.size(), ShortestDerivations::unreachable);
  r.words.assign(g.size(), {});
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& p : g.productions) {
      std::size_t cost = 1;
      bool ok = true;
      for (GSymbol s : p.rhs) {
        if (s.terminal) continue;
        if (r.steps[s.id] == ShortestDerivations::unreachable) {
          ok = false;
          break;
        }
        cost += r.steps[s.id];
      }
      if (ok && cost < r.steps[p.lhs]) {
        r.steps[p.lhs] = cost;
        r.words[p.lhs] = r.expand(p.rhs);
        changed = true;
      }
    }
  }
  return r;
}

/// Letters that can begin (or end) a nonempty word derived from each
/// nonterminal, each with a witness word.
struct EdgeLetters {
  std::vector<std::map<Letter, TaggedWord>> first;
  std::vector<std::map<Letter, TaggedWord>> last;
};

inline EdgeLetters edge_letters(const Cfg& g) {
  const auto nullable = nullable_nonterminals(g);
  const auto shortest = shortest_derivations(g);
  EdgeLetters r;
  r.first.assign(g.size(), {});
  r.last.assign(g.size(), {});
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& p : g.productions) {
      const auto& rhs = p.rhs;
      // first letters
      for (std::size_t i = 0; i < rhs.size(); ++i) {
        const auto rest = shortest.expand(std::span(rhs).subspan(i + 1));
        if (rhs[i].terminal) {
          TaggedWord w{rhs[i].letter()};
          w.insert(w.end(), rest.begin(), rest.end());
          changed |= r.first[p.lhs].emplace(rhs[i].letter(), w).second;
          break;
        }
        for (const auto& [l, w0] : std::map<Letter, TaggedWord>(r.first[rhs[i].id])) {
          TaggedWord w = w0;
          w.insert(w.end(), rest.begin(), rest.end());
          changed |= r.first[p.lhs].emplace(l, w).second;
        }
        if (!nullable[rhs[i].id]) break;
      }
      // last letters
      for (std::size_t i = rhs.size(); i-- > 0;) {
        const auto before = shortest.expand(std::span(rhs).subspan(0, i));
        if (rhs[i].terminal) {
          TaggedWord w = before;
          w.push_back(rhs[i].letter());
          changed |= r.last[p.lhs].emplace(rhs[i].letter(), w).second;
          break;
        }
        for (const auto& [l, w0] : std::map<Letter, TaggedWord>(r.last[rhs[i].id])) {
          TaggedWord w = before;
          w.insert(w.end(), w0.begin(), w0.end());
          changed |= r.last[p.lhs].emplace(l, w).second;
        }
        if (!nullable[rhs[i].id]) break;
      }
    }
  }
  return r;
}

/// Grammar for l⁻¹L (left) or L l⁻¹ (right). Nonterminal X keeps its role;
/// its quotient copy is named X' (left) or X^ (right).
inline Cfg quotient(const Cfg& g, Letter l, bool left) {
  const auto nullable = nullable_nonterminals(g);
  const std::size_t n = g.size();
  Cfg out;
  out.tags = g.tags;
  out.nonterminals = g.nonterminals;
  for (NonterminalId x = 0; x < n; ++x) out.nonterminals.push_back(g.nonterminals[x] + (left ? "'" : "^"));
  out.productions = g.productions;
  auto copy_of = [&](NonterminalId x) { return static_cast<NonterminalId>(x + n); };
  for (const auto& p : g.productions) {
    const auto& rhs = p.rhs;
    const std::size_t len = rhs.size();
    for (std::size_t k = 0; k < len; ++k) {
      const std::size_t i = left ? k : len - 1 - k;
      Sentential body;
      if (rhs[i].terminal) {
        if (rhs[i].letter() == l) {
          if (left) body.assign(rhs.begin() + static_cast<std::ptrdiff_t>(i + 1), rhs.end());
          else body.assign(rhs.begin(), rhs.begin() + static_cast<std::ptrdiff_t>(i));
          out.productions.push_back({copy_of(p.lhs), body});
        }
        break;
      }
      if (left) {
        body.push_back(GSymbol::var(copy_of(rhs[i].id)));
        body.insert(body.end(), rhs.begin() + static_cast<std::ptrdiff_t>(i + 1), rhs.end());
      } else {
        body.assign(rhs.begin(), rhs.begin() + static_cast<std::ptrdiff_t>(i));
        body.push_back(GSymbol::var(copy_of(rhs[i].id)));
      }
      out.productions.push_back({copy_of(p.lhs), body});
      if (!nullable[rhs[i].id]) break;
    }
  }
  out.axiom = copy_of(g.axiom);
  return out;
}

/// Language-preserving (up to ε) removal of ε-productions and unit
/// productions X → Y, followed by reduction. After this, X ⇒⁺ gXd implies gd ≠ ε.
inline Cfg remove_epsilon_and_units(const Cfg& g) {
  const auto nullable = nullable_nonterminals(g);
  std::set<std::pair<NonterminalId, Sentential>> seen;
  std::vector<Production> prods;
  auto add = [&](NonterminalId lhs, Sentential rhs) {
    if (rhs.empty()) return;
    if (seen.emplace(lhs, rhs).second) prods.push_back({lhs, std::move(rhs)});
  };
  for (const auto& p : g.productions) {
    std::vector<std::size_t> optional_pos;
    for (std::size_t i = 0; i < p.rhs.size(); ++i)
      if (!p.rhs[i].terminal && nullable[p.rhs[i].id]) optional_pos.push_back(i);
    if (optional_pos.size() > 16) throw Error(ErrorCode::budget_exceeded, "too many nullable symbols in one production");
    for (std::size_t mask = 0; mask < (std::size_t{1} << optional_pos.size()); ++mask) {
      Sentential rhs;
      std::size_t j = 0;
      for (std::size_t i = 0; i < p.rhs.size(); ++i) {
        if (j < optional_pos.size() && optional_pos[j] == i) {
          const bool drop = (mask >> j) & 1U;
          ++j;
          if (drop) continue;
        }
        rhs.push_back(p.rhs[i]);
      }
      add(p.lhs, std::move(rhs));
    }
  }
  // unit closure
  const std::size_t n = g.size();
  std::vector<std::vector<char>> unit(n, std::vector<char>(n, 0));
  for (NonterminalId x = 0; x < n; ++x) unit[x][x] = 1;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& p : prods) {
      if (p.rhs.size() != 1 || p.rhs[0].terminal) continue;
      for (NonterminalId x = 0; x < n; ++x) {
        if (unit[x][p.lhs] && !unit[x][p.rhs[0].id]) {
          unit[x][p.rhs[0].id] = 1;
          changed = true;
        }
      }
    }
  }
  Cfg out;
  out.tags = g.tags;
  out.nonterminals = g.nonterminals;
  out.axiom = g.axiom;
  std::set<std::pair<NonterminalId, Sentential>> emitted;
  for (NonterminalId x = 0; x < n; ++x)
    for (const auto& p : prods) {
      if (!unit[x][p.lhs]) continue;
      if (p.rhs.size() == 1 && !p.rhs[0].terminal) continue;
      if (emitted.emplace(x, p.rhs).second) out.productions.push_back({x, p.rhs});
    }
  return reduce_grammar(out);
}

}  // namespace dtdkit
