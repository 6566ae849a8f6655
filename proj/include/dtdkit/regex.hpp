#pragma once

// Regular expressions over an abstract symbol alphabet.
//
// Surface syntax: `|` union, juxtaposition or `,` concatenation, postfix
// `* + ?`, parentheses, `~e~` for the empty word and `{}` for the empty set.
// Symbols are identifiers (optionally `/`-prefixed) resolved by the caller.

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "dtdkit/automata.hpp"
#include "dtdkit/error.hpp"

namespace dtdkit {

enum class RegexKind { empty, epsilon, symbol, concat, alt, star, plus, optional };

struct RegexNode;
using Regex = std::shared_ptr<const RegexNode>;

struct RegexNode {
  RegexKind kind = RegexKind::empty;
  Symbol symbol = 0;
  std::vector<Regex> items;
};

inline bool same_regex(const Regex& x, const Regex& y) {
  if (x == y) return true;
  if (x->kind != y->kind || x->symbol != y->symbol || x->items.size() != y->items.size()) return false;
  for (std::size_t i = 0; i < x->items.size(); ++i)
    if (!same_regex(x->items[i], y->items[i])) return false;
  return true;
}

inline bool nullable(const Regex& r) {
  switch (r->kind) {
    case RegexKind::empty: return false;
    case RegexKind::epsilon: return true;
    case RegexKind::symbol: return false;
    case RegexKind::concat:
      for (const auto& i : r->items)
        if (!nullable(i)) return false;
      return true;
    case RegexKind::alt:
      for (const auto& i : r->items)
        if (nullable(i)) return true;
      return false;
    case RegexKind::star: return true;
    case RegexKind::plus: return nullable(r->items[0]);
    case RegexKind::optional: return true;
  }
  return false;
}

/// Simplifying constructors. Each preserves the denoted language.
namespace re {

inline Regex make(RegexKind k, std::vector<Regex> items = {}, Symbol s = 0) {
  auto n = std::make_shared<RegexNode>();
  n->kind = k;
  n->symbol = s;
  n->items = std::move(items);
  return n;
}

inline Regex empty() { return make(RegexKind::empty); }
inline Regex epsilon() { return make(RegexKind::epsilon); }
inline Regex symbol(Symbol s) { return make(RegexKind::symbol, {}, s); }

inline Regex star(const Regex& r) {
  switch (r->kind) {
    case RegexKind::empty:
    case RegexKind::epsilon: return epsilon();
    case RegexKind::star: return r;
    case RegexKind::plus:
    case RegexKind::optional: return star(r->items[0]);
    default: return make(RegexKind::star, {r});
  }
}

inline Regex plus(const Regex& r) {
  switch (r->kind) {
    case RegexKind::empty: return empty();
    case RegexKind::epsilon: return epsilon();
    case RegexKind::star:
    case RegexKind::plus: return r;
    case RegexKind::optional: return star(r->items[0]);
    default: return make(RegexKind::plus, {r});
  }
}

inline Regex optional(const Regex& r) {
  if (r->kind == RegexKind::empty || r->kind == RegexKind::epsilon) return epsilon();
  if (nullable(r)) return r;
  if (r->kind == RegexKind::plus) return star(r->items[0]);
  return make(RegexKind::optional, {r});
}

inline Regex concat(const Regex& x, const Regex& y) {
  if (x->kind == RegexKind::empty || y->kind == RegexKind::empty) return empty();
  if (x->kind == RegexKind::epsilon) return y;
  if (y->kind == RegexKind::epsilon) return x;
  std::vector<Regex> items;
  auto push = [&](const Regex& r) {
    // r r* → r+  and  r* r → r+
    if (!items.empty()) {
      const Regex& last = items.back();
      if (r->kind == RegexKind::star && same_regex(r->items[0], last)) {
        items.back() = plus(last);
        return;
      }
      if (last->kind == RegexKind::star && same_regex(last->items[0], r)) {
        items.back() = plus(r);
        return;
      }
    }
    items.push_back(r);
  };
  for (const auto& side : {x, y}) {
    if (side->kind == RegexKind::concat)
      for (const auto& i : side->items) push(i);
    else
      push(side);
  }
  if (items.size() == 1) return items[0];
  return make(RegexKind::concat, std::move(items));
}

inline Regex alt(const Regex& x, const Regex& y) {
  if (x->kind == RegexKind::empty) return y;
  if (y->kind == RegexKind::empty) return x;
  std::vector<Regex> items;
  bool has_epsilon = false;
  auto push = [&](const Regex& r) {
    if (r->kind == RegexKind::epsilon) {
      has_epsilon = true;
      return;
    }
    for (const auto& i : items)
      if (same_regex(i, r)) return;
    items.push_back(r);
  };
  for (const auto& side : {x, y}) {
    if (side->kind == RegexKind::alt)
      for (const auto& i : side->items) push(i);
    else if (side->kind == RegexKind::optional) {
      has_epsilon = true;
      push(side->items[0]);
    } else
      push(side);
  }
  Regex body;
  if (items.empty()) return epsilon();
  body = items.size() == 1 ? items[0] : make(RegexKind::alt, std::move(items));
  return has_epsilon ? optional(body) : body;
}

}  // namespace re

/// Resolves a symbol token (`a`, `/a`) to a symbol id; may throw.
using SymbolResolver = std::function<Symbol(std::string_view token)>;

struct RegexParseOptions {
  /// Accept `#PCDATA` as a token meaning the empty word (DTD mixed content).
  bool allow_pcdata = false;
  /// Accept `/name` tokens.
  bool allow_closing = false;
  /// Position of the first character, for diagnostics.
  SourcePos origin{};
};

namespace detail {

class RegexParser {
 public:
  RegexParser(std::string_view text, const SymbolResolver& resolve, const RegexParseOptions& opt)
      : text_(text), resolve_(resolve), opt_(opt) {}

  Regex parse() {
    skip_ws();
    if (at_end()) fail("expected a regular expression");
    Regex r = parse_alt();
    skip_ws();
    if (!at_end()) fail("unexpected '" + std::string(1, text_[pos_]) + "', expected '|', ',', operator or end");
    return r;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  void skip_ws() {
    while (!at_end() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' || text_[pos_] == '\r')) ++pos_;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    SourcePos p = opt_.origin;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++p.line;
        p.column = 1;
      } else {
        ++p.column;
      }
    }
    throw parse_error(p, msg);
  }
  static bool ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
  static bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9') || c == '_' || c == '-'; }

  bool starts_atom() const {
    if (at_end()) return false;
    const char c = text_[pos_];
    return ident_start(c) || c == '(' || c == '~' || c == '{' || (c == '/' && opt_.allow_closing) ||
           (c == '#' && opt_.allow_pcdata);
  }

  Regex parse_alt() {
    Regex r = parse_concat();
    for (;;) {
      skip_ws();
      if (at_end() || text_[pos_] != '|') return r;
      ++pos_;
      skip_ws();
      r = re::alt(r, parse_concat());
    }
  }

  Regex parse_concat() {
    skip_ws();
    if (!starts_atom()) fail("expected a symbol, '(', '~e~' or '{}'");
    Regex r = parse_postfix();
    for (;;) {
      skip_ws();
      if (!at_end() && text_[pos_] == ',') {
        ++pos_;
        skip_ws();
        if (!starts_atom()) fail("expected a symbol, '(', '~e~' or '{}' after ','");
        r = re::concat(r, parse_postfix());
      } else if (starts_atom()) {
        r = re::concat(r, parse_postfix());
      } else {
        return r;
      }
    }
  }

  Regex parse_postfix() {
    Regex r = parse_atom();
    for (;;) {
      const std::size_t save = pos_;
      skip_ws();
      if (at_end()) return r;
      const char c = text_[pos_];
      if (c == '*') r = re::star(r);
      else if (c == '+') r = re::plus(r);
      else if (c == '?') r = re::optional(r);
      else {
        pos_ = save;
        return r;
      }
      ++pos_;
    }
  }

  Regex parse_atom() {
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      skip_ws();
      Regex r = parse_alt();
      skip_ws();
      if (at_end() || text_[pos_] != ')') fail("expected ')'");
      ++pos_;
      return r;
    }
    if (text_.substr(pos_, 3) == "~e~") {
      pos_ += 3;
      return re::epsilon();
    }
    if (text_.substr(pos_, 2) == "{}") {
      pos_ += 2;
      return re::empty();
    }
    if (c == '#') {
      if (text_.substr(pos_, 7) != "#PCDATA") fail("expected '#PCDATA'");
      pos_ += 7;
      return re::epsilon();
    }
    const std::size_t start = pos_;
    if (c == '/') ++pos_;
    if (at_end() || !ident_start(text_[pos_])) fail("expected a symbol name");
    while (!at_end() && ident_char(text_[pos_])) ++pos_;
    const auto token = text_.substr(start, pos_ - start);
    try {
      return re::symbol(resolve_(token));
    } catch (const Error& e) {
      pos_ = start;
      fail(e.message());
    }
  }

  std::string_view text_;
  const SymbolResolver& resolve_;
  RegexParseOptions opt_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Regex parse_regex(std::string_view text, const SymbolResolver& resolve, const RegexParseOptions& opt = {}) {
  return detail::RegexParser(text, resolve, opt).parse();
}

/// Thompson construction.
inline Nfa compile(const Regex& r, std::size_t alphabet_size) {
  Nfa n(alphabet_size);
  auto build = [&](auto&& self, const Regex& x) -> std::pair<State, State> {
    const State s = n.add_state();
    const State f = n.add_state();
    switch (x->kind) {
      case RegexKind::empty: break;
      case RegexKind::epsilon: n.add_epsilon(s, f); break;
      case RegexKind::symbol: n.add_transition(s, x->symbol, f); break;
      case RegexKind::concat: {
        State cur = s;
        for (const auto& i : x->items) {
          auto [is, iff] = self(self, i);
          n.add_epsilon(cur, is);
          cur = iff;
        }
        n.add_epsilon(cur, f);
        break;
      }
      case RegexKind::alt:
        for (const auto& i : x->items) {
          auto [is, iff] = self(self, i);
          n.add_epsilon(s, is);
          n.add_epsilon(iff, f);
        }
        break;
      case RegexKind::star:
      case RegexKind::plus:
      case RegexKind::optional: {
        auto [is, iff] = self(self, x->items[0]);
        n.add_epsilon(s, is);
        n.add_epsilon(iff, f);
        if (x->kind != RegexKind::plus) n.add_epsilon(s, f);
        if (x->kind != RegexKind::optional) n.add_epsilon(iff, is);
        break;
      }
    }
    return {s, f};
  };
  auto [s, f] = build(build, r);
  n.add_initial(s);
  n.set_final(f, true);
  return n;
}

inline Dfa regex_to_dfa(const Regex& r, std::size_t alphabet_size) { return to_min_dfa(compile(r, alphabet_size)); }

/// Prints with minimal parentheses; concatenation is written with spaces.
inline std::string to_string(const Regex& r, const std::vector<std::string>& names) {
  auto prec = [](const Regex& x) {
    switch (x->kind) {
      case RegexKind::alt: return 0;
      case RegexKind::concat: return 1;
      case RegexKind::star:
      case RegexKind::plus:
      case RegexKind::optional: return 2;
      default: return 3;
    }
  };
  auto go = [&](auto&& self, const Regex& x) -> std::string {
    auto wrap = [&](const Regex& child, int min_prec) {
      auto s = self(self, child);
      return prec(child) < min_prec ? "(" + s + ")" : s;
    };
    switch (x->kind) {
      case RegexKind::empty: return "{}";
      case RegexKind::epsilon: return "~e~";
      case RegexKind::symbol: return names.at(x->symbol);
      case RegexKind::concat: {
        std::string out;
        for (std::size_t i = 0; i < x->items.size(); ++i) out += (i ? " " : "") + wrap(x->items[i], 2);
        return out;
      }
      case RegexKind::alt: {
        std::string out;
        for (std::size_t i = 0; i < x->items.size(); ++i) out += (i ? "|" : "") + wrap(x->items[i], 1);
        return out;
      }
      case RegexKind::star: return wrap(x->items[0], 3) + "*";
      case RegexKind::plus: return wrap(x->items[0], 3) + "+";
      case RegexKind::optional: return wrap(x->items[0], 3) + "?";
    }
    return {};
  };
  return go(go, r);
}

/// State elimination on the trimmed minimal automaton.
inline Regex dfa_to_regex(const Dfa& input) {
  const Dfa d = trim(minimize(input));
  if (is_empty(d)) return re::empty();
  const std::size_t n = d.state_count();
  // GNFA: states 0..n-1, start = n, end = n+1.
  const std::size_t total = n + 2;
  std::vector<std::vector<Regex>> edge(total, std::vector<Regex>(total, re::empty()));
  for (State p = 0; p < n; ++p) {
    for (Symbol s = 0; s < d.alphabet_size(); ++s)
      if (State q = d.next(p, s); q != no_state) edge[p][q] = re::alt(edge[p][q], re::symbol(s));
    if (d.is_final(p)) edge[p][n + 1] = re::epsilon();
  }
  edge[n][d.initial()] = re::epsilon();
  std::vector<char> alive(total, 1);
  for (std::size_t k = n; k-- > 0;) {
    const Regex loop = re::star(edge[k][k]);
    alive[k] = 0;
    for (std::size_t i = 0; i < total; ++i) {
      if (!alive[i] || edge[i][k]->kind == RegexKind::empty) continue;
      for (std::size_t j = 0; j < total; ++j) {
        if (!alive[j] || edge[k][j]->kind == RegexKind::empty) continue;
        edge[i][j] = re::alt(edge[i][j], re::concat(re::concat(edge[i][k], loop), edge[k][j]));
      }
    }
  }
  return edge[n][n + 1];
}

}  // namespace dtdkit
