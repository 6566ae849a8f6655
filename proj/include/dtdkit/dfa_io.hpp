#pragma once

// DFAs over T = A ∪ Ā and their text format:
//
//   alphabet: a /a b /b
//   states: 4
//   initial: 0
//   final: 3
//   0 a 1
//   1 b 2
//   ...
//
// Symbols use the tag token notation; `#` starts a comment line.

#include <sstream>
#include <string>
#include <string_view>

#include "dtdkit/automata.hpp"
#include "dtdkit/dyck.hpp"

namespace dtdkit {

/// A DFA whose symbols are letter codes over `tags` (alphabet size 2·|A|).
struct TaggedDfa {
  TagAlphabet tags;
  Dfa dfa;
};

inline Word to_symbols(std::span<const Letter> w) {
  Word out;
  out.reserve(w.size());
  for (Letter l : w) out.push_back(l.code());
  return out;
}

inline TaggedWord to_letters(std::span<const Symbol> w) {
  TaggedWord out;
  out.reserve(w.size());
  for (Symbol s : w) out.push_back(Letter::from_code(s));
  return out;
}

/// Re-expresses `d` over a larger tag alphabet `target` that contains every tag of `from`.
inline Dfa widen_letters(const Dfa& d, const TagAlphabet& from, const TagAlphabet& target) {
  std::vector<Symbol> mapping(from.letter_count());
  for (TagId t = 0; t < from.size(); ++t) {
    const TagId u = target.at(from.name(t));
    mapping[2 * t] = 2 * u;
    mapping[2 * t + 1] = 2 * u + 1;
  }
  return remap_symbols(d, target.letter_count(), mapping);
}

inline TaggedDfa parse_dfa(std::string_view text, TagAlphabet tags = {}) {
  std::size_t states = 0;
  bool have_alphabet = false, have_states = false, have_initial = false;
  State initial = 0;
  std::vector<State> finals;
  struct Edge {
    State from;
    Letter letter;
    State to;
    std::size_t line;
  };
  std::vector<Edge> edges;

  auto header = [](std::string_view line, std::string_view key) -> std::optional<std::string_view> {
    if (line.substr(0, key.size()) != key) return std::nullopt;
    return line.substr(key.size());
  };
  auto parse_state = [&](const std::string& tok, std::size_t line_no) -> State {
    try {
      std::size_t used = 0;
      const unsigned long v = std::stoul(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      return static_cast<State>(v);
    } catch (const std::exception&) {
      throw parse_error({line_no, 1}, "expected a state number, got '" + tok + "'");
    }
  };

  detail::for_each_line(text, [&](std::string_view raw, std::size_t line_no) {
    auto line = detail::trim(raw);
    if (line.empty() || line.front() == '#') return;
    if (auto rest = header(line, "alphabet:")) {
      std::istringstream in{std::string(*rest)};
      std::string tok;
      while (in >> tok) {
        try {
          parse_letter(tok, tags, true);
        } catch (const Error& e) {
          throw parse_error({line_no, 1}, e.message());
        }
      }
      have_alphabet = true;
    } else if (auto rest2 = header(line, "states:")) {
      std::istringstream in{std::string(*rest2)};
      std::string tok;
      if (!(in >> tok)) throw parse_error({line_no, 1}, "expected the number of states");
      states = parse_state(tok, line_no);
      have_states = true;
    } else if (auto rest3 = header(line, "initial:")) {
      std::istringstream in{std::string(*rest3)};
      std::string tok;
      if (!(in >> tok)) throw parse_error({line_no, 1}, "expected the initial state");
      initial = parse_state(tok, line_no);
      have_initial = true;
    } else if (auto rest4 = header(line, "final:")) {
      std::istringstream in{std::string(*rest4)};
      std::string tok;
      while (in >> tok) finals.push_back(parse_state(tok, line_no));
    } else {
      if (!have_alphabet) throw parse_error({line_no, 1}, "transition before 'alphabet:' line");
      std::istringstream in{std::string(line)};
      std::string a, sym, b, extra;
      if (!(in >> a >> sym >> b) || (in >> extra))
        throw parse_error({line_no, 1}, "expected 'from symbol to'");
      Letter l;
      try {
        l = parse_letter(sym, tags, false);
      } catch (const Error& e) {
        throw parse_error({line_no, 1}, std::string("symbol not in alphabet: ") + e.message());
      }
      edges.push_back({parse_state(a, line_no), l, parse_state(b, line_no), line_no});
    }
  });
  if (!have_alphabet) throw parse_error({1, 1}, "missing 'alphabet:' line");
  if (!have_states || states == 0) throw parse_error({1, 1}, "missing or zero 'states:' line");
  if (!have_initial) throw parse_error({1, 1}, "missing 'initial:' line");
  if (initial >= states) throw parse_error({1, 1}, "initial state out of range");

  Dfa d(tags.letter_count());
  for (std::size_t i = 1; i < states; ++i) d.add_state(false);
  d.set_initial(initial);
  for (State f : finals) {
    if (f >= states) throw parse_error({1, 1}, "final state " + std::to_string(f) + " out of range");
    d.set_final(f, true);
  }
  for (const auto& e : edges) {
    if (e.from >= states || e.to >= states) throw parse_error({e.line, 1}, "state out of range");
    const State old = d.next(e.from, e.letter.code());
    if (old != no_state && old != e.to) throw parse_error({e.line, 1}, "nondeterministic transition");
    d.set_transition(e.from, e.letter.code(), e.to);
  }
  return {std::move(tags), std::move(d)};
}

inline std::string format_dfa(const TaggedDfa& t) {
  std::ostringstream out;
  const Dfa& d = t.dfa;
  out << "alphabet:";
  for (const auto& n : letter_names(t.tags)) out << ' ' << n;
  out << "\nstates: " << d.state_count() << "\ninitial: " << d.initial() << "\nfinal:";
  for (State p = 0; p < d.state_count(); ++p)
    if (d.is_final(p)) out << ' ' << p;
  out << '\n';
  for (State p = 0; p < d.state_count(); ++p)
    for (Symbol s = 0; s < d.alphabet_size(); ++s)
      if (State q = d.next(p, s); q != no_state) out << p << ' ' << letter_token(Letter::from_code(s), t.tags) << ' ' << q << '\n';
  return out.str();
}

}  // namespace dtdkit
