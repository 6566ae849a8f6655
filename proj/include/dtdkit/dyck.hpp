#pragma once

// Tag alphabets, words over opening/closing tags, and the Dyck toolkit:
// reduction, prime recognition and factorization, traces, weights.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dtdkit/error.hpp"

namespace dtdkit {

using TagId = std::uint32_t;

inline bool is_tag_name(std::string_view name) {
  if (name.empty()) return false;
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(name.front())) return false;
  return std::all_of(name.begin() + 1, name.end(),
                     [&](char c) { return alpha(c) || digit(c) || c == '_' || c == '-'; });
}

/// Ordered set of opening tags A. The closing tags are implied.
class TagAlphabet {
 public:
  TagAlphabet() = default;
  explicit TagAlphabet(const std::vector<std::string>& names) {
    for (const auto& n : names) add(n);
  }

  /// Returns the id of `name`, adding it when new.
  TagId add(std::string_view name) {
    if (auto id = find(name)) return *id;
    if (!is_tag_name(name)) throw Error(ErrorCode::parse_error, "invalid tag name '" + std::string(name) + "'");
    const auto id = static_cast<TagId>(names_.size());
    names_.emplace_back(name);
    index_.emplace(std::string(name), id);
    return id;
  }

  std::optional<TagId> find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  TagId at(std::string_view name) const {
    if (auto id = find(name)) return *id;
    throw Error(ErrorCode::alphabet_mismatch, "unknown tag '" + std::string(name) + "'");
  }

  const std::string& name(TagId id) const { return names_.at(id); }
  std::size_t size() const noexcept { return names_.size(); }
  /// Size of T = A ∪ Ā.
  std::size_t letter_count() const noexcept { return 2 * names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  friend bool operator==(const TagAlphabet& x, const TagAlphabet& y) { return x.names_ == y.names_; }

 private:
  std::vector<std::string> names_;
  std::map<std::string, TagId, std::less<>> index_;
};

/// A letter of T: an opening tag `a` or a closing tag `/a`.
struct Letter {
  TagId tag = 0;
  bool close = false;

  static constexpr Letter open_of(TagId t) { return {t, false}; }
  static constexpr Letter close_of(TagId t) { return {t, true}; }
  static constexpr Letter from_code(std::uint32_t code) { return {code / 2, (code % 2) == 1}; }

  /// Dense symbol code: 2·tag for `a`, 2·tag+1 for `/a`. Used as automaton symbol.
  constexpr std::uint32_t code() const { return 2 * tag + (close ? 1U : 0U); }

  friend constexpr bool operator==(Letter, Letter) = default;
  friend constexpr auto operator<=>(Letter x, Letter y) { return x.code() <=> y.code(); }
};

using TaggedWord = std::vector<Letter>;

inline std::string letter_token(Letter l, const TagAlphabet& tags) {
  return (l.close ? "/" : "") + tags.name(l.tag);
}

/// Names of the symbols of T in code order: a, /a, b, /b, ...
inline std::vector<std::string> letter_names(const TagAlphabet& tags) {
  std::vector<std::string> out;
  out.reserve(tags.letter_count());
  for (TagId t = 0; t < tags.size(); ++t) {
    out.push_back(tags.name(t));
    out.push_back("/" + tags.name(t));
  }
  return out;
}

inline std::string format_word(std::span<const Letter> w, const TagAlphabet& tags) {
  if (w.empty()) return "~e~";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += letter_token(w[i], tags);
  }
  return out;
}

/// Parses a single token `a` or `/a`. New tags are added when `extend` is set.
inline Letter parse_letter(std::string_view token, TagAlphabet& tags, bool extend) {
  const bool close = !token.empty() && token.front() == '/';
  const auto name = close ? token.substr(1) : token;
  if (!is_tag_name(name)) throw Error(ErrorCode::parse_error, "invalid tag token '" + std::string(token) + "'");
  TagId id = extend ? tags.add(name) : tags.at(name);
  return {id, close};
}

/// Parses whitespace-separated tag tokens. `~e~` stands for the empty word.
inline TaggedWord parse_word(std::string_view text, TagAlphabet& tags, bool extend = true) {
  TaggedWord out;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) {
    if (token == "~e~") continue;
    out.push_back(parse_letter(token, tags, extend));
  }
  return out;
}

inline TaggedWord parse_word(std::string_view text, const TagAlphabet& tags) {
  TagAlphabet copy = tags;
  return parse_word(text, copy, false);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <class F>
void for_each_line(std::string_view text, F&& f) {
  std::size_t line_no = 1;
  while (!text.empty()) {
    auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    f(line, line_no);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
    ++line_no;
  }
}

}  // namespace detail

/// Word file: one word per non-blank line, `#` starts a comment line.
inline std::vector<TaggedWord> parse_word_file(std::string_view text, TagAlphabet& tags, bool extend = true) {
  std::vector<TaggedWord> words;
  detail::for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    const auto body = detail::trim(line);
    if (body.empty() || body.front() == '#') return;
    TaggedWord w;
    std::size_t i = 0;
    while (i < line.size()) {
      if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
      const auto token = line.substr(i, j - i);
      if (token != "~e~") {
        try {
          w.push_back(parse_letter(token, tags, extend));
        } catch (const Error& e) {
          throw Error(e.code(), std::to_string(line_no) + ":" + std::to_string(i + 1) + ": " + e.message());
        }
      }
      i = j;
    }
    words.push_back(std::move(w));
  });
  return words;
}

/// A document file holds one word that may span several lines.
inline TaggedWord parse_document(std::string_view text, TagAlphabet& tags, bool extend = true) {
  TaggedWord out;
  for (auto& w : parse_word_file(text, tags, extend)) out.insert(out.end(), w.begin(), w.end());
  return out;
}

/// Irreducible form ρ(w) under the rules a ā → ε.
struct ReducedWord {
  TaggedWord letters;
  /// True when ρ(w) ∈ Ā*A*, i.e. w is a factor of some Dyck prime.
  bool canonical = true;

  /// Leading run of closing tags (x̄ in the x̄y shape).
  std::span<const Letter> closers() const {
    auto it = std::find_if(letters.begin(), letters.end(), [](Letter l) { return !l.close; });
    return {letters.data(), static_cast<std::size_t>(it - letters.begin())};
  }
  /// Trailing part after the closers (y in the x̄y shape when canonical).
  std::span<const Letter> openers() const {
    auto n = closers().size();
    return {letters.data() + n, letters.size() - n};
  }
  bool empty() const { return letters.empty(); }

  friend bool operator==(const ReducedWord&, const ReducedWord&) = default;
};

inline bool is_canonical_shape(std::span<const Letter> w) {
  bool seen_open = false;
  for (Letter l : w) {
    if (!l.close) seen_open = true;
    else if (seen_open) return false;
  }
  return true;
}

/// Appends `l` to an irreducible word, keeping it irreducible.
inline void push_reduced(TaggedWord& stack, Letter l) {
  if (l.close && !stack.empty() && !stack.back().close && stack.back().tag == l.tag)
    stack.pop_back();
  else
    stack.push_back(l);
}

inline ReducedWord dyck_reduce(std::span<const Letter> w) {
  ReducedWord r;
  for (Letter l : w) push_reduced(r.letters, l);
  r.canonical = is_canonical_shape(r.letters);
  return r;
}

/// ρ(uv) for irreducible u, v.
inline TaggedWord reduce_concat(std::span<const Letter> u, std::span<const Letter> v) {
  TaggedWord out(u.begin(), u.end());
  for (Letter l : v) push_reduced(out, l);
  return out;
}

/// True iff w ∈ D* (ρ(w) = ε).
inline bool is_dyck_word(std::span<const Letter> w) { return dyck_reduce(w).empty(); }

/// True iff w is a Dyck prime, starting with `root` when given.
inline bool is_dyck_prime(std::span<const Letter> w, std::optional<TagId> root = std::nullopt) {
  if (w.empty() || w.front().close) return false;
  if (root && w.front().tag != *root) return false;
  std::vector<TagId> stack;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Letter l = w[i];
    if (!l.close) {
      stack.push_back(l.tag);
    } else {
      if (stack.empty() || stack.back() != l.tag) return false;
      stack.pop_back();
      if (stack.empty() && i + 1 != w.size()) return false;
    }
  }
  return stack.empty();
}

/// Unique factorization of w ∈ D* into primes.
inline std::vector<TaggedWord> factor_primes(std::span<const Letter> w) {
  std::vector<TaggedWord> out;
  std::vector<TagId> stack;
  std::size_t start = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Letter l = w[i];
    if (!l.close) {
      stack.push_back(l.tag);
    } else {
      if (stack.empty() || stack.back() != l.tag)
        throw Error(ErrorCode::not_well_formed, "unmatched closing tag at position " + std::to_string(i + 1));
      stack.pop_back();
      if (stack.empty()) {
        out.emplace_back(w.begin() + static_cast<std::ptrdiff_t>(start), w.begin() + static_cast<std::ptrdiff_t>(i + 1));
        start = i + 1;
      }
    }
  }
  if (!stack.empty()) throw Error(ErrorCode::not_well_formed, "unclosed tag at end of word");
  return out;
}

/// Root tags of the children of a prime.
inline std::vector<TagId> trace(std::span<const Letter> w) {
  if (!is_dyck_prime(w)) throw Error(ErrorCode::not_prime, "trace requires a Dyck prime");
  std::vector<TagId> out;
  int depth = 0;
  for (std::size_t i = 1; i + 1 < w.size(); ++i) {
    if (!w[i].close) {
      if (depth == 0) out.push_back(w[i].tag);
      ++depth;
    } else {
      --depth;
    }
  }
  return out;
}

struct WeightHeight {
  long weight = 0;
  long height = 0;
  friend bool operator==(const WeightHeight&, const WeightHeight&) = default;
};

/// weight = |w|_A − |w|_Ā; height = max prefix weight (the empty prefix counts).
inline WeightHeight weight_and_height(std::span<const Letter> w) {
  WeightHeight r;
  for (Letter l : w) {
    r.weight += l.close ? -1 : 1;
    r.height = std::max(r.height, r.weight);
  }
  return r;
}

/// Well-formed factors of w: every prime factor w[i..j] delimited by a matching pair.
inline std::vector<TaggedWord> well_formed_factors(std::span<const Letter> w) {
  std::vector<TaggedWord> out;
  std::vector<std::size_t> open;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!w[i].close) {
      open.push_back(i);
    } else if (!open.empty() && !w[open.back()].close && w[open.back()].tag == w[i].tag) {
      const auto s = open.back();
      open.pop_back();
      out.emplace_back(w.begin() + static_cast<std::ptrdiff_t>(s), w.begin() + static_cast<std::ptrdiff_t>(i + 1));
    } else {
      open.clear();
    }
  }
  return out;
}

}  // namespace dtdkit
