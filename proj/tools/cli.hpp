#pragma once

// The dtdkit command line. `run` is kept apart from main so tests can drive it
// with in-memory streams.
//
// Exit codes: 0 affirmative answer or successful construction, 1 negative
// answer, 2 input error.

#include <algorithm>
#include <chrono>
#include <deque>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dtdkit/dtdkit.hpp"

namespace dtdkit::cli {

using Json = nlohmann::ordered_json;

enum class Kind { words, cfg, balanced, xml, dtd, dfa };

inline const char* to_string(Kind k) {
  switch (k) {
    case Kind::words: return "word file";
    case Kind::cfg: return "context-free grammar";
    case Kind::balanced: return "balanced grammar";
    case Kind::xml: return "XML-grammar";
    case Kind::dtd: return "DTD";
    case Kind::dfa: return "DFA";
  }
  return "?";
}

struct Options {
  bool json = false;
  std::size_t max_len = 10;
  std::string alphabet;
  std::string format;
  std::string tag;
  std::string proof = "complement";
  std::string word;
  std::vector<std::string> files;
};

/// A failure of the command line itself (unreadable file, wrong input kind).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Input {
  std::string name;
  std::string text;
  Kind kind = Kind::words;
};

struct Report {
  Json result;
  Json witness;  // null unless set
  std::vector<std::string> lines;
  int exit = 0;
};

namespace detail {

inline std::optional<Kind> kind_from_name(std::string_view s) {
  static const std::map<std::string, Kind, std::less<>> names{
      {"w", Kind::words},       {"words", Kind::words}, {"txt", Kind::words}, {"cfg", Kind::cfg},
      {"bg", Kind::balanced},   {"xg", Kind::xml},      {"dtd", Kind::dtd},   {"dfa", Kind::dfa}};
  auto it = names.find(s);
  if (it == names.end()) return std::nullopt;
  return it->second;
}

inline Kind sniff(std::string_view text) {
  if (text.find("<!") != std::string_view::npos) return Kind::dtd;
  std::optional<Kind> found;
  dtdkit::detail::for_each_line(text, [&](std::string_view raw, std::size_t) {
    if (found) return;
    const auto line = dtdkit::detail::trim(raw);
    if (line.empty() || line.front() == '#') return;
    if (line.substr(0, 9) == "alphabet:" || line.substr(0, 7) == "states:") {
      found = Kind::dfa;
      return;
    }
    const auto arrow = line.find("->");
    if (arrow == std::string_view::npos) return;
    const auto lhs = dtdkit::detail::trim(line.substr(0, arrow));
    found = is_nonterminal_name(lhs) ? Kind::cfg : Kind::xml;
  });
  return found.value_or(Kind::words);
}

inline std::string read_all(std::istream& in) {
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline Input load(const std::string& name, const Options& opt) {
  Input in;
  in.name = name;
  if (name == "-") {
    in.name = "<stdin>";
    in.text = read_all(std::cin);
  } else {
    std::ifstream f(name, std::ios::binary);
    if (!f) throw UsageError(name + ": cannot open file");
    in.text = read_all(f);
  }
  if (!opt.format.empty()) {
    auto k = kind_from_name(opt.format);
    if (!k) throw UsageError("unknown --format '" + opt.format + "'");
    in.kind = *k;
    return in;
  }
  const auto ext = std::filesystem::path(name).extension().string();
  if (auto k = ext.empty() ? std::nullopt : kind_from_name(ext.substr(1))) {
    in.kind = *k;
  } else {
    in.kind = sniff(in.text);
  }
  return in;
}

/// Re-raises library errors with the input name in front.
template <class F>
auto with_name(const Input& in, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    const auto& m = e.message();
    const bool positioned = !m.empty() && std::isdigit(static_cast<unsigned char>(m.front()));
    throw Error(e.code(), in.name + (positioned ? ":" : ": ") + m);
  }
}

inline TagAlphabet base_alphabet(const Options& opt) {
  TagAlphabet tags;
  std::stringstream s(opt.alphabet);
  std::string name;
  while (std::getline(s, name, ',')) {
    const auto t = dtdkit::detail::trim(name);
    if (!t.empty()) tags.add(t);
  }
  return tags;
}

inline void check_alphabet(const TagAlphabet& got, const TagAlphabet& base) {
  if (base.size() == 0) return;
  for (const auto& n : got.names())
    if (!base.find(n)) throw Error(ErrorCode::alphabet_mismatch, "tag '" + n + "' is not in --alphabet");
}

[[noreturn]] inline void wrong_kind(const Input& in, const char* wanted) {
  throw UsageError(in.name + ": expected " + std::string(wanted) + ", got " + to_string(in.kind));
}

struct Words {
  TagAlphabet tags;
  std::vector<TaggedWord> words;
};

/// The --word argument, with diagnostics positioned like a one-line file.
inline TaggedWord inline_word(const std::string& text, TagAlphabet& tags, bool extend) {
  try {
    return parse_document(text, tags, extend);
  } catch (const Error& e) {
    throw Error(e.code(), "--word:" + e.message());
  }
}

inline Words load_words(const Options& opt, const Input* in, TagAlphabet tags) {
  Words w;
  const bool extend = opt.alphabet.empty();
  if (!opt.word.empty() && !in) {
    w.words.push_back(inline_word(opt.word, tags, extend));
  } else {
    if (in->kind != Kind::words) wrong_kind(*in, "a word file");
    w.words = with_name(*in, [&] { return parse_word_file(in->text, tags, extend); });
  }
  if (w.words.empty()) w.words.emplace_back();
  w.tags = std::move(tags);
  return w;
}

inline XmlGrammar load_xml(const Options& opt, const Input& in) {
  const auto base = base_alphabet(opt);
  return with_name(in, [&] {
    XmlGrammar g;
    if (in.kind == Kind::xml) g = parse_xml_grammar(in.text);
    else if (in.kind == Kind::dtd) g = parse_dtd(in.text);
    else wrong_kind(in, "an XML-grammar or a DTD");
    check_alphabet(g.tags, base);
    return base.size() ? widen(g, base) : g;
  });
}

inline Cfg load_cfg(const Options& opt, const Input& in) {
  if (in.kind != Kind::cfg && in.kind != Kind::balanced) wrong_kind(in, "a context-free grammar");
  const auto base = base_alphabet(opt);
  return with_name(in, [&] { return parse_cfg(in.text, base, base.size() == 0); });
}

inline BalancedGrammar load_balanced(const Options& opt, const Input& in) {
  const auto g = load_cfg(opt, in);
  return with_name(in, [&] { return from_cfg(g); });
}

inline TaggedDfa load_dfa(const Options& opt, const Input& in) {
  if (in.kind != Kind::dfa) wrong_kind(in, "a DFA");
  const auto base = base_alphabet(opt);
  return with_name(in, [&] {
    auto k = parse_dfa(in.text);
    check_alphabet(k.tags, base);
    if (base.size()) {
      TagAlphabet target = base;
      k = {target, widen_letters(k.dfa, k.tags, target)};
    }
    return k;
  });
}

inline std::string tag_list(std::span<const TagId> ts, const TagAlphabet& tags) {
  if (ts.empty()) return "~e~";
  std::string out;
  for (auto t : ts) {
    if (!out.empty()) out += ' ';
    out += tags.name(t);
  }
  return out;
}

inline std::string tag_list(std::span<const Symbol> ts, const TagAlphabet& tags, int) {
  std::vector<TagId> v(ts.begin(), ts.end());
  return tag_list(v, tags);
}

inline std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream s(text);
  std::string line;
  while (std::getline(s, line)) out.push_back(line);
  return out;
}

inline void verdict(Report& r, bool holds, const std::optional<std::string>& witness = std::nullopt) {
  r.result = holds;
  r.exit = holds ? 0 : 1;
  r.lines.push_back(holds ? "true" : "false");
  if (witness) {
    r.witness = *witness;
    r.lines.push_back("witness: " + *witness);
  }
}

inline void grammar_output(Report& r, const std::string& text) {
  r.result = text;
  for (auto& l : split_lines(text)) r.lines.push_back(l);
}

inline void empty_output(Report& r) {
  r.result = "empty";
  r.exit = 1;
  r.lines.push_back("empty language");
}

/// Per-word results: scalar JSON for one word, arrays for several.
struct PerWord {
  Json result = Json::array();
  Json witness = Json::array();
  std::vector<std::string> lines;
  bool all_ok = true;

  void add(Json res, Json wit, std::string line, bool ok) {
    result.push_back(std::move(res));
    witness.push_back(std::move(wit));
    lines.push_back(std::move(line));
    all_ok = all_ok && ok;
  }

  void finish(Report& r, const Words& w) {
    r.exit = all_ok ? 0 : 1;
    if (w.words.size() == 1) {
      r.result = result[0];
      r.witness = witness[0];
      r.lines.push_back(lines[0]);
      return;
    }
    r.result = result;
    r.witness = witness;
    for (std::size_t i = 0; i < lines.size(); ++i) r.lines.push_back(format_word(w.words[i], w.tags) + ": " + lines[i]);
  }
};

inline void print_surfaces(Report& r, const SurfaceFamily& s) {
  r.result = Json::object();
  for (TagId a = 0; a < s.tags.size(); ++a) {
    const auto re = content_to_string(s.surface[a], s.tags);
    r.result[s.tags.name(a)] = re;
    r.lines.push_back("S_" + s.tags.name(a) + " = " + re);
  }
}

inline bool letters_within(std::span<const Letter> w, std::size_t n) {
  return std::all_of(w.begin(), w.end(), [&](Letter l) { return l.tag < n; });
}

inline std::optional<TagId> requested_tag(const Options& opt, const TagAlphabet& tags) {
  if (opt.tag.empty()) return std::nullopt;
  if (auto t = tags.find(opt.tag)) return t;
  throw Error(ErrorCode::alphabet_mismatch, "--tag '" + opt.tag + "' is not in the alphabet");
}

}  // namespace detail

class Runner {
 public:
  Runner(const Options& opt) : opt_(opt) {}

  Report dispatch(const std::string& cmd) {
    if (cmd == "reduce") return reduce();
    if (cmd == "prime") return prime();
    if (cmd == "trace") return trace_cmd();
    if (cmd == "is-dyck") return is_dyck();
    if (cmd == "is-dyck-prime") return is_dyck_prime_cmd();
    if (cmd == "surfaces") return surfaces_cmd();
    if (cmd == "standard") return standard();
    if (cmd == "member") return member_cmd();
    if (cmd == "include") return include();
    if (cmd == "equal") return equal();
    if (cmd == "intersect") return intersect_cmd();
    if (cmd == "finite-surfaces") return finite_surfaces();
    if (cmd == "is-xml-balanced") return xml_balanced();
    if (cmd == "surfaces-regular") return surfaces_regular();
    if (cmd == "is-xml-regular") return xml_regular();
    if (cmd == "height") return height();
    if (cmd == "is-sequential") return sequential();
    if (cmd == "to-regular") return to_regular_cmd();
    if (cmd == "parse-dtd") return parse_dtd_cmd();
    if (cmd == "enumerate") return enumerate_cmd();
    throw UsageError("unknown command '" + cmd + "'");
  }

 private:
  const Input& input(std::size_t i) {
    while (inputs_.size() <= i) {
      if (inputs_.size() >= opt_.files.size())
        throw UsageError("missing input file #" + std::to_string(inputs_.size() + 1));
      inputs_.push_back(detail::load(opt_.files[inputs_.size()], opt_));
    }
    return inputs_[i];
  }

  /// Word input: --word, or the first file.
  detail::Words words() {
    if (!opt_.word.empty() && opt_.files.empty()) return detail::load_words(opt_, nullptr, detail::base_alphabet(opt_));
    return detail::load_words(opt_, &input(0), detail::base_alphabet(opt_));
  }

  bool word_input() { return (!opt_.word.empty() && opt_.files.empty()) || input(0).kind == Kind::words; }

  Report reduce() {
    Report r;
    if (word_input()) {
      const auto w = words();
      detail::PerWord pw;
      for (const auto& x : w.words) {
        const auto red = dyck_reduce(x);
        const auto s = format_word(red.letters, w.tags);
        pw.add(s, red.canonical ? Json() : Json(s), red.canonical ? s : s + "  not-dyck-factor", red.canonical);
      }
      pw.finish(r, w);
      return r;
    }
    const auto& in = input(0);
    try {
      switch (in.kind) {
        case Kind::cfg:
        case Kind::balanced:
          detail::grammar_output(r, format_cfg(reduce_grammar(detail::load_cfg(opt_, in))));
          break;
        case Kind::xml:
        case Kind::dtd:
          detail::grammar_output(r, format_xml_grammar(dtdkit::reduce(detail::load_xml(opt_, in))));
          break;
        default: {
          auto k = detail::load_dfa(opt_, in);
          k.dfa = trim(minimize(k.dfa));
          if (dtdkit::is_empty(k.dfa)) throw Error(ErrorCode::empty_language, "empty language");
          detail::grammar_output(r, format_dfa(k));
        }
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::empty_language) throw;
      r = {};
      detail::empty_output(r);
    }
    return r;
  }

  Report prime() {
    Report r;
    const auto w = words();
    detail::PerWord pw;
    for (const auto& x : w.words) {
      if (!is_dyck_word(x)) {
        const auto red = format_word(dyck_reduce(x).letters, w.tags);
        pw.add(false, red, "not-well-formed (reduces to " + red + ")", false);
        continue;
      }
      Json list = Json::array();
      std::string line;
      for (const auto& p : factor_primes(x)) {
        list.push_back(format_word(p, w.tags));
        line += (line.empty() ? "" : " | ") + format_word(p, w.tags);
      }
      pw.add(list, Json(), line.empty() ? "~e~" : line, true);
    }
    pw.finish(r, w);
    return r;
  }

  Report trace_cmd() {
    Report r;
    const auto w = words();
    detail::PerWord pw;
    for (const auto& x : w.words) {
      if (!dtdkit::is_dyck_prime(x)) {
        pw.add(false, Json(), "not-prime", false);
        continue;
      }
      const auto t = detail::tag_list(trace(x), w.tags);
      pw.add(t, Json(), t, true);
    }
    pw.finish(r, w);
    return r;
  }

  static std::optional<std::string> word_opt(const std::optional<TaggedWord>& w, const TagAlphabet& tags) {
    if (!w) return std::nullopt;
    return format_word(*w, tags);
  }

  Report is_dyck() {
    Report r;
    if (word_input()) {
      const auto w = words();
      detail::PerWord pw;
      for (const auto& x : w.words) {
        const auto red = dyck_reduce(x);
        const bool ok = red.empty();
        pw.add(ok, ok ? Json() : Json(format_word(red.letters, w.tags)), ok ? "true" : "false", ok);
      }
      pw.finish(r, w);
      return r;
    }
    const auto& in = input(0);
    if (in.kind == Kind::dfa) {
      const auto k = detail::load_dfa(opt_, in);
      const auto v = check_dyck_star_regular(k);
      detail::verdict(r, v.ok, word_opt(v.counterexample, k.tags));
      return r;
    }
    if (in.kind == Kind::xml || in.kind == Kind::dtd) {
      detail::load_xml(opt_, in);
      detail::verdict(r, true);
      return r;
    }
    const auto g = detail::load_cfg(opt_, in);
    const auto v = is_dyck_star_subset(g);
    detail::verdict(r, v.holds, word_opt(v.counterexample, g.tags));
    return r;
  }

  Report is_dyck_prime_cmd() {
    Report r;
    if (word_input()) {
      const auto w = words();
      const auto root = opt_.tag.empty() ? std::nullopt : w.tags.find(opt_.tag);
      detail::PerWord pw;
      for (const auto& x : w.words) {
        const bool ok = (opt_.tag.empty() || root) && dtdkit::is_dyck_prime(x, root);
        pw.add(ok, Json(), ok ? "true" : "false", ok);
      }
      pw.finish(r, w);
      return r;
    }
    const auto& in = input(0);
    if (in.kind == Kind::dfa) {
      const auto k = detail::load_dfa(opt_, in);
      const auto v = check_dyck_regular(k);
      const auto want = detail::requested_tag(opt_, k.tags);
      if (v.ok && want && *want != v.root) {
        // K ⊆ D_root, nonempty, so its shortest word starts with the wrong tag.
        detail::verdict(r, false, format_word(to_letters(*shortest_word(k.dfa)), k.tags));
        return r;
      }
      detail::verdict(r, v.ok, word_opt(v.counterexample, k.tags));
      return r;
    }
    if (in.kind == Kind::xml || in.kind == Kind::dtd) {
      const auto g = detail::load_xml(opt_, in);
      const auto want = detail::requested_tag(opt_, g.tags);
      detail::verdict(r, !want || *want == g.axiom);
      return r;
    }
    const auto g = detail::load_cfg(opt_, in);
    const auto want = detail::requested_tag(opt_, g.tags);
    const auto v = want ? is_dyck_prime_subset(g, *want) : is_dyck_subset(g);
    detail::verdict(r, v.holds, word_opt(v.counterexample, g.tags));
    return r;
  }

  SurfaceFamily surfaces_of(TagId* axiom) {
    if (word_input()) {
      const auto w = words();
      for (const auto& x : w.words)
        if (!is_dyck_word(x)) throw Error(ErrorCode::not_well_formed, "sample word '" + format_word(x, w.tags) + "' is not in D*");
      if (axiom) {
        *axiom = 0;
        for (const auto& x : w.words)
          if (!x.empty()) {
            *axiom = x.front().tag;
            break;
          }
      }
      return sample_surfaces(w.tags, w.words);
    }
    const auto& in = input(0);
    switch (in.kind) {
      case Kind::xml:
      case Kind::dtd: {
        const auto g = dtdkit::reduce(detail::load_xml(opt_, in));
        if (axiom) *axiom = g.axiom;
        return surfaces(g);
      }
      case Kind::dfa: {
        const auto k = detail::load_dfa(opt_, in);
        if (axiom) *axiom = check_dyck_regular(k).root;
        return detail::with_name(in, [&] { return regular_surfaces(k); });
      }
      default: {
        const auto g = dtdkit::reduce(detail::load_balanced(opt_, in));
        if (axiom) *axiom = g.axioms.empty() ? 0 : g.tag_of[g.axioms.front()];
        return hedge_surfaces(to_hedge(g));
      }
    }
  }

  Report surfaces_cmd() {
    Report r;
    detail::print_surfaces(r, surfaces_of(nullptr));
    return r;
  }

  Report surfaces_regular() {
    Report r;
    const auto& in = input(0);
    const auto k = detail::load_dfa(opt_, in);
    detail::print_surfaces(r, detail::with_name(in, [&] { return regular_surfaces(k); }));
    return r;
  }

  Report standard() {
    Report r;
    TagId axiom = 0;
    const auto s = surfaces_of(&axiom);
    if (auto t = detail::requested_tag(opt_, s.tags)) axiom = *t;
    try {
      detail::grammar_output(r, format_xml_grammar(dtdkit::reduce(standard_grammar(s, axiom))));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::empty_language) throw;
      detail::empty_output(r);
    }
    return r;
  }

  Report member_cmd() {
    const auto& gin = input(0);
    if (opt_.files.size() < 2 && opt_.word.empty()) throw UsageError("member needs a grammar and a document");
    TagAlphabet tags;
    std::function<bool(std::span<const Letter>)> accepts;
    XmlGrammar xg;
    TaggedDfa k;
    HedgeAutomaton h;
    switch (gin.kind) {
      case Kind::xml:
      case Kind::dtd:
        xg = detail::load_xml(opt_, gin);
        tags = xg.tags;
        accepts = [&](std::span<const Letter> w) { return detail::letters_within(w, xg.size()) && member(xg, w); };
        break;
      case Kind::dfa:
        k = detail::load_dfa(opt_, gin);
        tags = k.tags;
        accepts = [&](std::span<const Letter> w) {
          return detail::letters_within(w, k.tags.size()) && k.dfa.accepts(to_symbols(w));
        };
        break;
      default: {
        const auto b = detail::load_balanced(opt_, gin);
        h = to_hedge(b);
        tags = b.tags;
        accepts = [&](std::span<const Letter> w) {
          return detail::letters_within(w, h.tags.size()) && dtdkit::is_dyck_prime(w) && hedge_run(h, decode(w));
        };
      }
    }
    detail::Words w;
    if (opt_.files.size() >= 2) {
      const auto& din = input(1);
      if (din.kind != Kind::words) detail::wrong_kind(din, "a document word file");
      w.words = detail::with_name(din, [&] { return parse_word_file(din.text, tags, true); });
      if (w.words.empty()) w.words.emplace_back();
    } else {
      w.words.push_back(detail::inline_word(opt_.word, tags, true));
    }
    w.tags = tags;
    Report r;
    detail::PerWord pw;
    for (const auto& x : w.words) {
      const bool ok = accepts(x);
      pw.add(ok, Json(), ok ? "true" : "false", ok);
    }
    pw.finish(r, w);
    return r;
  }

  Report include() {
    Report r;
    const auto& a = input(0);
    const auto& b = input(1);
    if (a.kind == Kind::dfa && b.kind == Kind::dfa) {
      auto [tags, x, y] = common_dfas(a, b);
      const auto c = compare_subset(x, y);
      detail::verdict(r, c.holds, c.holds ? std::nullopt : std::optional(format_word(to_letters(*c.counterexample), tags)));
      return r;
    }
    const auto res = includes(detail::load_xml(opt_, a), detail::load_xml(opt_, b));
    inclusion_verdict(r, res.holds, res.tags, res.witness);
    return r;
  }

  Report equal() {
    Report r;
    const auto& a = input(0);
    const auto& b = input(1);
    if (a.kind == Kind::dfa && b.kind == Kind::dfa) {
      auto [tags, x, y] = common_dfas(a, b);
      const auto c = compare_equal(x, y);
      detail::verdict(r, c.holds, c.holds ? std::nullopt : std::optional(format_word(to_letters(*c.counterexample), tags)));
      return r;
    }
    const auto tree_like = [](Kind k) { return k == Kind::cfg || k == Kind::balanced; };
    if (tree_like(a.kind) || tree_like(b.kind)) {
      const auto hedge_of = [&](const Input& in) {
        return tree_like(in.kind) ? to_hedge(detail::load_balanced(opt_, in)) : xml_to_hedge(detail::load_xml(opt_, in));
      };
      const auto h1 = hedge_of(a);
      const auto h2 = hedge_of(b);
      const auto tags = union_alphabet(h1.tags, h2.tags);
      const auto c = hedge_equal(retag(h1, tags), retag(h2, tags));
      detail::verdict(r, c.equal,
                      c.counterexample ? std::optional(format_word(encode(*c.counterexample), tags)) : std::nullopt);
      return r;
    }
    const auto res = equals(detail::load_xml(opt_, a), detail::load_xml(opt_, b));
    inclusion_verdict(r, res.holds, res.tags, res.witness);
    if (!res.holds) r.lines.push_back(std::string("side: in ") + (res.side == 1 ? "first" : "second") + " input only");
    return r;
  }

  Report intersect_cmd() {
    Report r;
    const auto& a = input(0);
    const auto& b = input(1);
    try {
      if (a.kind == Kind::dfa && b.kind == Kind::dfa) {
        auto [tags, x, y] = common_dfas(a, b);
        const auto d = trim(minimize(combine(x, y, BoolOp::intersection)));
        if (dtdkit::is_empty(d)) throw Error(ErrorCode::empty_language, "empty intersection");
        detail::grammar_output(r, format_dfa({tags, d}));
      } else {
        detail::grammar_output(r, format_xml_grammar(intersect(detail::load_xml(opt_, a), detail::load_xml(opt_, b))));
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::empty_language) throw;
      r = {};
      detail::empty_output(r);
    }
    return r;
  }

  Report finite_surfaces() {
    Report r;
    const auto g = detail::load_cfg(opt_, input(0));
    const auto f = surfaces_are_finite(g);
    if (f.finite) {
      detail::verdict(r, true);
      return r;
    }
    const auto& p = *f.witness;
    const auto& h = f.grammar;
    std::string form = h.nonterminals[p.nonterminal] + " =>+ ";
    if (!p.g.empty()) form += format_word(p.g, h.tags) + " ";
    form += h.nonterminals[p.nonterminal];
    if (!p.d.empty()) form += " " + format_word(p.d, h.tags);
    detail::verdict(r, false, form);
    r.lines.push_back("flat pair: rho(g) = " + format_word(dyck_reduce(p.g).letters, h.tags));
    for (const auto& step : describe_chain(p, h)) r.lines.push_back("  " + step);
    return r;
  }

  Report xml_balanced() {
    Report r;
    const auto g = detail::load_balanced(opt_, input(0));
    const auto v = is_xml_balanced(g);
    if (v.xml) {
      const auto text = format_xml_grammar(*v.grammar);
      detail::verdict(r, true);
      r.witness = text;
      for (auto& l : detail::split_lines(text)) r.lines.push_back(l);
      return r;
    }
    detail::verdict(r, false, v.counterexample ? std::optional(format_word(encode(*v.counterexample), g.tags)) : std::nullopt);
    r.lines.push_back("reason: " + v.reason);
    return r;
  }

  Report xml_regular() {
    Report r;
    const auto& in = input(0);
    const auto k = detail::load_dfa(opt_, in);
    RegularXmlVerdict v;
    if (opt_.proof == "complement") v = detail::with_name(in, [&] { return is_xml_regular(k); });
    else if (opt_.proof == "contexts") v = detail::with_name(in, [&] { return is_xml_regular_contexts(k); });
    else throw UsageError("unknown --proof '" + opt_.proof + "' (complement or contexts)");
    if (v.xml) {
      const auto text = format_xml_grammar(*v.grammar);
      detail::verdict(r, true);
      r.witness = text;
      for (auto& l : detail::split_lines(text)) r.lines.push_back(l);
      return r;
    }
    detail::verdict(r, false, word_opt(v.counterexample, k.tags));
    return r;
  }

  Report height() {
    Report r;
    if (word_input()) {
      const auto w = words();
      detail::PerWord pw;
      for (const auto& x : w.words) {
        const auto wh = weight_and_height(x);
        pw.add(wh.height, Json(), "height " + std::to_string(wh.height) + ", weight " + std::to_string(wh.weight), true);
      }
      pw.finish(r, w);
      return r;
    }
    const auto& in = input(0);
    const auto k = detail::load_dfa(opt_, in);
    const auto h = regular_height(k);
    if (h.finite) {
      r.result = h.height;
      r.witness = format_word(h.witness, k.tags);
      r.lines.push_back(std::to_string(h.height));
      r.lines.push_back("witness: " + format_word(h.witness, k.tags));
    } else {
      r.result = "infinite";
      r.exit = 1;
      r.witness = format_word(h.cycle, k.tags);
      r.lines.push_back("infinite");
      r.lines.push_back("witness: cycle " + format_word(h.cycle, k.tags) + " of weight " + std::to_string(h.cycle_weight));
    }
    return r;
  }

  Report sequential() {
    Report r;
    const auto g = detail::load_xml(opt_, input(0));
    const auto s = is_sequential(g);
    detail::verdict(r, s.sequential, s.sequential ? std::nullopt : std::optional(detail::tag_list(s.cycle, g.tags)));
    return r;
  }

  Report to_regular_cmd() {
    Report r;
    const auto g = detail::load_xml(opt_, input(0));
    const auto s = is_sequential(g);
    if (!s.sequential) {
      detail::verdict(r, false, detail::tag_list(s.cycle, g.tags));
      r.result = "not-sequential";
      r.lines.front() = "not-sequential";
      return r;
    }
    detail::grammar_output(r, format_dfa({g.tags, to_regular(g)}));
    return r;
  }

  Report parse_dtd_cmd() {
    Report r;
    const auto& in = input(0);
    if (in.kind != Kind::dtd) detail::wrong_kind(in, "a DTD");
    detail::grammar_output(r, format_xml_grammar(detail::load_xml(opt_, in)));
    return r;
  }

  Report enumerate_cmd() {
    Report r;
    const auto& in = input(0);
    std::vector<TaggedWord> list;
    TagAlphabet tags;
    if (in.kind == Kind::dfa) {
      const auto k = detail::load_dfa(opt_, in);
      tags = k.tags;
      for (const auto& w : enumerate(k.dfa, opt_.max_len)) list.push_back(to_letters(w));
    } else {
      const auto g = detail::load_xml(opt_, in);
      tags = g.tags;
      if (auto red = dtdkit::detail::reduce_or_empty(g)) list = enumerate_language(*red, opt_.max_len);
    }
    r.result = Json::array();
    for (const auto& w : list) {
      r.result.push_back(format_word(w, tags));
      r.lines.push_back(format_word(w, tags));
    }
    return r;
  }

  std::tuple<TagAlphabet, Dfa, Dfa> common_dfas(const Input& a, const Input& b) {
    const auto x = detail::load_dfa(opt_, a);
    const auto y = detail::load_dfa(opt_, b);
    const auto tags = union_alphabet(x.tags, y.tags);
    return {tags, widen_letters(x.dfa, x.tags, tags), widen_letters(y.dfa, y.tags, tags)};
  }

  static void inclusion_verdict(Report& r, bool holds, const TagAlphabet& tags,
                                const std::optional<InclusionWitness>& w) {
    if (holds || !w) {
      detail::verdict(r, holds);
      return;
    }
    detail::verdict(r, false, format_word(w->document, tags));
    r.lines.push_back("tag: " + tags.name(w->tag) + ", trace: " + detail::tag_list(w->trace, tags, 0));
  }

  Options opt_;
  std::deque<Input> inputs_;
};

inline const std::vector<std::pair<std::string, std::string>>& commands() {
  static const std::vector<std::pair<std::string, std::string>> list{
      {"reduce", "Dyck reduction of words; reduction of grammars and DFAs"},
      {"prime", "factor words of D* into Dyck primes"},
      {"trace", "trace of a Dyck prime"},
      {"is-dyck", "membership in D* (words) or inclusion in D* (CFG, DFA)"},
      {"is-dyck-prime", "membership in D or D_tag (words) or inclusion (CFG, DFA)"},
      {"surfaces", "surfaces of an XML-grammar, DTD, sample, balanced grammar or DFA"},
      {"standard", "standard grammar of the surfaces of the input"},
      {"member", "document membership"},
      {"include", "inclusion of two XML-languages (or DFA languages)"},
      {"equal", "equality of two XML-languages, balanced languages or DFA languages"},
      {"intersect", "intersection of two XML-languages (or DFA languages)"},
      {"finite-surfaces", "finiteness of the surfaces of a CFG generating a subset of D"},
      {"is-xml-balanced", "XML-ness of a balanced grammar"},
      {"surfaces-regular", "surfaces of a regular language included in D_a"},
      {"is-xml-regular", "XML-ness of a regular language included in D_a"},
      {"height", "height of words or of a regular language included in D_a"},
      {"is-sequential", "acyclicity of the tag dependency graph"},
      {"to-regular", "DFA of a sequential XML-grammar"},
      {"parse-dtd", "XML-grammar of a DTD"},
      {"enumerate", "words of the language up to --max-len letters"},
  };
  return list;
}

inline std::string render(const std::string& cmd, const Report& r, double ms, bool json) {
  if (!json) {
    std::string out;
    for (const auto& l : r.lines) out += l + '\n';
    return out;
  }
  Json j;
  j["command"] = cmd;
  j["result"] = r.result;
  j["witness"] = r.witness;
  j["elapsed_ms"] = std::round(ms * 1000.0) / 1000.0;
  return j.dump(2) + '\n';
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decision procedures for XML-grammars and Dyck languages", "dtdkit"};
  app.require_subcommand(1, 1);
  Options opt;
  app.add_flag("--json", opt.json, "machine-readable report");
  app.add_option("--max-len", opt.max_len, "length bound for enumeration")->check(CLI::NonNegativeNumber);
  app.add_option("--alphabet", opt.alphabet, "comma-separated tag alphabet overriding the inferred one");
  app.add_option("--format", opt.format, "input kind: w, cfg, bg, xg, dtd, dfa");
  app.add_option("--tag", opt.tag, "root tag for is-dyck-prime; axiom for standard");
  app.add_option("--proof", opt.proof, "is-xml-regular algorithm: complement or contexts");
  app.add_option("--word", opt.word, "inline word instead of a word file");
  for (const auto& [name, help] : commands()) {
    auto* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    sub->add_option("files", opt.files, "input files, '-' for standard input");
  }

  // The first bare argument names the command; options with values are skipped.
  static const std::set<std::string> valued{"--max-len", "--alphabet", "--format", "--tag", "--proof", "--word"};
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (valued.count(args[i])) {
      ++i;
      continue;
    }
    if (args[i].empty() || args[i][0] == '-') continue;
    const auto known = commands();
    if (std::none_of(known.begin(), known.end(), [&](const auto& c) { return c.first == args[i]; })) {
      err << "dtdkit: unknown command '" << args[i] << "'\nRun with --help for more information.\n";
      return 2;
    }
    break;
  }

  std::vector<const char*> argv{"dtdkit"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();

  const auto start = std::chrono::steady_clock::now();
  try {
    Runner runner(opt);
    const auto report = runner.dispatch(cmd);
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    out << render(cmd, report, ms, opt.json);
    return report.exit;
  } catch (const Error& e) {
    err << "dtdkit " << cmd << ": " << to_string(e.code()) << ": " << e.message() << '\n';
  } catch (const UsageError& e) {
    err << "dtdkit " << cmd << ": " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "dtdkit " << cmd << ": " << e.what() << '\n';
  }
  return 2;
}

}  // namespace dtdkit::cli
