#include <catch_amalgamated.hpp>

#include "generators.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace dtdkit;
using support::rx;

namespace {

XmlGrammar xg(std::string_view text) { return parse_xml_grammar(text); }

std::string surface(const SurfaceFamily& s, std::string_view tag) {
  return content_to_string(s.surface[s.tags.at(tag)], s.tags);
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::internal;
}

/// Membership by recursive decomposition, with content DFAs consulted on whole traces.
bool member_by_decomposition(const XmlGrammar& g, TagId root, std::span<const Letter> w) {
  if (!oracle::is_prime(w) || w.front().tag != root || root >= g.size()) return false;
  const auto children = oracle::split(w.subspan(1, w.size() - 2));
  Word t;
  for (const auto& c : children) t.push_back(c.front().tag);
  if (!g.content[root].accepts(t)) return false;
  return std::all_of(children.begin(), children.end(),
                     [&](const TaggedWord& c) { return member_by_decomposition(g, c.front().tag, c); });
}

std::vector<XmlGrammar> bundled() {
  std::vector<XmlGrammar> out;
  for (const auto& f : support::data_files(".xg")) out.push_back(xg(support::read_data(f)));
  for (const auto& f : support::data_files(".dtd")) out.push_back(parse_dtd(support::read_data(f)));
  return out;
}

}  // namespace

TEST_CASE("XML-grammar text format") {
  const auto g = xg("# surfaces example\naxiom a\na -> b\nb -> b?\n");
  CHECK(g.tags.names() == std::vector<std::string>{"a", "b"});
  CHECK(format_xml_grammar(g) == "axiom a\na -> b\nb -> b?\n");
  CHECK(xg(format_xml_grammar(g)) == g);
  CHECK(code_of([] { xg("a -> b\nb -> ~e~\n"); }) == ErrorCode::parse_error);
  CHECK(code_of([] { xg("axiom a\na -> b\na -> ~e~\n"); }) == ErrorCode::parse_error);
  CHECK(code_of([] { xg("axiom c\na -> ~e~\n"); }) == ErrorCode::undeclared_element);
  try {
    xg("axiom a\na -> b c\nb -> ~e~\n");
    FAIL("expected UndeclaredElement");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::undeclared_element);
    CHECK(e.message() == "2:8: undeclared tag 'c'");
  }
}

TEST_CASE("parse_dtd examples") {
  SECTION("the DOCTYPE block") {
    const auto g = parse_dtd(support::read_data("example.dtd"));
    CHECK(g.tags.name(g.axiom) == "a");
    CHECK(language_equal(g.content[g.tags.at("a")], rx("(a|b)(a|b)", g.tags)));
    CHECK(language_equal(g.content[g.tags.at("b")], rx("b*", g.tags)));
  }
  SECTION("EMPTY") {
    const auto g = parse_dtd("<!DOCTYPE a [<!ELEMENT a EMPTY>]>");
    CHECK(support::formatted(enumerate_language(g, 10), g.tags) == std::vector<std::string>{"a /a"});
  }
  SECTION("undeclared reference") {
    CHECK(code_of([] { parse_dtd("<!DOCTYPE a [<!ELEMENT a (b, c)> <!ELEMENT b EMPTY>]>"); }) ==
          ErrorCode::undeclared_element);
    CHECK(code_of([] { parse_dtd("<!DOCTYPE z [<!ELEMENT a EMPTY>]>"); }) == ErrorCode::undeclared_element);
  }
  SECTION("declarations that carry no structure are skipped") {
    const auto g = parse_dtd(
        "<?xml version=\"1.0\"?>\n<!-- notes -->\n<!DOCTYPE a [\n<!ELEMENT a (#PCDATA | b)*>\n"
        "<!ATTLIST a id CDATA \"x>y\">\n<!ENTITY e 'v'>\n<!ELEMENT b ANY>\n]>\n");
    CHECK(language_equal(g.content[g.tags.at("a")], rx("b*", g.tags)));
    CHECK(language_equal(g.content[g.tags.at("b")], rx("(a|b)*", g.tags)));
  }
  SECTION("no DOCTYPE: the first element is the root") {
    const auto g = parse_dtd("<!ELEMENT b (c?)>\n<!ELEMENT c EMPTY>\n");
    CHECK(g.tags.name(g.axiom) == "b");
  }
  SECTION("syntax errors carry positions") {
    try {
      parse_dtd("<!DOCTYPE a [\n<!ELEMENT a (b|)>\n<!ELEMENT b EMPTY>\n]>");
      FAIL("expected a parse error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::parse_error);
      CHECK(e.message().rfind("2:", 0) == 0);
    }
    CHECK(code_of([] { parse_dtd("<!ELEMENT a EMPTY>\n<!ELEMENT a EMPTY>\n"); }) == ErrorCode::parse_error);
  }
}

TEST_CASE("surfaces examples") {
  const auto s1 = surfaces(xg(support::read_data("surfaces.xg")));
  CHECK(surface(s1, "a") == "b");
  CHECK(surface(s1, "b") == "b?");
  const auto s2 = surfaces(xg(support::read_data("example.xg")));
  CHECK(language_equal(s2.surface[s2.tags.at("a")], rx("(a|b)(a|b)", s2.tags)));
  CHECK(surface(s2, "b") == "~e~");
  const auto s3 = surfaces(xg(support::read_data("dyck_a.xg")));
  CHECK(surface(s3, "a") == "a*");
  CHECK(code_of([] { surfaces(xg("axiom a\na -> b?\nb -> b\n")); }) == ErrorCode::not_reduced);
}

TEST_CASE("standard_grammar examples") {
  const TagAlphabet tags({"a", "b"});
  SECTION("surfaces {b}, {b, e}") {
    const auto g = standard_grammar({tags, {rx("b", tags), rx("b?", tags)}}, 0);
    CHECK(support::formatted(enumerate_language(g, 8), tags) ==
          std::vector<std::string>{"a b /b /a", "a b b /b /b /a", "a b b b /b /b /b /a"});
  }
  SECTION("a single leaf") {
    const TagAlphabet a({"a"});
    const auto g = standard_grammar({a, {rx("~e~", a)}}, 0);
    CHECK(support::formatted(enumerate_language(g, 10), a) == std::vector<std::string>{"a /a"});
  }
  SECTION("unproductive") {
    CHECK(code_of([&] { reduce(standard_grammar({tags, {rx("b", tags), rx("{}", tags)}}, 0)); }) ==
          ErrorCode::empty_language);
  }
}

TEST_CASE("member examples") {
  const TagAlphabet tags({"a", "b"});
  const auto g = standard_grammar({tags, {rx("b", tags), rx("b?", tags)}}, 0);
  CHECK(member(g, parse_word("a b b /b /b /a", tags)));
  CHECK_FALSE(member(g, parse_word("a /a", tags)));
  CHECK_FALSE(member(g, TaggedWord{}));
  CHECK_FALSE(member(g, parse_word("a b /b /a a b /b /a", tags)));
  CHECK_FALSE(member(g, parse_word("a b /a /b", tags)));
}

TEST_CASE("includes and equals examples") {
  const auto g1 = xg("axiom a\na -> b\nb -> ~e~\n");
  const auto g2 = xg(support::read_data("surfaces.xg"));
  CHECK(includes(g1, g2).holds);
  const auto r = includes(g2, g1);
  CHECK_FALSE(r.holds);
  REQUIRE(r.witness);
  CHECK(r.tags.name(r.witness->tag) == "b");
  CHECK(support::words_of({r.witness->trace}, r.tags) == std::vector<std::string>{"b"});
  CHECK(member(widen(g2, r.tags), r.witness->document));
  CHECK_FALSE(member(widen(g1, r.tags), r.witness->document));
  CHECK(equals(g2, g2).holds);
  const auto dyck = xg("axiom a\na -> a*\n");
  const auto chain = xg("axiom a\na -> (a|~e~)\n");
  const auto d = includes(dyck, chain);
  CHECK_FALSE(d.holds);
  REQUIRE(d.witness);
  CHECK(d.tags.name(d.witness->tag) == "a");
  CHECK(support::words_of({d.witness->trace}, d.tags) == std::vector<std::string>{"a a"});
  const auto e = equals(chain, dyck);
  CHECK_FALSE(e.holds);
  CHECK(e.side == 2);
}

TEST_CASE("includes reconciles different alphabets") {
  const auto x = xg("axiom c\nc -> a*\na -> ~e~\n");
  const auto y = xg(support::read_data("union_ab.xg"));
  CHECK(includes(x, y).holds);
  const auto r = includes(y, x);
  CHECK_FALSE(r.holds);
  CHECK_FALSE(includes(xg("axiom a\na -> ~e~\n"), xg("axiom b\nb -> ~e~\n")).holds);
}

TEST_CASE("intersect examples") {
  const auto chain = xg("axiom a\na -> a?\n");
  const auto dyck = xg("axiom a\na -> a*\n");
  CHECK(intersect(chain, dyck) == reduce(chain));
  const auto g = xg(support::read_data("surfaces.xg"));
  CHECK(intersect(g, g) == reduce(g));
  CHECK(code_of([] { intersect(xg("axiom a\na -> b\nb -> ~e~\n"), xg("axiom a\na -> c\nc -> ~e~\n")); }) ==
        ErrorCode::empty_language);
  CHECK(code_of([] { intersect(xg("axiom a\na -> ~e~\n"), xg("axiom b\nb -> ~e~\n")); }) == ErrorCode::empty_language);
}

TEST_CASE("is_sequential examples") {
  const auto s1 = is_sequential(xg(support::read_data("surfaces.xg")));
  CHECK_FALSE(s1.sequential);
  CHECK(s1.cycle == std::vector<TagId>{1});
  const auto s2 = is_sequential(xg("axiom a\na -> b b\nb -> ~e~\n"));
  CHECK(s2.sequential);
  CHECK(s2.order == std::vector<TagId>{1, 0});
  const auto s3 = is_sequential(xg(support::read_data("example.xg")));
  CHECK_FALSE(s3.sequential);
  CHECK(s3.cycle == std::vector<TagId>{0});
}

TEST_CASE("to_regular examples") {
  auto words = [](const XmlGrammar& g, std::size_t n) {
    const auto set = oracle::dfa_letter_words(to_regular(g), n);
    return support::formatted({set.begin(), set.end()}, g.tags);
  };
  CHECK(words(xg("axiom a\na -> ~e~\n"), 12) == std::vector<std::string>{"a /a"});
  CHECK(words(xg("axiom a\na -> b b\nb -> ~e~\n"), 12) == std::vector<std::string>{"a b /b b /b /a"});
  const auto star = xg("axiom a\na -> b*\nb -> ~e~\n");
  CHECK(words(star, 8) == std::vector<std::string>{"a /a", "a b /b /a", "a b /b b /b /a", "a b /b b /b b /b /a"});
  CHECK(code_of([] { to_regular(xg("axiom a\na -> a?\n")); }) == ErrorCode::not_sequential);
}

TEST_CASE("enumerate_language matches filtering all primes") {
  for (const auto& g : bundled()) {
    const auto r = reduce(g);
    std::vector<TaggedWord> expected;
    for (const auto& w : oracle::all_primes(g.size(), 12))
      if (member_by_decomposition(r, r.axiom, w)) expected.push_back(w);
    std::sort(expected.begin(), expected.end(), [](const TaggedWord& x, const TaggedWord& y) { return shortlex_less(x, y); });
    CHECK(enumerate_language(r, 12) == expected);
  }
}

TEST_CASE("member agrees with decomposition on bundled grammars") {
  for (const auto& g : bundled()) {
    const auto r = reduce(g);
    for (const auto& w : oracle::all_primes(g.size(), 12)) CHECK(member(r, w) == member_by_decomposition(r, r.axiom, w));
    gen::Rng rng(51);
    for (int i = 0; i < 200; ++i) {
      const auto w = gen::dyckish_word(rng, g.size(), gen::uniform(rng, 0, 12));
      CHECK(member(r, w) == member_by_decomposition(r, r.axiom, w));
    }
  }
}

TEST_CASE("standard grammar of the surfaces gives back the grammar") {
  for (const auto& g : bundled()) {
    const auto r = reduce(g);
    CHECK(reduce(standard_grammar(surfaces(r), r.axiom)) == r);
  }
}

TEST_CASE("well-formed factors of a sample lie in the standard language of its surfaces") {
  TagAlphabet tags;
  const auto words = parse_word_file(support::read_data("b2n.w"), tags);
  const auto s = sample_surfaces(tags, words);
  CHECK(language_equal(s.surface[tags.at("a")], rx("b", tags)));
  CHECK(language_equal(s.surface[tags.at("b")], rx("b?", tags)));
  const auto g = standard_grammar(s, tags.at("a"));
  for (const auto& w : words)
    for (const auto& f : well_formed_factors(w)) CHECK(member_from(g, f.front().tag, f));
  // The standard language is strictly larger: it has odd powers of b.
  CHECK(member(g, parse_word("a b /b /a", tags)));
}

TEST_CASE("random grammars: surfaces, inclusion and intersection") {
  gen::Rng rng(52);
  for (int i = 0; i < 30; ++i) {
    const auto s1 = gen::xml_spec(rng, 3, false, 2);
    const auto s2 = gen::xml_spec(rng, 3, false, 2);
    const auto g1 = reduce(s1.grammar());
    const auto g2 = reduce(s2.grammar());
    const auto primes = oracle::all_primes(3, 10);
    std::set<TaggedWord> l1, l2;
    for (const auto& w : primes) {
      if (oracle::xml_member(s1, w)) l1.insert(w);
      if (oracle::xml_member(s2, w)) l2.insert(w);
    }
    for (const auto& w : primes) {
      CHECK(member(g1, w) == (l1.count(w) > 0));
    }
    const auto inc = includes(g1, g2);
    if (inc.holds) {
      for (const auto& w : l1) CHECK(l2.count(w));
    } else {
      REQUIRE(inc.witness);
      CHECK(member(widen(g1, inc.tags), inc.witness->document));
      CHECK_FALSE(member(widen(g2, inc.tags), inc.witness->document));
    }
    std::set<TaggedWord> both;
    for (const auto& w : l1)
      if (l2.count(w)) both.insert(w);
    try {
      const auto x = intersect(g1, g2);
      const auto e = enumerate_language(x, 10);
      CHECK(std::set<TaggedWord>(e.begin(), e.end()) == both);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::empty_language);
      CHECK(both.empty());
    }
  }
}

TEST_CASE("non-sequential grammars have words of any height") {
  gen::Rng rng(53);
  int found = 0;
  while (found < 10) {
    const auto g = reduce(gen::xml_spec(rng, 3, false, 2).grammar());
    const auto s = is_sequential(g);
    if (s.sequential) continue;
    ++found;
    const auto w = pumped_word(g, s.cycle, 10);
    CHECK(member(g, w));
    CHECK(weight_and_height(w).height >= 10);
  }
}

TEST_CASE("sequential grammars: to_regular agrees with member") {
  gen::Rng rng(54);
  for (int i = 0; i < 10; ++i) {
    const auto s = gen::xml_spec(rng, 3, true, 2);
    const auto g = reduce(s.grammar());
    REQUIRE(is_sequential(g).sequential);
    const auto d = to_regular(g);
    std::set<TaggedWord> accepted;
    for (const auto& w : oracle::all_primes(3, 10))
      if (member(g, w)) accepted.insert(w);
    CHECK(oracle::dfa_letter_words(d, 10) == accepted);
  }
}
