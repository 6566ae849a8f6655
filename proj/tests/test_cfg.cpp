#include <catch_amalgamated.hpp>

#include "generators.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace dtdkit;

namespace {

std::vector<std::string> reduced_set(const ReducedSet& s, const TagAlphabet& tags) {
  std::vector<std::string> out;
  for (const auto& [u, w] : s) out.push_back(format_word(u, tags));
  return out;
}

const char* const section_four = "axiom S\nS -> a T T /a\nT -> a T T /a | b /b\n";

}  // namespace

TEST_CASE("CFG text format") {
  const auto g = parse_cfg("# comment\naxiom S\nS -> a S /a | ~e~\n");
  CHECK(g.nonterminals == std::vector<std::string>{"S"});
  CHECK(g.productions.size() == 2);
  CHECK(format_cfg(g) == "axiom S\nS -> a S /a | ~e~\n");
  CHECK(format_cfg(parse_cfg(format_cfg(g))) == format_cfg(g));
  try {
    parse_cfg("axiom S\nS -> a S /a\nS => b\n");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::parse_error);
    CHECK(e.message().rfind("3:", 0) == 0);
  }
}

TEST_CASE("reduce_grammar examples") {
  SECTION("unreachable nonterminal is removed") {
    const auto g = reduce_grammar(parse_cfg("axiom S\nS -> a /a\nX -> a X /a\n"));
    CHECK(g.nonterminals == std::vector<std::string>{"S"});
    CHECK(g.productions.size() == 1);
  }
  SECTION("no base case") {
    try {
      reduce_grammar(parse_cfg("axiom S\nS -> a S /a\n"));
      FAIL("expected EmptyLanguage");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::empty_language);
    }
  }
  SECTION("the balanced example is already reduced") {
    const auto g = parse_cfg(section_four);
    CHECK(format_cfg(reduce_grammar(g)) == format_cfg(g));
  }
}

TEST_CASE("irr_fixpoint examples") {
  SECTION("bounded") {
    const auto g = parse_cfg("axiom S\nS -> a S /a | a /a\n");
    const auto r = irr_fixpoint(g);
    CHECK(r.status == IrrStatus::bounded);
    CHECK(reduced_set(r.irr[g.axiom], g.tags) == std::vector<std::string>{"~e~"});
  }
  SECTION("unbounded") {
    const auto g = parse_cfg("axiom S\nS -> a S | a\n");
    const auto r = irr_fixpoint(g);
    CHECK(r.status == IrrStatus::unbounded);
    CHECK(oracle::cfg_member(g, r.counterexample));
    CHECK_FALSE(is_dyck_word(r.counterexample));
  }
  SECTION("not a Dyck factor") {
    const auto g = parse_cfg("axiom S\nS -> a /b\n");
    const auto r = irr_fixpoint(g);
    CHECK(r.status == IrrStatus::not_dyck_factor);
    CHECK(format_word(r.counterexample, g.tags) == "a /b");
  }
}

TEST_CASE("is_dyck_star_subset examples") {
  CHECK(is_dyck_star_subset(parse_cfg("axiom S\nS -> a /a S | ~e~\n")).holds);
  CHECK(is_dyck_star_subset(parse_cfg("axiom S\nS -> a S /a | a /a\n")).holds);
  const auto g = parse_cfg("axiom S\nS -> a S | a\n");
  const auto v = is_dyck_star_subset(g);
  CHECK_FALSE(v.holds);
  REQUIRE(v.counterexample);
  CHECK(oracle::cfg_member(g, *v.counterexample));
}

TEST_CASE("is_dyck_prime_subset examples") {
  const auto g1 = parse_cfg("axiom S\nS -> a S /a | a /a\n");
  CHECK(is_dyck_prime_subset(g1, g1.tags.at("a")).holds);
  const auto g2 = parse_cfg("axiom S\nS -> a /a S | ~e~\n");
  const auto v = is_dyck_prime_subset(g2, g2.tags.at("a"));
  CHECK_FALSE(v.holds);
  REQUIRE(v.counterexample);
  CHECK(v.counterexample->empty());
  const auto g3 = parse_cfg(section_four);
  CHECK(is_dyck_prime_subset(g3, g3.tags.at("a")).holds);
  CHECK_FALSE(is_dyck_prime_subset(g3, g3.tags.at("b")).holds);
  CHECK(is_dyck_subset(g3).holds);
  const auto two = parse_cfg("axiom S\nS -> a /a a /a\n");
  CHECK(is_dyck_star_subset(two).holds);
  CHECK_FALSE(is_dyck_subset(two).holds);
}

TEST_CASE("elementary_pairs examples") {
  SECTION("lifting pair") {
    const auto g = parse_cfg("axiom X\nX -> b X /b | b /b\n");
    const auto a = elementary_pairs(g);
    REQUIRE(a.pairs.size() == 1);
    const auto& p = a.pairs[0];
    CHECK(format_word(p.g, g.tags) == "b");
    CHECK(format_word(p.d, g.tags) == "/b");
    CHECK(p.kind() == PairKind::lifting);
    CHECK(p.shape.x.empty());
    CHECK(format_word(p.shape.p, g.tags) == "b");
  }
  SECTION("flat pair") {
    const auto g = parse_cfg(support::read_data("flat.cfg"));
    const auto a = elementary_pairs(g);
    REQUIRE(a.pairs.size() == 1);
    CHECK(a.pairs[0].g.empty());
    CHECK(format_word(a.pairs[0].d, g.tags) == "b /b");
    CHECK(a.pairs[0].kind() == PairKind::flat);
  }
  SECTION("no self-embedding") { CHECK(elementary_pairs(parse_cfg("axiom S\nS -> a /a\n")).pairs.empty()); }
}

TEST_CASE("decompose_pair") {
  TagAlphabet tags({"a", "b"});
  const auto s = decompose_pair(parse_word("/a /b a b a", tags));
  REQUIRE(s);
  CHECK(format_word(s->x, tags) == "b a");
  CHECK(format_word(s->p, tags) == "a");
  CHECK_FALSE(decompose_pair(parse_word("/a b", tags)));
  CHECK_FALSE(decompose_pair(parse_word("a /b", tags)));
}

TEST_CASE("surfaces_are_finite examples") {
  CHECK(surfaces_are_finite(parse_cfg(support::read_data("b2n.cfg"))).finite);
  CHECK(surfaces_are_finite(parse_cfg(section_four)).finite);
  CHECK(surfaces_are_finite(parse_cfg("axiom S\nS -> a /a\n")).finite);
  const auto f = surfaces_are_finite(parse_cfg(support::read_data("flat.cfg")));
  CHECK_FALSE(f.finite);
  REQUIRE(f.witness);
  CHECK(f.witness->kind() == PairKind::flat);
  CHECK(describe_chain(*f.witness, f.grammar) == std::vector<std::string>{"Y -> Y b /b"});
  try {
    surfaces_are_finite(parse_cfg("axiom S\nS -> a S | a\n"));
    FAIL("expected NotDyckSubset");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::not_dyck_subset);
  }
}

TEST_CASE("epsilon and unit elimination preserves the language") {
  const auto g = parse_cfg("axiom S\nS -> A B | a S /a\nA -> ~e~ | b /b\nB -> A | a /a\n");
  const auto h = remove_epsilon_and_units(g);
  for (const auto& p : h.productions) {
    CHECK_FALSE(p.rhs.empty());
    CHECK_FALSE((p.rhs.size() == 1 && !p.rhs[0].terminal));
  }
  auto without_empty = oracle::cfg_words(g, 10);
  without_empty.erase(TaggedWord{});
  CHECK(oracle::cfg_words(h, 10) == without_empty);
}

TEST_CASE("bounded Irr sets contain the reductions of derived words") {
  std::vector<std::string> texts{
      "axiom S\nS -> a S /a | a /a\n",
      "axiom S\nS -> a /a S | ~e~\n",
      section_four,
      "axiom S\nS -> a B /a\nB -> b b B /b /b | b b /b /b\n",
      "axiom S\nS -> A /a\nA -> a A /a | a\n",
      "axiom S\nS -> a S /a S | ~e~\n",
  };
  for (const auto& t : texts) {
    const auto g = reduce_grammar(parse_cfg(t));
    const auto r = irr_fixpoint(g);
    REQUIRE(r.status == IrrStatus::bounded);
    for (NonterminalId x = 0; x < g.size(); ++x) {
      Cfg from_x = g;
      from_x.axiom = x;
      for (const auto& w : oracle::cfg_words(from_x, 12)) {
        const auto u = oracle::naive_reduce(w);
        CHECK(r.irr[x].count(u));
        CHECK(u.size() <= r.budget[x]);
      }
      for (const auto& [u, w] : r.irr[x]) {
        CHECK(is_canonical_shape(u));
        CHECK(dyck_reduce(w).letters == u);
      }
    }
  }
}

TEST_CASE("Dyck-subset decisions agree with enumeration on random grammars") {
  gen::Rng rng(41);
  for (int i = 0; i < 60; ++i) {
    const auto g = gen::cfg(rng);
    INFO(format_cfg(g));
    const auto words = oracle::cfg_words(g, 10);
    const auto star = is_dyck_star_subset(g);
    const bool all_in_star =
        std::all_of(words.begin(), words.end(), [](const TaggedWord& w) { return oracle::naive_reduce(w).empty(); });
    if (star.holds) CHECK(all_in_star);
    else {
      REQUIRE(star.counterexample);
      CHECK(oracle::cfg_member(g, *star.counterexample));
      CHECK_FALSE(oracle::naive_reduce(*star.counterexample).empty());
    }
    const auto prime = is_dyck_subset(g);
    const bool all_prime = std::all_of(words.begin(), words.end(), [](const TaggedWord& w) { return oracle::is_prime(w); });
    if (prime.holds) CHECK(all_prime);
    else {
      REQUIRE(prime.counterexample);
      CHECK(oracle::cfg_member(g, *prime.counterexample));
      CHECK_FALSE(oracle::is_prime(*prime.counterexample));
    }
  }
}

TEST_CASE("composing two pairs with a lifting one lifts") {
  const std::vector<std::string> texts{"axiom X\nX -> b X /b | b /b\n", support::read_data("b2n.cfg"),
                                       support::read_data("flat.cfg"), section_four};
  for (const auto& t : texts) {
    const auto a = elementary_pairs(parse_cfg(t));
    for (const auto& p : a.pairs)
      for (const auto& q : a.pairs) {
        if (p.nonterminal != q.nonterminal) continue;
        TaggedWord g = p.g;
        g.insert(g.end(), q.g.begin(), q.g.end());
        const auto s = decompose_pair(g);
        REQUIRE(s);
        if (p.kind() == PairKind::lifting || q.kind() == PairKind::lifting) CHECK(s->kind() == PairKind::lifting);
        else CHECK(s->kind() == PairKind::flat);
      }
  }
}

TEST_CASE("finite surfaces agree with trace width growth") {
  const std::vector<std::pair<std::string, bool>> cases{
      {support::read_data("b2n.cfg"), true},
      {section_four, true},
      {support::read_data("flat.cfg"), false},
      {"axiom S\nS -> a A /a\nA -> b /b A | c /c\n", false},
      {"axiom S\nS -> a S /a | b /b\n", true},
  };
  for (const auto& [text, finite] : cases) {
    const auto g = parse_cfg(text);
    CHECK(surfaces_are_finite(g).finite == finite);
    const auto all = oracle::cfg_words(g, 14);
    const std::vector<TaggedWord> words(all.begin(), all.end());
    std::vector<TaggedWord> shorter;
    for (const auto& w : words)
      if (w.size() <= 10) shorter.push_back(w);
    CHECK((oracle::trace_width(words) == oracle::trace_width(shorter)) == finite);
  }
}
