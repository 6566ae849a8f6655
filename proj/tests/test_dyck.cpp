#include <catch_amalgamated.hpp>

#include "dtdkit/dyck.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace dtdkit;

namespace {

TaggedWord w(std::string_view text, TagAlphabet& tags) { return parse_word(text, tags); }

std::vector<std::string> fmt(const std::vector<TaggedWord>& ws, const TagAlphabet& tags) {
  std::vector<std::string> out;
  for (const auto& x : ws) out.push_back(format_word(x, tags));
  return out;
}

}  // namespace

TEST_CASE("tag alphabet and word notation") {
  TagAlphabet tags;
  CHECK(tags.add("a") == 0);
  CHECK(tags.add("b") == 1);
  CHECK(tags.add("a") == 0);
  CHECK_THROWS_AS(tags.add("1x"), Error);
  CHECK(letter_names(tags) == std::vector<std::string>{"a", "/a", "b", "/b"});
  const auto x = w("a b /b /a", tags);
  CHECK(format_word(x, tags) == "a b /b /a");
  CHECK(format_word(TaggedWord{}, tags) == "~e~");
  CHECK(w("~e~", tags).empty());
  CHECK_THROWS_AS(parse_word("c", std::as_const(tags)), Error);
}

TEST_CASE("word files skip comments and blank lines") {
  TagAlphabet tags;
  const auto ws = parse_word_file("# sample\na /a\n\n  b /b  \n", tags);
  CHECK(fmt(ws, tags) == std::vector<std::string>{"a /a", "b /b"});
  try {
    parse_word_file("a /a\na //a\n", tags);
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::parse_error);
    CHECK(e.message().rfind("2:3:", 0) == 0);
  }
}

TEST_CASE("dyck_reduce examples") {
  TagAlphabet tags;
  SECTION("single cancellation") {
    const auto r = dyck_reduce(w("a /a", tags));
    CHECK(r.empty());
    CHECK(r.canonical);
  }
  SECTION("canonical opener suffix") {
    const auto r = dyck_reduce(w("a a b /b", tags));
    CHECK(format_word(r.letters, tags) == "a a");
    CHECK(r.canonical);
    CHECK(r.closers().empty());
    CHECK(r.openers().size() == 2);
  }
  SECTION("irreducible non-factor") {
    const auto r = dyck_reduce(w("a /b", tags));
    CHECK(format_word(r.letters, tags) == "a /b");
    CHECK_FALSE(r.canonical);
  }
}

TEST_CASE("is_dyck_prime examples") {
  TagAlphabet tags;
  const auto p = w("a b /b /a", tags);
  CHECK(is_dyck_prime(p, tags.at("a")));
  CHECK_FALSE(is_dyck_prime(p, tags.at("b")));
  CHECK_FALSE(is_dyck_prime(w("a /a b /b", tags)));
  CHECK_FALSE(is_dyck_prime(TaggedWord{}));
}

TEST_CASE("factor_primes examples") {
  TagAlphabet tags;
  CHECK(fmt(factor_primes(w("a /a b /b", tags)), tags) == std::vector<std::string>{"a /a", "b /b"});
  CHECK(fmt(factor_primes(w("a b /b /a", tags)), tags) == std::vector<std::string>{"a b /b /a"});
  CHECK(factor_primes(TaggedWord{}).empty());
  try {
    factor_primes(w("a /b", tags));
    FAIL("expected NotWellFormed");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::not_well_formed);
  }
}

TEST_CASE("trace examples") {
  TagAlphabet tags;
  const auto names = [&](const std::vector<TagId>& t) {
    std::string s;
    for (auto x : t) s += tags.name(x);
    return s;
  };
  CHECK(names(trace(w("a b /b c /c /a", tags))) == "bc");
  CHECK(trace(w("a /a", tags)).empty());
  CHECK(names(trace(w("a a b /b /a /a", tags))) == "a");
  try {
    trace(w("a /a a /a", tags));
    FAIL("expected NotPrime");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::not_prime);
  }
}

TEST_CASE("weight_and_height examples") {
  TagAlphabet tags;
  CHECK(weight_and_height(w("a a /a /a", tags)) == WeightHeight{0, 2});
  CHECK(weight_and_height(w("a b /b /a", tags)) == WeightHeight{0, 2});
  CHECK(weight_and_height(w("/a a", tags)) == WeightHeight{0, 0});
}

TEST_CASE("well-formed factors") {
  TagAlphabet tags;
  const auto f = fmt(well_formed_factors(w("a b /b b /b /a", tags)), tags);
  CHECK(f == std::vector<std::string>{"b /b", "b /b", "a b /b b /b /a"});
}

TEST_CASE("stack reduction agrees with rewriting") {
  gen::Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    const auto x = gen::dyckish_word(rng, 3, gen::uniform(rng, 0, 16));
    const auto r = dyck_reduce(x);
    CHECK(r.letters == oracle::naive_reduce(x));
    CHECK(r.canonical == is_canonical_shape(r.letters));
  }
}

TEST_CASE("confluence: rho(uv) = rho(rho(u) rho(v))") {
  gen::Rng rng(12);
  for (int i = 0; i < 500; ++i) {
    const auto u = gen::dyckish_word(rng, 2, gen::uniform(rng, 0, 20));
    const auto v = gen::dyckish_word(rng, 2, gen::uniform(rng, 0, 20));
    auto uv = u;
    uv.insert(uv.end(), v.begin(), v.end());
    CHECK(dyck_reduce(uv).letters == reduce_concat(dyck_reduce(u).letters, dyck_reduce(v).letters));
  }
}

TEST_CASE("prime characterization by prefix weights") {
  gen::Rng rng(13);
  for (int i = 0; i < 1000; ++i) {
    const auto x = i % 2 ? gen::prime(rng, 2) : gen::dyckish_word(rng, 2, gen::uniform(rng, 0, 12));
    CHECK(is_dyck_prime(x) == oracle::is_prime(x));
  }
}

TEST_CASE("trace length equals the number of primes of the interior") {
  gen::Rng rng(14);
  for (int i = 0; i < 300; ++i) {
    const auto p = gen::prime(rng, 3);
    const std::span<const Letter> interior(p.begin() + 1, p.end() - 1);
    CHECK(trace(p).size() == factor_primes(interior).size());
    CHECK(trace(p) == oracle::trace_of(p));
  }
}

TEST_CASE("D is bifix") {
  gen::Rng rng(15);
  for (int i = 0; i < 300; ++i) {
    const auto u = gen::prime(rng, 2);
    const auto v = gen::prime(rng, 2);
    if (u == v || u.size() >= v.size()) continue;
    const bool prefix = std::equal(u.begin(), u.end(), v.begin());
    const bool suffix = std::equal(u.rbegin(), u.rend(), v.rbegin());
    CHECK_FALSE(prefix);
    CHECK_FALSE(suffix);
  }
}
