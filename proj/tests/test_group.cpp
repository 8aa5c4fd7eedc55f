#include <doctest.h>

#include <algorithm>
#include <random>

#include "coarselab/group.hpp"
#include "oracles.hpp"

using namespace coarselab;

namespace {

GroupElement random_element(const GroupSpec& spec, std::mt19937_64& rng, int word_length = 8) {
  const auto gens = generators(spec);
  GroupElement g = identity(spec);
  const int len = static_cast<int>(rng() % static_cast<std::uint64_t>(word_length + 1));
  for (int i = 0; i < len; ++i) g = multiply(spec, gens[rng() % gens.size()].g, g);
  return g;
}

GroupElement bs(long long num, int exp, int t) { return GroupElement{BsElt{BigInt(num), exp, t}}; }

}  // namespace

TEST_CASE("free abelian multiplication is componentwise") {
  const auto spec = GroupSpec::free_abelian(2);
  const auto a = GroupElement{FreeAbelianElt{{1, 0}}};
  const auto b = GroupElement{FreeAbelianElt{{0, 1}}};
  CHECK(multiply(spec, a, b) == GroupElement{FreeAbelianElt{{1, 1}}});
}

TEST_CASE("BS(1,2) satisfies the defining relation") {
  const auto spec = GroupSpec::baumslag_solitar(2);
  const auto gens = generators(spec);
  const auto a = gens[0].g, a_inv = gens[1].g, b = gens[2].g, b_inv = gens[3].g;
  // b a b^-1 = a^2, canonical form (2, exp 0, 0)
  const auto conj = multiply(spec, multiply(spec, b, a), b_inv);
  CHECK(conj == bs(2, 0, 0));
  CHECK(conj == multiply(spec, a, a));
  CHECK(multiply(spec, a, a_inv) == identity(spec));

  SUBCASE("relation holds for 100 random conjugations") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
      const long long k = static_cast<long long>(rng() % 2001) - 1000;
      const auto ak = bs(k, 0, 0);
      const auto lhs = multiply(spec, multiply(spec, b, ak), b_inv);
      CHECK(lhs == bs(2 * k, 0, 0));
    }
  }
}

TEST_CASE("BS canonical forms reduce eagerly") {
  const auto spec = GroupSpec::baumslag_solitar(2);
  // 1/4 + 3/4 = 1, an integer
  const auto g = multiply(spec, bs(1, 2, 0), bs(3, 2, 0));
  CHECK(g == bs(1, 0, 0));
  // inverse of (1, exp 0, t 1) lands at t = -1
  const auto inv = inverse(spec, bs(1, 0, 1));
  CHECK(std::get<BsElt>(inv.v).t == -1);
  CHECK(multiply(spec, bs(1, 0, 1), inv) == identity(spec));
}

TEST_CASE("negative-n BS arithmetic") {
  const auto spec = GroupSpec::baumslag_solitar(-2);
  const auto gens = generators(spec);
  const auto conj = multiply(spec, multiply(spec, gens[2].g, gens[0].g), gens[3].g);
  CHECK(conj == bs(-2, 0, 0));
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = random_element(spec, rng);
    CHECK(multiply(spec, g, inverse(spec, g)) == identity(spec));
  }
}

TEST_CASE("lamplighter arithmetic") {
  const auto spec = GroupSpec::lamplighter(2);
  const auto gens = generators(spec);
  const auto lamp = gens[0].g;
  CHECK(multiply(spec, lamp, lamp) == identity(spec));  // order-2 lamp
  CHECK(generators(GroupSpec::lamplighter(3)).size() == 4);
  CHECK(gens.size() == 3);  // self-inverse lamp is not repeated

  const auto shift = gens[1].g;
  // t l t^-1 toggles the lamp at position 1
  const auto moved = multiply(spec, multiply(spec, shift, lamp), inverse(spec, shift));
  CHECK(moved == GroupElement{LampElt{{{1, 1}}, 0}});
}

TEST_CASE("inverse examples") {
  const auto z = GroupSpec::free_abelian(1);
  CHECK(inverse(z, GroupElement{FreeAbelianElt{{5}}}) == GroupElement{FreeAbelianElt{{-5}}});
  CHECK(inverse(z, identity(z)) == identity(z));
}

TEST_CASE("group axioms on random triples") {
  std::mt19937_64 rng(42);
  for (const auto& spec : {GroupSpec::free_abelian(2), GroupSpec::baumslag_solitar(2), GroupSpec::baumslag_solitar(3),
                           GroupSpec::lamplighter(2), GroupSpec::lamplighter(3)}) {
    for (int trial = 0; trial < 1000; ++trial) {
      const auto a = random_element(spec, rng, 6);
      const auto b = random_element(spec, rng, 6);
      const auto c = random_element(spec, rng, 6);
      CHECK(multiply(spec, multiply(spec, a, b), c) == multiply(spec, a, multiply(spec, b, c)));
      CHECK(multiply(spec, a, identity(spec)) == a);
      CHECK(multiply(spec, identity(spec), a) == a);
      CHECK(multiply(spec, a, inverse(spec, a)) == identity(spec));
      CHECK(multiply(spec, inverse(spec, a), a) == identity(spec));
    }
  }
}

TEST_CASE("balls") {
  const auto z = GroupSpec::free_abelian(1);
  CHECK(ball(z, 3, 1000).size() == 7);
  for (int r = 0; r < 6; ++r) CHECK(ball(z, r, 1000).size() == static_cast<std::size_t>(2 * r + 1));

  const auto spec = GroupSpec::baumslag_solitar(2);
  CHECK(ball(spec, 1, 1000).size() == 5);

  SUBCASE("ball(r) is contained in ball(r+1)") {
    for (int r = 0; r < 4; ++r) {
      const auto small = ball(spec, r, 100000);
      const auto big = ball(spec, r + 1, 100000);
      for (const auto& g : small) CHECK(std::binary_search(big.begin(), big.end(), g));
    }
  }

  SUBCASE("counts match the independent word enumerator up to r = 4") {
    for (int r = 0; r <= 4; ++r) {
      const auto words = oracles::enumerate_words(spec, r);
      CHECK(ball(spec, r, 100000).size() == words.size());
    }
  }

  SUBCASE("element cap is a resource error naming the cap") {
    CHECK_THROWS_AS(ball(spec, 8, 10), ResourceError);
    try {
      ball(spec, 8, 10);
    } catch (const ResourceError& e) {
      CHECK(std::string(e.what()).find("10") != std::string::npos);
    }
  }
}

TEST_CASE("word length") {
  const auto spec = GroupSpec::baumslag_solitar(2);
  CHECK(word_length(spec, identity(spec), 5) == 0);
  CHECK(word_length(spec, bs(2, 0, 0), 10) == 2);  // a^2
  CHECK(word_length(spec, bs(1, 1, 0), 10) == 3);  // b^-1 a b
  CHECK_FALSE(word_length(spec, bs(1, 3, 0), 3).has_value());  // deeper than the cutoff
}

TEST_CASE("spec json round trip") {
  for (const auto& spec : {GroupSpec::free_abelian(3), GroupSpec::baumslag_solitar(-3), GroupSpec::lamplighter(5)}) {
    CHECK(GroupSpec::from_json(spec.to_json()) == spec);
  }
  CHECK_THROWS_AS(GroupSpec::baumslag_solitar(1), ValidationError);
  CHECK_THROWS_AS(GroupSpec::lamplighter(1), ValidationError);
}

TEST_CASE("generating sets are symmetric and exclude the identity") {
  for (const auto& spec : {GroupSpec::free_abelian(2), GroupSpec::baumslag_solitar(2), GroupSpec::lamplighter(3)}) {
    const auto gens = generators(spec);
    for (const auto& g : gens) {
      CHECK_FALSE(g.g == identity(spec));
      const auto inv = inverse(spec, g.g);
      CHECK(std::any_of(gens.begin(), gens.end(), [&](const Generator& h) { return h.g == inv; }));
    }
  }
}

TEST_CASE("mismatched specs are usage errors") {
  const auto z = GroupSpec::free_abelian(1);
  const auto bs_spec = GroupSpec::baumslag_solitar(2);
  CHECK_THROWS_AS(multiply(z, identity(z), identity(bs_spec)), UsageError);
}
