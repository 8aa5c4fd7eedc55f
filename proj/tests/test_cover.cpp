#include <doctest.h>

#include <random>

#include "coarselab/cover.hpp"
#include "oracles.hpp"

using namespace coarselab;

namespace {

std::shared_ptr<FiniteQuotient> cycle(long long n) {
  return build_quotient(GroupSpec::free_abelian(1), SubgroupSpec::free_abelian({n}));
}

Cover cover_from(const Host& host, std::vector<std::vector<std::int64_t>> classes) {
  Cover cover;
  cover.host_id = host.id();
  for (const auto& cls : classes) {
    Bitset b = make_bitset(host.size());
    for (auto v : cls) b.set(static_cast<std::size_t>(v));
    cover.classes.push_back(std::move(b));
  }
  return cover;
}

Cover random_cover(const Host& host, std::mt19937_64& rng, int classes) {
  Cover cover;
  cover.host_id = host.id();
  cover.classes.assign(static_cast<std::size_t>(classes), make_bitset(host.size()));
  for (std::int64_t v = 0; v < host.size(); ++v) {
    cover.classes[rng() % cover.classes.size()].set(static_cast<std::size_t>(v));
    if (rng() % 3 == 0) cover.classes[rng() % cover.classes.size()].set(static_cast<std::size_t>(v));
  }
  return cover;
}

}  // namespace

TEST_CASE("verify_cover examples") {
  SUBCASE("single full class on the 8-cycle") {
    auto q = cycle(8);
    const auto cert = verify_cover(*q, full_cover(*q, 1), 0, 1, 4);
    CHECK(cert.pass);
    CHECK(cert.worst_component_diameter == 4);
    CHECK(cert.multiplicity == 1);
  }

  SUBCASE("alternating blocks on the 16-cycle") {
    auto q = cycle(16);
    const auto cover = cover_from(*q, {{0, 1, 2, 3, 8, 9, 10, 11}, {4, 5, 6, 7, 12, 13, 14, 15}});
    const auto pass = verify_cover(*q, cover, 1, 2, 3);
    CHECK(pass.pass);
    const auto fail = verify_cover(*q, cover, 1, 2, 2);
    CHECK_FALSE(fail.pass);
    CHECK(fail.worst_component_diameter == 3);
    CHECK(fail.failure.find("diameter 3") != std::string::npos);
  }

  SUBCASE("coverage holes are reported") {
    auto q = cycle(8);
    const auto cover = cover_from(*q, {{0, 1, 2, 3, 4, 5, 6}});
    const auto cert = verify_cover(*q, cover, 0, 1, 10);
    CHECK_FALSE(cert.pass);
    CHECK(cert.failure.find("coverage hole at vertex 7") != std::string::npos);
  }

  SUBCASE("too many classes fail the d bound") {
    auto q = cycle(8);
    const auto cert = verify_cover(*q, full_cover(*q, 3), 1, 1, 10);
    CHECK_FALSE(cert.pass);
  }
}

TEST_CASE("verify_cover agrees with the independent naive recomputation") {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 100; ++trial) {
    std::shared_ptr<FiniteQuotient> q;
    switch (trial % 3) {
      case 0:
        q = cycle(8 + static_cast<long long>(rng() % 40));
        break;
      case 1:
        q = build_quotient(GroupSpec::baumslag_solitar(2), SubgroupSpec::baumslag_solitar(15, 4));
        break;
      default:
        q = build_quotient(GroupSpec::lamplighter(2), SubgroupSpec::lamplighter(3));
        break;
    }
    const int classes = 1 + static_cast<int>(rng() % 3);
    const auto cover = random_cover(*q, rng, classes);
    const int r = 1 + static_cast<int>(rng() % 3);
    const std::int64_t R = static_cast<std::int64_t>(rng() % (static_cast<std::uint64_t>(q->diameter()) + 2));
    const auto ours = verify_cover(*q, cover, classes - 1, r, R);
    const auto naive = oracles::naive_verify(*q, cover.classes, classes - 1, r, R);
    CHECK(ours.pass == naive.pass);
    CHECK(ours.worst_component_diameter == naive.worst_diameter);
    CHECK(ours.multiplicity == naive.multiplicity);
  }
}

TEST_CASE("multiplicity") {
  auto q = cycle(12);
  SUBCASE("partitions have multiplicity 1") {
    const auto cover = cover_from(*q, {{0, 1, 2, 3, 4, 5}, {6, 7, 8, 9, 10, 11}});
    CHECK(multiplicity(*q, cover) == 1);
  }
  SUBCASE("duplicated full class has multiplicity 2") {
    Cover cover = full_cover(*q, 2);
    cover.classes[1] = cover.classes[0];
    CHECK(multiplicity(*q, cover) == 2);
  }
}

TEST_CASE("interval covers") {
  SUBCASE("C16 at r=2: blocks of four") {
    auto q = cycle(16);
    const auto cover = interval_cover(*q, 2);
    REQUIRE(cover.has_value());
    CHECK(cover->declared_R == 3);
    CHECK(verify_cover(*q, *cover, 1, 2, 3).pass);
  }
  SUBCASE("C8 at r=1") {
    auto q = cycle(8);
    const auto cover = interval_cover(*q, 1);
    REQUIRE(cover.has_value());
    CHECK(verify_cover(*q, *cover, 1, 1, 1).pass);
  }
  SUBCASE("C4 at r=1: each block a single edge") {
    auto q = cycle(4);
    const auto cover = interval_cover(*q, 1);
    REQUIRE(cover.has_value());
    CHECK(verify_cover(*q, *cover, 1, 1, 1).pass);
  }
  SUBCASE("below scale: not applicable") {
    auto q = cycle(7);
    CHECK_FALSE(interval_cover(*q, 2).has_value());
  }
  SUBCASE("irregular length widens the bound to 4r-1") {
    auto q = cycle(22);
    const auto cover = interval_cover(*q, 2);
    REQUIRE(cover.has_value());
    CHECK(cover->declared_R == 7);
    CHECK(verify_cover(*q, *cover, 1, 2, cover->declared_R).pass);
  }
  SUBCASE("declared bound map holds on every cyclic size") {
    for (long long n : {4, 5, 9, 12, 16, 23, 37, 64}) {
      auto q = cycle(n);
      const auto ctrl = interval_control(*q);
      for (int s = 1; s <= 4; ++s) {
        const auto cover = ctrl.make(s);
        REQUIRE(cover.has_value());
        CHECK(verify_cover(*q, *cover, 1, s, ctrl.bound(s)).pass);
      }
    }
  }
}

TEST_CASE("pullback covers") {
  SUBCASE("interval cover of C8 pulled back to C16") {
    auto shallow = cycle(8), deep = cycle(16);
    const auto cover = interval_cover(*shallow, 1);
    REQUIRE(cover.has_value());
    const auto pulled = pullback_cover(*cover, quotient_map(*deep, *shallow));
    CHECK(verify_cover(*deep, pulled, 1, 1, 1).pass);
    // components double in number, not in size
    const auto base_comps = r_components(*shallow, cover->classes[0], 1);
    const auto deep_comps = r_components(*deep, pulled.classes[0], 1);
    CHECK(deep_comps.size() == 2 * base_comps.size());
    for (const auto& comp : deep_comps) {
      CHECK(comp.vertices.size() == base_comps.front().vertices.size());
      CHECK(comp.diameter == base_comps.front().diameter);
    }
  }

  SUBCASE("full-space class pulls back to the full space") {
    auto shallow = cycle(8), deep = cycle(32);
    const auto pulled = pullback_cover(full_cover(*shallow, 1), quotient_map(*deep, *shallow));
    CHECK(pulled.classes[0].count() == static_cast<std::size_t>(deep->size()));
  }
}

TEST_CASE("control function contract") {
  for (long long n : {16, 24, 64}) {
    auto q = cycle(n);
    const auto ctrl = interval_control(*q);
    for (int s : {1, 2, 5}) {
      const auto cover = ctrl.make(s);
      REQUIRE(cover.has_value());
      CHECK(static_cast<int>(cover->classes.size()) == ctrl.class_count);
      CHECK(verify_cover(*q, *cover, ctrl.class_count - 1, s, ctrl.bound(s)).pass);
    }
  }
}
