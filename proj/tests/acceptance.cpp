// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Tolerances are pinned in code; every check is exact.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>

#include "coarselab/boxspace.hpp"
#include "coarselab/certificate_io.hpp"
#include "coarselab/experiment.hpp"
#include "coarselab/hirsch.hpp"
#include "coarselab/search.hpp"
#include "oracles.hpp"

using namespace coarselab;

namespace {

int failures = 0;

struct Criterion {
  std::string name;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;

  explicit Criterion(std::string n) : name(std::move(n)) {}

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }

  ~Criterion() {
    const auto ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %s (%lld ms)%s%s\n", ok ? "PASS" : "FAIL", name.c_str(), static_cast<long long>(ms),
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
};

std::shared_ptr<FiniteQuotient> cycle(long long n) {
  return build_quotient(GroupSpec::free_abelian(1), SubgroupSpec::free_abelian({n}));
}

std::shared_ptr<FiniteQuotient> bs_level(long long m, long long k, std::int64_t cap = 1 << 20) {
  return build_quotient(GroupSpec::baumslag_solitar(2), SubgroupSpec::baumslag_solitar(m, k), cap);
}

Cover bs_residue_cover(const FiniteQuotient& q) {
  const long long m = q.sub().bs_m;
  Cover cover;
  cover.host_id = q.id();
  cover.declared_r = 1;
  cover.classes.assign(3, make_bitset(q.size()));
  for (std::int64_t v = 0; v < q.size(); ++v) {
    const long long z = v % m, t = v / m;
    if (z % 3 == 1)
      cover.classes[0].set(static_cast<std::size_t>(v));
    else if (z % 3 == 2)
      cover.classes[1].set(static_cast<std::size_t>(v));
    else if (t % 2 == 0)
      cover.classes[2].set(static_cast<std::size_t>(v));
    else
      cover.classes[0].set(static_cast<std::size_t>(v));
  }
  return cover;
}

const std::string kOutDir = "acceptance_out";

void criterion_1_bs_upper_bound() {
  Criterion c{"1: BS(1,n) box dimension certificates, n in {2,3}, levels 1..4, r in {1,2}"};
  for (long long n : {2, 3}) {
    ExperimentConfig config;
    config.preset = "bs";
    config.n = n;
    config.levels = 4;
    config.r_values = {1, 2};
    config.outdir = kOutDir;
    const auto outcome = run_experiment(config);
    c.require(outcome.pass, "bs experiment failed for n = " + std::to_string(n));
    c.require(outcome.report.at("uniform_R_out_across_levels").get<bool>(),
              "R_out not identical across levels for n = " + std::to_string(n));
    // every per-level certificate is a passing 3-class certificate
    for (const auto& entry : outcome.report.at("per_level")) {
      c.require(entry.at("verdict").get<std::string>() == "pass", "per-level verdict fail");
      const auto cert = read_json((std::filesystem::path(kOutDir) / entry.at("certificate").get<std::string>()).string());
      c.require(cert.at("classes").size() == 3, "certificate does not have 3 classes");
      c.require(cert.at("R_out").get<std::int64_t>() == entry.at("R").get<std::int64_t>(), "R_out mismatch");
    }
  }

  // substitute for the lower bound: the Hirsch value is 2, and no single
  // class works below the (15,4) quotient's diameter
  c.require(hirsch(parse_expression("Ext(Local(1), Z(1))")) == 2, "hirsch(BS) != 2");
  auto q = bs_level(15, 4);
  const auto refuted = brute_force_min_cover(*q, 1, q->diameter() - 1, 0, 1000000);
  c.require(!refuted.exhausted && !refuted.min_classes.has_value() && refuted.refuted_below == 1,
            "single-class refutation below the diameter failed");
}

void criterion_2_z_box() {
  Criterion c{"2: dyadic cyclic family uniform at (1, r, 2r-1) and exact minimum on C32"};
  ExperimentConfig config;
  config.preset = "z";
  config.levels = 12;
  config.r_values = {1, 2, 4, 8};
  config.outdir = kOutDir;
  const auto outcome = run_experiment(config);
  c.require(outcome.pass, "z experiment failed");
  for (int r : {1, 2, 4, 8}) {
    const auto& v = outcome.report.at("uniform_R_by_r").at(std::to_string(r));
    c.require(!v.is_null() && v.get<std::int64_t>() == 2 * r - 1,
              "uniform bound at r=" + std::to_string(r) + " is not 2r-1");
  }

  auto q32 = cycle(32);
  const auto res = brute_force_min_cover(*q32, 1, 15, 3, 4000000);
  c.require(res.min_classes.has_value() && *res.min_classes == 2, "min cover of C32 at (1,15) is not 2");
  c.require(res.refuted_below == 1, "single-class refutation missing");
  c.require(res.witness && verify_cover(*q32, *res.witness, 1, 1, 15).pass, "witness does not verify");
}

void criterion_3_product() {
  Criterion c{"3: product covers on the 16x16 torus at (2, r, R_X + R_Y)"};
  auto torus = build_quotient(GroupSpec::free_abelian(2), SubgroupSpec::free_abelian({16, 16}));
  auto factor = cycle(16);
  for (int r : {1, 2}) {
    const auto fx = iterate_expand(*factor, interval_control(*factor), r, 3);
    const auto fy = iterate_expand(*factor, interval_control(*factor), r, 3);
    c.require(multiplicity(*factor, fx.cover) >= 2, "factor multiplicity below k-m");

    Cover product;
    product.host_id = torus->id();
    product.declared_r = r;
    product.declared_R = fx.R_out + fy.R_out;
    product.classes.assign(3, make_bitset(torus->size()));
    for (int cls = 0; cls < 3; ++cls)
      for (auto x = fx.cover.classes[static_cast<std::size_t>(cls)].find_first(); x != Bitset::npos;
           x = fx.cover.classes[static_cast<std::size_t>(cls)].find_next(x))
        for (auto y = fy.cover.classes[static_cast<std::size_t>(cls)].find_first(); y != Bitset::npos;
             y = fy.cover.classes[static_cast<std::size_t>(cls)].find_next(y))
          product.classes[static_cast<std::size_t>(cls)].set(static_cast<std::size_t>(x + 16 * y));

    const auto cert = verify_cover(*torus, product, 2, r, product.declared_R);
    c.require(cert.pass, "product cover failed at r=" + std::to_string(r));

    // pigeonhole on all 256 vertices
    std::vector<int> count(static_cast<std::size_t>(torus->size()), 0);
    for (const auto& cls : product.classes)
      for (auto v = cls.find_first(); v != Bitset::npos; v = cls.find_next(v)) ++count[v];
    for (auto n : count) c.require(n >= 1, "a vertex is uncovered");
  }
}

void criterion_4_expansion() {
  Criterion c{"4: expansion lemma property suite over 50 randomized instances"};
  std::mt19937_64 rng(20240);
  for (int instance = 0; instance < 50; ++instance) {
    // tight two-class inputs whose runs are wide enough that some vertex
    // sits farther than r from the other class
    std::shared_ptr<FiniteQuotient> q;
    Cover input;
    int r;
    if (instance % 2 == 0) {
      const int s = 2 + static_cast<int>(rng() % 3);
      r = 1 + static_cast<int>(rng() % (s - 1));
      const long long N = 4LL * s * (1 + static_cast<long long>(rng() % 4)) + 4 * static_cast<long long>(rng() % s);
      q = cycle(N);
      const auto made = interval_cover(*q, s);
      if (!made) {
        c.require(false, "interval cover unexpectedly not applicable");
        return;
      }
      input = *made;
    } else {
      r = 1 + static_cast<int>(rng() % 2);
      const long long k_bs = r == 1 ? 8 : 12;
      const long long moduli_r1[] = {17, 51, 85, 255};
      const long long moduli_r2[] = {13, 35, 91, 455};
      const long long m = (r == 1 ? moduli_r1 : moduli_r2)[rng() % 4];
      q = bs_level(m, k_bs);
      input.host_id = q->id();
      input.classes.assign(2, make_bitset(q->size()));
      for (std::int64_t v = 0; v < q->size(); ++v) {
        const long long t = v / m;
        input.classes[static_cast<std::size_t>(t < k_bs / 2 ? 0 : 1)].set(static_cast<std::size_t>(v));
      }
    }

    const int k = static_cast<int>(input.classes.size());
    const int mult_in = multiplicity(*q, input);
    c.require(mult_in == 1, "input multiplicity is not tight");
    const int n = k - mult_in;

    std::int64_t R_in = 0;
    for (const auto& cls : input.classes)
      for (const auto& comp : r_components(*q, cls, 3 * r)) R_in = std::max(R_in, comp.diameter);

    Bitset all = make_bitset(q->size());
    all.set();
    const auto res = expand_cover(*q, input.classes, n, r, R_in, all);

    c.require(res.classes.size() == static_cast<std::size_t>(k) + 1, "class count did not grow by one");
    Cover out;
    out.host_id = q->id();
    out.classes = res.classes;
    c.require(multiplicity(*q, out) == mult_in + 1, "multiplicity did not grow by exactly one");
    c.require(verify_cover(*q, out, k, r, R_in + 2 * r).pass, "output does not verify at (k, r, R_in + 2r)");
    for (std::size_t i = 0; i < res.w_sets.size() && c.ok; ++i)
      for (std::size_t j = i + 1; j < res.w_sets.size() && c.ok; ++j)
        for (auto u = res.w_sets[i].find_first(); u != Bitset::npos && c.ok; u = res.w_sets[i].find_next(u))
          for (auto v = res.w_sets[j].find_first(); v != Bitset::npos; v = res.w_sets[j].find_next(v))
            if (q->distance(static_cast<std::int64_t>(u), static_cast<std::int64_t>(v)) <= r) {
              c.require(false, "W pieces are not r-disjoint");
              break;
            }
  }
}

void criterion_5_translation() {
  Criterion c{"5: orbit components equal metric components on 20 random subsets of 3 quotients"};
  std::mt19937_64 rng(31337);
  std::vector<std::shared_ptr<FiniteQuotient>> hosts = {
      cycle(16), bs_level(15, 4), build_quotient(GroupSpec::lamplighter(2), SubgroupSpec::lamplighter(3))};
  for (const auto& q : hosts) {
    for (int trial = 0; trial < 20; ++trial) {
      Bitset subset = make_bitset(q->size());
      for (std::int64_t v = 0; v < q->size(); ++v)
        if (rng() % 3 == 0) subset.set(static_cast<std::size_t>(v));
      for (int r = 1; r <= 3; ++r)
        c.require(translation_check(*q, subset, r), "partition mismatch on " + q->id());
    }
  }
}

void criterion_6_odometer() {
  Criterion c{"6: pulled-back covers preserve component structure past the injectivity level"};
  // dyadic family
  {
    auto base = cycle(8);
    const auto cover = interval_cover(*base, 1);
    c.require(cover.has_value(), "interval cover missing");
    const auto verdict = odometer_equivalence_check(*base, *cover, {cycle(16), cycle(32), cycle(64)}, 1);
    c.require(verdict.pass, "dyadic transfer failed: " + verdict.detail);
    Filtration f = Filtration::standard(GroupSpec::free_abelian(1), 6);
    const auto inj = f.injectivity_level(1);
    c.require(inj.has_value() && *inj <= 3, "base level below the injectivity level");
  }
  // BS family: base (15,4), three deeper levels
  {
    auto base = bs_level(15, 4);
    const auto cover = bs_residue_cover(*base);
    c.require(verify_cover(*base, cover, 2, 1, base->diameter()).pass, "residue cover invalid");
    const auto verdict = odometer_equivalence_check(
        *base, cover, {bs_level(255, 8), bs_level(65535, 16, 1100000), bs_level(65535, 32, 2200000)}, 1);
    c.require(verdict.pass, "BS transfer failed: " + verdict.detail);
    Filtration f = Filtration::standard(GroupSpec::baumslag_solitar(2), 4);
    const auto inj = f.injectivity_level(1);
    c.require(inj.has_value() && *inj <= 2, "base level below the injectivity level");
  }
}

void criterion_7_union_lemma() {
  Criterion c{"7: finite union bound holds on 1000 randomized hypothesis-satisfying instances"};
  std::mt19937_64 rng(777);
  int done = 0;
  while (done < 1000) {
    auto q = cycle(48 + static_cast<long long>(rng() % 48));
    Bitset B = make_bitset(q->size());
    for (std::int64_t v = 0; v < q->size(); ++v)
      if (rng() % 6 == 0) B.set(static_cast<std::size_t>(v));
    const int r_B = 1 + static_cast<int>(rng() % 2);
    std::int64_t R_B = 0;
    for (const auto& comp : r_components(*q, B, r_B)) R_B = std::max(R_B, comp.diameter);
    const int r_A = static_cast<int>(R_B + 2 * r_B + 1 + static_cast<int>(rng() % 3));
    Bitset A = make_bitset(q->size());
    for (std::int64_t v = 0; v < q->size(); ++v)
      if (rng() % 3 == 0) A.set(static_cast<std::size_t>(v));
    std::int64_t R_A = 0;
    for (const auto& comp : r_components(*q, A, r_A)) R_A = std::max(R_A, comp.diameter);
    const auto res = union_components_check(*q, A, B, r_A, R_A, r_B, R_B);
    c.require(res.status == UnionCheckResult::Status::Pass, "violation: " + res.detail);
    ++done;
  }
}

void criterion_8_hirsch() {
  Criterion c{"8: Hirsch calculus values and cross-pipeline consistency"};
  c.require(hirsch(parse_expression("Ext(Local(1), Z(1))")) == 2, "BS expression != 2");
  c.require(hirsch(parse_expression("Wreath(F(2), Z(1))")) == 1, "lamplighter expression != 1");
  for (long long m1 : {1, 2, 3})
    for (long long m2 : {1, 2, 4}) {
      const auto text = "Ext(Z(" + std::to_string(m1) + "), Z(" + std::to_string(m2) + "))";
      c.require(hirsch(parse_expression(text)) == m1 + m2, "generalized extension mismatch");
    }
  for (long long n : {1, 2, 3, 7})
    c.require(hirsch(parse_expression("Z(" + std::to_string(n) + ")")) == n, "free abelian rank mismatch");

  // certified dimensions never exceed the Hirsch upper bound
  struct Row {
    const char* expr;
    int certified_d;
  };
  for (const Row& row : {Row{"Ext(Local(1), Z(1))", 2}, Row{"Z(1)", 1}, Row{"Ext(Z(1), Z(1))", 2},
                         Row{"Wreath(F(2), Z(1))", 1}}) {
    c.require(box_dimension_upper_bound(parse_expression(row.expr)) >= row.certified_d,
              std::string("upper bound below the certified dimension for ") + row.expr);
  }
}

void criterion_9_oracles() {
  Criterion c{"9: verifier matches the naive recomputation; balls match the word enumerator"};
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 100; ++trial) {
    std::shared_ptr<FiniteQuotient> q;
    switch (trial % 3) {
      case 0:
        q = cycle(8 + static_cast<long long>(rng() % 40));
        break;
      case 1:
        q = bs_level(trial % 2 ? 15 : 5, 4);
        break;
      default:
        q = build_quotient(GroupSpec::lamplighter(2), SubgroupSpec::lamplighter(3));
        break;
    }
    const int classes = 1 + static_cast<int>(rng() % 3);
    Cover cover;
    cover.host_id = q->id();
    cover.classes.assign(static_cast<std::size_t>(classes), make_bitset(q->size()));
    for (std::int64_t v = 0; v < q->size(); ++v) {
      cover.classes[rng() % cover.classes.size()].set(static_cast<std::size_t>(v));
      if (rng() % 3 == 0) cover.classes[rng() % cover.classes.size()].set(static_cast<std::size_t>(v));
    }
    const int r = 1 + static_cast<int>(rng() % 3);
    const std::int64_t R = static_cast<std::int64_t>(rng() % (static_cast<std::uint64_t>(q->diameter()) + 2));
    const auto ours = verify_cover(*q, cover, classes - 1, r, R);
    const auto naive = oracles::naive_verify(*q, cover.classes, classes - 1, r, R);
    c.require(ours.pass == naive.pass, "verdict mismatch");
    c.require(ours.worst_component_diameter == naive.worst_diameter, "worst diameter mismatch");
    c.require(ours.multiplicity == naive.multiplicity, "multiplicity mismatch");
  }

  const auto spec = GroupSpec::baumslag_solitar(2);
  for (int r = 0; r <= 4; ++r) {
    const auto words = oracles::enumerate_words(spec, r);
    c.require(ball(spec, r, 1000000).size() == words.size(),
              "ball count mismatch at r = " + std::to_string(r));
  }
}

}  // namespace

int main() {
  std::filesystem::create_directories(kOutDir);
  criterion_1_bs_upper_bound();
  criterion_2_z_box();
  criterion_3_product();
  criterion_4_expansion();
  criterion_5_translation();
  criterion_6_odometer();
  criterion_7_union_lemma();
  criterion_8_hirsch();
  criterion_9_oracles();
  if (failures) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
