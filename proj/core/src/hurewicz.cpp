#include "coarselab/hurewicz.hpp"

#include <algorithm>
#include <random>

#include "coarselab/certificate_io.hpp"

namespace coarselab {

Bitset EquivariantQuotientMap::preimage(const Bitset& codomain_set) const {
  Bitset out = make_bitset(domain->size());
  for (std::size_t v = 0; v < vmap.size(); ++v)
    if (codomain_set.test(static_cast<std::size_t>(vmap[v]))) out.set(v);
  return out;
}

EquivariantQuotientMap build_map(const FiniteQuotient& domain, int base_rank) {
  EquivariantQuotientMap map;
  map.domain = &domain;
  const auto& spec = domain.spec();
  const auto& sub = domain.sub();

  switch (spec.family) {
    case Family::BaumslagSolitar: {
      map.codomain = build_quotient(GroupSpec::free_abelian(1), SubgroupSpec::free_abelian({sub.bs_k}));
      map.vmap.resize(static_cast<std::size_t>(domain.size()));
      for (std::int64_t v = 0; v < domain.size(); ++v)
        map.vmap[static_cast<std::size_t>(v)] = static_cast<std::int32_t>(v / sub.bs_m);
      map.generator_image = {-1, -1, 0, 1};  // a, a^-1 -> identity; b, b^-1 -> +-1
      break;
    }
    case Family::FreeAbelian: {
      if (base_rank < 1 || base_rank > spec.rank) throw ValidationError("base rank out of range");
      std::vector<long long> base_mod(sub.moduli.begin(), sub.moduli.begin() + base_rank);
      map.codomain = build_quotient(GroupSpec::free_abelian(base_rank), SubgroupSpec::free_abelian(base_mod));
      std::int64_t base_size = 1;
      for (long long m : base_mod) base_size *= m;
      map.vmap.resize(static_cast<std::size_t>(domain.size()));
      for (std::int64_t v = 0; v < domain.size(); ++v)
        map.vmap[static_cast<std::size_t>(v)] = static_cast<std::int32_t>(v % base_size);
      for (int i = 0; i < spec.rank; ++i) {
        if (i < base_rank) {
          map.generator_image.push_back(2 * i);
          map.generator_image.push_back(2 * i + 1);
        } else {
          map.generator_image.push_back(-1);
          map.generator_image.push_back(-1);
        }
      }
      break;
    }
    case Family::Lamplighter: {
      map.codomain = build_quotient(GroupSpec::free_abelian(1), SubgroupSpec::free_abelian({sub.period}));
      std::int64_t pk = 1;
      for (long long i = 0; i < sub.period; ++i) pk *= spec.p;
      map.vmap.resize(static_cast<std::size_t>(domain.size()));
      for (std::int64_t v = 0; v < domain.size(); ++v)
        map.vmap[static_cast<std::size_t>(v)] = static_cast<std::int32_t>(v / pk);
      map.generator_image.assign(domain.degree(), -1);
      map.generator_image[domain.degree() - 2] = 0;  // shift up
      map.generator_image[domain.degree() - 1] = 1;  // shift down
      break;
    }
  }

  map.fiber_size = domain.size() / map.codomain->size();

  // equivariance f(s.x) = pi(s).f(x) on generator edges; exhaustive on small
  // quotients, sampled above.
  const auto check_vertex = [&](std::int64_t v) {
    std::vector<std::int64_t> nb(domain.degree()), cnb(map.codomain->degree());
    domain.neighbors(v, nb.data());
    map.codomain->neighbors(map.apply(v), cnb.data());
    for (int i = 0; i < domain.degree(); ++i) {
      const std::int64_t expect =
          map.generator_image[i] < 0 ? map.apply(v) : cnb[static_cast<std::size_t>(map.generator_image[i])];
      if (map.apply(nb[i]) != expect) throw std::logic_error("equivariance violated at vertex " + domain.label(v));
    }
  };
  if (domain.size() <= 65536) {
    for (std::int64_t v = 0; v < domain.size(); ++v) check_vertex(v);
  } else {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 10000; ++i)
      check_vertex(static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(domain.size())));
  }

  // fibers are coset translates, so all have the same size
  std::vector<std::int64_t> fiber_count(static_cast<std::size_t>(map.codomain->size()), 0);
  for (auto y : map.vmap) ++fiber_count[static_cast<std::size_t>(y)];
  for (auto c : fiber_count)
    if (c != map.fiber_size) throw std::logic_error("fibers have unequal cardinality");
  return map;
}

namespace {

// Cyclic offset structure of an arc in the codomain cycle C_k: base point,
// span (max offset).  Prefers the representation with the smallest span.
struct ArcFrame {
  std::int64_t t0 = 0;
  std::int64_t span = 0;
};

ArcFrame arc_frame(const std::vector<std::int64_t>& arc, std::int64_t k) {
  ArcFrame best{0, k - 1};
  Bitset in_arc(static_cast<std::size_t>(k));
  for (auto t : arc) in_arc.set(static_cast<std::size_t>(t));
  bool improved = false;
  for (auto t0 : arc) {
    // candidate base: predecessor not in the arc
    if (in_arc.test(static_cast<std::size_t>((t0 - 1 + k) % k))) continue;
    std::int64_t span = 0;
    for (auto t : arc) span = std::max(span, (t - t0 + k) % k);
    if (!improved || span < best.span) {
      best = {t0, span};
      improved = true;
    }
  }
  return best;  // no improvement means the arc wraps the whole cycle
}

FiberCoverOracle bs_oracle(const EquivariantQuotientMap& map) {
  const FiniteQuotient& Q = *map.domain;
  const long long m = Q.sub().bs_m, k = Q.sub().bs_k, n = Q.spec().n;
  const long long absn = std::abs(n);
  const GroupSpec spec = Q.spec();
  const std::int64_t domain_size = Q.size();

  std::vector<long long> npow(static_cast<std::size_t>(k));
  long long nn = ((n % m) + m) % m;
  npow[0] = 1 % m;
  for (long long i = 1; i < k; ++i)
    npow[static_cast<std::size_t>(i)] = static_cast<long long>((__int128)npow[static_cast<std::size_t>(i - 1)] * nn % m);

  FiberCoverOracle oracle;
  oracle.class_count = 2;
  oracle.bound = [absn](std::int64_t s, std::int64_t span) {
    std::int64_t log_term = 0, pw = 1;
    while (pw < 4 * std::max<std::int64_t>(s, 1)) {
      pw *= absn;
      ++log_term;
    }
    return span + (absn + 4) * (2 * s + span + log_term + 4);
  };
  oracle.make = [m, k, npow, spec, absn, domain_size](const Bitset& arc_bits,
                                                      int s) -> std::optional<std::vector<Bitset>> {
    const auto arc = bits_of(arc_bits);
    const auto frame = arc_frame(arc, k);
    Bitset P = make_bitset(domain_size);
    for (auto t : arc)
      for (long long z = 0; z < m; ++z) P.set(static_cast<std::size_t>(z + m * t));

    // Integer step bound for the rescaled fiber coordinate
    //   w(z,t) = z * n^{E + (t_top - t)} mod m:
    // a step of word length <= s changes w by an integer of magnitude at most
    // max |num| * n^{E - exp + span} over the ball of radius s, where E is the
    // largest denominator exponent in that ball.  Blocks of that scale in w
    // then confine every s-chain inside the preimage.
    constexpr int kEnumRadius = 8;
    BigInt delta = 0;
    int E = 0;
    if (s <= kEnumRadius) {
      const auto elements = ball(spec, s, 200000);
      for (const auto& g : elements) E = std::max(E, std::get<BsElt>(g.v).exp);
      for (const auto& g : elements) {
        const auto& e = std::get<BsElt>(g.v);
        BigInt step = abs(e.num);
        for (std::int64_t j = 0; j < E - e.exp + frame.span; ++j) step *= absn;
        delta = std::max(delta, step);
      }
    }

    std::vector<Bitset> classes(2, make_bitset(domain_size));
    if (s <= kEnumRadius && delta > 0 && 4 * delta <= m) {
      const long long d64 = static_cast<long long>(delta);
      const long long q = 2 * (m / (4 * d64));
      const long long len_lo = m / q, hi = m % q;
      const long long t_top = (frame.t0 + frame.span) % k;
      for (auto v = P.find_first(); v != Bitset::npos; v = P.find_next(v)) {
        const long long z = static_cast<long long>(v) % m, t = static_cast<long long>(v) / m;
        const long long delta_t = (t_top - t + k) % k;
        const long long idx = static_cast<long long>((E + delta_t) % k);
        const long long w = static_cast<long long>((__int128)z * npow[static_cast<std::size_t>(idx)] % m);
        const long long run = w < hi * (len_lo + 1) ? w / (len_lo + 1) : hi + (w - hi * (len_lo + 1)) / len_lo;
        classes[static_cast<std::size_t>(run % 2)].set(v);
      }
      return classes;
    }

    classes[0] = P;  // single-class fallback: the whole preimage, padded
    return classes;
  };
  return oracle;
}

FiberCoverOracle fa_oracle(const EquivariantQuotientMap& map, int base_rank) {
  const FiniteQuotient& Q = *map.domain;
  const auto& moduli = Q.sub().moduli;
  const int rank = Q.spec().rank;
  const int fiber_dim = rank - base_rank;
  if (fiber_dim > 1) throw ValidationError("free abelian fiber oracles support fiber rank <= 1");

  const std::int64_t domain_size = Q.size();
  std::int64_t base_size = 1;
  for (int i = 0; i < base_rank; ++i) base_size *= moduli[static_cast<std::size_t>(i)];

  auto preimage_of = [domain_size, base_size](const Bitset& arc_bits) {
    Bitset P = make_bitset(domain_size);
    for (std::int64_t v = 0; v < domain_size; ++v)
      if (arc_bits.test(static_cast<std::size_t>(v % base_size))) P.set(static_cast<std::size_t>(v));
    return P;
  };

  FiberCoverOracle oracle;
  oracle.class_count = fiber_dim + 1;
  if (fiber_dim == 0) {
    oracle.bound = [](std::int64_t s, std::int64_t span) { return span + s; };
    oracle.make = [preimage_of](const Bitset& arc_bits, int) -> std::optional<std::vector<Bitset>> {
      return std::vector<Bitset>{preimage_of(arc_bits)};
    };
    return oracle;
  }

  const long long fiber_mod = moduli.back();
  oracle.bound = [](std::int64_t s, std::int64_t span) { return span + 4 * s; };
  oracle.make = [preimage_of, fiber_mod, base_size,
                 domain_size](const Bitset& arc_bits, int s) -> std::optional<std::vector<Bitset>> {
    Bitset P = preimage_of(arc_bits);
    std::vector<Bitset> classes(2, make_bitset(domain_size));
    if (fiber_mod >= 4LL * s) {
      const long long q = 2 * (fiber_mod / (4LL * s));
      const long long len_lo = fiber_mod / q, hi = fiber_mod % q;
      for (auto v = P.find_first(); v != Bitset::npos; v = P.find_next(v)) {
        const long long w = static_cast<long long>(v) / base_size;  // fiber coordinate
        const long long run = w < hi * (len_lo + 1) ? w / (len_lo + 1) : hi + (w - hi * (len_lo + 1)) / len_lo;
        classes[static_cast<std::size_t>(run % 2)].set(v);
      }
    } else {
      classes[0] = P;
    }
    return classes;
  };
  return oracle;
}

FiberCoverOracle lamplighter_oracle(const EquivariantQuotientMap& map) {
  const std::int64_t domain_size = map.domain->size();
  const std::int64_t fiber = map.fiber_size;
  FiberCoverOracle oracle;
  oracle.class_count = 1;
  oracle.bound = [](std::int64_t s, std::int64_t span) { return 4 * (span + 2 * s + 2); };
  oracle.make = [domain_size, fiber](const Bitset& arc_bits, int) -> std::optional<std::vector<Bitset>> {
    Bitset P = make_bitset(domain_size);
    for (std::int64_t v = 0; v < domain_size; ++v)
      if (arc_bits.test(static_cast<std::size_t>(v / fiber))) P.set(static_cast<std::size_t>(v));
    return std::vector<Bitset>{std::move(P)};
  };
  return oracle;
}

}  // namespace

FiberCoverOracle make_fiber_oracle(const EquivariantQuotientMap& map) {
  switch (map.domain->spec().family) {
    case Family::BaumslagSolitar:
      return bs_oracle(map);
    case Family::FreeAbelian: {
      const int base_rank = map.codomain->spec().rank;
      return fa_oracle(map, base_rank);
    }
    case Family::Lamplighter:
      return lamplighter_oracle(map);
  }
  throw UsageError("bad family");
}

namespace {

std::int64_t ladder_bound(const std::function<std::int64_t(std::int64_t)>& raw, int expansions, std::int64_t s) {
  std::int64_t radius = s;
  for (int i = 0; i < expansions; ++i) radius *= 3;
  std::int64_t bound = raw(radius);
  while (radius > s) {
    radius /= 3;
    bound += 2 * radius;
  }
  return bound;
}

}  // namespace

RadiusSchedule build_schedule(int r, int m, int n, const std::function<std::int64_t(std::int64_t)>& base_bound,
                              const std::function<std::int64_t(std::int64_t, std::int64_t)>& fiber_bound) {
  if (r < 1) throw UsageError("schedule radius must be >= 1");
  RadiusSchedule sched;
  sched.m = m;
  sched.n = n;
  sched.k = m + n + 1;
  sched.s_y.assign(static_cast<std::size_t>(n) + 2, 0);
  sched.t_y.assign(static_cast<std::size_t>(n) + 2, 0);
  sched.s_x.assign(static_cast<std::size_t>(n) + 2, 0);
  sched.t_x.assign(static_cast<std::size_t>(n) + 2, 0);

  const int base_expansions = sched.k - (n + 1);
  for (int i = n + 1; i >= 0; --i) {
    sched.s_y[static_cast<std::size_t>(i)] = (i == n + 1) ? r : 3 * sched.t_y[static_cast<std::size_t>(i) + 1];
    sched.t_y[static_cast<std::size_t>(i)] =
        ladder_bound(base_bound, base_expansions, sched.s_y[static_cast<std::size_t>(i)]);
  }
  sched.span_bound = 2 * sched.t_y[0];

  const int fiber_expansions = sched.k - (m + 1);
  const auto fiber_raw = [&](std::int64_t s) { return fiber_bound(s, sched.span_bound); };
  for (int i = n + 1; i >= 0; --i) {
    sched.s_x[static_cast<std::size_t>(i)] = (i == n + 1) ? r : 3 * sched.t_x[static_cast<std::size_t>(i) + 1];
    sched.t_x[static_cast<std::size_t>(i)] =
        ladder_bound(fiber_raw, fiber_expansions, sched.s_x[static_cast<std::size_t>(i)]);
  }

  for (int i = n + 1; i >= 1; --i) {
    if (sched.s_y[static_cast<std::size_t>(i)] > sched.t_y[static_cast<std::size_t>(i)] ||
        sched.s_x[static_cast<std::size_t>(i)] > sched.t_x[static_cast<std::size_t>(i)] ||
        sched.t_y[static_cast<std::size_t>(i)] > sched.s_y[static_cast<std::size_t>(i) - 1] ||
        sched.t_x[static_cast<std::size_t>(i)] > sched.s_x[static_cast<std::size_t>(i) - 1])
      throw std::logic_error("schedule nesting violated");
  }
  return sched;
}

std::vector<Bitset> lift_cover_over_components(const EquivariantQuotientMap& map, const Bitset& B,
                                               const FiberCoverOracle& oracle, int s_x, int s_y, int k,
                                               std::int64_t span_bound) {
  const FiniteQuotient& X = *map.domain;
  const FiniteQuotient& Y = *map.codomain;
  std::vector<Bitset> classes(static_cast<std::size_t>(k), make_bitset(X.size()));
  if (B.none()) return classes;

  const auto arcs = r_components(Y, B, s_y);
  std::vector<int> arc_of(static_cast<std::size_t>(Y.size()), -1);
  for (std::size_t a = 0; a < arcs.size(); ++a)
    for (auto t : arcs[a].vertices) arc_of[static_cast<std::size_t>(t)] = static_cast<int>(a);

  for (const auto& arc : arcs) {
    Bitset arc_bits = make_bitset(Y.size());
    for (auto t : arc.vertices) arc_bits.set(static_cast<std::size_t>(t));
    Bitset P = map.preimage(arc_bits);

    ControlFunction ctrl;
    ctrl.class_count = oracle.class_count;
    ctrl.bound = [&oracle, span_bound](int s) { return oracle.bound(s, span_bound); };
    ctrl.make = [&](int s) -> std::optional<Cover> {
      auto made = oracle.make(arc_bits, s);
      if (!made) return std::nullopt;
      Cover c;
      c.host_id = X.id();
      c.declared_r = s;
      c.declared_R = oracle.bound(s, span_bound);
      c.classes = std::move(*made);
      while (static_cast<int>(c.classes.size()) < oracle.class_count) c.classes.push_back(make_bitset(X.size()));
      return c;
    };

    auto expanded = iterate_expand_on(X, ctrl, s_x, k, P);
    for (int j = 0; j < k; ++j) classes[static_cast<std::size_t>(j)] |= expanded.cover.classes[static_cast<std::size_t>(j)];
  }

  if (arcs.size() > 1) {
    const auto f = [&map](std::int64_t v) { return map.apply(v); };
    for (const auto& cls : classes) {
      for (const auto& comp : paired_components(X, cls, s_x, Y, f, s_y)) {
        const int a0 = arc_of[static_cast<std::size_t>(map.apply(comp.vertices.front()))];
        for (auto v : comp.vertices)
          if (arc_of[static_cast<std::size_t>(map.apply(v))] != a0)
            throw std::logic_error("lifted component straddles two base components");
      }
    }
  }
  return classes;
}

HurewiczResult hurewicz_cover(const EquivariantQuotientMap& map, int r, const ControlFunction& base_ctrl,
                              const FiberCoverOracle& oracle, int m, int n) {
  const FiniteQuotient& X = *map.domain;
  const FiniteQuotient& Y = *map.codomain;
  const int k = m + n + 1;

  HurewiczResult out;
  out.codomain = map.codomain;
  out.schedule = build_schedule(r, m, n, base_ctrl.bound, oracle.bound);
  const auto& sched = out.schedule;
  out.r_out = sched.r_out();

  for (std::size_t i = 1; i < sched.s_x.size(); ++i) {
    std::int64_t radius = sched.s_x[i];
    for (int e = 0; e < k - (m + 1); ++e) radius *= 3;
    for (std::int64_t rad = radius; rad >= sched.s_x[i]; rad /= 3) {
      out.fiber_bound_map.emplace_back(rad, oracle.bound(rad, sched.span_bound));
      if (rad == sched.s_x[i]) break;
    }
  }
  std::sort(out.fiber_bound_map.begin(), out.fiber_bound_map.end());
  out.fiber_bound_map.erase(std::unique(out.fiber_bound_map.begin(), out.fiber_bound_map.end()),
                            out.fiber_bound_map.end());

  // (a) base cover A_1..A_{n+1} with s_y[0]-components t_y[0]-bounded
  auto base = base_ctrl.make(static_cast<int>(sched.s_y[0]));
  if (!base) throw ValidationError("base control function declined radius " + std::to_string(sched.s_y[0]));
  out.base_cover = *base;
  out.base_certificate = verify_cover(Y, out.base_cover, n, static_cast<int>(sched.s_y[0]), sched.t_y[0]);
  if (!out.base_certificate.pass)
    throw ValidationError("base cover failed verification: " + out.base_certificate.failure);

  std::vector<Bitset> D(static_cast<std::size_t>(k), make_bitset(X.size()));
  // per-stage covers kept for the covering argument below
  std::vector<std::vector<Bitset>> stage_B, stage_U;

  for (int i = 0; i < n + 1; ++i) {
    const std::size_t scale = static_cast<std::size_t>(i) + 1;
    const Bitset& A = out.base_cover.classes[static_cast<std::size_t>(i)];
    if (A.none()) {
      stage_B.emplace_back();
      stage_U.emplace_back();
      continue;
    }
    // (b) k classes on the codomain at scale s_y[i+1], restricted to A_i
    auto U = iterate_expand(Y, base_ctrl, static_cast<int>(sched.s_y[scale]), k).cover.classes;
    for (auto& u : U) u &= A;
    // (c) k classes covering the preimage of A_i at fiber scale s_x[i+1]
    auto B = lift_cover_over_components(map, A, oracle, static_cast<int>(sched.s_x[scale]),
                                        static_cast<int>(sched.s_y[scale]), k, sched.span_bound);
    // (d) D_i^j = B_i^j /\ f^{-1}(U_i^j)
    for (int j = 0; j < k; ++j) {
      Bitset pre = map.preimage(U[static_cast<std::size_t>(j)]);
      pre &= B[static_cast<std::size_t>(j)];
      D[static_cast<std::size_t>(j)] |= pre;
    }
    stage_B.push_back(std::move(B));
    stage_U.push_back(std::move(U));
  }

  // covering argument, checked exactly: the stage of each vertex provides
  // >= k-m classes upstairs and >= k-n downstairs, which must intersect.
  for (std::int64_t x = 0; x < X.size(); ++x) {
    int stage = -1;
    for (int i = 0; i < n + 1; ++i) {
      if (out.base_cover.classes[static_cast<std::size_t>(i)].test(static_cast<std::size_t>(map.apply(x)))) {
        stage = i;
        break;
      }
    }
    if (stage < 0) throw std::logic_error("base cover misses a codomain vertex");
    int count_b = 0, count_u = 0;
    bool in_d = false;
    for (int j = 0; j < k; ++j) {
      if (stage_B[static_cast<std::size_t>(stage)][static_cast<std::size_t>(j)].test(static_cast<std::size_t>(x)))
        ++count_b;
      if (stage_U[static_cast<std::size_t>(stage)][static_cast<std::size_t>(j)].test(
              static_cast<std::size_t>(map.apply(x))))
        ++count_u;
      if (D[static_cast<std::size_t>(j)].test(static_cast<std::size_t>(x))) in_d = true;
    }
    if (count_b < k - m || count_u < k - n || !in_d)
      throw std::logic_error("covering argument violated at vertex " + X.label(x));
  }

  out.cover.host_id = X.id();
  out.cover.declared_r = r;
  out.cover.declared_R = out.r_out;
  out.cover.classes = std::move(D);
  out.certificate = verify_cover(X, out.cover, m + n, r, out.r_out);
  return out;
}

LevelSetup make_level_setup(const FiniteQuotient& domain, int base_rank) {
  LevelSetup setup;
  setup.map = build_map(domain, base_rank);
  setup.base_ctrl = interval_control(*setup.map.codomain);
  setup.fiber_oracle = make_fiber_oracle(setup.map);
  setup.fiber_dim = setup.fiber_oracle.class_count - 1;
  setup.base_dim = 1;
  if (domain.spec().family == Family::FreeAbelian && domain.spec().rank == base_rank) setup.fiber_dim = 0;
  return setup;
}

FamilyResult uniform_hurewicz_family(const std::vector<std::shared_ptr<FiniteQuotient>>& levels, int r) {
  FamilyResult out;
  out.all_pass = true;
  out.uniform_r_out = true;
  for (const auto& q : levels) {
    LevelSetup setup = make_level_setup(*q);
    auto res = hurewicz_cover(setup.map, r, setup.base_ctrl, setup.fiber_oracle, setup.fiber_dim, setup.base_dim);
    out.all_pass = out.all_pass && res.certificate.pass;
    if (out.per_level.empty())
      out.r_out = res.r_out;
    else if (res.r_out != out.r_out)
      out.uniform_r_out = false;
    out.per_level.push_back(std::move(res));
  }
  return out;
}

json hurewicz_certificate_to_json(const FiniteQuotient& host, const HurewiczResult& result) {
  json j = certificate_to_json(host, result.cover, result.certificate);
  json sched;
  sched["s_Y"] = result.schedule.s_y;
  sched["t_Y"] = result.schedule.t_y;
  sched["s_X"] = result.schedule.s_x;
  sched["t_X"] = result.schedule.t_x;
  j["schedule"] = std::move(sched);
  j["base_cover"] = certificate_to_json(*result.codomain, result.base_cover, result.base_certificate);
  j["fiber_bound_map"] = json::array();
  for (const auto& [s, R] : result.fiber_bound_map) j["fiber_bound_map"].push_back(json::array({s, R}));
  j["R_out"] = result.r_out;
  return j;
}

}  // namespace coarselab
