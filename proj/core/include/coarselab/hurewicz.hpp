#pragma once

#include "coarselab/expansion.hpp"

namespace coarselab {

/// Generator-equivariant 1-Lipschitz projection of a quotient onto the
/// quotient of its base direction: BS(1,n) quotients project to the
/// t-coordinate cycle, lamplighter quotients to the position cycle, free
/// abelian quotients to their leading base_rank coordinates.  Fibers are
/// coset translates of equal cardinality.
struct EquivariantQuotientMap {
  const FiniteQuotient* domain = nullptr;
  std::shared_ptr<FiniteQuotient> codomain;
  std::vector<std::int32_t> vmap;       // domain vertex -> codomain vertex
  std::vector<int> generator_image;    // codomain generator index or -1 for the identity
  std::int64_t fiber_size = 0;

  std::int64_t apply(std::int64_t v) const { return vmap[static_cast<std::size_t>(v)]; }
  Bitset preimage(const Bitset& codomain_set) const;
};

EquivariantQuotientMap build_map(const FiniteQuotient& domain, int base_rank = 1);

/// Covers of preimages of single codomain components, uniformly over
/// translates.  bound(s, span) is the declared level-independent bound for
/// the s-components of the returned classes over an arc of cyclic span
/// <= span; it is what enters the radius schedule.
struct FiberCoverOracle {
  int class_count = 1;  // fiber dimension + 1
  std::function<std::optional<std::vector<Bitset>>(const Bitset& arc, int s)> make;
  std::function<std::int64_t(std::int64_t s, std::int64_t span)> bound;
};

FiberCoverOracle make_fiber_oracle(const EquivariantQuotientMap& map);

/// Nested radius ladders, indices n+1 down to 0 with s^{(i)} = 3 t^{(i+1)}
/// on both sides and t-values taken from the oracles' declared bound maps.
struct RadiusSchedule {
  int m = 0, n = 0, k = 1;
  std::int64_t span_bound = 0;            // cyclic span bound used for fiber arcs
  std::vector<std::int64_t> s_y, t_y, s_x, t_x;  // index 0..n+1
  std::int64_t r_out() const { return 3 * t_x[1]; }
};

RadiusSchedule build_schedule(int r, int m, int n, const std::function<std::int64_t(std::int64_t)>& base_bound,
                              const std::function<std::int64_t(std::int64_t, std::int64_t)>& fiber_bound);

/// Lift a fiber cover over each s_y-component of B and expand it to k classes
/// inside each preimage; classes with equal index are unioned across
/// components.  No (s_x, s_y)-component of any output class meets the
/// preimages of two distinct components of B (asserted).
std::vector<Bitset> lift_cover_over_components(const EquivariantQuotientMap& map, const Bitset& B,
                                               const FiberCoverOracle& oracle, int s_x, int s_y, int k,
                                               std::int64_t span_bound);

struct HurewiczResult {
  Cover cover;  // k = m+n+1 classes on the domain
  RadiusSchedule schedule;
  CoverCertificate certificate;       // verdict at (m+n, r, r_out)
  std::shared_ptr<FiniteQuotient> codomain;
  Cover base_cover;                   // the A_i cover of the codomain
  CoverCertificate base_certificate;  // verdict at (n, s_y[0], t_y[0])
  std::vector<std::pair<std::int64_t, std::int64_t>> fiber_bound_map;  // (s, declared bound)
  std::int64_t r_out = 0;
};

HurewiczResult hurewicz_cover(const EquivariantQuotientMap& map, int r, const ControlFunction& base_ctrl,
                              const FiberCoverOracle& oracle, int m, int n);

/// Standard per-level setup for the shipped families.
struct LevelSetup {
  EquivariantQuotientMap map;
  ControlFunction base_ctrl;
  FiberCoverOracle fiber_oracle;
  int fiber_dim = 0;
  int base_dim = 1;
};

LevelSetup make_level_setup(const FiniteQuotient& domain, int base_rank = 1);

struct FamilyResult {
  std::vector<HurewiczResult> per_level;
  bool all_pass = false;
  bool uniform_r_out = false;
  std::int64_t r_out = 0;
};

/// Runs hurewicz_cover on every level with level-independent oracles and
/// checks that the recorded bound is identical across levels.
FamilyResult uniform_hurewicz_family(const std::vector<std::shared_ptr<FiniteQuotient>>& levels, int r);

json hurewicz_certificate_to_json(const FiniteQuotient& host, const HurewiczResult& result);

}  // namespace coarselab
