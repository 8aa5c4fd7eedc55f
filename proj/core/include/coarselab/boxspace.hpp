#pragma once

#include <map>
#include <mutex>

#include "coarselab/cover.hpp"

namespace coarselab {

/// Nested sequence of finite-index normal subgroups with trivial
/// intersection, witnessed at finite scales by ball injectivity.
class Filtration {
 public:
  Filtration(GroupSpec spec, std::vector<SubgroupSpec> levels);

  const GroupSpec& spec() const { return spec_; }
  const std::vector<SubgroupSpec>& levels() const { return levels_; }

  /// Smallest level index (0-based) whose quotient separates the ball of
  /// radius r, memoized; nullopt when no listed level works.
  std::optional<int> injectivity_level(int r) const;

  /// Default families: Z: moduli 2^i; BS(1,n): (n^{2^j}-1, 2^j);
  /// lamplighter: periods 2^j.  Level 0 is the trivial quotient.
  static Filtration standard(const GroupSpec& spec, int depth);
  /// Nested BS filtration with two-power moduli: (2^{j+2}, 2^j) for odd n.
  static Filtration bs_two_power(const GroupSpec& spec, int depth);

 private:
  GroupSpec spec_;
  std::vector<SubgroupSpec> levels_;
  mutable std::map<int, std::optional<int>> memo_;
  mutable std::mutex mu_;
};

struct BoxSpace {
  std::vector<std::shared_ptr<FiniteQuotient>> quotients;
};

/// Coarse disjoint union metric: within a component the quotient distance,
/// across components the sum of the two diameters.
std::int64_t coarse_distance(const BoxSpace& box, int i, std::int64_t x, int j, std::int64_t y);

struct Verdict {
  bool pass = false;
  std::string detail;
};

/// Every level's cover verifies at (d, r, R); levels of diameter <= r are
/// exempt (they are absorbed at scale r).
Verdict uniform_family_check(const BoxSpace& box, int d, int r, std::int64_t R, const std::vector<Cover>& covers);

/// Assembling per-level classes indexwise yields a box-wide cover at
/// (d, r, max(R, 2r)) under coarse_distance.
Verdict box_assembly_check(const BoxSpace& box, int d, int r, std::int64_t R, const std::vector<Cover>& covers);

struct DynamicParams {
  int F_radius = 0;
  std::int64_t S_radius = 0;
};

DynamicParams translate_parameters(int r, std::int64_t R);
/// F-component partition (orbits of ball moves inside the subset) equals the
/// r-component partition, as sets.
bool translation_check(const Host& host, const Bitset& subset, int r);

/// Pull a level-i0 cover back to deeper levels and require the r-component
/// structure (count, per-component cardinality and diameter) to transfer
/// exactly.  Exact transfer is guaranteed for components of diameter below
/// girth/2 - r, where the girth is the least word norm of a nontrivial
/// kernel element of the level pair; with exempt_large set, wider components
/// (e.g. a whole-space class) are skipped instead of asserted.
Verdict odometer_equivalence_check(const FiniteQuotient& base, const Cover& cover,
                                   const std::vector<std::shared_ptr<FiniteQuotient>>& deeper, int r,
                                   bool exempt_large = false);

/// Pieces more than r apart can be covered independently: concatenating the
/// per-piece classes indexwise verifies at (d, r, R) on the union.
Verdict nested_union_scale_check(const Host& host, const std::vector<Bitset>& pieces,
                                 const std::vector<std::vector<Bitset>>& piece_covers, int d, int r, std::int64_t R);

}  // namespace coarselab
