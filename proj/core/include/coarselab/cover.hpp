#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "coarselab/components.hpp"

namespace coarselab {

/// A family of vertex subsets with declared scale parameters.  Classes may
/// overlap; a verified cover's classes union to the whole host (or to an
/// explicit support for restricted covers).
struct Cover {
  std::string host_id;
  std::vector<Bitset> classes;
  int declared_r = 1;
  std::int64_t declared_R = 0;
};

struct ClassStats {
  std::int64_t component_count = 0;
  std::int64_t worst_diameter = 0;
  std::int64_t largest_size = 0;
};

/// Machine-checkable verdict for one (d, r, R) check.
struct CoverCertificate {
  bool pass = false;
  int d = 0;
  int r = 1;
  std::int64_t R = 0;
  int d_effective = 0;
  std::int64_t worst_component_diameter = 0;
  int multiplicity = 0;
  std::vector<ClassStats> per_class;
  std::string failure;  // empty on pass
};

/// pass iff (#classes <= d+1) and classes cover the support and every
/// r-component of every class has diameter <= R.
CoverCertificate verify_cover(const Host& host, const Cover& cover, int d, int r, std::int64_t R);
CoverCertificate verify_subset_cover(const Host& host, const std::vector<Bitset>& classes, const Bitset& support,
                                     int d, int r, std::int64_t R);

/// Minimum over vertices of the number of classes containing it.
int multiplicity(const Host& host, const Cover& cover);
int subset_multiplicity(const std::vector<Bitset>& classes, const Bitset& support);

/// Two alternating interval classes on a cyclic quotient.  Block lengths lie
/// in [2r, 4r], so the result verifies at (1, r, 4r-1); with 4r | N all
/// blocks have length exactly 2r and it verifies at (1, r, 2r-1).
/// nullopt when N < 4r (callers fall back to the single-class cover).
std::optional<Cover> interval_cover(const Host& host, int r);

/// Single class covering everything, padded with empty classes.
Cover full_cover(const Host& host, int class_count);

/// Preimage cover along a quotient mapping (classes pull back pointwise).
Cover pullback_cover(const Cover& on_shallow, const QuotientMapping& map);

/// Scale-indexed cover maker with a declared bound map; returned covers
/// verify at (class_count - 1, s, bound(s)).
struct ControlFunction {
  int class_count = 2;
  std::function<std::optional<Cover>(int)> make;
  std::function<std::int64_t(int)> bound;
};

/// Interval covers with the single-class fallback below scale; the declared
/// bound 4s-1 holds for every cyclic size.
ControlFunction interval_control(const Host& host);

}  // namespace coarselab
