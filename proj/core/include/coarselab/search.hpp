#pragma once

#include <optional>

#include "coarselab/cover.hpp"

namespace coarselab {

/// Result of the exhaustive partition search.  If a (d, r, R)-cover exists
/// then assigning each vertex a single containing class yields a partition
/// whose components only shrink, so searching partitions suffices for the
/// minimum class count.
struct SearchResult {
  bool exhausted = false;            // budget ran out before a verdict
  std::optional<int> min_classes;    // exact minimum when found
  int refuted_below = 0;             // class counts 1..refuted_below proved impossible
  std::optional<Cover> witness;
  std::uint64_t nodes_explored = 0;
};

/// Exact minimum number of classes of any partition cover of the host whose
/// r-components all have diameter <= R, searched up to d_max+1 classes.
SearchResult brute_force_min_cover(const Host& host, int r, std::int64_t R, int d_max, std::uint64_t budget);

}  // namespace coarselab
