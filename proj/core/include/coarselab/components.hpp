#pragma once

#include <boost/dynamic_bitset.hpp>
#include <cstdint>
#include <functional>
#include <vector>

#include "coarselab/quotient.hpp"

namespace coarselab {

using Bitset = boost::dynamic_bitset<std::uint64_t>;

Bitset make_bitset(std::int64_t n);
std::vector<std::int64_t> bits_of(const Bitset& b);

struct ComponentInfo {
  std::vector<std::int64_t> vertices;
  std::int64_t diameter = 0;
};

/// Elements of word norm <= r (as vertex indices), or empty when more than
/// cap of them exist.
std::vector<std::int64_t> ball_indices(const Host& host, int r, std::size_t cap);

/// All vertices at host distance <= r from the seed set.
Bitset neighborhood(const Host& host, const Bitset& seeds, int r);

/// r-components of `subset`: classes of the relation "joined by a chain of
/// subset points with consecutive host distances <= r".  Diameters are in the
/// host metric, computed exactly.
std::vector<ComponentInfo> r_components(const Host& host, const Bitset& subset, int r);

/// Paired components for a projection f: steps must move <= r_x in the host
/// and <= r_y between the images.  With r_x <= r_y (1-Lipschitz f) these are
/// plain r_x-components.
std::vector<ComponentInfo> paired_components(const Host& host, const Bitset& subset, int r_x,
                                             const Host& codomain, const std::function<std::int64_t(std::int64_t)>& f,
                                             int r_y);

/// Exact diameter of a vertex set in the host metric (0 for empty/singleton).
std::int64_t set_diameter(const Host& host, const std::vector<std::int64_t>& verts);

}  // namespace coarselab
