#include "coarselab/search.hpp"

#include <algorithm>

namespace coarselab {

namespace {

// Depth-first search over class assignments in vertex order.  Adding a vertex
// to a class can only merge r-components and grow diameters, so only the
// component containing the new vertex needs rechecking, and a violated class
// prunes every extension.
struct Dfs {
  const Host& host;
  int r;
  std::int64_t R;
  int classes;
  std::uint64_t budget;
  const std::vector<std::int64_t>& moves;  // ball of radius r, identity excluded
  std::uint64_t nodes = 0;
  std::vector<int> assign;
  bool exhausted = false;

  bool component_of_ok(std::int64_t v) {
    const int c = assign[static_cast<std::size_t>(v)];
    std::vector<std::int64_t> comp{v};
    Bitset in_comp = make_bitset(host.size());
    in_comp.set(static_cast<std::size_t>(v));
    for (std::size_t i = 0; i < comp.size(); ++i) {
      for (std::int64_t g : moves) {
        const std::int64_t w = host.mul(g, comp[i]);
        if (assign[static_cast<std::size_t>(w)] == c && !in_comp.test_set(static_cast<std::size_t>(w)))
          comp.push_back(w);
      }
    }
    return set_diameter(host, comp) <= R;
  }

  bool run(std::int64_t v, int used) {
    if (nodes++ > budget) {
      exhausted = true;
      return false;
    }
    if (v == host.size()) return true;
    // symmetry break: a vertex may open at most one fresh class
    const int limit = std::min(classes, used + 1);
    for (int c = 0; c < limit; ++c) {
      assign[static_cast<std::size_t>(v)] = c;
      if (component_of_ok(v) && run(v + 1, std::max(used, c + 1))) return true;
      if (exhausted) return false;
    }
    assign[static_cast<std::size_t>(v)] = -1;
    return false;
  }
};

}  // namespace

SearchResult brute_force_min_cover(const Host& host, int r, std::int64_t R, int d_max, std::uint64_t budget) {
  SearchResult out;
  auto moves = ball_indices(host, r, 1u << 16);
  if (moves.empty()) throw ResourceError("search radius ball too large to enumerate");
  moves.erase(moves.begin());  // drop the identity
  for (int c = 1; c <= d_max + 1; ++c) {
    Dfs dfs{host, r, R, c, budget, moves, 0, {}, false};
    dfs.assign.assign(static_cast<std::size_t>(host.size()), -1);
    const bool found = dfs.run(0, 0);
    out.nodes_explored += dfs.nodes;
    if (dfs.exhausted) {
      out.exhausted = true;
      return out;
    }
    if (found) {
      out.min_classes = c;
      Cover witness;
      witness.host_id = host.id();
      witness.declared_r = r;
      witness.declared_R = R;
      witness.classes.assign(static_cast<std::size_t>(c), make_bitset(host.size()));
      for (std::int64_t v = 0; v < host.size(); ++v)
        witness.classes[static_cast<std::size_t>(dfs.assign[static_cast<std::size_t>(v)])].set(
            static_cast<std::size_t>(v));
      out.witness = std::move(witness);
      return out;
    }
    out.refuted_below = c;
  }
  return out;
}

}  // namespace coarselab
