#include "coarselab/components.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace coarselab {

Bitset make_bitset(std::int64_t n) { return Bitset(static_cast<std::size_t>(n)); }

std::vector<std::int64_t> bits_of(const Bitset& b) {
  std::vector<std::int64_t> out;
  for (auto i = b.find_first(); i != Bitset::npos; i = b.find_next(i)) out.push_back(static_cast<std::int64_t>(i));
  return out;
}

std::vector<std::int64_t> ball_indices(const Host& host, int r, std::size_t cap) {
  std::vector<std::int64_t> out{0};
  std::vector<std::int64_t> frontier{0};
  Bitset seen = make_bitset(host.size());
  seen.set(0);
  std::vector<std::int64_t> nb(host.degree());
  for (int d = 0; d < r && !frontier.empty(); ++d) {
    std::vector<std::int64_t> next;
    for (std::int64_t v : frontier) {
      host.neighbors(v, nb.data());
      for (int i = 0; i < host.degree(); ++i) {
        if (!seen.test_set(static_cast<std::size_t>(nb[i]))) {
          if (out.size() + 1 > cap) return {};
          out.push_back(nb[i]);
          next.push_back(nb[i]);
        }
      }
    }
    frontier = std::move(next);
  }
  return out;
}

Bitset neighborhood(const Host& host, const Bitset& seeds, int r) {
  Bitset reach = seeds;
  if (r >= host.diameter()) {
    if (seeds.any()) reach.set();
    return reach;
  }
  std::vector<std::int64_t> frontier = bits_of(seeds);
  std::vector<std::int64_t> nb(host.degree());
  for (int d = 0; d < r && !frontier.empty(); ++d) {
    std::vector<std::int64_t> next;
    for (std::int64_t v : frontier) {
      host.neighbors(v, nb.data());
      for (int i = 0; i < host.degree(); ++i) {
        if (!reach.test_set(static_cast<std::size_t>(nb[i]))) next.push_back(nb[i]);
      }
    }
    frontier = std::move(next);
  }
  return reach;
}

namespace {

constexpr std::size_t kMoveCap = 512;

// Exact diameter via pivot pruning: process vertices by decreasing distance
// from a central pivot; once 2*level <= best, remaining pairs cannot beat it.
// The host diameter caps everything, so reaching it ends the search.
std::int64_t diameter_impl(const Host& host, const std::vector<std::int64_t>& verts) {
  const std::size_t n = verts.size();
  if (n <= 1) return 0;
  if (n == 2) return host.distance(verts[0], verts[1]);
  const std::int64_t host_diam = host.diameter();
  if (n == static_cast<std::size_t>(host.size())) return host_diam;

  auto ecc = [&](std::int64_t u, std::int64_t& far) {
    std::int64_t best = 0;
    const std::int64_t ui = host.inv(u);
    for (std::int64_t v : verts) {
      const int d = host.word_norm(host.mul(v, ui));
      if (d > best) {
        best = d;
        far = v;
      }
    }
    return best;
  };

  std::int64_t far1 = verts[0], far2 = verts[0];
  ecc(verts[0], far1);
  std::int64_t lb = ecc(far1, far2);
  if (lb >= host_diam) return lb;

  // central pivot: minimizes the larger distance to the two sweep extremes
  const std::int64_t inv1 = host.inv(far1), inv2 = host.inv(far2);
  std::int64_t root = far1;
  int root_score = std::numeric_limits<int>::max();
  for (std::int64_t v : verts) {
    const int score = std::max(host.word_norm(host.mul(v, inv1)), host.word_norm(host.mul(v, inv2)));
    if (score < root_score) {
      root_score = score;
      root = v;
    }
  }

  const std::int64_t root_inv = host.inv(root);
  std::vector<std::pair<int, std::int64_t>> order;
  order.reserve(n);
  for (std::int64_t v : verts) order.emplace_back(host.word_norm(host.mul(v, root_inv)), v);
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

  for (const auto& [dp, v] : order) {
    if (2 * static_cast<std::int64_t>(dp) <= lb) break;
    std::int64_t dummy;
    lb = std::max(lb, ecc(v, dummy));
    if (lb >= host_diam) break;
  }
  return lb;
}

}  // namespace

std::int64_t set_diameter(const Host& host, const std::vector<std::int64_t>& verts) {
  return diameter_impl(host, verts);
}

std::vector<ComponentInfo> r_components(const Host& host, const Bitset& subset, int r) {
  std::vector<ComponentInfo> out;
  if (subset.none()) return out;
  const std::int64_t V = host.size();

  if (r >= host.diameter()) {
    ComponentInfo c;
    c.vertices = bits_of(subset);
    c.diameter = set_diameter(host, c.vertices);
    out.push_back(std::move(c));
    return out;
  }

  Bitset assigned = make_bitset(V);
  const auto moves = r > 1 ? ball_indices(host, r, kMoveCap) : std::vector<std::int64_t>{};
  const bool use_moves = r == 1 || !moves.empty();

  std::vector<std::int64_t> nb(host.degree());
  std::vector<int> stamp(use_moves ? 0 : static_cast<std::size_t>(V), 0);
  int epoch = 0;

  for (auto seed = subset.find_first(); seed != Bitset::npos; seed = subset.find_next(seed)) {
    if (assigned.test(seed)) continue;
    ComponentInfo comp;
    std::vector<std::int64_t> frontier{static_cast<std::int64_t>(seed)};
    assigned.set(seed);
    comp.vertices.push_back(static_cast<std::int64_t>(seed));
    while (!frontier.empty()) {
      std::vector<std::int64_t> next;
      if (use_moves) {
        for (std::int64_t u : frontier) {
          if (r == 1) {
            host.neighbors(u, nb.data());
            for (int i = 0; i < host.degree(); ++i) {
              const std::int64_t w = nb[i];
              if (subset.test(w) && !assigned.test_set(w)) {
                comp.vertices.push_back(w);
                next.push_back(w);
              }
            }
          } else {
            for (std::int64_t g : moves) {
              const std::int64_t w = host.mul(g, u);
              if (subset.test(w) && !assigned.test_set(w)) {
                comp.vertices.push_back(w);
                next.push_back(w);
              }
            }
          }
        }
      } else {
        // depth-r sweep over the host from the whole frontier
        ++epoch;
        std::vector<std::int64_t> level = frontier, reached;
        for (std::int64_t v : level) stamp[static_cast<std::size_t>(v)] = epoch;
        for (int d = 0; d < r && !level.empty(); ++d) {
          std::vector<std::int64_t> nl;
          for (std::int64_t v : level) {
            host.neighbors(v, nb.data());
            for (int i = 0; i < host.degree(); ++i) {
              const std::int64_t w = nb[i];
              if (stamp[static_cast<std::size_t>(w)] != epoch) {
                stamp[static_cast<std::size_t>(w)] = epoch;
                nl.push_back(w);
                reached.push_back(w);
              }
            }
          }
          level = std::move(nl);
        }
        for (std::int64_t w : reached) {
          if (subset.test(w) && !assigned.test_set(w)) {
            comp.vertices.push_back(w);
            next.push_back(w);
          }
        }
      }
      frontier = std::move(next);
    }
    comp.diameter = set_diameter(host, comp.vertices);
    out.push_back(std::move(comp));
  }
  return out;
}

std::vector<ComponentInfo> paired_components(const Host& host, const Bitset& subset, int r_x,
                                             const Host& codomain, const std::function<std::int64_t(std::int64_t)>& f,
                                             int r_y) {
  std::vector<ComponentInfo> out;
  if (subset.none()) return out;
  if (r_y >= codomain.diameter()) return r_components(host, subset, r_x);
  const std::int64_t V = host.size();
  Bitset assigned = make_bitset(V);

  // steps must satisfy both d_X <= r_x and d_Y(f.,f.) <= r_y
  if (r_x >= host.diameter()) {
    // group subset by codomain fiber; adjacency is then governed by r_y alone
    std::vector<std::vector<std::int64_t>> by_fiber(static_cast<std::size_t>(codomain.size()));
    for (auto v = subset.find_first(); v != Bitset::npos; v = subset.find_next(v))
      by_fiber[static_cast<std::size_t>(f(static_cast<std::int64_t>(v)))].push_back(static_cast<std::int64_t>(v));
    for (auto seed = subset.find_first(); seed != Bitset::npos; seed = subset.find_next(seed)) {
      if (assigned.test(seed)) continue;
      ComponentInfo comp;
      std::vector<std::int64_t> frontier{static_cast<std::int64_t>(seed)};
      assigned.set(seed);
      comp.vertices.push_back(static_cast<std::int64_t>(seed));
      while (!frontier.empty()) {
        std::vector<std::int64_t> next;
        for (std::int64_t u : frontier) {
          const std::int64_t fu = f(u);
          for (std::int64_t w = 0; w < codomain.size(); ++w) {
            if (codomain.distance(fu, w) > r_y) continue;
            for (std::int64_t v : by_fiber[static_cast<std::size_t>(w)]) {
              if (!assigned.test(static_cast<std::size_t>(v))) {
                assigned.set(static_cast<std::size_t>(v));
                comp.vertices.push_back(v);
                next.push_back(v);
              }
            }
          }
        }
        frontier = std::move(next);
      }
      comp.diameter = set_diameter(host, comp.vertices);
      out.push_back(std::move(comp));
    }
    return out;
  }

  const auto moves = ball_indices(host, r_x, kMoveCap);
  if (!moves.empty()) {
    for (auto seed = subset.find_first(); seed != Bitset::npos; seed = subset.find_next(seed)) {
      if (assigned.test(seed)) continue;
      ComponentInfo comp;
      std::vector<std::int64_t> frontier{static_cast<std::int64_t>(seed)};
      assigned.set(seed);
      comp.vertices.push_back(static_cast<std::int64_t>(seed));
      while (!frontier.empty()) {
        std::vector<std::int64_t> next;
        for (std::int64_t u : frontier) {
          const std::int64_t fu = f(u);
          for (std::int64_t g : moves) {
            const std::int64_t w = host.mul(g, u);
            if (!subset.test(static_cast<std::size_t>(w)) || assigned.test(static_cast<std::size_t>(w))) continue;
            if (codomain.distance(f(w), fu) > r_y) continue;
            assigned.set(static_cast<std::size_t>(w));
            comp.vertices.push_back(w);
            next.push_back(w);
          }
        }
        frontier = std::move(next);
      }
      comp.diameter = set_diameter(host, comp.vertices);
      out.push_back(std::move(comp));
    }
    return out;
  }

  // fallback: per-source depth-r_x sweep with the pairing filter
  std::vector<int> stamp(static_cast<std::size_t>(V), 0);
  int epoch = 0;
  std::vector<std::int64_t> nb(host.degree());
  for (auto seed = subset.find_first(); seed != Bitset::npos; seed = subset.find_next(seed)) {
    if (assigned.test(seed)) continue;
    ComponentInfo comp;
    std::vector<std::int64_t> frontier{static_cast<std::int64_t>(seed)};
    assigned.set(seed);
    comp.vertices.push_back(static_cast<std::int64_t>(seed));
    while (!frontier.empty()) {
      std::vector<std::int64_t> next;
      for (std::int64_t u : frontier) {
        ++epoch;
        const std::int64_t fu = f(u);
        std::vector<std::int64_t> level{u};
        stamp[static_cast<std::size_t>(u)] = epoch;
        for (int d = 0; d < r_x && !level.empty(); ++d) {
          std::vector<std::int64_t> nl;
          for (std::int64_t v : level) {
            host.neighbors(v, nb.data());
            for (int i = 0; i < host.degree(); ++i) {
              const std::int64_t w = nb[i];
              if (stamp[static_cast<std::size_t>(w)] == epoch) continue;
              stamp[static_cast<std::size_t>(w)] = epoch;
              nl.push_back(w);
              if (subset.test(static_cast<std::size_t>(w)) && !assigned.test(static_cast<std::size_t>(w)) &&
                  codomain.distance(f(w), fu) <= r_y) {
                assigned.set(static_cast<std::size_t>(w));
                comp.vertices.push_back(w);
                next.push_back(w);
              }
            }
          }
          level = std::move(nl);
        }
      }
      frontier = std::move(next);
    }
    comp.diameter = set_diameter(host, comp.vertices);
    out.push_back(std::move(comp));
  }
  return out;
}

}  // namespace coarselab
