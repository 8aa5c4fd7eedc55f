#include "coarselab/cover.hpp"

#include <algorithm>
#include <sstream>

namespace coarselab {

CoverCertificate verify_subset_cover(const Host& host, const std::vector<Bitset>& classes, const Bitset& support,
                                     int d, int r, std::int64_t R) {
  CoverCertificate cert;
  cert.d = d;
  cert.r = r;
  cert.R = R;
  cert.d_effective = static_cast<int>(classes.size()) - 1;
  for (const auto& c : classes) {
    if (c.size() != static_cast<std::size_t>(host.size())) throw ValidationError("class references unknown vertices");
    if (!c.is_subset_of(support)) throw ValidationError("class leaves the declared support");
  }

  if (static_cast<int>(classes.size()) > d + 1) {
    cert.failure = "cover has " + std::to_string(classes.size()) + " classes, more than d+1 = " + std::to_string(d + 1);
    return cert;
  }

  Bitset covered = make_bitset(host.size());
  for (const auto& c : classes) covered |= c;
  if (covered != support) {
    Bitset holes = support & ~covered;
    cert.failure = "coverage hole at vertex " + host.label(static_cast<std::int64_t>(holes.find_first()));
    return cert;
  }

  bool ok = true;
  for (const auto& c : classes) {
    ClassStats stats;
    for (const auto& comp : r_components(host, c, r)) {
      stats.component_count += 1;
      stats.largest_size = std::max<std::int64_t>(stats.largest_size, comp.vertices.size());
      if (comp.diameter > stats.worst_diameter) stats.worst_diameter = comp.diameter;
      if (comp.diameter > R && ok) {
        ok = false;
        cert.failure = "class " + std::to_string(cert.per_class.size()) + " has an r-component of diameter " +
                       std::to_string(comp.diameter) + " > R = " + std::to_string(R) + " at vertex " +
                       host.label(comp.vertices.front());
      }
    }
    cert.worst_component_diameter = std::max(cert.worst_component_diameter, stats.worst_diameter);
    cert.per_class.push_back(stats);
  }

  // multiplicity over the support
  std::vector<Bitset> cl = classes;
  cert.multiplicity = subset_multiplicity(cl, support);
  cert.pass = ok;
  return cert;
}

CoverCertificate verify_cover(const Host& host, const Cover& cover, int d, int r, std::int64_t R) {
  Bitset all = make_bitset(host.size());
  all.set();
  return verify_subset_cover(host, cover.classes, all, d, r, R);
}

int subset_multiplicity(const std::vector<Bitset>& classes, const Bitset& support) {
  if (support.none()) return 0;
  std::vector<std::uint16_t> count(support.size(), 0);
  for (const auto& c : classes)
    for (auto v = c.find_first(); v != Bitset::npos; v = c.find_next(v)) ++count[v];
  int best = std::numeric_limits<int>::max();
  for (auto v = support.find_first(); v != Bitset::npos; v = support.find_next(v))
    best = std::min(best, static_cast<int>(count[v]));
  return best;
}

int multiplicity(const Host& host, const Cover& cover) {
  Bitset all = make_bitset(host.size());
  all.set();
  return subset_multiplicity(cover.classes, all);
}

std::optional<Cover> interval_cover(const Host& host, int r) {
  if (!dynamic_cast<const FiniteQuotient*>(&host) || !static_cast<const FiniteQuotient&>(host).is_cycle())
    throw UsageError("interval_cover expects a cyclic quotient");
  if (r < 1) throw UsageError("interval_cover needs r >= 1");
  const std::int64_t N = host.size();
  if (N < 4LL * r) return std::nullopt;

  // Even number of alternating runs with lengths in [2r, 4r]: same-class runs
  // are separated by more than r, and each run has diameter <= 4r-1.
  const std::int64_t q = 2 * (N / (4LL * r));
  Cover cover;
  cover.host_id = host.id();
  cover.declared_r = r;
  cover.declared_R = (N % (4LL * r) == 0) ? 2LL * r - 1 : 4LL * r - 1;
  cover.classes.assign(2, make_bitset(N));
  std::int64_t start = 0;
  for (std::int64_t i = 0; i < q; ++i) {
    const std::int64_t len = N / q + (i < N % q ? 1 : 0);
    for (std::int64_t j = 0; j < len; ++j) cover.classes[i % 2].set(static_cast<std::size_t>(start + j));
    start += len;
  }
  return cover;
}

Cover full_cover(const Host& host, int class_count) {
  Cover cover;
  cover.host_id = host.id();
  cover.declared_r = 1;
  cover.declared_R = host.diameter();
  cover.classes.assign(class_count, make_bitset(host.size()));
  cover.classes[0].set();
  return cover;
}

Cover pullback_cover(const Cover& on_shallow, const QuotientMapping& map) {
  Cover out;
  out.host_id = map.deep->id();
  out.declared_r = on_shallow.declared_r;
  out.declared_R = on_shallow.declared_R;
  out.classes.assign(on_shallow.classes.size(), make_bitset(map.deep->size()));
  for (std::int64_t v = 0; v < map.deep->size(); ++v) {
    const auto img = static_cast<std::size_t>(map.apply(v));
    for (std::size_t c = 0; c < on_shallow.classes.size(); ++c)
      if (on_shallow.classes[c].test(img)) out.classes[c].set(static_cast<std::size_t>(v));
  }
  return out;
}

ControlFunction interval_control(const Host& host) {
  ControlFunction ctrl;
  ctrl.class_count = 2;
  ctrl.make = [&host](int s) -> std::optional<Cover> {
    auto c = interval_cover(host, s);
    if (c) return c;
    Cover fb = full_cover(host, 2);
    fb.declared_r = s;
    fb.declared_R = 4LL * s - 1;
    return fb;
  };
  ctrl.bound = [](int s) { return 4LL * s - 1; };
  return ctrl;
}

}  // namespace coarselab
