#include "coarselab/boxspace.hpp"

#include <algorithm>
#include <set>

namespace coarselab {

Filtration::Filtration(GroupSpec spec, std::vector<SubgroupSpec> levels)
    : spec_(std::move(spec)), levels_(std::move(levels)) {
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    levels_[i].validate(spec_);
    if (i + 1 < levels_.size() && !levels_[i].contains(spec_, levels_[i + 1]))
      throw ValidationError("filtration levels are not nested at index " + std::to_string(i));
  }
}

std::optional<int> Filtration::injectivity_level(int r) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = memo_.find(r);
    if (it != memo_.end()) return it->second;
  }
  const auto elements = ball(spec_, r, 2000000);
  std::optional<int> found;
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    // project the ball without materializing large quotients
    if (static_cast<std::size_t>(levels_[i].index(spec_)) < elements.size()) continue;
    auto q = build_quotient(spec_, levels_[i], std::numeric_limits<std::int64_t>::max());
    std::set<std::int64_t> images;
    for (const auto& g : elements) images.insert(q->project(g));
    if (images.size() == elements.size()) {
      found = static_cast<int>(i);
      break;
    }
  }
  std::lock_guard<std::mutex> lock(mu_);
  auto [it, inserted] = memo_.emplace(r, found);
  return it->second;
}

Filtration Filtration::standard(const GroupSpec& spec, int depth) {
  std::vector<SubgroupSpec> levels;
  switch (spec.family) {
    case Family::FreeAbelian: {
      for (int i = 0; i <= depth; ++i) {
        std::vector<long long> moduli(static_cast<std::size_t>(spec.rank), 1LL << i);
        levels.push_back(SubgroupSpec::free_abelian(moduli));
      }
      break;
    }
    case Family::BaumslagSolitar: {
      for (int j = 0; j <= depth; ++j) {
        const long long k = 1LL << j;
        BigInt m = 1;
        for (long long i = 0; i < k; ++i) m *= spec.n;
        m = abs(m - 1);
        if (m == 0) m = 1;
        if (m > std::numeric_limits<long long>::max())
          throw ResourceError("BS filtration modulus overflows at level " + std::to_string(j));
        levels.push_back(SubgroupSpec::baumslag_solitar(static_cast<long long>(m), k));
      }
      break;
    }
    case Family::Lamplighter: {
      for (int j = 0; j <= depth; ++j) levels.push_back(SubgroupSpec::lamplighter(1LL << j));
      break;
    }
  }
  return Filtration(spec, std::move(levels));
}

Filtration Filtration::bs_two_power(const GroupSpec& spec, int depth) {
  if (spec.family != Family::BaumslagSolitar || spec.n % 2 == 0)
    throw ValidationError("two-power BS filtration needs odd n");
  std::vector<SubgroupSpec> levels;
  levels.push_back(SubgroupSpec::baumslag_solitar(1, 1));
  for (int j = 1; j <= depth; ++j)
    levels.push_back(SubgroupSpec::baumslag_solitar(1LL << (j + 2), 1LL << j));
  return Filtration(spec, std::move(levels));
}

std::int64_t coarse_distance(const BoxSpace& box, int i, std::int64_t x, int j, std::int64_t y) {
  if (i < 0 || j < 0 || static_cast<std::size_t>(i) >= box.quotients.size() ||
      static_cast<std::size_t>(j) >= box.quotients.size())
    throw UsageError("unknown box space component");
  if (i == j) return box.quotients[static_cast<std::size_t>(i)]->distance(x, y);
  return box.quotients[static_cast<std::size_t>(i)]->diameter() + box.quotients[static_cast<std::size_t>(j)]->diameter();
}

Verdict uniform_family_check(const BoxSpace& box, int d, int r, std::int64_t R, const std::vector<Cover>& covers) {
  if (covers.size() != box.quotients.size())
    throw ValidationError("uniform check needs one cover per level");
  for (std::size_t i = 0; i < covers.size(); ++i) {
    const auto& q = *box.quotients[i];
    if (q.diameter() <= r) continue;  // absorbed at scale r
    const auto cert = verify_cover(q, covers[i], d, r, R);
    if (!cert.pass) return {false, "level " + std::to_string(i) + ": " + cert.failure};
  }
  return {true, ""};
}

Verdict box_assembly_check(const BoxSpace& box, int d, int r, std::int64_t R, const std::vector<Cover>& covers) {
  // Indexwise unions across levels; the only cross-level chains at scale r
  // join levels with diameter sum <= r, whose union has diameter <= 2r.
  const std::int64_t bound = std::max<std::int64_t>(R, 2 * r);
  std::size_t class_count = 0;
  for (const auto& c : covers) class_count = std::max(class_count, c.classes.size());
  if (static_cast<int>(class_count) > d + 1) return {false, "more than d+1 classes"};

  std::vector<std::size_t> small;  // levels mergeable across components
  for (std::size_t i = 0; i < box.quotients.size(); ++i) {
    for (std::size_t j = 0; j < box.quotients.size(); ++j) {
      if (i != j && box.quotients[i]->diameter() + box.quotients[j]->diameter() <= r) {
        small.push_back(i);
        break;
      }
    }
  }

  for (std::size_t c = 0; c < class_count; ++c) {
    std::int64_t merged_diam = 0;  // cross-level chains among small levels
    bool merged_any = false;
    for (std::size_t i = 0; i < box.quotients.size(); ++i) {
      if (c >= covers[i].classes.size()) continue;
      const auto& cls = covers[i].classes[c];
      if (cls.none()) continue;
      const bool is_small = std::find(small.begin(), small.end(), i) != small.end();
      if (is_small) {
        merged_any = true;
        merged_diam = std::max<std::int64_t>(merged_diam, 2 * r);
      } else {
        for (const auto& comp : r_components(*box.quotients[i], cls, r))
          if (comp.diameter > bound)
            return {false, "level " + std::to_string(i) + " class " + std::to_string(c) +
                               " component of diameter " + std::to_string(comp.diameter)};
      }
    }
    if (merged_any && merged_diam > bound) return {false, "merged small levels exceed the bound"};
  }
  return {true, ""};
}

DynamicParams translate_parameters(int r, std::int64_t R) { return DynamicParams{r, R}; }

bool translation_check(const Host& host, const Bitset& subset, int r) {
  // F-components: orbits of left multiplication by the r-ball inside the subset.
  auto moves = ball_indices(host, r, 1u << 20);
  if (moves.empty()) throw ResourceError("translation check ball too large");
  std::vector<int> f_comp(static_cast<std::size_t>(host.size()), -1);
  int fc = 0;
  for (auto seed = subset.find_first(); seed != Bitset::npos; seed = subset.find_next(seed)) {
    if (f_comp[seed] >= 0) continue;
    std::vector<std::int64_t> stack{static_cast<std::int64_t>(seed)};
    f_comp[seed] = fc;
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      for (auto g : moves) {
        const auto w = host.mul(g, u);
        if (subset.test(static_cast<std::size_t>(w)) && f_comp[static_cast<std::size_t>(w)] < 0) {
          f_comp[static_cast<std::size_t>(w)] = fc;
          stack.push_back(w);
        }
      }
    }
    ++fc;
  }
  // metric components via the distance relation
  const auto comps = r_components(host, subset, r);
  if (static_cast<int>(comps.size()) != fc) return false;
  for (const auto& comp : comps) {
    const int id = f_comp[static_cast<std::size_t>(comp.vertices.front())];
    for (auto v : comp.vertices)
      if (f_comp[static_cast<std::size_t>(v)] != id) return false;
  }
  return true;
}

Verdict odometer_equivalence_check(const FiniteQuotient& base, const Cover& cover,
                                   const std::vector<std::shared_ptr<FiniteQuotient>>& deeper, int r,
                                   bool exempt_large) {
  for (const auto& deep : deeper) {
    const auto mapping = quotient_map(*deep, base);
    const std::int64_t fiber = deep->size() / base.size();

    std::int64_t girth = deep->diameter();
    if (exempt_large) {
      for (std::int64_t v = 1; v < deep->size(); ++v)
        if (mapping.apply(v) == 0) girth = std::min<std::int64_t>(girth, deep->word_norm(v));
    }
    const std::int64_t threshold = exempt_large ? girth / 2 - r : std::numeric_limits<std::int64_t>::max();

    const Cover pulled = pullback_cover(cover, mapping);
    for (std::size_t c = 0; c < cover.classes.size(); ++c) {
      // base component ownership, with exempt components marked
      std::vector<int> owner(static_cast<std::size_t>(base.size()), -1);
      std::vector<std::pair<std::int64_t, std::int64_t>> base_shape;  // (size, diameter) per component
      std::vector<bool> exempt;
      for (const auto& comp : r_components(base, cover.classes[c], r)) {
        const int id = static_cast<int>(base_shape.size());
        for (auto v : comp.vertices) owner[static_cast<std::size_t>(v)] = id;
        base_shape.emplace_back(static_cast<std::int64_t>(comp.vertices.size()), comp.diameter);
        exempt.push_back(comp.diameter >= threshold);
      }

      std::vector<std::int64_t> seen(base_shape.size(), 0);
      for (const auto& comp : r_components(*deep, pulled.classes[c], r)) {
        // a deep component must project into a single base component
        const int id = owner[static_cast<std::size_t>(mapping.apply(comp.vertices.front()))];
        bool split = false;
        for (auto v : comp.vertices)
          if (owner[static_cast<std::size_t>(mapping.apply(v))] != id) split = true;
        if (exempt_large && (split || (id >= 0 && exempt[static_cast<std::size_t>(id)]))) continue;
        if (split || id < 0)
          return {false, "level " + deep->id() + " class " + std::to_string(c) +
                             ": a pulled-back component does not sit over a single base component"};
        if (static_cast<std::int64_t>(comp.vertices.size()) != base_shape[static_cast<std::size_t>(id)].first ||
            comp.diameter != base_shape[static_cast<std::size_t>(id)].second)
          return {false, "level " + deep->id() + " class " + std::to_string(c) +
                             ": component shape not preserved (size " + std::to_string(comp.vertices.size()) +
                             ", diameter " + std::to_string(comp.diameter) + ")"};
        ++seen[static_cast<std::size_t>(id)];
      }
      for (std::size_t id = 0; id < base_shape.size(); ++id) {
        if (exempt[id]) continue;
        if (seen[id] != fiber)
          return {false, "level " + deep->id() + " class " + std::to_string(c) + ": component multiplicity " +
                             std::to_string(seen[id]) + " != fiber size " + std::to_string(fiber)};
      }
    }
  }
  return {true, ""};
}

Verdict nested_union_scale_check(const Host& host, const std::vector<Bitset>& pieces,
                                 const std::vector<std::vector<Bitset>>& piece_covers, int d, int r, std::int64_t R) {
  if (pieces.size() != piece_covers.size()) throw ValidationError("one cover per piece required");
  // pieces must be pairwise more than r apart
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    for (std::size_t j = i + 1; j < pieces.size(); ++j) {
      const Bitset near = neighborhood(host, pieces[i], r);
      if ((near & pieces[j]).any())
        return {false, "pieces " + std::to_string(i) + " and " + std::to_string(j) + " are within distance r"};
    }
  }
  Bitset support = make_bitset(host.size());
  std::size_t classes = 0;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    support |= pieces[i];
    classes = std::max(classes, piece_covers[i].size());
  }
  std::vector<Bitset> merged(classes, make_bitset(host.size()));
  for (std::size_t i = 0; i < pieces.size(); ++i)
    for (std::size_t c = 0; c < piece_covers[i].size(); ++c) merged[c] |= piece_covers[i][c];
  const auto cert = verify_subset_cover(host, merged, support, d, r, R);
  return {cert.pass, cert.failure};
}

}  // namespace coarselab
