#include "coarselab/expansion.hpp"

#include <algorithm>
#include <sstream>

namespace coarselab {

namespace {

void enumerate_subsets(int k, int take, std::vector<int>& cur, int first, const std::function<void(const std::vector<int>&)>& fn) {
  if (static_cast<int>(cur.size()) == take) {
    fn(cur);
    return;
  }
  for (int i = first; i < k; ++i) {
    cur.push_back(i);
    enumerate_subsets(k, take, cur, i + 1, fn);
    cur.pop_back();
  }
}

}  // namespace

ExpandResult expand_cover(const Host& host, const std::vector<Bitset>& classes, int n, int r, std::int64_t R_in,
                          const Bitset& support) {
  const int k = static_cast<int>(classes.size());
  if (k < n + 1 || n < 0) throw ValidationError("expand_cover needs at least n+1 input classes");
  if (k > 24) throw ResourceError("expand_cover index sets capped at 24 classes");

  // precondition: verified at (k-1, 3r, R_in) with multiplicity >= k-n
  const auto pre = verify_subset_cover(host, classes, support, k - 1, 3 * r, R_in);
  if (!pre.pass) throw ValidationError("expand_cover precondition failed: " + pre.failure);
  if (pre.multiplicity < k - n)
    throw ValidationError("expand_cover precondition failed: multiplicity " + std::to_string(pre.multiplicity) +
                          " below k-n = " + std::to_string(k - n));

  ExpandResult out;
  out.R_out = R_in + 2 * r;
  std::vector<Bitset> expanded;
  expanded.reserve(k);
  for (const auto& c : classes) expanded.push_back(neighborhood(host, c, r) & support);

  // W_S = (/\_{s in S} U_s) \ (\/_{i not in S} U_i')
  Bitset new_class = make_bitset(host.size());
  std::vector<int> cur;
  enumerate_subsets(k, k - n, cur, 0, [&](const std::vector<int>& S) {
    Bitset w = support;
    std::size_t next = 0;
    for (int i = 0; i < k; ++i) {
      if (next < S.size() && S[next] == i) {
        w &= classes[i];
        ++next;
      } else {
        w -= expanded[i];
      }
    }
    if (w.any()) {
      new_class |= w;
      out.w_sets.push_back(std::move(w));
    }
  });

  out.classes = std::move(expanded);
  out.classes.push_back(std::move(new_class));
  return out;
}

Cover expand_cover(const Host& host, const Cover& input, int n, int r) {
  Bitset all = make_bitset(host.size());
  all.set();
  auto res = expand_cover(host, input.classes, n, r, input.declared_R, all);
  Cover out;
  out.host_id = input.host_id;
  out.declared_r = r;
  out.declared_R = res.R_out;
  out.classes = std::move(res.classes);
  return out;
}

IterateResult iterate_expand_on(const Host& host, const ControlFunction& ctrl, int r, int k, const Bitset& support) {
  const int n = ctrl.class_count - 1;
  if (k < n + 1) throw ValidationError("iterate_expand needs k >= n+1");
  const int steps = k - n - 1;

  std::int64_t radius = r;
  for (int i = 0; i < steps; ++i) radius *= 3;

  auto base = ctrl.make(static_cast<int>(radius));
  if (!base) throw ValidationError("control function declined radius " + std::to_string(radius));

  IterateResult out;
  out.cover = *base;
  std::int64_t bound = ctrl.bound(static_cast<int>(radius));
  out.ladder.push_back({radius, bound});

  // restrict to the support (classes of a restricted cover live inside it)
  for (auto& c : out.cover.classes) c &= support;

  for (int j = 1; j <= steps; ++j) {
    radius /= 3;
    auto res = expand_cover(host, out.cover.classes, n, static_cast<int>(radius), bound, support);
    bound = res.R_out;
    out.cover.classes = std::move(res.classes);
    out.ladder.push_back({radius, bound});
  }
  out.cover.declared_r = r;
  out.cover.declared_R = bound;
  out.cover.host_id = host.id();
  out.R_out = bound;
  return out;
}

IterateResult iterate_expand(const Host& host, const ControlFunction& ctrl, int r, int k) {
  Bitset all = make_bitset(host.size());
  all.set();
  return iterate_expand_on(host, ctrl, r, k, all);
}

Cover product_cover(const ProductHost& host, const Cover& cover_x, const Cover& cover_y, int m, int n) {
  const int k = m + n + 1;
  if (static_cast<int>(cover_x.classes.size()) != k || static_cast<int>(cover_y.classes.size()) != k)
    throw ValidationError("product_cover needs exactly k = m+n+1 classes on both factors");
  Cover out;
  out.host_id = host.id();
  out.declared_r = std::min(cover_x.declared_r, cover_y.declared_r);
  out.declared_R = cover_x.declared_R + cover_y.declared_R;
  out.classes.assign(k, make_bitset(host.size()));
  for (int c = 0; c < k; ++c) {
    for (auto x = cover_x.classes[c].find_first(); x != Bitset::npos; x = cover_x.classes[c].find_next(x))
      for (auto y = cover_y.classes[c].find_first(); y != Bitset::npos; y = cover_y.classes[c].find_next(y))
        out.classes[c].set(static_cast<std::size_t>(host.pack(static_cast<std::int64_t>(x), static_cast<std::int64_t>(y))));
  }
  return out;
}

UnionCheckResult union_components_check(const Host& host, const Bitset& A, const Bitset& B, int r_A, std::int64_t R_A,
                                        int r_B, std::int64_t R_B) {
  if (R_B + 2LL * r_B >= r_A)
    return {UnionCheckResult::Status::HypothesisFailed,
            "hypothesis R_B + 2 r_B < r_A fails: " + std::to_string(R_B + 2LL * r_B) + " >= " + std::to_string(r_A)};
  for (const auto& comp : r_components(host, A, r_A))
    if (comp.diameter > R_A)
      return {UnionCheckResult::Status::HypothesisFailed,
              "A has an r_A-component of diameter " + std::to_string(comp.diameter) + " > " + std::to_string(R_A)};
  for (const auto& comp : r_components(host, B, r_B))
    if (comp.diameter > R_B)
      return {UnionCheckResult::Status::HypothesisFailed,
              "B has an r_B-component of diameter " + std::to_string(comp.diameter) + " > " + std::to_string(R_B)};

  const std::int64_t bound = 2LL * r_A + R_A;
  for (const auto& comp : r_components(host, A | B, r_B)) {
    if (comp.diameter > bound)
      return {UnionCheckResult::Status::Counterexample,
              "union has an r_B-component of diameter " + std::to_string(comp.diameter) + " > 2 r_A + R_A = " +
                  std::to_string(bound) + " at vertex " + host.label(comp.vertices.front())};
  }
  return {UnionCheckResult::Status::Pass, ""};
}

}  // namespace coarselab
