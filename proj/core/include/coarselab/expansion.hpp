#pragma once

#include "coarselab/cover.hpp"

namespace coarselab {

/// One expansion step.  Input: k classes, multiplicity >= k-n over the
/// support, verified at (k-1, 3r, R_in).  Output: k+1 classes, multiplicity
/// >= k-n+1, verified at (k, r, R_in + 2r).  The first k output classes are
/// the r-neighbourhoods (within the support) of the inputs; the new class is
/// the union of the pairwise r-disjoint sets
///   W_S = (intersection of U_s, s in S) \ (union of expanded U_i, i not in S)
/// over index sets S of size k-n.
struct ExpandResult {
  std::vector<Bitset> classes;
  std::int64_t R_out = 0;
  std::vector<Bitset> w_sets;  // the W_S pieces of the new class, for auditing
};

ExpandResult expand_cover(const Host& host, const std::vector<Bitset>& classes, int n, int r, std::int64_t R_in,
                          const Bitset& support);

/// Convenience wrapper for full covers.
Cover expand_cover(const Host& host, const Cover& input, int n, int r);

/// Ladder entry: radius used and the bound after that stage.
struct LadderStep {
  std::int64_t radius = 0;
  std::int64_t bound = 0;
};

struct IterateResult {
  Cover cover;
  std::vector<LadderStep> ladder;  // first entry is the control-function request
  std::int64_t R_out = 0;
};

/// Requests ctrl at radius 3^{k-n-1} r and expands k-n-1 times down the
/// ladder ... -> 3r -> r, recording the exact bound at every stage.
IterateResult iterate_expand(const Host& host, const ControlFunction& ctrl, int r, int k);
IterateResult iterate_expand_on(const Host& host, const ControlFunction& ctrl, int r, int k, const Bitset& support);

/// Product of two k-class covers with multiplicities >= k-m and >= k-n,
/// k = m+n+1: classes U_i x V_i on the l^1 product host.
Cover product_cover(const ProductHost& host, const Cover& cover_x, const Cover& cover_y, int m, int n);

/// Finite union check: given that the r_A-components of A have diameter
/// <= R_A, the r_B-components of B have diameter <= R_B, and
/// R_B + 2 r_B < r_A, every r_B-component of the union has diameter
/// <= 2 r_A + R_A.
struct UnionCheckResult {
  enum class Status { Pass, Counterexample, HypothesisFailed } status;
  std::string detail;
};

UnionCheckResult union_components_check(const Host& host, const Bitset& A, const Bitset& B, int r_A, std::int64_t R_A,
                                        int r_B, std::int64_t R_B);

}  // namespace coarselab
