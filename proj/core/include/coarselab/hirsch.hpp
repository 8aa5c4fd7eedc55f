#pragma once

#include <memory>
#include <string>
#include <vector>

#include "coarselab/errors.hpp"

namespace coarselab {

/// Term over the elementary-amenable construction rules.
/// Text syntax: T | F(k) | Z(n) | VA(n) | Local(n) | Ext(a,b)
///            | Union(a,b,...) | Wreath(F(k), h).
struct GroupExpression {
  enum class Kind { Trivial, Finite, FreeAbelian, VirtuallyAbelian, LocalRank, Extension, IncreasingUnion, Wreath };
  Kind kind = Kind::Trivial;
  long long param = 0;  // order / rank
  std::vector<std::shared_ptr<GroupExpression>> children;
  bool declared_limit = false;  // IncreasingUnion realized as a finite prefix of a chain
};

using ExprPtr = std::shared_ptr<GroupExpression>;

ExprPtr parse_expression(const std::string& text);

/// Hirsch length: 0 on trivial/finite, rank on (virtually) abelian leaves and
/// local-rank leaves, additive over extensions, sup over unions, and
/// h(F wr H) = h(H).
long long hirsch(const ExprPtr& expr);

/// hirsch(expr), annotated as an upper bound for the box-space dimension of
/// any sequential normal filtration.
long long box_dimension_upper_bound(const ExprPtr& expr);

/// Derivation tree with the rule applied at each node.
std::string derivation(const ExprPtr& expr);

std::string expression_to_text(const ExprPtr& expr);

}  // namespace coarselab
