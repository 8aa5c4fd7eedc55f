#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "coarselab/group.hpp"

namespace coarselab {

/// Finite Cayley-type metric host.  Vertices are group elements indexed
/// 0..size()-1 with the identity at index 0; edges join v and s*v for the
/// canonical generators s.  The metric is the right-invariant word metric
/// d(x,y) = |x y^{-1}|, so right translations are graph automorphisms.
class Host {
 public:
  virtual ~Host() = default;
  virtual std::int64_t size() const = 0;
  virtual int degree() const = 0;
  virtual void neighbors(std::int64_t v, std::int64_t* out) const = 0;
  virtual std::int64_t mul(std::int64_t a, std::int64_t b) const = 0;
  virtual std::int64_t inv(std::int64_t a) const = 0;
  virtual int distance(std::int64_t x, std::int64_t y) const = 0;
  virtual int word_norm(std::int64_t g) const = 0;  // distance to the identity
  virtual int diameter() const = 0;
  virtual std::string label(std::int64_t v) const = 0;
  virtual std::int64_t parse_label(const std::string& s) const = 0;
  virtual std::vector<std::string> generator_names() const = 0;
  virtual std::string id() const = 0;
};

/// Finite-index normal subgroup data, family matched.
struct SubgroupSpec {
  std::vector<long long> moduli;  // FreeAbelian: kernel  (+) k_i Z
  long long bs_m = 0;             // BS: congruence pair (m, k), n^k = 1 mod m
  long long bs_k = 0;
  long long period = 0;           // Lamplighter: kernel of reduction mod period

  static SubgroupSpec free_abelian(std::vector<long long> moduli);
  static SubgroupSpec baumslag_solitar(long long m, long long k);
  static SubgroupSpec lamplighter(long long period);

  bool operator==(const SubgroupSpec&) const = default;
  json to_json(const GroupSpec& spec) const;
  static SubgroupSpec from_json(const GroupSpec& spec, const json& j);
  /// Index of the subgroup = vertex count of the quotient.
  std::int64_t index(const GroupSpec& spec) const;
  void validate(const GroupSpec& spec) const;
  /// True when the other subgroup is contained in this one (this is the
  /// shallower level).
  bool contains(const GroupSpec& spec, const SubgroupSpec& deeper) const;
};

long long mod_pow(long long base, long long e, long long m);

/// The quotient of a GroupSpec by a SubgroupSpec as a generator-labelled
/// graph carrying the quotient word metric.
class FiniteQuotient final : public Host {
 public:
  static constexpr std::int64_t kDefaultVertexCap = 20000;
  /// Reads COARSELAB_CAP when set, else kDefaultVertexCap.
  static std::int64_t default_cap();

  FiniteQuotient(GroupSpec spec, SubgroupSpec sub, std::int64_t vertex_cap);

  std::int64_t size() const override { return size_; }
  int degree() const override { return static_cast<int>(gen_names_.size()); }
  void neighbors(std::int64_t v, std::int64_t* out) const override;
  std::int64_t mul(std::int64_t a, std::int64_t b) const override;
  std::int64_t inv(std::int64_t a) const override;
  int distance(std::int64_t x, std::int64_t y) const override;
  int word_norm(std::int64_t g) const override { return dist_e_[static_cast<std::size_t>(g)]; }
  int diameter() const override { return diameter_; }
  std::string label(std::int64_t v) const override;
  std::int64_t parse_label(const std::string& s) const override;
  std::vector<std::string> generator_names() const override { return gen_names_; }
  std::string id() const override;

  const GroupSpec& spec() const { return spec_; }
  const SubgroupSpec& sub() const { return sub_; }

  /// Index of the coset of a group element (projection Gamma -> Gamma/N).
  std::int64_t project(const GroupElement& g) const;

  bool is_cycle() const;  // FreeAbelian(1) quotients

  json to_json() const;
  std::string to_dot() const;

 private:
  GroupSpec spec_;
  SubgroupSpec sub_;
  std::int64_t size_ = 0;
  std::vector<std::string> gen_names_;
  std::vector<std::uint16_t> dist_e_;
  std::vector<std::uint16_t> dist_table_;  // all pairs, only when size <= 5000
  int diameter_ = 0;

  // BS tables
  std::vector<long long> npow_, npow_inv_;

  void build_metric();
};

std::shared_ptr<FiniteQuotient> build_quotient(const GroupSpec& spec, const SubgroupSpec& sub,
                                               std::optional<std::int64_t> vertex_cap = std::nullopt);

/// Generator-equivariant 1-Lipschitz projection between nested levels of the
/// same spec (deep -> shallow).
struct QuotientMapping {
  const FiniteQuotient* deep = nullptr;
  const FiniteQuotient* shallow = nullptr;
  std::int64_t apply(std::int64_t deep_vertex) const;
};

QuotientMapping quotient_map(const FiniteQuotient& deep, const FiniteQuotient& shallow);

/// l^1 product of two hosts; a Cayley graph of the direct product with the
/// union generating set.
class ProductHost final : public Host {
 public:
  ProductHost(const Host& x, const Host& y);

  std::int64_t size() const override { return x_->size() * y_->size(); }
  int degree() const override { return x_->degree() + y_->degree(); }
  void neighbors(std::int64_t v, std::int64_t* out) const override;
  std::int64_t mul(std::int64_t a, std::int64_t b) const override;
  std::int64_t inv(std::int64_t a) const override;
  int distance(std::int64_t x, std::int64_t y) const override;
  int word_norm(std::int64_t g) const override;
  int diameter() const override { return x_->diameter() + y_->diameter(); }
  std::string label(std::int64_t v) const override;
  std::int64_t parse_label(const std::string& s) const override;
  std::vector<std::string> generator_names() const override;
  std::string id() const override;

  std::int64_t pack(std::int64_t vx, std::int64_t vy) const { return vx + x_->size() * vy; }
  std::int64_t unpack_x(std::int64_t v) const { return v % x_->size(); }
  std::int64_t unpack_y(std::int64_t v) const { return v / x_->size(); }

 private:
  const Host* x_;
  const Host* y_;
};

}  // namespace coarselab
