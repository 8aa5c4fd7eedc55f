#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "coarselab/errors.hpp"

namespace coarselab {

using BigInt = boost::multiprecision::cpp_int;
using json = nlohmann::ordered_json;

enum class Family { FreeAbelian, BaumslagSolitar, Lamplighter };

/// One of the supported finitely generated families together with its
/// canonical symmetric generating set.
struct GroupSpec {
  Family family = Family::FreeAbelian;
  int rank = 1;        // FreeAbelian(rank)
  long long n = 2;     // BS(1,n), |n| >= 2
  long long p = 2;     // Lamplighter lamp modulus, >= 2

  static GroupSpec free_abelian(int rank);
  static GroupSpec baumslag_solitar(long long n);
  static GroupSpec lamplighter(long long p);

  bool operator==(const GroupSpec&) const = default;

  json to_json() const;
  static GroupSpec from_json(const json& j);
  std::string describe() const;
};

/// Z^rank in coordinates.
struct FreeAbelianElt {
  std::vector<long long> coords;
  auto operator<=>(const FreeAbelianElt&) const = default;
};

/// BS(1,n) element (num / n^exp, t) in the semidirect form Z[1/n] x| Z.
/// Canonical: exp is minimal (exp > 0 implies n does not divide num),
/// and num == 0 implies exp == 0.
struct BsElt {
  BigInt num;
  int exp = 0;
  int t = 0;
  bool operator==(const BsElt& o) const { return num == o.num && exp == o.exp && t == o.t; }
  bool operator<(const BsElt& o) const {
    if (t != o.t) return t < o.t;
    if (exp != o.exp) return exp < o.exp;
    return num < o.num;
  }
};

/// Lamplighter element: finitely supported lamp configuration plus position.
/// Lamps stored sorted by position, values in 1..p-1.
struct LampElt {
  std::vector<std::pair<long long, long long>> lamps;
  long long pos = 0;
  auto operator<=>(const LampElt&) const = default;
};

struct GroupElement {
  std::variant<FreeAbelianElt, BsElt, LampElt> v;
  bool operator==(const GroupElement& o) const { return v == o.v; }
  bool operator<(const GroupElement& o) const { return v < o.v; }
};

struct Generator {
  std::string name;
  GroupElement g;
};

GroupElement identity(const GroupSpec& spec);
bool is_identity(const GroupSpec& spec, const GroupElement& g);

/// The canonical symmetric generating set (identity excluded).
std::vector<Generator> generators(const GroupSpec& spec);

GroupElement multiply(const GroupSpec& spec, const GroupElement& a, const GroupElement& b);
GroupElement inverse(const GroupSpec& spec, const GroupElement& a);

/// All elements of word length <= r, deduplicated by canonical form and
/// sorted. Throws ResourceError when more than element_cap elements appear.
std::vector<GroupElement> ball(const GroupSpec& spec, int r, std::size_t element_cap);

/// Minimal word length if <= cutoff, nullopt otherwise.
std::optional<int> word_length(const GroupSpec& spec, const GroupElement& g, int cutoff);

std::string element_label(const GroupSpec& spec, const GroupElement& g);

}  // namespace coarselab
