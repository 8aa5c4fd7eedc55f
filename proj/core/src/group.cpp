#include "coarselab/group.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace coarselab {

GroupSpec GroupSpec::free_abelian(int rank) {
  if (rank < 1) throw ValidationError("FreeAbelian rank must be positive");
  if (rank > 16) throw ResourceError("FreeAbelian rank capped at 16");
  GroupSpec s;
  s.family = Family::FreeAbelian;
  s.rank = rank;
  return s;
}

GroupSpec GroupSpec::baumslag_solitar(long long n) {
  if (n > -2 && n < 2) throw ValidationError("BS(1,n) requires |n| >= 2");
  GroupSpec s;
  s.family = Family::BaumslagSolitar;
  s.n = n;
  return s;
}

GroupSpec GroupSpec::lamplighter(long long p) {
  if (p < 2) throw ValidationError("lamplighter modulus must be >= 2");
  GroupSpec s;
  s.family = Family::Lamplighter;
  s.p = p;
  return s;
}

json GroupSpec::to_json() const {
  json j;
  switch (family) {
    case Family::FreeAbelian:
      j["family"] = "free-abelian";
      j["params"] = json{{"rank", rank}};
      break;
    case Family::BaumslagSolitar:
      j["family"] = "bs";
      j["params"] = json{{"n", n}};
      break;
    case Family::Lamplighter:
      j["family"] = "lamplighter";
      j["params"] = json{{"p", p}};
      break;
  }
  return j;
}

GroupSpec GroupSpec::from_json(const json& j) {
  const std::string fam = j.at("family").get<std::string>();
  const json& p = j.at("params");
  if (fam == "free-abelian") return free_abelian(p.at("rank").get<int>());
  if (fam == "bs") return baumslag_solitar(p.at("n").get<long long>());
  if (fam == "lamplighter") return lamplighter(p.at("p").get<long long>());
  throw ValidationError("unknown group family: " + fam);
}

std::string GroupSpec::describe() const {
  std::ostringstream os;
  switch (family) {
    case Family::FreeAbelian:
      os << "Z^" << rank;
      break;
    case Family::BaumslagSolitar:
      os << "BS(1," << n << ")";
      break;
    case Family::Lamplighter:
      os << "Z/" << p << " wr Z";
      break;
  }
  return os.str();
}

namespace {

const FreeAbelianElt& as_fa(const GroupElement& g) {
  if (const auto* e = std::get_if<FreeAbelianElt>(&g.v)) return *e;
  throw UsageError("element does not belong to a free abelian spec");
}
const BsElt& as_bs(const GroupElement& g) {
  if (const auto* e = std::get_if<BsElt>(&g.v)) return *e;
  throw UsageError("element does not belong to a BS(1,n) spec");
}
const LampElt& as_lamp(const GroupElement& g) {
  if (const auto* e = std::get_if<LampElt>(&g.v)) return *e;
  throw UsageError("element does not belong to a lamplighter spec");
}

BigInt pow_big(long long base, int e) {
  BigInt r = 1;
  BigInt b = base;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

// Canonicalize (num / n^exp, t): strip common powers of n, zero normalizes.
BsElt reduce_bs(long long n, BigInt num, int exp, int t) {
  if (num == 0) return BsElt{BigInt(0), 0, t};
  while (exp > 0 && num % n == 0) {
    num /= n;
    --exp;
  }
  return BsElt{std::move(num), exp, t};
}

BsElt bs_multiply(long long n, const BsElt& a, const BsElt& b) {
  // (x1,t1)(x2,t2) = (x1 + n^{t1} x2, t1 + t2)
  // x1 = a.num / n^{a.exp}, n^{t1} x2 = b.num / n^{b.exp - t1}
  const int e1 = a.exp;
  const int e2 = std::max(b.exp - a.t, 0);
  const int E = std::max(e1, e2);
  BigInt num = a.num * pow_big(n, E - e1);
  // exponent of b's contribution: E - (b.exp - a.t)
  num += b.num * pow_big(n, E - b.exp + a.t);
  return reduce_bs(n, std::move(num), E, a.t + b.t);
}

BsElt bs_inverse(long long n, const BsElt& a) {
  // (x,t)^{-1} = (-n^{-t} x, -t);  -x / n^{exp + t}
  const int e = a.exp + a.t;
  if (a.num == 0) return BsElt{BigInt(0), 0, -a.t};
  if (e >= 0) return reduce_bs(n, -a.num, e, -a.t);
  return BsElt{-a.num * pow_big(n, -e), 0, -a.t};
}

long long mod_p(long long v, long long p) {
  long long r = v % p;
  return r < 0 ? r + p : r;
}

LampElt lamp_multiply(long long p, const LampElt& a, const LampElt& b) {
  // (c1,s1)(c2,s2) = (c1 + shift_{s1} c2, s1+s2); shift moves positions up by s1.
  std::map<long long, long long> acc;
  for (const auto& [pos, val] : a.lamps) acc[pos] += val;
  for (const auto& [pos, val] : b.lamps) acc[pos + a.pos] += val;
  LampElt out;
  out.pos = a.pos + b.pos;
  for (const auto& [pos, val] : acc) {
    const long long v = mod_p(val, p);
    if (v != 0) out.lamps.emplace_back(pos, v);
  }
  return out;
}

LampElt lamp_inverse(long long p, const LampElt& a) {
  LampElt out;
  out.pos = -a.pos;
  for (const auto& [pos, val] : a.lamps) out.lamps.emplace_back(pos - a.pos, mod_p(-val, p));
  std::sort(out.lamps.begin(), out.lamps.end());
  return out;
}

}  // namespace

GroupElement identity(const GroupSpec& spec) {
  switch (spec.family) {
    case Family::FreeAbelian:
      return GroupElement{FreeAbelianElt{std::vector<long long>(spec.rank, 0)}};
    case Family::BaumslagSolitar:
      return GroupElement{BsElt{}};
    case Family::Lamplighter:
      return GroupElement{LampElt{}};
  }
  throw UsageError("bad family");
}

bool is_identity(const GroupSpec& spec, const GroupElement& g) { return g == identity(spec); }

std::vector<Generator> generators(const GroupSpec& spec) {
  std::vector<Generator> gens;
  switch (spec.family) {
    case Family::FreeAbelian: {
      for (int i = 0; i < spec.rank; ++i) {
        std::vector<long long> c(spec.rank, 0);
        std::string nm = spec.rank == 1 ? std::string("x") : "x" + std::to_string(i + 1);
        c[i] = 1;
        gens.push_back({nm, GroupElement{FreeAbelianElt{c}}});
        c[i] = -1;
        gens.push_back({nm + "^-1", GroupElement{FreeAbelianElt{c}}});
      }
      break;
    }
    case Family::BaumslagSolitar: {
      gens.push_back({"a", GroupElement{BsElt{BigInt(1), 0, 0}}});
      gens.push_back({"a^-1", GroupElement{BsElt{BigInt(-1), 0, 0}}});
      gens.push_back({"b", GroupElement{BsElt{BigInt(0), 0, 1}}});
      gens.push_back({"b^-1", GroupElement{BsElt{BigInt(0), 0, -1}}});
      break;
    }
    case Family::Lamplighter: {
      gens.push_back({"l", GroupElement{LampElt{{{0, 1}}, 0}}});
      if (spec.p > 2) gens.push_back({"l^-1", GroupElement{LampElt{{{0, spec.p - 1}}, 0}}});
      gens.push_back({"t", GroupElement{LampElt{{}, 1}}});
      gens.push_back({"t^-1", GroupElement{LampElt{{}, -1}}});
      break;
    }
  }
  return gens;
}

GroupElement multiply(const GroupSpec& spec, const GroupElement& a, const GroupElement& b) {
  switch (spec.family) {
    case Family::FreeAbelian: {
      const auto& x = as_fa(a);
      const auto& y = as_fa(b);
      if (x.coords.size() != static_cast<std::size_t>(spec.rank) || x.coords.size() != y.coords.size())
        throw UsageError("mismatched free abelian ranks");
      FreeAbelianElt out = x;
      for (std::size_t i = 0; i < out.coords.size(); ++i) out.coords[i] += y.coords[i];
      return GroupElement{std::move(out)};
    }
    case Family::BaumslagSolitar:
      return GroupElement{bs_multiply(spec.n, as_bs(a), as_bs(b))};
    case Family::Lamplighter:
      return GroupElement{lamp_multiply(spec.p, as_lamp(a), as_lamp(b))};
  }
  throw UsageError("bad family");
}

GroupElement inverse(const GroupSpec& spec, const GroupElement& a) {
  switch (spec.family) {
    case Family::FreeAbelian: {
      FreeAbelianElt out = as_fa(a);
      for (auto& c : out.coords) c = -c;
      return GroupElement{std::move(out)};
    }
    case Family::BaumslagSolitar:
      return GroupElement{bs_inverse(spec.n, as_bs(a))};
    case Family::Lamplighter:
      return GroupElement{lamp_inverse(spec.p, as_lamp(a))};
  }
  throw UsageError("bad family");
}

std::vector<GroupElement> ball(const GroupSpec& spec, int r, std::size_t element_cap) {
  if (r < 0) throw UsageError("ball radius must be >= 0");
  std::set<GroupElement> seen;
  std::vector<GroupElement> frontier;
  const GroupElement e = identity(spec);
  seen.insert(e);
  frontier.push_back(e);
  const auto gens = generators(spec);
  for (int layer = 0; layer < r && !frontier.empty(); ++layer) {
    std::vector<GroupElement> next;
    for (const auto& g : frontier) {
      for (const auto& s : gens) {
        GroupElement h = multiply(spec, s.g, g);
        if (seen.insert(h).second) {
          if (seen.size() > element_cap)
            throw ResourceError("ball exceeds element cap of " + std::to_string(element_cap));
          next.push_back(std::move(h));
        }
      }
    }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

std::optional<int> word_length(const GroupSpec& spec, const GroupElement& g, int cutoff) {
  if (cutoff < 0) throw UsageError("cutoff must be >= 0");
  const GroupElement e = identity(spec);
  if (g == e) return 0;
  std::set<GroupElement> seen{e};
  std::vector<GroupElement> frontier{e};
  const auto gens = generators(spec);
  for (int len = 1; len <= cutoff && !frontier.empty(); ++len) {
    std::vector<GroupElement> next;
    for (const auto& x : frontier) {
      for (const auto& s : gens) {
        GroupElement h = multiply(spec, s.g, x);
        if (h == g) return len;
        if (seen.insert(h).second) next.push_back(std::move(h));
      }
    }
    frontier = std::move(next);
  }
  return std::nullopt;
}

std::string element_label(const GroupSpec& spec, const GroupElement& g) {
  std::ostringstream os;
  switch (spec.family) {
    case Family::FreeAbelian: {
      const auto& e = as_fa(g);
      for (std::size_t i = 0; i < e.coords.size(); ++i) {
        if (i) os << ",";
        os << e.coords[i];
      }
      break;
    }
    case Family::BaumslagSolitar: {
      const auto& e = as_bs(g);
      os << "(" << e.num.str();
      if (e.exp > 0) os << "/" << spec.n << "^" << e.exp;
      os << "," << e.t << ")";
      break;
    }
    case Family::Lamplighter: {
      const auto& e = as_lamp(g);
      os << "{";
      for (std::size_t i = 0; i < e.lamps.size(); ++i) {
        if (i) os << " ";
        os << e.lamps[i].first << ":" << e.lamps[i].second;
      }
      os << "}@" << e.pos;
      break;
    }
  }
  return os.str();
}

}  // namespace coarselab
