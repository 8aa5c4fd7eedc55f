#include "coarselab/quotient.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>

namespace coarselab {

SubgroupSpec SubgroupSpec::free_abelian(std::vector<long long> moduli) {
  SubgroupSpec s;
  s.moduli = std::move(moduli);
  return s;
}

SubgroupSpec SubgroupSpec::baumslag_solitar(long long m, long long k) {
  SubgroupSpec s;
  s.bs_m = m;
  s.bs_k = k;
  return s;
}

SubgroupSpec SubgroupSpec::lamplighter(long long period) {
  SubgroupSpec s;
  s.period = period;
  return s;
}

long long mod_pow(long long base, long long e, long long m) {
  if (m <= 0) throw ValidationError("mod_pow needs positive modulus");
  long long b = base % m;
  if (b < 0) b += m;
  unsigned long long r = 1, bb = static_cast<unsigned long long>(b), mm = static_cast<unsigned long long>(m);
  while (e > 0) {
    if (e & 1) r = (__uint128_t)r * bb % mm;
    bb = (__uint128_t)bb * bb % mm;
    e >>= 1;
  }
  return static_cast<long long>(r);
}

void SubgroupSpec::validate(const GroupSpec& spec) const {
  switch (spec.family) {
    case Family::FreeAbelian: {
      if (moduli.size() != static_cast<std::size_t>(spec.rank))
        throw ValidationError("moduli vector must match the rank");
      for (long long k : moduli)
        if (k < 1) throw ValidationError("moduli must be >= 1");
      return;
    }
    case Family::BaumslagSolitar: {
      if (bs_m < 1 || bs_k < 1) throw ValidationError("congruence pair must be >= 1");
      if (std::gcd(bs_m, std::abs(spec.n)) != 1)
        throw ValidationError("congruence pair needs gcd(m, n) = 1");
      if (mod_pow(spec.n, bs_k, bs_m) != 1 % bs_m)
        throw ValidationError("congruence pair needs n^k = 1 (mod m)");
      return;
    }
    case Family::Lamplighter: {
      if (period < 1) throw ValidationError("period must be >= 1");
      if (period > 48) throw ResourceError("lamplighter period capped at 48");
      return;
    }
  }
  throw ValidationError("bad family");
}

std::int64_t SubgroupSpec::index(const GroupSpec& spec) const {
  constexpr __int128 kLimit = std::numeric_limits<std::int64_t>::max();
  __int128 v = 1;
  switch (spec.family) {
    case Family::FreeAbelian:
      for (long long k : moduli) {
        v *= k;
        if (v > kLimit) throw ResourceError("subgroup index overflows");
      }
      return static_cast<std::int64_t>(v);
    case Family::BaumslagSolitar:
      v = static_cast<__int128>(bs_m) * bs_k;
      if (v > kLimit) throw ResourceError("subgroup index overflows");
      return static_cast<std::int64_t>(v);
    case Family::Lamplighter:
      v = period;
      for (long long i = 0; i < period; ++i) {
        v *= spec.p;
        if (v > kLimit) throw ResourceError("subgroup index overflows");
      }
      return static_cast<std::int64_t>(v);
  }
  throw ValidationError("bad family");
}

bool SubgroupSpec::contains(const GroupSpec& spec, const SubgroupSpec& deeper) const {
  switch (spec.family) {
    case Family::FreeAbelian: {
      for (std::size_t i = 0; i < moduli.size(); ++i)
        if (deeper.moduli[i] % moduli[i] != 0) return false;
      return true;
    }
    case Family::BaumslagSolitar:
      return deeper.bs_m % bs_m == 0 && deeper.bs_k % bs_k == 0;
    case Family::Lamplighter:
      return deeper.period % period == 0;
  }
  return false;
}

json SubgroupSpec::to_json(const GroupSpec& spec) const {
  switch (spec.family) {
    case Family::FreeAbelian:
      return json{{"moduli", moduli}};
    case Family::BaumslagSolitar:
      return json{{"m", bs_m}, {"k", bs_k}};
    case Family::Lamplighter:
      return json{{"period", period}};
  }
  throw ValidationError("bad family");
}

SubgroupSpec SubgroupSpec::from_json(const GroupSpec& spec, const json& j) {
  switch (spec.family) {
    case Family::FreeAbelian:
      return free_abelian(j.at("moduli").get<std::vector<long long>>());
    case Family::BaumslagSolitar:
      return baumslag_solitar(j.at("m").get<long long>(), j.at("k").get<long long>());
    case Family::Lamplighter:
      return lamplighter(j.at("period").get<long long>());
  }
  throw ValidationError("bad family");
}

std::int64_t FiniteQuotient::default_cap() {
  if (const char* env = std::getenv("COARSELAB_CAP")) {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end != env && v > 0) return v;
  }
  return kDefaultVertexCap;
}

FiniteQuotient::FiniteQuotient(GroupSpec spec, SubgroupSpec sub, std::int64_t vertex_cap)
    : spec_(std::move(spec)), sub_(std::move(sub)) {
  sub_.validate(spec_);
  size_ = sub_.index(spec_);
  if (size_ > vertex_cap)
    throw ResourceError("quotient has " + std::to_string(size_) + " vertices, above the cap of " +
                        std::to_string(vertex_cap));
  for (const auto& g : generators(spec_)) gen_names_.push_back(g.name);
  if (spec_.family == Family::BaumslagSolitar) {
    npow_.resize(sub_.bs_k);
    npow_inv_.resize(sub_.bs_k);
    long long nn = spec_.n % sub_.bs_m;
    if (nn < 0) nn += sub_.bs_m;
    npow_[0] = 1 % sub_.bs_m;
    for (long long i = 1; i < sub_.bs_k; ++i)
      npow_[i] = static_cast<long long>((__int128)npow_[i - 1] * nn % sub_.bs_m);
    for (long long i = 0; i < sub_.bs_k; ++i) npow_inv_[i] = npow_[(sub_.bs_k - i) % sub_.bs_k];
  }
  build_metric();
}

namespace {

// Mixed-radix decode/encode for FreeAbelian quotients.
void fa_decode(std::int64_t v, const std::vector<long long>& mod, long long* out) {
  for (std::size_t i = 0; i < mod.size(); ++i) {
    out[i] = v % mod[i];
    v /= mod[i];
  }
}
std::int64_t fa_encode(const long long* c, const std::vector<long long>& mod) {
  std::int64_t v = 0;
  for (std::size_t i = mod.size(); i-- > 0;) v = v * mod[i] + c[i];
  return v;
}

constexpr int kMaxRank = 16;

}  // namespace

void FiniteQuotient::neighbors(std::int64_t v, std::int64_t* out) const {
  switch (spec_.family) {
    case Family::FreeAbelian: {
      long long c[kMaxRank];
      fa_decode(v, sub_.moduli, c);
      int o = 0;
      for (std::size_t i = 0; i < sub_.moduli.size(); ++i) {
        const long long orig = c[i];
        c[i] = (orig + 1) % sub_.moduli[i];
        out[o++] = fa_encode(c, sub_.moduli);
        c[i] = (orig - 1 + sub_.moduli[i]) % sub_.moduli[i];
        out[o++] = fa_encode(c, sub_.moduli);
        c[i] = orig;
      }
      return;
    }
    case Family::BaumslagSolitar: {
      const long long m = sub_.bs_m, k = sub_.bs_k;
      const long long z = v % m, t = v / m;
      // left multiplication: a.(z,t) = (z+1, t); b.(z,t) = (n z, t+1)
      out[0] = (z + 1) % m + m * t;
      out[1] = (z - 1 + m) % m + m * t;
      out[2] = static_cast<long long>((__int128)npow_[1] * z % m) + m * ((t + 1) % k);
      out[3] = static_cast<long long>((__int128)npow_inv_[1] * z % m) + m * ((t - 1 + k) % k);
      return;
    }
    case Family::Lamplighter: {
      const long long k = sub_.period, p = spec_.p;
      std::int64_t pk = 1;
      for (long long i = 0; i < k; ++i) pk *= p;
      const std::int64_t cfg = v % pk;
      const long long s = v / pk;
      long long d[64] = {0};
      std::int64_t rest = cfg;
      for (long long i = 0; i < k; ++i) {
        d[i] = rest % p;
        rest /= p;
      }
      int o = 0;
      // l.(c,s): toggle lamp at position 0
      {
        std::int64_t up = cfg - d[0] + (d[0] + 1) % p;
        out[o++] = up + pk * s;
        if (p > 2) {
          std::int64_t down = cfg - d[0] + (d[0] - 1 + p) % p;
          out[o++] = down + pk * s;
        }
      }
      // t.(c,s) = (rot_{+1} c, s+1); t^-1 rotates down
      {
        std::int64_t rot_up = 0, rot_dn = 0, w = 1;
        for (long long i = 0; i < k; ++i) {
          rot_up += d[(i - 1 + k) % k] * w;
          rot_dn += d[(i + 1) % k] * w;
          w *= p;
        }
        out[o++] = rot_up + pk * ((s + 1) % k);
        out[o++] = rot_dn + pk * ((s - 1 + k) % k);
      }
      return;
    }
  }
}

std::int64_t FiniteQuotient::mul(std::int64_t a, std::int64_t b) const {
  switch (spec_.family) {
    case Family::FreeAbelian: {
      long long x[kMaxRank], y[kMaxRank];
      fa_decode(a, sub_.moduli, x);
      fa_decode(b, sub_.moduli, y);
      for (std::size_t i = 0; i < sub_.moduli.size(); ++i) x[i] = (x[i] + y[i]) % sub_.moduli[i];
      return fa_encode(x, sub_.moduli);
    }
    case Family::BaumslagSolitar: {
      const long long m = sub_.bs_m, k = sub_.bs_k;
      const long long z1 = a % m, t1 = a / m, z2 = b % m, t2 = b / m;
      const long long z = static_cast<long long>(((__int128)npow_[t1] * z2 + z1) % m);
      return z + m * ((t1 + t2) % k);
    }
    case Family::Lamplighter: {
      const long long k = sub_.period, p = spec_.p;
      std::int64_t pk = 1;
      for (long long i = 0; i < k; ++i) pk *= p;
      long long c1[64], c2[64];
      std::int64_t r1 = a % pk, r2 = b % pk;
      const long long s1 = a / pk, s2 = b / pk;
      for (long long i = 0; i < k; ++i) {
        c1[i] = r1 % p;
        r1 /= p;
        c2[i] = r2 % p;
        r2 /= p;
      }
      std::int64_t cfg = 0, w = 1;
      for (long long i = 0; i < k; ++i) {
        cfg += ((c1[i] + c2[(i - s1 % k + k) % k]) % p) * w;
        w *= p;
      }
      return cfg + pk * ((s1 + s2) % k);
    }
  }
  throw UsageError("bad family");
}

std::int64_t FiniteQuotient::inv(std::int64_t a) const {
  switch (spec_.family) {
    case Family::FreeAbelian: {
      long long x[kMaxRank];
      fa_decode(a, sub_.moduli, x);
      for (std::size_t i = 0; i < sub_.moduli.size(); ++i) x[i] = (sub_.moduli[i] - x[i]) % sub_.moduli[i];
      return fa_encode(x, sub_.moduli);
    }
    case Family::BaumslagSolitar: {
      const long long m = sub_.bs_m, k = sub_.bs_k;
      const long long z = a % m, t = a / m;
      const long long ti = (k - t) % k;
      const long long zi = static_cast<long long>((__int128)npow_[ti] * z % m);
      return (m - zi) % m + m * ti;
    }
    case Family::Lamplighter: {
      const long long k = sub_.period, p = spec_.p;
      std::int64_t pk = 1;
      for (long long i = 0; i < k; ++i) pk *= p;
      long long c[64];
      std::int64_t r = a % pk;
      const long long s = a / pk;
      for (long long i = 0; i < k; ++i) {
        c[i] = r % p;
        r /= p;
      }
      std::int64_t cfg = 0, w = 1;
      const long long si = (k - s % k) % k;
      for (long long i = 0; i < k; ++i) {
        cfg += ((p - c[(i - si % k + k) % k]) % p) * w;
        w *= p;
      }
      return cfg + pk * si;
    }
  }
  throw UsageError("bad family");
}

void FiniteQuotient::build_metric() {
  dist_e_.assign(static_cast<std::size_t>(size_), std::numeric_limits<std::uint16_t>::max());
  std::vector<std::int64_t> frontier{0}, next;
  dist_e_[0] = 0;
  std::uint16_t d = 0;
  std::vector<std::int64_t> nb(degree());
  while (!frontier.empty()) {
    ++d;
    next.clear();
    for (std::int64_t v : frontier) {
      neighbors(v, nb.data());
      for (int i = 0; i < degree(); ++i) {
        const auto w = static_cast<std::size_t>(nb[i]);
        if (dist_e_[w] == std::numeric_limits<std::uint16_t>::max()) {
          dist_e_[w] = d;
          next.push_back(nb[i]);
        }
      }
    }
    frontier.swap(next);
  }
  diameter_ = 0;
  for (std::size_t i = 0; i < dist_e_.size(); ++i) {
    if (dist_e_[i] == std::numeric_limits<std::uint16_t>::max())
      throw ValidationError("quotient graph is not connected");
    diameter_ = std::max(diameter_, static_cast<int>(dist_e_[i]));
  }
  if (size_ <= 5000) {
    dist_table_.resize(static_cast<std::size_t>(size_) * size_);
    for (std::int64_t y = 0; y < size_; ++y) {
      const std::int64_t yi = inv(y);
      for (std::int64_t x = 0; x < size_; ++x)
        dist_table_[static_cast<std::size_t>(x) * size_ + y] = dist_e_[static_cast<std::size_t>(mul(x, yi))];
    }
  }
}

int FiniteQuotient::distance(std::int64_t x, std::int64_t y) const {
  if (x < 0 || y < 0 || x >= size_ || y >= size_) throw UsageError("unknown vertex");
  if (!dist_table_.empty()) return dist_table_[static_cast<std::size_t>(x) * size_ + y];
  return dist_e_[static_cast<std::size_t>(mul(x, inv(y)))];
}

std::string FiniteQuotient::label(std::int64_t v) const {
  std::ostringstream os;
  switch (spec_.family) {
    case Family::FreeAbelian: {
      long long c[kMaxRank];
      fa_decode(v, sub_.moduli, c);
      for (std::size_t i = 0; i < sub_.moduli.size(); ++i) {
        if (i) os << ",";
        os << c[i];
      }
      break;
    }
    case Family::BaumslagSolitar:
      os << v % sub_.bs_m << "." << v / sub_.bs_m;
      break;
    case Family::Lamplighter: {
      const long long k = sub_.period, p = spec_.p;
      std::int64_t pk = 1;
      for (long long i = 0; i < k; ++i) pk *= p;
      std::int64_t cfg = v % pk;
      for (long long i = 0; i < k; ++i) {
        os << cfg % p;
        cfg /= p;
      }
      os << "." << v / pk;
      break;
    }
  }
  return os.str();
}

std::int64_t FiniteQuotient::parse_label(const std::string& s) const {
  switch (spec_.family) {
    case Family::FreeAbelian: {
      long long c[kMaxRank];
      std::stringstream ss(s);
      std::string part;
      std::size_t i = 0;
      while (std::getline(ss, part, ',')) {
        if (i >= sub_.moduli.size()) throw ValidationError("bad vertex label: " + s);
        c[i] = ((std::stoll(part) % sub_.moduli[i]) + sub_.moduli[i]) % sub_.moduli[i];
        ++i;
      }
      if (i != sub_.moduli.size()) throw ValidationError("bad vertex label: " + s);
      return fa_encode(c, sub_.moduli);
    }
    case Family::BaumslagSolitar: {
      const auto dot = s.find('.');
      if (dot == std::string::npos) throw ValidationError("bad vertex label: " + s);
      const long long z = std::stoll(s.substr(0, dot)), t = std::stoll(s.substr(dot + 1));
      if (z < 0 || z >= sub_.bs_m || t < 0 || t >= sub_.bs_k) throw ValidationError("bad vertex label: " + s);
      return z + sub_.bs_m * t;
    }
    case Family::Lamplighter: {
      const auto dot = s.find('.');
      if (dot == std::string::npos || dot != static_cast<std::size_t>(sub_.period))
        throw ValidationError("bad vertex label: " + s);
      std::int64_t cfg = 0, w = 1;
      for (long long i = 0; i < sub_.period; ++i) {
        const long long digit = s[i] - '0';
        if (digit < 0 || digit >= spec_.p) throw ValidationError("bad vertex label: " + s);
        cfg += digit * w;
        w *= spec_.p;
      }
      const long long pos = std::stoll(s.substr(dot + 1));
      if (pos < 0 || pos >= sub_.period) throw ValidationError("bad vertex label: " + s);
      return cfg + w * pos;
    }
  }
  throw ValidationError("bad family");
}

std::string FiniteQuotient::id() const {
  return spec_.to_json().dump() + "/" + sub_.to_json(spec_).dump();
}

std::int64_t FiniteQuotient::project(const GroupElement& g) const {
  switch (spec_.family) {
    case Family::FreeAbelian: {
      const auto& e = std::get<FreeAbelianElt>(g.v);
      long long c[kMaxRank];
      for (std::size_t i = 0; i < sub_.moduli.size(); ++i)
        c[i] = ((e.coords[i] % sub_.moduli[i]) + sub_.moduli[i]) % sub_.moduli[i];
      return fa_encode(c, sub_.moduli);
    }
    case Family::BaumslagSolitar: {
      const auto& e = std::get<BsElt>(g.v);
      const long long m = sub_.bs_m, k = sub_.bs_k;
      long long z = static_cast<long long>(e.num % m);
      if (z < 0) z += m;
      // divide by n^exp using n^{-1} = n^{k-1} mod m
      for (int i = 0; i < e.exp; ++i) z = static_cast<long long>((__int128)z * npow_inv_[1] % m);
      const long long t = ((e.t % k) + k) % k;
      return z + m * t;
    }
    case Family::Lamplighter: {
      const auto& e = std::get<LampElt>(g.v);
      const long long k = sub_.period, p = spec_.p;
      long long d[64] = {0};
      for (const auto& [pos, val] : e.lamps) d[((pos % k) + k) % k] = (d[((pos % k) + k) % k] + val) % p;
      std::int64_t cfg = 0, w = 1;
      for (long long i = 0; i < k; ++i) {
        cfg += d[i] * w;
        w *= p;
      }
      return cfg + w * (((e.pos % k) + k) % k);
    }
  }
  throw UsageError("bad family");
}

bool FiniteQuotient::is_cycle() const {
  return spec_.family == Family::FreeAbelian && spec_.rank == 1;
}

json FiniteQuotient::to_json() const {
  json j;
  j["spec"] = spec_.to_json();
  j["sub"] = sub_.to_json(spec_);
  j["vertices"] = size_;
  j["diameter"] = diameter_;
  return j;
}

std::string FiniteQuotient::to_dot() const {
  if (size_ > 2000) throw ResourceError("DOT export capped at 2000 vertices");
  std::ostringstream os;
  os << "graph quotient {\n";
  std::vector<std::int64_t> nb(degree());
  // one line per undirected edge: emit at the positively-named generator;
  // self-inverse generators (no listed inverse) dedup by endpoint order
  std::vector<bool> self_inverse(gen_names_.size(), false);
  for (std::size_t i = 0; i < gen_names_.size(); ++i) {
    if (gen_names_[i].find("^-1") != std::string::npos) continue;
    const std::string partner = gen_names_[i] + "^-1";
    self_inverse[i] = std::find(gen_names_.begin(), gen_names_.end(), partner) == gen_names_.end();
  }
  for (std::int64_t v = 0; v < size_; ++v) {
    neighbors(v, nb.data());
    for (int i = 0; i < degree(); ++i) {
      if (gen_names_[static_cast<std::size_t>(i)].find("^-1") != std::string::npos) continue;
      if (self_inverse[static_cast<std::size_t>(i)] && nb[i] < v) continue;
      os << "  \"" << label(v) << "\" -- \"" << label(nb[i]) << "\" [label=\""
         << gen_names_[static_cast<std::size_t>(i)] << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

std::shared_ptr<FiniteQuotient> build_quotient(const GroupSpec& spec, const SubgroupSpec& sub,
                                               std::optional<std::int64_t> vertex_cap) {
  return std::make_shared<FiniteQuotient>(spec, sub, vertex_cap.value_or(FiniteQuotient::default_cap()));
}

std::int64_t QuotientMapping::apply(std::int64_t v) const {
  const auto& spec = deep->spec();
  const auto& ds = deep->sub();
  const auto& ss = shallow->sub();
  switch (spec.family) {
    case Family::FreeAbelian: {
      long long c[kMaxRank];
      fa_decode(v, ds.moduli, c);
      for (std::size_t i = 0; i < ds.moduli.size(); ++i) c[i] %= ss.moduli[i];
      return fa_encode(c, ss.moduli);
    }
    case Family::BaumslagSolitar: {
      const long long z = v % ds.bs_m, t = v / ds.bs_m;
      return z % ss.bs_m + ss.bs_m * (t % ss.bs_k);
    }
    case Family::Lamplighter: {
      const long long kd = ds.period, ks = ss.period, p = spec.p;
      std::int64_t pkd = 1, pks = 1;
      for (long long i = 0; i < kd; ++i) pkd *= p;
      for (long long i = 0; i < ks; ++i) pks *= p;
      std::int64_t cfg = v % pkd;
      const long long s = v / pkd;
      long long folded[64] = {0};
      for (long long i = 0; i < kd; ++i) {
        folded[i % ks] = (folded[i % ks] + cfg % p) % p;
        cfg /= p;
      }
      std::int64_t out = 0, w = 1;
      for (long long i = 0; i < ks; ++i) {
        out += folded[i] * w;
        w *= p;
      }
      return out + pks * (s % ks);
    }
  }
  throw UsageError("bad family");
}

QuotientMapping quotient_map(const FiniteQuotient& deep, const FiniteQuotient& shallow) {
  if (deep.spec() != shallow.spec()) throw ValidationError("quotient map requires the same group spec");
  if (!shallow.sub().contains(deep.spec(), deep.sub()))
    throw ValidationError("levels are not nested: deep subgroup not contained in shallow one");
  return QuotientMapping{&deep, &shallow};
}

ProductHost::ProductHost(const Host& x, const Host& y) : x_(&x), y_(&y) {}

void ProductHost::neighbors(std::int64_t v, std::int64_t* out) const {
  const std::int64_t vx = unpack_x(v), vy = unpack_y(v);
  const int dx = x_->degree();
  std::vector<std::int64_t> nb(std::max(dx, y_->degree()));
  x_->neighbors(vx, nb.data());
  for (int i = 0; i < dx; ++i) out[i] = pack(nb[i], vy);
  y_->neighbors(vy, nb.data());
  for (int i = 0; i < y_->degree(); ++i) out[dx + i] = pack(vx, nb[i]);
}

std::int64_t ProductHost::mul(std::int64_t a, std::int64_t b) const {
  return pack(x_->mul(unpack_x(a), unpack_x(b)), y_->mul(unpack_y(a), unpack_y(b)));
}

std::int64_t ProductHost::inv(std::int64_t a) const {
  return pack(x_->inv(unpack_x(a)), y_->inv(unpack_y(a)));
}

int ProductHost::distance(std::int64_t a, std::int64_t b) const {
  return x_->distance(unpack_x(a), unpack_x(b)) + y_->distance(unpack_y(a), unpack_y(b));
}

int ProductHost::word_norm(std::int64_t g) const {
  return x_->word_norm(unpack_x(g)) + y_->word_norm(unpack_y(g));
}

std::string ProductHost::label(std::int64_t v) const {
  return x_->label(unpack_x(v)) + "|" + y_->label(unpack_y(v));
}

std::int64_t ProductHost::parse_label(const std::string& s) const {
  const auto bar = s.find('|');
  if (bar == std::string::npos) throw ValidationError("bad product label: " + s);
  return pack(x_->parse_label(s.substr(0, bar)), y_->parse_label(s.substr(bar + 1)));
}

std::vector<std::string> ProductHost::generator_names() const {
  std::vector<std::string> names;
  for (const auto& n : x_->generator_names()) names.push_back("L." + n);
  for (const auto& n : y_->generator_names()) names.push_back("R." + n);
  return names;
}

std::string ProductHost::id() const { return x_->id() + " x " + y_->id(); }

}  // namespace coarselab
