#include "coarselab/certificate_io.hpp"

#include <cstdio>
#include <fstream>

#include "coarselab/version.hpp"

namespace coarselab {

json certificate_to_json(const FiniteQuotient& host, const Cover& cover, const CoverCertificate& cert) {
  json j;
  j["schema_version"] = 1;
  j["group"] = host.spec().to_json();
  j["subgroup"] = host.sub().to_json(host.spec());
  j["generators"] = host.generator_names();
  j["d"] = cert.d;
  j["r"] = cert.r;
  j["R"] = cert.R;
  json classes = json::array();
  for (const auto& c : cover.classes) {
    json cls = json::array();
    for (auto v = c.find_first(); v != Bitset::npos; v = c.find_next(v))
      cls.push_back(host.label(static_cast<std::int64_t>(v)));
    classes.push_back(std::move(cls));
  }
  j["classes"] = std::move(classes);
  j["multiplicity"] = cert.multiplicity;
  j["worst_component_diameter"] = cert.worst_component_diameter;
  j["verdict"] = cert.pass ? "pass" : "fail";
  j["tool_version"] = kToolVersion;
  return j;
}

LoadedCertificate certificate_from_json(const json& j, std::optional<std::int64_t> vertex_cap) {
  if (j.at("schema_version").get<int>() != 1) throw ValidationError("unsupported certificate schema version");
  LoadedCertificate out;
  const GroupSpec spec = GroupSpec::from_json(j.at("group"));
  const SubgroupSpec sub = SubgroupSpec::from_json(spec, j.at("subgroup"));
  out.host = build_quotient(spec, sub, vertex_cap);
  out.d = j.at("d").get<int>();
  out.r = j.at("r").get<int>();
  out.R = j.at("R").get<std::int64_t>();
  out.claimed_pass = j.at("verdict").get<std::string>() == "pass";
  out.claimed_multiplicity = j.at("multiplicity").get<int>();
  out.claimed_worst_diameter = j.at("worst_component_diameter").get<std::int64_t>();
  out.cover.host_id = out.host->id();
  out.cover.declared_r = out.r;
  out.cover.declared_R = out.R;
  for (const auto& cls : j.at("classes")) {
    Bitset b = make_bitset(out.host->size());
    for (const auto& lbl : cls) b.set(static_cast<std::size_t>(out.host->parse_label(lbl.get<std::string>())));
    out.cover.classes.push_back(std::move(b));
  }
  return out;
}

ReverifyResult reverify_certificate(const json& j, std::optional<std::int64_t> vertex_cap) {
  ReverifyResult out;
  auto loaded = certificate_from_json(j, vertex_cap);
  out.recomputed = verify_cover(*loaded.host, loaded.cover, loaded.d, loaded.r, loaded.R);
  if (out.recomputed.pass != loaded.claimed_pass) {
    out.detail = out.recomputed.pass ? "stored verdict fail but the check passes"
                                     : out.recomputed.failure;
    return out;
  }
  if (out.recomputed.multiplicity != loaded.claimed_multiplicity) {
    out.detail = "stored multiplicity " + std::to_string(loaded.claimed_multiplicity) + " but recomputed " +
                 std::to_string(out.recomputed.multiplicity);
    return out;
  }
  if (out.recomputed.worst_component_diameter != loaded.claimed_worst_diameter) {
    out.detail = "stored worst component diameter " + std::to_string(loaded.claimed_worst_diameter) +
                 " but recomputed " + std::to_string(out.recomputed.worst_component_diameter);
    return out;
  }
  out.confirmed = true;
  return out;
}

void write_json_atomic(const std::string& path, const json& j) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw ValidationError("cannot open " + tmp + " for writing");
    os << j.dump(1) << "\n";
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw ValidationError("cannot rename " + tmp + " to " + path);
}

json read_json(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("cannot open " + path);
  json j;
  is >> j;
  return j;
}

}  // namespace coarselab
