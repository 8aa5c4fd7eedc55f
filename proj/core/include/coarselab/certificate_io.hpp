#pragma once

#include <string>

#include "coarselab/cover.hpp"

namespace coarselab {

/// Serialized certificate payload.  Field set and order are a stable
/// contract; vertex labels within a class are sorted by canonical vertex
/// order and classes re-verify from the file alone.
json certificate_to_json(const FiniteQuotient& host, const Cover& cover, const CoverCertificate& cert);

struct LoadedCertificate {
  std::shared_ptr<FiniteQuotient> host;
  Cover cover;
  int d = 0;
  int r = 1;
  std::int64_t R = 0;
  bool claimed_pass = false;
  int claimed_multiplicity = 0;
  std::int64_t claimed_worst_diameter = 0;
};

LoadedCertificate certificate_from_json(const json& j, std::optional<std::int64_t> vertex_cap = std::nullopt);

struct ReverifyResult {
  bool confirmed = false;
  CoverCertificate recomputed;
  std::string detail;
};

/// Re-runs the full check and compares with the stored claims.
ReverifyResult reverify_certificate(const json& j, std::optional<std::int64_t> vertex_cap = std::nullopt);

void write_json_atomic(const std::string& path, const json& j);
json read_json(const std::string& path);

}  // namespace coarselab
