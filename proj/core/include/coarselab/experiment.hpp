#pragma once

#include "coarselab/boxspace.hpp"
#include "coarselab/hurewicz.hpp"

namespace coarselab {

struct ExperimentConfig {
  std::string preset;            // z | z2 | bs | lamplighter
  long long n = 2;               // BS parameter
  long long p = 2;               // lamplighter modulus
  int levels = -1;               // filtration depth; preset default when < 0
  std::vector<int> r_values;     // preset default when empty
  std::string outdir = "out";
  std::int64_t vertex_cap = -1;  // flag > env COARSELAB_CAP > preset default
  std::uint64_t search_budget = 4000000;
  std::uint64_t seed = 12345;
  int jobs = 2;
};

struct ExperimentOutcome {
  bool pass = false;
  json report;
  std::string report_path;
  std::string csv_path;
};

ExperimentOutcome run_experiment(const ExperimentConfig& config);

}  // namespace coarselab
