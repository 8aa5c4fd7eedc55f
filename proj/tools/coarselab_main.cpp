#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <random>

#include "coarselab/certificate_io.hpp"
#include "coarselab/experiment.hpp"
#include "coarselab/hirsch.hpp"
#include "coarselab/search.hpp"
#include "coarselab/version.hpp"

namespace {

using namespace coarselab;

constexpr int kExitPass = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitValidation = 2;
constexpr int kExitResource = 3;

struct QuotientArgs {
  std::string family = "z";
  std::vector<long long> mod;
  long long n = 2;
  long long m = 0;
  long long k = 0;
  long long p = 2;
  long long period = 0;
  std::int64_t cap = -1;

  void attach(CLI::App* cmd) {
    cmd->add_option("--family", family, "group family: z | free-abelian | bs | lamplighter");
    cmd->add_option("--mod", mod, "free abelian moduli (one per coordinate)");
    cmd->add_option("--n", n, "BS(1,n) parameter");
    cmd->add_option("--m", m, "BS congruence modulus m");
    cmd->add_option("--k", k, "BS congruence exponent k");
    cmd->add_option("--p", p, "lamplighter lamp modulus");
    cmd->add_option("--period", period, "lamplighter period");
    cmd->add_option("--cap", cap, "vertex cap override");
  }

  std::shared_ptr<FiniteQuotient> build() const {
    std::optional<std::int64_t> cap_opt;
    if (cap > 0) cap_opt = cap;
    if (family == "z" || family == "free-abelian") {
      if (mod.empty()) throw UsageError("--mod is required for free abelian quotients");
      return build_quotient(GroupSpec::free_abelian(static_cast<int>(mod.size())), SubgroupSpec::free_abelian(mod),
                            cap_opt);
    }
    if (family == "bs") {
      if (m <= 0 || k <= 0) throw UsageError("--m and --k are required for BS quotients");
      return build_quotient(GroupSpec::baumslag_solitar(n), SubgroupSpec::baumslag_solitar(m, k), cap_opt);
    }
    if (family == "lamplighter") {
      if (period <= 0) throw UsageError("--period is required for lamplighter quotients");
      return build_quotient(GroupSpec::lamplighter(p), SubgroupSpec::lamplighter(period), cap_opt);
    }
    throw UsageError("unknown family: " + family);
  }
};

int cmd_quotient(const QuotientArgs& args, const std::string& out, const std::string& dot) {
  auto q = args.build();
  const json j = q->to_json();
  if (!out.empty())
    write_json_atomic(out, j);
  else
    std::cout << j.dump(1) << "\n";
  if (!dot.empty()) {
    std::ofstream os(dot);
    os << q->to_dot();
  }
  std::cerr << "quotient with " << q->size() << " vertices, diameter " << q->diameter() << "\n";
  return kExitPass;
}

int cmd_cover_make(const QuotientArgs& args, int r, const std::string& out) {
  auto q = args.build();
  auto cover = interval_cover(*q, r);
  if (!cover) {
    Cover fb = full_cover(*q, 1);
    fb.declared_r = r;
    fb.declared_R = q->diameter();
    cover = fb;
  }
  const int d = static_cast<int>(cover->classes.size()) - 1;
  const auto cert = verify_cover(*q, *cover, d, r, cover->declared_R);
  const json j = certificate_to_json(*q, *cover, cert);
  if (!out.empty())
    write_json_atomic(out, j);
  else
    std::cout << j.dump(1) << "\n";
  std::cerr << (cert.pass ? "pass" : "fail") << " at (" << d << ", " << r << ", " << cover->declared_R << ")\n";
  return cert.pass ? kExitPass : kExitVerifyFail;
}

int cmd_cover_verify(const std::string& path, std::int64_t cap) {
  std::optional<std::int64_t> cap_opt;
  if (cap > 0) cap_opt = cap;
  const auto result = reverify_certificate(read_json(path), cap_opt);
  if (result.confirmed) {
    std::cout << "certificate confirmed: verdict "
              << (result.recomputed.pass ? "pass" : "fail") << ", multiplicity " << result.recomputed.multiplicity
              << ", worst component diameter " << result.recomputed.worst_component_diameter << "\n";
    return kExitPass;
  }
  std::cout << "certificate rejected: " << result.detail << "\n";
  return kExitVerifyFail;
}

int cmd_cover_search(const QuotientArgs& args, int r, std::int64_t R, int dmax, std::uint64_t budget) {
  auto q = args.build();
  const auto result = brute_force_min_cover(*q, r, R, dmax, budget);
  if (result.exhausted) {
    std::cout << "exhausted after " << result.nodes_explored << " nodes; refuted class counts up to "
              << result.refuted_below << "\n";
    return kExitResource;
  }
  if (result.min_classes) {
    std::cout << *result.min_classes << "\n";
    return kExitPass;
  }
  std::cout << "no cover with at most " << dmax + 1 << " classes\n";
  return kExitVerifyFail;
}

int cmd_expand(const QuotientArgs& args, int r, int k, const std::string& out) {
  auto q = args.build();
  const auto ctrl = interval_control(*q);
  const auto result = iterate_expand(*q, ctrl, r, k);
  const auto cert = verify_cover(*q, result.cover, k - 1, r, result.R_out);
  json j = certificate_to_json(*q, result.cover, cert);
  json ladder = json::array();
  for (const auto& step : result.ladder) ladder.push_back(json::array({step.radius, step.bound}));
  j["ladder"] = std::move(ladder);
  if (!out.empty())
    write_json_atomic(out, j);
  else
    std::cout << j.dump(1) << "\n";
  std::cerr << (cert.pass ? "pass" : "fail") << " with " << result.cover.classes.size() << " classes, multiplicity "
            << cert.multiplicity << ", R_out " << result.R_out << "\n";
  return cert.pass ? kExitPass : kExitVerifyFail;
}

int cmd_product(long long side, int r, const std::string& outdir) {
  ExperimentConfig config;
  config.preset = "z2";
  config.r_values = {r};
  config.outdir = outdir;
  int depth = 0;
  while ((1LL << depth) < side) ++depth;
  config.levels = depth;
  const auto outcome = run_experiment(config);
  std::cout << outcome.report.dump(1) << "\n";
  return outcome.pass ? kExitPass : kExitVerifyFail;
}

int cmd_hurewicz(const QuotientArgs& args, int r, const std::string& out) {
  auto q = args.build();
  LevelSetup setup = make_level_setup(*q);
  const auto result = hurewicz_cover(setup.map, r, setup.base_ctrl, setup.fiber_oracle, setup.fiber_dim,
                                     setup.base_dim);
  const json j = hurewicz_certificate_to_json(*q, result);
  if (!out.empty())
    write_json_atomic(out, j);
  else
    std::cout << j.dump(1) << "\n";
  std::cerr << (result.certificate.pass ? "pass" : "fail") << " with " << result.cover.classes.size()
            << " classes, R_out " << result.r_out << "\n";
  return result.certificate.pass ? kExitPass : kExitVerifyFail;
}

int cmd_boxspace_check(const QuotientArgs& args, int levels, int r, std::uint64_t seed) {
  GroupSpec spec = args.family == "bs" ? GroupSpec::baumslag_solitar(args.n)
                   : args.family == "lamplighter" ? GroupSpec::lamplighter(args.p)
                                                  : GroupSpec::free_abelian(1);
  Filtration filtration = Filtration::standard(spec, levels);
  BoxSpace box;
  std::optional<std::int64_t> cap_opt;
  if (args.cap > 0) cap_opt = args.cap;
  for (const auto& sub : filtration.levels()) box.quotients.push_back(build_quotient(spec, sub, cap_opt));

  bool pass = true;
  // translation checks on random subsets of the deepest level
  std::mt19937_64 rng(seed);
  const auto& q = *box.quotients.back();
  for (int trial = 0; trial < 20; ++trial) {
    Bitset subset = make_bitset(q.size());
    for (std::int64_t v = 0; v < q.size(); ++v)
      if (rng() % 3 == 0) subset.set(static_cast<std::size_t>(v));
    if (!translation_check(q, subset, r)) {
      std::cout << "translation check failed on a random subset\n";
      pass = false;
    }
  }
  const auto inj = filtration.injectivity_level(r);
  std::cout << "injectivity level for r=" << r << ": " << (inj ? std::to_string(*inj) : std::string("none")) << "\n";
  std::cout << (pass ? "pass" : "fail") << "\n";
  return pass ? kExitPass : kExitVerifyFail;
}

int cmd_hirsch(const std::string& text) {
  const auto expr = parse_expression(text);
  std::cout << derivation(expr);
  std::cout << "h = " << hirsch(expr) << "\n";
  return kExitPass;
}

int cmd_experiment(ExperimentConfig config) {
  const auto outcome = run_experiment(config);
  std::cout << "report: " << outcome.report_path << "\n";
  std::cout << "summary: " << outcome.csv_path << "\n";
  std::cout << "verdict: " << (outcome.pass ? "pass" : "fail") << "\n";
  return outcome.pass ? kExitPass : kExitVerifyFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coarselab: covers, certificates and dimension bounds on finite group quotients"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  QuotientArgs qargs;
  std::string out_path, dot_path;
  int r = 1, k = 3, dmax = 3, levels = 4;
  std::int64_t R = 0;
  long long side = 16;
  std::uint64_t budget = 5000000, seed = 12345;
  std::string cert_path, hirsch_text;
  ExperimentConfig config;

  auto* quotient = app.add_subcommand("quotient", "build a finite quotient and export it");
  qargs.attach(quotient);
  quotient->add_option("--out", out_path, "JSON output path");
  quotient->add_option("--dot", dot_path, "DOT output path");

  auto* cover = app.add_subcommand("cover", "make, verify or search covers");
  cover->require_subcommand(1);
  auto* cover_make = cover->add_subcommand("make", "interval cover certificate");
  qargs.attach(cover_make);
  cover_make->add_option("--r", r, "scale");
  cover_make->add_option("--out", out_path, "certificate path");
  auto* cover_verify = cover->add_subcommand("verify", "re-check a certificate file");
  cover_verify->add_option("cert", cert_path, "certificate file")->required();
  cover_verify->add_option("--cap", qargs.cap, "vertex cap override");
  auto* cover_search = cover->add_subcommand("search", "exact minimal class count");
  qargs.attach(cover_search);
  cover_search->add_option("--r", r, "scale");
  cover_search->add_option("--R", R, "component bound")->required();
  cover_search->add_option("--dmax", dmax, "largest d to try");
  cover_search->add_option("--budget", budget, "search node budget");

  auto* expand = app.add_subcommand("expand", "expanded interval cover with a target class count");
  qargs.attach(expand);
  expand->add_option("--r", r, "scale");
  expand->add_option("--classes", k, "target class count");
  expand->add_option("--out", out_path, "certificate path");

  auto* product = app.add_subcommand("product", "product cover on a square torus");
  product->add_option("--side", side, "cycle length per factor");
  product->add_option("--r", r, "scale");
  product->add_option("--outdir", config.outdir, "output directory");

  auto* hurewicz = app.add_subcommand("hurewicz", "extension cover for one quotient level");
  qargs.attach(hurewicz);
  hurewicz->add_option("--r", r, "scale");
  hurewicz->add_option("--out", out_path, "certificate path");

  auto* boxspace = app.add_subcommand("boxspace", "box space checks");
  auto* boxspace_check = boxspace->add_subcommand("check", "translation and injectivity checks");
  qargs.attach(boxspace_check);
  boxspace_check->add_option("--levels", levels, "filtration depth");
  boxspace_check->add_option("--r", r, "scale");
  boxspace_check->add_option("--seed", seed, "random seed");

  auto* hirsch_cmd = app.add_subcommand("hirsch", "evaluate a group expression");
  hirsch_cmd->add_option("expr", hirsch_text, "expression, e.g. Ext(Local(1), Z(1))")->required();

  auto* experiment = app.add_subcommand("experiment", "end-to-end presets");
  experiment->require_subcommand(1);
  for (const char* preset : {"z", "z2", "bs", "lamplighter"}) {
    auto* sub = experiment->add_subcommand(preset, std::string("preset ") + preset);
    sub->add_option("--n", config.n, "BS parameter");
    sub->add_option("--p", config.p, "lamplighter modulus");
    sub->add_option("--levels", config.levels, "filtration depth");
    sub->add_option("--r", config.r_values, "scales (repeatable)")->delimiter(',');
    sub->add_option("--outdir", config.outdir, "output directory");
    sub->add_option("--cap", config.vertex_cap, "vertex cap override");
    sub->add_option("--seed", config.seed, "random seed");
    sub->add_option("--budget", config.search_budget, "search node budget");
    sub->add_option("--jobs", config.jobs, "worker threads");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (quotient->parsed()) return cmd_quotient(qargs, out_path, dot_path);
    if (cover->parsed()) {
      if (cover_make->parsed()) return cmd_cover_make(qargs, r, out_path);
      if (cover_verify->parsed()) return cmd_cover_verify(cert_path, qargs.cap);
      if (cover_search->parsed()) return cmd_cover_search(qargs, r, R, dmax, budget);
    }
    if (expand->parsed()) return cmd_expand(qargs, r, k, out_path);
    if (product->parsed()) return cmd_product(side, r, config.outdir);
    if (hurewicz->parsed()) return cmd_hurewicz(qargs, r, out_path);
    if (boxspace->parsed() && boxspace_check->parsed()) return cmd_boxspace_check(qargs, levels, r, seed);
    if (hirsch_cmd->parsed()) return cmd_hirsch(hirsch_text);
    if (experiment->parsed()) {
      config.preset = experiment->get_subcommands().front()->get_name();
      return cmd_experiment(config);
    }
  } catch (const ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return kExitResource;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}
