// Command-line laboratory: generate instances, check the no-arbitrage
// condition, build price-system extensions, and run the equivalence
// experiment.
//
// Exit codes: 0 success, 1 usage error, 2 validation/build failure,
// 3 counterexample detected by the equivalence run.

#include <CLI11.hpp>

#include "natree/equivalence.hpp"
#include "natree/generate.hpp"
#include "natree/jsonio.hpp"
#include "natree/na2.hpp"

#include <iostream>

using namespace natree;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kInvalid = 2;
constexpr int kCounterexample = 3;

MarketInstance load_checked(const std::string& path) {
  MarketInstance inst = load_instance_file(path);
  if (inst.meta.name.empty()) inst.meta.name = path;
  auto val = validate_instance(inst);
  if (!val.ok()) {
    for (const auto& v : val.violations) std::cerr << "violation: " << v << "\n";
    throw std::runtime_error(path + ": instance is invalid");
  }
  for (const auto& w : val.warnings) std::cerr << "warning: " << w << "\n";
  inst.finalize();
  return inst;
}

int cmd_validate(const std::string& path) {
  MarketInstance inst;
  try {
    inst = load_instance_file(path);
  } catch (const std::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kInvalid;
  }
  auto val = validate_instance(inst);
  for (const auto& v : val.violations) std::cout << "violation: " << v << "\n";
  for (const auto& w : val.warnings) std::cout << "warning: " << w << "\n";
  if (!val.ok()) return kInvalid;
  std::cout << "ok: " << inst.tree.size() << " nodes, horizon " << inst.tree.horizon << ", d "
            << inst.d << "\n";
  return kOk;
}

int cmd_na2(const std::string& path, bool as_json) {
  MarketInstance inst = load_checked(path);
  auto verdict = na2_global(inst);
  if (as_json) {
    Json out;
    out["status"] = verdict.holds ? "holds" : "fails";
    Json fails = Json::array();
    for (const auto& cert : verdict.failing)
      fails.push_back(certificate_to_json(inst, cert, arbitrage_to_global(inst, cert)));
    out["failing_nodes"] = std::move(fails);
    std::cout << dump_json(out);
  } else {
    std::cout << (verdict.holds ? "NA2 holds" : "NA2 fails") << "\n";
    for (const auto& cert : verdict.failing)
      std::cout << "  node " << inst.tree.path_str(cert.node) << " (t=" << cert.time
                << "): zeta " << vec_str(cert.zeta) << ", separating dual ray "
                << vec_str(cert.separating_ray) << "\n";
  }
  return kOk;
}

int cmd_pce(const std::string& path, int time, const std::string& measure,
            const std::string& y_file, const std::string& out_file) {
  MarketInstance inst = load_checked(path);
  if (time < 0 || time >= inst.tree.horizon) {
    std::cerr << "time must lie in [0, " << inst.tree.horizon - 1 << "]\n";
    return kUsage;
  }

  ExtensionRequest req;
  req.time = time;
  if (measure == "uniform") {
    req.P = uniform_tree_measure(inst);
  } else {
    // comma-separated extreme-kernel indices, one per non-terminal node in id order
    std::vector<int> picks;
    std::istringstream is(measure);
    std::string tok;
    while (std::getline(is, tok, ',')) picks.push_back(std::stoi(tok));
    req.P.assign(inst.tree.size(), RatVec{});
    std::size_t used = 0;
    for (int v = 0; v < inst.tree.size(); ++v) {
      if (inst.tree.is_terminal(v)) continue;
      if (used >= picks.size()) {
        std::cerr << "selection needs one index per non-terminal node\n";
        return kUsage;
      }
      const int k = picks[used++];
      if (k < 0 || k >= static_cast<int>(inst.kernels[v].size())) {
        std::cerr << "kernel index " << k << " out of range at node " << inst.tree.path_str(v)
                  << "\n";
        return kUsage;
      }
      req.P[v] = inst.kernels[v][k];
    }
  }

  if (y_file.empty()) {
    for (int v : inst.tree.nodes_at(time))
      if (!inst.is_polar(v)) req.Y[v] = inst.geom(v).interior;
  } else {
    Json yj = load_json_file(y_file);
    for (const auto& [key, val] : yj.items())
      req.Y[node_from_path_key(inst, key)] = rat_vec_from_json(val, "y " + key);
  }

  try {
    PriceSystem ps = build_pce(inst, req);
    auto bad = verify_pce(inst, ps, req);
    if (!bad.empty()) {
      for (const auto& b : bad) std::cerr << "verification: " << b << "\n";
      return kInvalid;
    }
    Json out = price_system_to_json(inst, ps);
    if (out_file.empty())
      std::cout << dump_json(out);
    else
      save_json_file(out_file, out);
    return kOk;
  } catch (const NoExtension& e) {
    std::cerr << e.what() << "\n";
    std::cerr << "no strictly consistent extension exists; check na2 for certificates\n";
    return kInvalid;
  }
}

int cmd_gen(const GeneratorConfig& cfg, const std::string& out_file) {
  auto inst = gen_instance(cfg);
  Json doc = instance_to_json(inst);
  if (out_file.empty())
    std::cout << dump_json(doc);
  else
    save_json_file(out_file, doc);
  return kOk;
}

int cmd_equiv(const std::vector<std::string>& files, const EquivConfig& cfg,
              const std::string& out_file) {
  std::vector<MarketInstance> instances;
  for (const auto& f : files) instances.push_back(load_checked(f));
  Json report = run_equivalence(instances, cfg);
  if (!out_file.empty()) save_json_file(out_file, report);
  std::cout << summarize_report(report);
  if (report_counterexamples(report) > 0) {
    std::cerr << "counterexample detected: this is an implementation bug, not new mathematics\n";
    return kCounterexample;
  }
  return kOk;
}

int cmd_report(const std::string& path) {
  Json report = load_json_file(path);
  std::cout << summarize_report(report);
  auto issues = verify_report(report);
  if (issues.empty()) {
    std::cout << "all embedded certificates and price systems re-verify\n";
    return kOk;
  }
  for (const auto& i : issues) std::cout << "re-verification issue: " << i << "\n";
  return kInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"no-arbitrage and consistent price systems on finite event trees"};
  app.require_subcommand(1);

  std::string path, out_file, y_file, measure = "uniform";
  bool as_json = false;
  int time = 0;

  auto* validate = app.add_subcommand("validate", "check a market instance file");
  validate->add_option("file", path)->required();

  auto* na2 = app.add_subcommand("na2", "decide the no-arbitrage condition");
  na2->add_option("file", path)->required();
  na2->add_flag("--json", as_json, "machine-readable verdict");

  auto* pce = app.add_subcommand("pce", "build a strictly consistent price system");
  pce->add_option("file", path)->required();
  pce->add_option("--time", time, "start time t")->required();
  pce->add_option("--measure", measure, "'uniform' or comma-separated kernel indices");
  pce->add_option("--y", y_file, "JSON file of interior dual vectors by node path");
  pce->add_option("-o,--out", out_file, "write the price system here");

  GeneratorConfig gcfg;
  std::string cost_lo = "1/2", cost_hi = "3";
  auto* gen = app.add_subcommand("gen", "generate a seeded instance");
  gen->add_option("--mode", gcfg.mode, "monotone | planted-arbitrage | random");
  gen->add_option("--d", gcfg.d, "asset count");
  gen->add_option("--depth", gcfg.horizon, "horizon T");
  gen->add_option("--seed", gcfg.seed, "64-bit seed");
  gen->add_option("--branch-lo", gcfg.branch_lo);
  gen->add_option("--branch-hi", gcfg.branch_hi);
  gen->add_option("--kernels-lo", gcfg.kernels_lo);
  gen->add_option("--kernels-hi", gcfg.kernels_hi);
  gen->add_option("--cost-lo", cost_lo, "smallest off-diagonal rate");
  gen->add_option("--cost-hi", cost_hi, "largest off-diagonal rate");
  gen->add_option("-o,--out", out_file, "write the instance here");

  EquivConfig ecfg;
  std::vector<std::string> files;
  auto* equiv = app.add_subcommand("equiv", "run the equivalence experiment");
  equiv->add_option("files", files, "instance files")->required();
  equiv->add_option("--probes", ecfg.measure_probes, "product measures per instance");
  equiv->add_option("--y-probes", ecfg.y_probes, "interior dual maps per start time");
  equiv->add_flag("--exhaustive", ecfg.exhaustive, "enumerate all extreme selections");
  equiv->add_option("--workers", ecfg.workers, "worker threads");
  equiv->add_option("-o,--out", out_file, "write the report here");

  auto* report = app.add_subcommand("report", "summarize and re-verify a report");
  report->add_option("file", path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*validate) return cmd_validate(path);
    if (*na2) return cmd_na2(path, as_json);
    if (*pce) return cmd_pce(path, time, measure, y_file, out_file);
    if (*gen) {
      gcfg.cost_lo = parse_rat(cost_lo);
      gcfg.cost_hi = parse_rat(cost_hi);
      return cmd_gen(gcfg, out_file);
    }
    if (*equiv) return cmd_equiv(files, ecfg, out_file);
    if (*report) return cmd_report(path);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kUsage;
}
