#include "natree/equivalence.hpp"

#include "natree/generate.hpp"
#include "natree/na2.hpp"

#include <atomic>
#include <chrono>
#include <sstream>
#include <thread>

namespace natree {

namespace {

constexpr unsigned long long kProbeSalt = 0x517cc1b727220a95ULL;

unsigned long long fnv1a(const std::string& s) {
  unsigned long long h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

unsigned long long probe_seed(const MarketInstance& inst) {
  if (inst.meta.has_seed) return inst.meta.seed ^ kProbeSalt;
  return fnv1a(dump_json(instance_to_json(inst))) ^ kProbeSalt;
}

std::vector<std::vector<int>> measure_selections(const MarketInstance& inst,
                                                 const EquivConfig& cfg, Rng& rng,
                                                 std::vector<std::string>& notes) {
  const auto& tree = inst.tree;
  std::vector<std::vector<int>> out;
  if (cfg.exhaustive) {
    // product enumeration, capped to keep tiny-tree usage honest
    long total = 1;
    for (int v = 0; v < tree.size(); ++v) {
      if (tree.is_terminal(v)) continue;
      total *= static_cast<long>(inst.kernels[v].size());
      if (total > 4096) break;
    }
    if (total <= 4096) {
      std::vector<int> cur(tree.size(), 0);
      for (;;) {
        out.push_back(cur);
        int v = tree.size() - 1;
        for (; v >= 0; --v) {
          if (tree.is_terminal(v)) continue;
          if (++cur[v] < static_cast<int>(inst.kernels[v].size())) break;
          cur[v] = 0;
        }
        if (v < 0) break;
      }
      return out;
    }
    notes.push_back("exhaustive enumeration too large; sampled instead");
  }
  for (int p = 0; p < cfg.measure_probes; ++p) {
    std::vector<int> sel(tree.size(), 0);
    for (int v = 0; v < tree.size(); ++v)
      if (!tree.is_terminal(v)) sel[v] = static_cast<int>(rng.below(inst.kernels[v].size()));
    out.push_back(std::move(sel));
  }
  return out;
}

TreeMeasure measure_from_selection(const MarketInstance& inst, const std::vector<int>& sel) {
  TreeMeasure P(inst.tree.size());
  for (int v = 0; v < inst.tree.size(); ++v)
    if (!inst.tree.is_terminal(v)) P[v] = inst.kernels[v][sel[v]];
  return P;
}

Json process_instance(const MarketInstance& inst, const EquivConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  Json entry;
  entry["name"] = inst.meta.name.empty() ? "unnamed" : inst.meta.name;
  bool counterexample = false;
  std::vector<std::string> notes;
  Rng rng(probe_seed(inst));

  GlobalVerdict verdict = na2_global(inst);
  entry["verdict"] = verdict.holds ? "holds" : "fails";

  if (verdict.holds) {
    auto selections = measure_selections(inst, cfg, rng, notes);
    Json probes = Json::array();
    Json embedded_ps, embedded_req;
    for (int t = 0; t < inst.tree.horizon; ++t) {
      int built = 0, verified = 0;
      for (int yi = 0; yi < cfg.y_probes; ++yi) {
        std::map<int, RatVec> Y;
        for (int v : inst.tree.nodes_at(t))
          if (!inst.is_polar(v)) Y[v] = sample_interior_point(inst, v, rng);
        ExtensionRequest base{t, measure_from_selection(inst, selections.front()), Y};
        PriceSystem core;
        try {
          core = build_pce(inst, base);
          ++built;
        } catch (const NoExtension& e) {
          counterexample = true;
          notes.push_back("holds but no extension at node " + inst.tree.path_str(e.node) +
                          " (t=" + std::to_string(t) + ")");
          continue;
        }
        for (std::size_t si = 0; si < selections.size(); ++si) {
          TreeMeasure P = measure_from_selection(inst, selections[si]);
          PriceSystem ps = si == 0 ? core : reassign_measure(inst, core, P);
          ExtensionRequest req{t, P, Y};
          auto bad = verify_pce(inst, ps, req);
          if (!bad.empty()) {
            counterexample = true;
            notes.push_back("price system failed verification (t=" + std::to_string(t) +
                            "): " + bad.front());
            continue;
          }
          ++verified;
          if (t == 0 && yi == 0 && si == 0) {
            embedded_ps = price_system_to_json(inst, ps);
            embedded_req = request_to_json(inst, req, &selections[si]);
          }
        }
      }
      Json p;
      p["time"] = t;
      p["measures"] = static_cast<int>(selections.size());
      p["y_maps"] = cfg.y_probes;
      p["extensions_built"] = built;
      p["systems_verified"] = verified;
      probes.push_back(std::move(p));
    }
    entry["probes"] = std::move(probes);
    if (!embedded_ps.is_null()) {
      entry["price_system"] = std::move(embedded_ps);
      entry["request"] = std::move(embedded_req);
    }
  } else {
    Json failures = Json::array();
    for (const auto& cert : verdict.failing) {
      Json f;
      if (!validate_certificate(inst, cert)) {
        counterexample = true;
        notes.push_back("certificate failed validation at node " + inst.tree.path_str(cert.node));
        continue;
      }
      Strategy strat = arbitrage_to_global(inst, cert);
      f["certificate"] = certificate_to_json(inst, cert, strat);
      const bool global_ok =
          verify_global_certificate(inst, cert.zeta, strat, cert.time, cert.node);
      f["global_verified"] = global_ok;
      if (!global_ok) {
        counterexample = true;
        notes.push_back("local certificate did not globalize at node " +
                        inst.tree.path_str(cert.node));
      }

      // Witness: walk from the separating ray toward the interior point until
      // the pairing with zeta goes negative; the complement of the support
      // cone's dual is open, so this terminates.
      const RatVec& r = cert.separating_ray;
      const RatVec& y0 = inst.geom(cert.node).interior;
      Rat delta = rat(1, 2);
      RatVec y;
      for (;;) {
        y = vec_sum(scaled(r, 1 - delta), scaled(y0, delta));
        if (sgn(dot(y, cert.zeta)) < 0) break;
        delta /= 2;
      }
      const bool interior_ok = sgn(interior_margin(y, inst.geom(cert.node).Kstar)) > 0;
      const bool theta_gone =
          !theta_membership(inst, cert.node, uniform_mixture_kernel(inst, cert.node), y);
      if (!interior_ok || !theta_gone) {
        counterexample = true;
        notes.push_back("failure witness did not separate at node " +
                        inst.tree.path_str(cert.node));
      }
      f["witness_y"] = rat_vec_to_json(y);
      f["witness_pairing"] = rat_str(dot(y, cert.zeta));
      f["theta_infeasible"] = theta_gone;
      failures.push_back(std::move(f));
    }
    entry["failures"] = std::move(failures);
  }

  entry["counterexample"] = counterexample;
  entry["notes"] = notes;
  entry["instance"] = instance_to_json(inst);
  const auto t1 = std::chrono::steady_clock::now();
  entry["elapsed_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
  return entry;
}

}  // namespace

RatVec sample_interior_point(const MarketInstance& inst, int node, Rng& rng) {
  const auto& rays = *inst.geom(node).Kstar.generators;
  std::vector<unsigned> w(rays.size(), 0);
  unsigned total = 0;
  for (auto& x : w) {
    x = static_cast<unsigned>(rng.below(4));
    total += x;
  }
  if (total == 0) w[rng.below(rays.size())] = 1;
  RatVec boundary = zeros(inst.d);
  for (std::size_t k = 0; k < rays.size(); ++k) {
    if (w[k] == 0) continue;
    for (int i = 0; i < inst.d; ++i) boundary[i] += Rat(w[k]) * rays[k][i];
  }
  boundary = scaled(boundary, 1 / l1_norm(boundary));
  RatVec deep = scaled(inst.geom(node).interior, 1 / l1_norm(inst.geom(node).interior));
  RatVec y = vec_sum(boundary, deep);
  return scaled(y, rat(1, 2));
}

PriceSystem reassign_measure(const MarketInstance& inst, const PriceSystem& built,
                             const TreeMeasure& P) {
  PriceSystem ps = built;
  for (int v = 0; v < inst.tree.size(); ++v) {
    if (inst.tree.is_terminal(v)) continue;
    const bool processed =
        inst.tree.nodes[v].time >= ps.start_time && ps.z[v].has_value() && !inst.is_polar(v);
    if (!processed) ps.q[v] = P[v];
  }
  return ps;
}

Json run_equivalence(const std::vector<MarketInstance>& instances, const EquivConfig& cfg) {
  if (cfg.measure_probes < 1 || cfg.y_probes < 1)
    throw std::invalid_argument("run_equivalence: probe budgets must be positive");
  for (const auto& inst : instances)
    if (!inst.finalized) throw std::invalid_argument("run_equivalence: instance not finalized");

  std::vector<Json> entries(instances.size());
  auto run_one = [&](std::size_t i) {
    try {
      entries[i] = process_instance(instances[i], cfg);
    } catch (const std::exception& e) {
      Json broken;
      broken["name"] = instances[i].meta.name.empty() ? "unnamed" : instances[i].meta.name;
      broken["counterexample"] = true;
      broken["notes"] = Json::array({std::string("processing failed: ") + e.what()});
      broken["instance"] = instance_to_json(instances[i]);
      entries[i] = std::move(broken);
    }
  };
  const int workers = std::max(1, cfg.workers);
  if (workers == 1 || instances.size() <= 1) {
    for (std::size_t i = 0; i < instances.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= instances.size()) return;
        run_one(i);
      }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  Json report;
  report["schema"] = "natree-report/1";
  Json probes;
  probes["measures"] = cfg.measure_probes;
  probes["y_maps"] = cfg.y_probes;
  probes["exhaustive"] = cfg.exhaustive;
  report["probes"] = std::move(probes);
  int counterexamples = 0;
  Json list = Json::array();
  for (auto& e : entries) {
    if (e["counterexample"].get<bool>()) ++counterexamples;
    list.push_back(std::move(e));
  }
  report["instances"] = std::move(list);
  report["counterexamples"] = counterexamples;
  return report;
}

int report_counterexamples(const Json& report) {
  return report.value("counterexamples", 0);
}

std::vector<std::string> verify_report(const Json& report) {
  std::vector<std::string> issues;
  if (report.value("schema", "") != "natree-report/1") {
    issues.push_back("unknown report schema");
    return issues;
  }
  int idx = -1;
  for (const auto& entry : report.at("instances")) {
    ++idx;
    const std::string name = entry.value("name", "entry " + std::to_string(idx));
    MarketInstance inst;
    try {
      inst = instance_from_json(entry.at("instance"));
      auto val = validate_instance(inst);
      if (!val.ok()) {
        issues.push_back(name + ": embedded instance invalid: " + val.violations.front());
        continue;
      }
      inst.finalize();
    } catch (const std::exception& e) {
      issues.push_back(name + ": embedded instance unreadable: " + e.what());
      continue;
    }

    const std::string verdict = entry.value("verdict", "");
    if (verdict == "fails") {
      if (!entry.contains("failures") || entry["failures"].empty()) {
        issues.push_back(name + ": fails without certificates");
        continue;
      }
      for (const auto& f : entry["failures"]) {
        try {
          ArbitrageCertificate cert = certificate_from_json(inst, f.at("certificate"));
          Strategy strat = strategy_from_json(inst, f.at("certificate"));
          if (!validate_certificate(inst, cert))
            issues.push_back(name + ": embedded certificate does not verify");
          else if (!verify_global_certificate(inst, cert.zeta, strat, cert.time, cert.node))
            issues.push_back(name + ": embedded strategy does not verify");
          const RatVec y = rat_vec_from_json(f.at("witness_y"), "witness_y");
          if (sgn(interior_margin(y, inst.geom(cert.node).Kstar)) <= 0)
            issues.push_back(name + ": witness not strictly interior");
          const Rat pairing = parse_rat(f.at("witness_pairing").get<std::string>());
          if (dot(y, cert.zeta) != pairing || sgn(pairing) >= 0)
            issues.push_back(name + ": witness pairing does not check out");
        } catch (const std::exception& e) {
          issues.push_back(name + ": failure entry unreadable: " + e.what());
        }
      }
    } else if (verdict == "holds") {
      if (!entry.contains("price_system")) {
        issues.push_back(name + ": holds without an embedded price system");
        continue;
      }
      try {
        PriceSystem ps = price_system_from_json(inst, entry.at("price_system"));
        ExtensionRequest req = request_from_json(inst, entry.at("request"));
        if (entry.at("request").contains("selection")) {
          for (const auto& [key, val] : entry.at("request").at("selection").items()) {
            const int v = node_from_path_key(inst, key);
            const int k = val.get<int>();
            if (k < 0 || k >= static_cast<int>(inst.kernels[v].size()) ||
                req.P[v] != inst.kernels[v][k]) {
              issues.push_back(name + ": request measure is not the claimed extreme selection");
              break;
            }
          }
        }
        auto bad = verify_pce(inst, ps, req);
        for (const auto& b : bad) issues.push_back(name + ": " + b);
      } catch (const std::exception& e) {
        issues.push_back(name + ": price system unreadable: " + e.what());
      }
    } else {
      issues.push_back(name + ": missing verdict");
    }
  }
  return issues;
}

std::string summarize_report(const Json& report) {
  std::ostringstream os;
  const auto& instances = report.at("instances");
  int holds = 0, fails = 0, counter = 0;
  for (const auto& e : instances) {
    if (e.value("verdict", "") == "holds") ++holds;
    if (e.value("verdict", "") == "fails") ++fails;
    if (e.value("counterexample", false)) ++counter;
  }
  os << "instances: " << instances.size() << "  holds: " << holds << "  fails: " << fails
     << "  counterexamples: " << counter << "\n";
  for (const auto& e : instances) {
    os << "  " << e.value("name", "?") << ": " << e.value("verdict", "?");
    if (e.value("counterexample", false)) os << "  COUNTEREXAMPLE";
    if (e.contains("failures")) {
      for (const auto& f : e["failures"]) {
        os << "\n    certificate at node " << f["certificate"].value("node", "?") << ", zeta ";
        bool first = true;
        os << "[";
        for (const auto& x : f["certificate"]["zeta"]) {
          if (!first) os << ", ";
          os << x.get<std::string>();
          first = false;
        }
        os << "]";
      }
    }
    for (const auto& n : e["notes"]) os << "\n    note: " << n.get<std::string>();
    os << "\n";
  }
  return os.str();
}

}  // namespace natree
