#include "natree/jsonio.hpp"

#include <deque>
#include <fstream>
#include <sstream>

namespace natree {

namespace {

std::vector<int> parse_path(const std::string& key) {
  if (key == "root") return {};
  std::vector<int> branches;
  std::istringstream is(key);
  std::string part;
  while (std::getline(is, part, '/')) {
    if (part.empty()) throw ParseError("bad node path: " + key);
    branches.push_back(std::stoi(part));
  }
  return branches;
}

}  // namespace

int node_from_path_key(const MarketInstance& inst, const std::string& key) {
  const int v = inst.tree.node_at_path(parse_path(key));
  if (v < 0) throw ParseError("node path not in tree: " + key);
  return v;
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

RatVec rat_vec_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array of rationals");
  RatVec v;
  v.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_string()) throw ParseError(where + ": rationals must be strings");
    try {
      v.push_back(parse_rat(e.get<std::string>()));
    } catch (const std::invalid_argument& ex) {
      throw ParseError(where + ": " + ex.what());
    }
  }
  return v;
}

Json rat_vec_to_json(const RatVec& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(rat_str(x));
  return a;
}

namespace {

Json matrix_to_json(const RatMat& m) {
  Json a = Json::array();
  for (const auto& row : m) a.push_back(rat_vec_to_json(row));
  return a;
}

Json node_to_json(const MarketInstance& inst, int v) {
  Json n;
  n["pi"] = matrix_to_json(inst.bidask[v].pi);
  if (!inst.tree.is_terminal(v)) {
    Json kers = Json::array();
    for (const auto& k : inst.kernels[v]) kers.push_back(rat_vec_to_json(k));
    n["kernels"] = std::move(kers);
    Json children = Json::array();
    for (int c : inst.tree.nodes[v].children) children.push_back(node_to_json(inst, c));
    n["children"] = std::move(children);
  }
  return n;
}

}  // namespace

Json instance_to_json(const MarketInstance& inst) {
  Json j;
  j["schema"] = "natree-instance/1";
  j["d"] = inst.d;
  j["horizon"] = inst.tree.horizon;
  Json meta;
  if (!inst.meta.name.empty()) meta["name"] = inst.meta.name;
  if (!inst.meta.mode.empty()) meta["mode"] = inst.meta.mode;
  if (inst.meta.has_seed) meta["seed"] = std::to_string(inst.meta.seed);
  if (!meta.empty()) j["metadata"] = std::move(meta);
  j["root"] = node_to_json(inst, 0);
  return j;
}

MarketInstance instance_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("instance: expected an object");
  if (j.value("schema", "") != "natree-instance/1")
    throw ParseError("instance: unknown schema '" + j.value("schema", "") + "'");
  MarketInstance inst;
  if (!j.contains("d") || !j["d"].is_number_integer()) throw ParseError("instance: missing d");
  inst.d = j["d"].get<int>();
  if (!j.contains("horizon") || !j["horizon"].is_number_integer())
    throw ParseError("instance: missing horizon");
  inst.tree.horizon = j["horizon"].get<int>();
  if (j.contains("metadata")) {
    const auto& m = j["metadata"];
    inst.meta.name = m.value("name", "");
    inst.meta.mode = m.value("mode", "");
    if (m.contains("seed")) {
      inst.meta.has_seed = true;
      inst.meta.seed = std::stoull(m["seed"].get<std::string>());
    }
  }
  if (!j.contains("root")) throw ParseError("instance: missing root");

  // level-order ids
  struct Pending {
    const Json* doc;
    int parent;
    int branch;
  };
  std::deque<Pending> queue{{&j["root"], -1, -1}};
  while (!queue.empty()) {
    auto [doc, parent, branch] = queue.front();
    queue.pop_front();
    const int v = inst.tree.size();
    EventTree::Node node;
    node.parent = parent;
    node.branch = branch;
    node.time = parent < 0 ? 0 : inst.tree.nodes[parent].time + 1;
    inst.tree.nodes.push_back(node);
    if (parent >= 0) inst.tree.nodes[parent].children.push_back(v);
    const std::string where = "node " + (parent < 0 ? std::string("root") : inst.tree.path_str(v));

    if (!doc->is_object() || !doc->contains("pi")) throw ParseError(where + ": missing pi");
    BidAskMatrix pi;
    pi.d = inst.d;
    const auto& pj = (*doc)["pi"];
    if (!pj.is_array() || static_cast<int>(pj.size()) != inst.d)
      throw ParseError(where + ": pi must be a " + std::to_string(inst.d) + "-row matrix");
    for (const auto& row : pj) pi.pi.push_back(rat_vec_from_json(row, where + " pi row"));
    for (const auto& row : pi.pi)
      if (static_cast<int>(row.size()) != inst.d) throw ParseError(where + ": pi row length");
    inst.bidask.push_back(std::move(pi));

    std::vector<RatVec> kers;
    if (doc->contains("kernels")) {
      for (const auto& k : (*doc)["kernels"])
        kers.push_back(rat_vec_from_json(k, where + " kernel"));
    }
    inst.kernels.push_back(std::move(kers));

    if (doc->contains("children")) {
      const auto& cj = (*doc)["children"];
      if (!cj.is_array()) throw ParseError(where + ": children must be an array");
      int b = 0;
      for (const auto& c : cj) queue.push_back({&c, v, b++});
    }
  }

  // structural coherence of depth vs horizon
  for (int v = 0; v < inst.tree.size(); ++v) {
    const auto& node = inst.tree.nodes[v];
    if (node.time > inst.tree.horizon)
      throw ParseError("node " + inst.tree.path_str(v) + ": deeper than the horizon");
    if (node.time < inst.tree.horizon && node.children.empty())
      throw ParseError("node " + inst.tree.path_str(v) + ": stops short of the horizon");
    if (node.time == inst.tree.horizon && !node.children.empty())
      throw ParseError("node " + inst.tree.path_str(v) + ": children beyond the horizon");
    if (!inst.tree.is_terminal(v)) {
      for (const auto& k : inst.kernels[v])
        if (k.size() != node.children.size())
          throw ParseError("node " + inst.tree.path_str(v) + ": kernel length mismatch");
    }
  }
  return inst;
}

MarketInstance load_instance_file(const std::string& path) {
  return instance_from_json(load_json_file(path));
}

void save_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << dump_json(j);
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

Json price_system_to_json(const MarketInstance& inst, const PriceSystem& ps) {
  Json j;
  j["schema"] = "natree-pricesystem/1";
  j["time"] = ps.start_time;
  Json kernels = Json::object(), z = Json::object(), weights = Json::object();
  for (int v = 0; v < inst.tree.size(); ++v) {
    const std::string key = inst.tree.path_str(v);
    if (!inst.tree.is_terminal(v)) {
      kernels[key] = rat_vec_to_json(ps.q[v]);
      weights[key] = rat_vec_to_json(ps.r_weights[v]);
    }
    if (ps.z[v]) z[key] = rat_vec_to_json(*ps.z[v]);
  }
  j["kernels"] = std::move(kernels);
  j["z"] = std::move(z);
  j["witness_weights"] = std::move(weights);
  return j;
}

PriceSystem price_system_from_json(const MarketInstance& inst, const Json& j) {
  if (j.value("schema", "") != "natree-pricesystem/1")
    throw ParseError("price system: unknown schema");
  PriceSystem ps;
  ps.start_time = j.at("time").get<int>();
  ps.q.assign(inst.tree.size(), RatVec{});
  ps.z.assign(inst.tree.size(), std::nullopt);
  ps.r_weights.assign(inst.tree.size(), RatVec{});
  for (const auto& [key, val] : j.at("kernels").items())
    ps.q[node_from_path_key(inst, key)] = rat_vec_from_json(val, "kernel " + key);
  for (const auto& [key, val] : j.at("z").items())
    ps.z[node_from_path_key(inst, key)] = rat_vec_from_json(val, "z " + key);
  for (const auto& [key, val] : j.at("witness_weights").items())
    ps.r_weights[node_from_path_key(inst, key)] = rat_vec_from_json(val, "weights " + key);
  return ps;
}

Json request_to_json(const MarketInstance& inst, const ExtensionRequest& req,
                     const std::vector<int>* selection_indices) {
  Json j;
  j["time"] = req.time;
  Json kernels = Json::object();
  for (int v = 0; v < inst.tree.size(); ++v)
    if (!inst.tree.is_terminal(v)) kernels[inst.tree.path_str(v)] = rat_vec_to_json(req.P[v]);
  j["kernels"] = std::move(kernels);
  Json y = Json::object();
  for (const auto& [v, vec] : req.Y) y[inst.tree.path_str(v)] = rat_vec_to_json(vec);
  j["y"] = std::move(y);
  if (selection_indices) {
    Json sel = Json::object();
    for (int v = 0; v < inst.tree.size(); ++v)
      if (!inst.tree.is_terminal(v)) sel[inst.tree.path_str(v)] = (*selection_indices)[v];
    j["selection"] = std::move(sel);
  }
  return j;
}

ExtensionRequest request_from_json(const MarketInstance& inst, const Json& j) {
  ExtensionRequest req;
  req.time = j.at("time").get<int>();
  req.P.assign(inst.tree.size(), RatVec{});
  for (const auto& [key, val] : j.at("kernels").items())
    req.P[node_from_path_key(inst, key)] = rat_vec_from_json(val, "P kernel " + key);
  for (const auto& [key, val] : j.at("y").items())
    req.Y[node_from_path_key(inst, key)] = rat_vec_from_json(val, "Y " + key);
  return req;
}

Json certificate_to_json(const MarketInstance& inst, const ArbitrageCertificate& cert,
                         const Strategy& strategy) {
  Json j;
  j["schema"] = "natree-certificate/1";
  j["time"] = cert.time;
  j["node"] = inst.tree.path_str(cert.node);
  j["zeta"] = rat_vec_to_json(cert.zeta);
  j["separating_ray"] = rat_vec_to_json(cert.separating_ray);
  Json xi = Json::object();
  for (const auto& [v, inc] : strategy.xi) xi[inst.tree.path_str(v)] = rat_vec_to_json(inc);
  j["strategy"] = std::move(xi);
  return j;
}

ArbitrageCertificate certificate_from_json(const MarketInstance& inst, const Json& j) {
  if (j.value("schema", "") != "natree-certificate/1")
    throw ParseError("certificate: unknown schema");
  ArbitrageCertificate cert;
  cert.time = j.at("time").get<int>();
  cert.node = node_from_path_key(inst, j.at("node").get<std::string>());
  cert.zeta = rat_vec_from_json(j.at("zeta"), "zeta");
  cert.separating_ray = rat_vec_from_json(j.at("separating_ray"), "separating_ray");
  return cert;
}

Strategy strategy_from_json(const MarketInstance& inst, const Json& j) {
  Strategy s;
  for (const auto& [key, val] : j.at("strategy").items())
    s.xi[node_from_path_key(inst, key)] = rat_vec_from_json(val, "strategy " + key);
  return s;
}

}  // namespace natree
