#pragma once
// JSON documents for instances, price systems, certificates and reports.
// Rationals travel as exact "p/q" strings; key order is canonical so
// serialization round-trips byte-identically.

#include "natree/cps.hpp"
#include "natree/market.hpp"
#include "natree/na2.hpp"

#include <json.hpp>

#include <string>

namespace natree {

using Json = nlohmann::ordered_json;

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

std::string dump_json(const Json& j);  // canonical indentation + trailing newline

Json instance_to_json(const MarketInstance& inst);
/// Structural parse; throws ParseError naming the offending path. The result
/// is not finalized.
MarketInstance instance_from_json(const Json& j);

MarketInstance load_instance_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);
Json load_json_file(const std::string& path);

Json price_system_to_json(const MarketInstance& inst, const PriceSystem& ps);
PriceSystem price_system_from_json(const MarketInstance& inst, const Json& j);

Json request_to_json(const MarketInstance& inst, const ExtensionRequest& req,
                     const std::vector<int>* selection_indices = nullptr);
ExtensionRequest request_from_json(const MarketInstance& inst, const Json& j);

Json certificate_to_json(const MarketInstance& inst, const ArbitrageCertificate& cert,
                         const Strategy& strategy);
ArbitrageCertificate certificate_from_json(const MarketInstance& inst, const Json& j);
Strategy strategy_from_json(const MarketInstance& inst, const Json& j);

RatVec rat_vec_from_json(const Json& j, const std::string& where);
Json rat_vec_to_json(const RatVec& v);

/// Node id for a "root" / "1/0" style path key; throws ParseError when absent.
int node_from_path_key(const MarketInstance& inst, const std::string& key);

}  // namespace natree
