#pragma once

#include <json.hpp>

#include <string>

#include "qchr/engine.hpp"

namespace qchr {

/// One JSON object per solved instance. Field order is fixed so reports of
/// two runs can be compared byte for byte once elapsed_ms is dropped.
inline nlohmann::ordered_json report_json(const std::string& id, const SolveResult& r, double elapsed_ms) {
  nlohmann::ordered_json j;
  j["instance"] = id;
  j["status"] = to_string(r.verdict);
  j["valid"] = r.valid;
  j["failures"] = r.stats.failures;
  j["rule_applications"] = r.stats.rule_applications;
  j["inactivations"] = r.stats.inactivations;
  j["exists_nodes"] = r.stats.exists_nodes;
  j["forall_nodes"] = r.stats.forall_nodes;
  j["table_hits"] = r.stats.table_hits;
  j["elapsed_ms"] = elapsed_ms;
  j["witness"] = r.witness ? nlohmann::ordered_json(*r.witness) : nlohmann::ordered_json(nullptr);
  if (!r.message.empty()) j["message"] = r.message;
  return j;
}

inline nlohmann::ordered_json report_json(const std::string& id, const SolveResult& r) {
  return report_json(id, r, r.stats.elapsed_ms);
}

}  // namespace qchr
