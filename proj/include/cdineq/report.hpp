#pragma once

#include "cdineq/induct.hpp"

#include <json.hpp>

#include <string>

namespace cdineq {

struct RunInfo {
  std::string expression;
  std::uint32_t prime = 0;
  bool trace = false;
  double parse_ms = 0, roots_ms = 0, induct_ms = 0;  // reported only with trace
};

nlohmann::json point_to_json(const RootSystem& rs, const ClusterPoint& P);
nlohmann::json node_to_json(const InductionNode& n);

// The analyze document; deterministic unless info.trace adds timings.
nlohmann::json make_report(const RunInfo& info, const ExactPoly& f, const RootSystem& rs, const InductionReport& r);

std::string report_to_text(const nlohmann::json& doc);

}  // namespace cdineq
