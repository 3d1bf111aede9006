#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "nlqc/algorithms.hpp"
#include "nlqc/ngate.hpp"

namespace nlqc {

inline constexpr const char* kReportSchema = "nlqc.report/1";

std::string library_version();

nlohmann::json to_json(const RunReport& r);
RunReport run_report_from_json(const nlohmann::json& j);

struct ReportDocument {
  std::string schema_version = kReportSchema;
  std::string library_version = nlqc::library_version();
  std::string command;
  nlohmann::json config = nlohmann::json::object();
  std::optional<RunReport> report;
  nlohmann::json extra = nlohmann::json::object();  // command-specific payload
  std::optional<double> wall_time;
};

nlohmann::json to_json(const ReportDocument& d);
ReportDocument report_document_from_json(const nlohmann::json& j);
std::string serialize(const ReportDocument& d);
ReportDocument parse_report(std::string_view text);

// Stage list, schedules and fidelities of a synthesized gate.
nlohmann::json gate_audit(const CompositeNGate& g);

}  // namespace nlqc
