#include "nlqc/report.hpp"

#include <stdexcept>

namespace nlqc {

namespace {

nlohmann::json complex_json(Amplitude a) { return nlohmann::json::array({a.real(), a.imag()}); }

nlohmann::json matrix_json(const Mat4& m) {
  auto rows = nlohmann::json::array();
  for (int i = 0; i < 4; ++i) {
    auto row = nlohmann::json::array();
    for (int j = 0; j < 4; ++j) row.push_back(complex_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

std::string library_version() { return NLQC_VERSION_STRING; }

nlohmann::json to_json(const RunReport& r) {
  nlohmann::json j;
  j["algorithm"] = r.algorithm;
  j["mode"] = r.mode;
  j["decision"] = r.decision ? nlohmann::json(*r.decision ? "solution-exists" : "no-solution") : nlohmann::json(nullptr);
  j["count"] = r.count ? nlohmann::json(*r.count) : nlohmann::json(nullptr);
  j["oracle_calls"] = r.oracle_calls;
  j["trials_used"] = r.trials_used;
  j["applications_used"] = r.applications_used;
  j["applications_to_threshold"] =
      r.applications_to_threshold ? nlohmann::json(*r.applications_to_threshold) : nlohmann::json(nullptr);
  j["rounds"] = r.rounds;
  auto traj = nlohmann::json::array();
  for (const auto& p : r.separation_trajectory) traj.push_back({p.iteration, p.separation, p.in_region});
  j["separation_trajectory"] = traj;
  j["post_measurement_flag_amplitude"] = r.post_measurement_flag_amplitude;
  j["flag_census"] = r.flag_census;
  j["entanglement_residue"] = r.entanglement_residue;
  j["succeeded"] = r.succeeded;
  j["notes"] = r.notes;
  return j;
}

RunReport run_report_from_json(const nlohmann::json& j) {
  RunReport r;
  r.algorithm = j.at("algorithm").get<std::string>();
  r.mode = j.at("mode").get<std::string>();
  if (!j.at("decision").is_null()) {
    const auto d = j.at("decision").get<std::string>();
    if (d != "solution-exists" && d != "no-solution") throw std::invalid_argument("report: unknown decision '" + d + "'");
    r.decision = (d == "solution-exists");
  }
  if (!j.at("count").is_null()) r.count = j.at("count").get<std::uint64_t>();
  r.oracle_calls = j.at("oracle_calls").get<std::uint64_t>();
  r.trials_used = j.at("trials_used").get<std::size_t>();
  r.applications_used = j.at("applications_used").get<std::size_t>();
  if (!j.at("applications_to_threshold").is_null()) {
    r.applications_to_threshold = j.at("applications_to_threshold").get<std::size_t>();
  }
  r.rounds = j.at("rounds").get<std::size_t>();
  for (const auto& p : j.at("separation_trajectory")) {
    r.separation_trajectory.push_back({p.at(0).get<std::size_t>(), p.at(1).get<double>(), p.at(2).get<bool>()});
  }
  r.post_measurement_flag_amplitude = j.at("post_measurement_flag_amplitude").get<double>();
  r.flag_census = j.at("flag_census").get<std::vector<std::uint64_t>>();
  r.entanglement_residue = j.at("entanglement_residue").get<double>();
  r.succeeded = j.at("succeeded").get<bool>();
  r.notes = j.at("notes").get<std::vector<std::string>>();
  return r;
}

nlohmann::json to_json(const ReportDocument& d) {
  nlohmann::json j;
  j["schema_version"] = d.schema_version;
  j["library_version"] = d.library_version;
  j["command"] = d.command;
  j["config"] = d.config;
  j["report"] = d.report ? to_json(*d.report) : nlohmann::json(nullptr);
  j["extra"] = d.extra;
  if (d.wall_time) j["wall_time"] = *d.wall_time;
  return j;
}

ReportDocument report_document_from_json(const nlohmann::json& j) {
  ReportDocument d;
  d.schema_version = j.at("schema_version").get<std::string>();
  if (d.schema_version != kReportSchema) {
    throw std::invalid_argument("report: unsupported schema '" + d.schema_version + "'");
  }
  d.library_version = j.at("library_version").get<std::string>();
  d.command = j.at("command").get<std::string>();
  d.config = j.at("config");
  if (!j.at("report").is_null()) d.report = run_report_from_json(j.at("report"));
  d.extra = j.at("extra");
  if (j.contains("wall_time")) d.wall_time = j.at("wall_time").get<double>();
  return d;
}

std::string serialize(const ReportDocument& d) { return to_json(d).dump(2) + "\n"; }

ReportDocument parse_report(std::string_view text) {
  try {
    return report_document_from_json(nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("report: ") + e.what());
  }
}

nlohmann::json gate_audit(const CompositeNGate& g) {
  nlohmann::json j;
  j["eps"] = g.eps();
  j["hbar"] = g.hbar().coefficients();
  auto stages = nlohmann::json::array();
  for (const auto& s : g.stages()) {
    nlohmann::json st{{"name", s.name}, {"kind", s.kind}};
    if (s.kind == "unitary2") {
      st["matrix"] = matrix_json(s.matrix);
    } else {
      st["evolutions"] = s.evolutions;
      st["evolution_time"] = s.evolution_time;
    }
    stages.push_back(st);
  }
  j["stages"] = stages;
  auto schedule = nlohmann::json::array();
  for (const auto& p : g.n_minus().schedule) {
    schedule.push_back({{"phi", p.phi}, {"t", p.t}, {"distance_before", p.distance_before}, {"distance_after", p.distance_after}});
  }
  j["n_minus"] = {{"passes", schedule},
                  {"image_error_0", g.n_minus().image_error_0},
                  {"image_error_1", g.n_minus().image_error_1}};
  j["n_plus"] = {{"t", g.n_plus().t},
                 {"image_error_0", g.n_plus().image_error_0},
                 {"image_error_xy", g.n_plus().image_error_xy}};
  j["x"] = complex_json(g.x());
  j["y"] = complex_json(g.y());
  auto cases = nlohmann::json::array();
  for (const auto& c : g.case_results()) {
    cases.push_back({{"case", c.name}, {"fidelity", c.fidelity}, {"max_abs_error", c.max_abs_error}});
  }
  j["cases"] = cases;
  j["min_fidelity"] = g.min_fidelity();
  return j;
}

}  // namespace nlqc
