#include "hsc/report.hpp"

#include <cmath>

#include "hsc/dataio.hpp"

namespace hsc {

namespace {

nlohmann::ordered_json number_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

nlohmann::ordered_json optional_number(const std::optional<double>& v) {
  if (!v) return nullptr;
  return number_or_null(*v);
}

}  // namespace

RunReport make_run_report(const PipelineConfig& cfg, const PipelineResult& result, const std::string& dataset,
                          Index n, Index d, bool with_timings) {
  RunReport r;
  r.algorithm = to_string(cfg.algorithm);
  r.kernel = to_string(result.kernel.kind);
  r.sigma = cfg.kernel.sigma;
  r.sigma2 = cfg.resolved_sigma2();
  r.epsilon = cfg.kernel.epsilon;
  r.k = cfg.k;
  if (uses_landmarks(cfg.algorithm)) r.m = cfg.resolved_m(n);
  r.delta = cfg.delta;
  r.seed = cfg.seed;
  r.dataset = dataset;
  r.n = n;
  r.d = d;
  r.spectral_size = result.spectral_size;
  if (with_timings) r.timings = result.timings;
  r.flags = result.flags;
  return r;
}

nlohmann::ordered_json to_json(const EvaluationReport& r) {
  nlohmann::ordered_json j;
  j["space"] = r.space == Metric::Euclidean ? "euclidean" : "hyperbolic";
  j["ari"] = optional_number(r.ari);
  j["nmi"] = optional_number(r.nmi);
  j["silhouette"] = optional_number(r.silhouette);
  j["davies_bouldin"] = optional_number(r.davies_bouldin);
  // +inf is a legal Calinski-Harabasz value; keep it distinguishable from "not computed"
  if (r.calinski_harabasz && std::isinf(*r.calinski_harabasz)) j["calinski_harabasz"] = "inf";
  else j["calinski_harabasz"] = optional_number(r.calinski_harabasz);
  j["flags"] = r.flags;
  return j;
}

nlohmann::ordered_json to_json(const RunReport& r) {
  nlohmann::ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["tool_version"] = kToolVersion;
  j["algorithm"] = r.algorithm;
  j["kernel"] = r.kernel;
  j["sigma"] = r.sigma;
  j["sigma2"] = r.sigma2;
  j["sigma_source"] = r.sigma_source;
  j["epsilon"] = number_or_null(r.epsilon);
  j["k"] = r.k;
  j["m"] = r.m ? nlohmann::ordered_json(*r.m) : nlohmann::ordered_json(nullptr);
  j["delta"] = r.delta;
  j["seed"] = r.seed;
  j["dataset"] = r.dataset;
  j["n"] = r.n;
  j["d"] = r.d;
  j["spectral_size"] = r.spectral_size;
  j["metrics"] = r.metrics ? to_json(*r.metrics) : nlohmann::ordered_json(nullptr);
  if (r.timings) {
    nlohmann::ordered_json t = nlohmann::ordered_json::object();
    for (const StageTiming& s : *r.timings) t[s.stage] = s.milliseconds;
    j["timings_ms"] = t;
  } else {
    j["timings_ms"] = nullptr;
  }
  j["flags"] = r.flags;
  return j;
}

nlohmann::ordered_json to_json(const ConsistencyReport& r) {
  nlohmann::ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["tool_version"] = kToolVersion;
  j["check_name"] = r.check_name;
  j["samples"] = r.samples;
  j["violations"] = r.violations;
  nlohmann::ordered_json stats = nlohmann::ordered_json::object();
  for (const auto& [name, value] : r.statistics) stats[name] = number_or_null(value);
  j["statistics"] = stats;
  j["passed"] = r.passed;
  j["seed"] = r.seed;
  return j;
}

std::string dump_json(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

void save_report(const std::string& path, const nlohmann::ordered_json& j) { write_text_file(path, dump_json(j)); }

}  // namespace hsc
