#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hsc/consistency.hpp"
#include "hsc/metrics.hpp"
#include "hsc/pipelines.hpp"

namespace hsc {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

struct RunReport {
  std::string algorithm;
  std::string kernel;
  double sigma = 0.0;
  double sigma2 = 0.0;
  double epsilon = 0.0;
  int k = 0;
  std::optional<int> m;
  double delta = 0.0;
  std::uint64_t seed = 0;
  std::string dataset;
  Index n = 0;
  Index d = 0;
  Index spectral_size = 0;
  std::optional<EvaluationReport> metrics;
  std::optional<std::vector<StageTiming>> timings;  // left out by default so reruns are byte-identical
  Flags flags;
  std::string sigma_source = "flag";                // "flag" or "grid-search"
};

/// Fills the configuration fields and flags from a finished run.
RunReport make_run_report(const PipelineConfig& cfg, const PipelineResult& result, const std::string& dataset,
                          Index n, Index d, bool with_timings);

nlohmann::ordered_json to_json(const EvaluationReport& r);
nlohmann::ordered_json to_json(const RunReport& r);
nlohmann::ordered_json to_json(const ConsistencyReport& r);

/// Two-space indented dump with a trailing newline. Non-finite numbers become null.
std::string dump_json(const nlohmann::ordered_json& j);
void save_report(const std::string& path, const nlohmann::ordered_json& j);

}  // namespace hsc
