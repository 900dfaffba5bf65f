#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "sagin/ambiguity.hpp"
#include "sagin/baselines.hpp"
#include "sagin/scenario.hpp"

namespace sagin {

enum class Axis { kHistorySize, kConfidence, kBsCapacity, kVolumeScale };

const char* to_string(Axis axis);
Axis parse_axis(const std::string& name);

struct ExperimentSpec {
  std::string scenario_path;
  std::string trace_path;
  Axis axis = Axis::kHistorySize;
  std::vector<double> values;
  std::vector<Metric> metrics{Metric::kL1, Metric::kLinf, Metric::kKantorovich};
  std::vector<Policy> policies{Policy::kDro, Policy::kGreedy,
                               Policy::kDeterministic,
                               Policy::kGreedyDeterministic};
  std::vector<std::uint64_t> seeds{1};
  std::string output_path;

  // Values held fixed while another axis is swept.
  int history_size = 300;
  double confidence = 0.95;
  double volume_scale = 1.0;
  double bs_capacity_bps = 0.0;  // 0 keeps the scenario's own capacities
  int support_size = 9;
  double fraction = 0.1;
  // Evaluation windows per cell; 0 uses every full window after the history.
  int max_windows = 0;
  int threads = 1;

  void validate() const;
};

// Relative paths inside the document are resolved against `base_dir`.
ExperimentSpec experiment_from_json(const nlohmann::json& doc,
                                    const std::string& base_dir = {});
ExperimentSpec load_experiment(const std::string& path);

struct ResultRow {
  std::string policy;
  std::string metric;
  std::string axis;
  double axis_value = 0.0;
  std::uint64_t seed = 0;
  double latency_s = 0.0;
  double worst_case_latency_s = 0.0;
  double energy_j = 0.0;
  double theta = 0.0;
  int drops = 0;
  double ms = 0.0;
  std::string error;  // empty on success

  bool operator==(const ResultRow&) const = default;
};

struct SummaryRow {
  std::string policy;
  std::string metric;
  double axis_value = 0.0;
  int samples = 0;
  double latency_mean = 0.0;
  double latency_std = 0.0;
};

struct ExperimentResult {
  std::string axis;
  std::vector<ResultRow> rows;
  std::vector<SummaryRow> summary;
};

// Rows form the full grid (axis value, seed, policy, metric) in that nesting
// order. Policies that ignore the ambiguity set are solved once per cell and
// their row repeated for each metric with theta = 0. A cell that throws is
// recorded with NaN numbers and the message in `error`. `on_row` sees rows
// in final order as soon as each is available.
ExperimentResult run_experiment(
    const ExperimentSpec& spec,
    const std::function<void(const ResultRow&)>& on_row = {});

// Same grid on in-memory inputs.
ExperimentResult run_experiment(
    const ExperimentSpec& spec, const Scenario& scenario,
    const std::vector<double>& volumes,
    const std::function<void(const ResultRow&)>& on_row = {});

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);

inline constexpr const char* kCsvHeader =
    "policy,metric,axis,axis_value,seed,latency_s,worst_case_latency_s,"
    "energy_j,theta,drops,ms";

void write_csv_row(const ResultRow& row, std::ostream& out);
void emit_csv(const ExperimentResult& result, std::ostream& out);

nlohmann::json result_to_json(const ExperimentResult& result);
ExperimentResult result_from_json(const nlohmann::json& doc);
void emit_json(const ExperimentResult& result, std::ostream& out);

}  // namespace sagin
