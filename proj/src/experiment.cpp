#include "sagin/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <filesystem>
#include <iomanip>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "sagin/channel.hpp"
#include "sagin/config.hpp"
#include "sagin/dro.hpp"
#include "sagin/trace.hpp"

namespace sagin {

using nlohmann::json;

const char* to_string(Axis axis) {
  switch (axis) {
    case Axis::kHistorySize: return "history_size";
    case Axis::kConfidence: return "confidence";
    case Axis::kBsCapacity: return "bs_capacity";
    case Axis::kVolumeScale: return "volume_scale";
  }
  return "?";
}

Axis parse_axis(const std::string& name) {
  if (name == "history_size") return Axis::kHistorySize;
  if (name == "confidence") return Axis::kConfidence;
  if (name == "bs_capacity") return Axis::kBsCapacity;
  if (name == "volume_scale") return Axis::kVolumeScale;
  throw std::invalid_argument("unknown sweep axis '" + name + "'");
}

void ExperimentSpec::validate() const {
  if (values.empty()) throw std::invalid_argument("sweep needs axis values");
  if (seeds.empty()) throw std::invalid_argument("sweep needs seeds");
  if (metrics.empty()) throw std::invalid_argument("sweep needs metrics");
  if (policies.empty()) throw std::invalid_argument("sweep needs policies");
  if (support_size < 1) throw std::invalid_argument("support_size must be >= 1");
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("fraction must lie in (0, 1]");
  }
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
  if (max_windows < 0) throw std::invalid_argument("max_windows must be >= 0");
}

namespace {

std::string resolve(const std::string& path, const std::string& base_dir) {
  if (path.empty() || base_dir.empty()) return path;
  const std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  const std::filesystem::path beside = std::filesystem::path(base_dir) / p;
  return std::filesystem::exists(beside) || !std::filesystem::exists(p)
             ? beside.string()
             : path;
}

}  // namespace

ExperimentSpec experiment_from_json(const json& doc,
                                    const std::string& base_dir) {
  ExperimentSpec spec;
  spec.scenario_path = resolve(doc.value("scenario", std::string()), base_dir);
  spec.trace_path = resolve(doc.value("trace", std::string()), base_dir);
  spec.axis = parse_axis(doc.at("axis").get<std::string>());
  spec.values = doc.at("values").get<std::vector<double>>();
  if (doc.contains("metrics")) {
    spec.metrics.clear();
    for (const auto& m : doc["metrics"]) {
      spec.metrics.push_back(parse_metric(m.get<std::string>()));
    }
  }
  if (doc.contains("policies")) {
    spec.policies.clear();
    for (const auto& p : doc["policies"]) {
      spec.policies.push_back(parse_policy(p.get<std::string>()));
    }
  }
  if (doc.contains("seeds")) {
    spec.seeds = doc["seeds"].get<std::vector<std::uint64_t>>();
  }
  spec.output_path = doc.value("output", std::string());
  spec.history_size = doc.value("history_size", spec.history_size);
  spec.confidence = doc.value("confidence", spec.confidence);
  spec.volume_scale = doc.value("volume_scale", spec.volume_scale);
  spec.bs_capacity_bps = doc.value("bs_capacity_bps", spec.bs_capacity_bps);
  spec.support_size = doc.value("support_size", spec.support_size);
  spec.fraction = doc.value("fraction", spec.fraction);
  spec.max_windows = doc.value("max_windows", spec.max_windows);
  spec.threads = doc.value("threads", spec.threads);
  spec.validate();
  return spec;
}

ExperimentSpec load_experiment(const std::string& path) {
  const std::string dir = std::filesystem::path(path).parent_path().string();
  try {
    return experiment_from_json(read_json_file(path), dir);
  } catch (const json::exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ResultRow failed_row(ResultRow row, const std::string& message) {
  row.latency_s = row.worst_case_latency_s = row.energy_j = kNaN;
  row.drops = 0;
  row.error = message.empty() ? "failed" : message;
  return row;
}

struct CellInput {
  Scenario scenario;
  std::vector<double> history;
  std::vector<double> evaluation;
  int history_size = 0;
  double confidence = 0.0;
};

CellInput prepare_cell(const ExperimentSpec& spec, const Scenario& base,
                       const std::vector<double>& volumes, double value) {
  CellInput in;
  in.scenario = base;
  in.history_size = spec.history_size;
  in.confidence = spec.confidence;
  double scale = spec.volume_scale;
  double capacity_bps = spec.bs_capacity_bps;
  switch (spec.axis) {
    case Axis::kHistorySize: in.history_size = static_cast<int>(std::lround(value)); break;
    case Axis::kConfidence: in.confidence = value; break;
    case Axis::kBsCapacity: capacity_bps = value; break;
    case Axis::kVolumeScale: scale = value; break;
  }
  if (capacity_bps > 0.0) {
    for (BaseStation& bs : in.scenario.base_stations) {
      bs.capacity_bits = capacity_bps * in.scenario.kinematics.slot_duration_s;
    }
  }
  if (in.history_size < 1) throw std::invalid_argument("history size must be >= 1");
  const size_t hist = static_cast<size_t>(in.history_size);
  if (hist + in.scenario.slots > volumes.size()) {
    throw std::invalid_argument("trace too short for history " +
                                std::to_string(hist) + " plus one window");
  }
  for (size_t i = 0; i < volumes.size(); ++i) {
    (i < hist ? in.history : in.evaluation).push_back(volumes[i] * scale);
  }
  return in;
}

struct PolicyOutcome {
  double latency = 0.0;
  double energy = 0.0;
  int drops = 0;
  double worst_case = 0.0;
};

PolicyOutcome run_policy(Policy policy, const CellInput& in,
                         const ChannelRealization& rates,
                         const AmbiguitySet& amb, int max_windows) {
  const OffloadPlan plan = make_plan(policy, in.scenario, rates, amb);
  const int T = in.scenario.slots;
  int windows = static_cast<int>(in.evaluation.size()) / T;
  if (max_windows > 0) windows = std::min(windows, max_windows);
  PolicyOutcome out;
  out.worst_case = plan.worst_case_objective_s;
  for (int w = 0; w < windows; ++w) {
    std::vector<double> realized(in.evaluation.begin() + w * T,
                                 in.evaluation.begin() + (w + 1) * T);
    const Evaluation ev =
        evaluate_plan(plan, realized, in.scenario, rates, &amb.support);
    out.latency += ev.latency_s;
    out.energy += ev.energy_j;
    out.drops += ev.drops;
  }
  if (windows > 0) {
    out.latency /= windows;
    out.energy /= windows;
  }
  return out;
}

std::vector<ResultRow> run_cell(const ExperimentSpec& spec,
                                const Scenario& scenario,
                                const std::vector<double>& volumes,
                                double value, std::uint64_t seed) {
  ResultRow base;
  base.axis = to_string(spec.axis);
  base.axis_value = value;
  base.seed = seed;

  std::vector<ResultRow> rows;
  auto fail_all = [&](const std::string& message) {
    for (Policy p : spec.policies) {
      for (Metric m : spec.metrics) {
        ResultRow r = base;
        r.policy = to_string(p);
        r.metric = to_string(m);
        rows.push_back(failed_row(r, message));
      }
    }
    return rows;
  };

  CellInput in;
  Quantization q;
  ChannelRealization rates;
  try {
    in = prepare_cell(spec, scenario, volumes, value);
    q = quantize_trace(in.history, spec.support_size);
    rates = realize_rates(in.scenario, seed);
  } catch (const std::exception& e) {
    return fail_all(e.what());
  }

  using Clock = std::chrono::steady_clock;
  for (Policy policy : spec.policies) {
    std::optional<ResultRow> shared;
    for (Metric metric : spec.metrics) {
      ResultRow r = base;
      r.policy = to_string(policy);
      r.metric = to_string(metric);
      if (shared) {
        ResultRow copy = *shared;
        copy.metric = r.metric;
        rows.push_back(copy);
        continue;
      }
      const auto start = Clock::now();
      try {
        const AmbiguitySet amb =
            make_ambiguity_set(metric, q.support, q.samples, in.confidence);
        const PolicyOutcome o =
            run_policy(policy, in, rates, amb, spec.max_windows);
        r.latency_s = o.latency;
        r.worst_case_latency_s = o.worst_case;
        r.energy_j = o.energy;
        r.drops = o.drops;
        r.theta = metric_independent(policy) ? 0.0 : amb.theta;
      } catch (const std::exception& e) {
        r = failed_row(r, e.what());
      }
      r.ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
      if (metric_independent(policy)) shared = r;
      rows.push_back(r);
    }
  }
  return rows;
}

}  // namespace

ExperimentResult run_experiment(
    const ExperimentSpec& spec, const Scenario& scenario,
    const std::vector<double>& volumes,
    const std::function<void(const ResultRow&)>& on_row) {
  spec.validate();
  const size_t n_seeds = spec.seeds.size();
  const size_t n_cells = spec.values.size() * n_seeds;
  std::vector<std::optional<std::vector<ResultRow>>> done(n_cells);
  std::mutex mutex;
  std::condition_variable ready;
  std::atomic<size_t> next{0};

  auto worker = [&] {
    while (true) {
      const size_t c = next.fetch_add(1);
      if (c >= n_cells) return;
      auto rows = run_cell(spec, scenario, volumes, spec.values[c / n_seeds],
                           spec.seeds[c % n_seeds]);
      {
        std::lock_guard<std::mutex> lock(mutex);
        done[c] = std::move(rows);
      }
      ready.notify_all();
    }
  };

  const int workers = std::min<int>(spec.threads, static_cast<int>(n_cells));
  std::vector<std::thread> pool;
  for (int i = 1; i < workers; ++i) pool.emplace_back(worker);

  ExperimentResult result;
  result.axis = to_string(spec.axis);
  for (size_t c = 0; c < n_cells; ++c) {
    std::vector<ResultRow> rows;
    if (workers <= 1) {
      rows = run_cell(spec, scenario, volumes, spec.values[c / n_seeds],
                      spec.seeds[c % n_seeds]);
    } else {
      std::unique_lock<std::mutex> lock(mutex);
      ready.wait(lock, [&] { return done[c].has_value(); });
      rows = std::move(*done[c]);
    }
    for (const ResultRow& r : rows) {
      if (on_row) on_row(r);
      result.rows.push_back(r);
    }
  }
  for (std::thread& t : pool) t.join();
  result.summary = summarize(result.rows);
  return result;
}

ExperimentResult run_experiment(
    const ExperimentSpec& spec,
    const std::function<void(const ResultRow&)>& on_row) {
  spec.validate();
  const Scenario scenario = load_scenario(spec.scenario_path);
  std::vector<std::string> warnings;
  const std::vector<double> volumes =
      ingest_trace(spec.trace_path, spec.fraction, &warnings);
  return run_experiment(spec, scenario, volumes, on_row);
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
  std::vector<SummaryRow> out;
  std::map<std::tuple<std::string, std::string, double>, std::vector<double>> groups;
  std::vector<std::tuple<std::string, std::string, double>> order;
  for (const ResultRow& r : rows) {
    auto key = std::make_tuple(r.policy, r.metric, r.axis_value);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    if (r.error.empty()) it->second.push_back(r.latency_s);
  }
  for (const auto& key : order) {
    const std::vector<double>& v = groups[key];
    SummaryRow s;
    s.policy = std::get<0>(key);
    s.metric = std::get<1>(key);
    s.axis_value = std::get<2>(key);
    s.samples = static_cast<int>(v.size());
    if (v.empty()) {
      s.latency_mean = s.latency_std = kNaN;
    } else {
      for (double x : v) s.latency_mean += x;
      s.latency_mean /= v.size();
      for (double x : v) s.latency_std += (x - s.latency_mean) * (x - s.latency_mean);
      s.latency_std = v.size() > 1 ? std::sqrt(s.latency_std / (v.size() - 1)) : 0.0;
    }
    out.push_back(s);
  }
  return out;
}

void write_csv_row(const ResultRow& r, std::ostream& out) {
  auto num = [&out](double v) {
    if (std::isnan(v)) {
      out << "nan";
    } else {
      out << std::setprecision(10) << v;
    }
  };
  out << r.policy << ',' << r.metric << ',' << r.axis << ',';
  num(r.axis_value);
  out << ',' << r.seed << ',';
  num(r.latency_s);
  out << ',';
  num(r.worst_case_latency_s);
  out << ',';
  num(r.energy_j);
  out << ',';
  num(r.theta);
  out << ',' << r.drops << ',';
  num(r.ms);
  out << '\n';
}

void emit_csv(const ExperimentResult& result, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const ResultRow& r : result.rows) write_csv_row(r, out);
}

namespace {

json number(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

double number_from(const json& j) {
  return j.is_null() ? kNaN : j.get<double>();
}

}  // namespace

json result_to_json(const ExperimentResult& result) {
  json rows = json::array();
  for (const ResultRow& r : result.rows) {
    json row = {{"policy", r.policy},
                {"metric", r.metric},
                {"axis", r.axis},
                {"axis_value", number(r.axis_value)},
                {"seed", r.seed},
                {"latency_s", number(r.latency_s)},
                {"worst_case_latency_s", number(r.worst_case_latency_s)},
                {"energy_j", number(r.energy_j)},
                {"theta", number(r.theta)},
                {"drops", r.drops},
                {"ms", number(r.ms)}};
    if (!r.error.empty()) row["error"] = r.error;
    rows.push_back(row);
  }
  json summary = json::array();
  for (const SummaryRow& s : result.summary) {
    summary.push_back({{"policy", s.policy},
                       {"metric", s.metric},
                       {"axis_value", number(s.axis_value)},
                       {"samples", s.samples},
                       {"latency_mean", number(s.latency_mean)},
                       {"latency_std", number(s.latency_std)}});
  }
  return {{"axis", result.axis},
          {"row_convention",
           "full grid: axis_value x seed x policy x metric; metric-independent "
           "policies repeated per metric with theta 0"},
          {"rows", rows},
          {"summary", summary}};
}

ExperimentResult result_from_json(const json& doc) {
  ExperimentResult result;
  result.axis = doc.value("axis", std::string());
  for (const json& j : doc.at("rows")) {
    ResultRow r;
    r.policy = j.at("policy").get<std::string>();
    r.metric = j.at("metric").get<std::string>();
    r.axis = j.at("axis").get<std::string>();
    r.axis_value = number_from(j.at("axis_value"));
    r.seed = j.at("seed").get<std::uint64_t>();
    r.latency_s = number_from(j.at("latency_s"));
    r.worst_case_latency_s = number_from(j.at("worst_case_latency_s"));
    r.energy_j = number_from(j.at("energy_j"));
    r.theta = number_from(j.at("theta"));
    r.drops = j.at("drops").get<int>();
    r.ms = number_from(j.at("ms"));
    r.error = j.value("error", std::string());
    result.rows.push_back(r);
  }
  for (const json& j : doc.value("summary", json::array())) {
    SummaryRow s;
    s.policy = j.at("policy").get<std::string>();
    s.metric = j.at("metric").get<std::string>();
    s.axis_value = number_from(j.at("axis_value"));
    s.samples = j.at("samples").get<int>();
    s.latency_mean = number_from(j.at("latency_mean"));
    s.latency_std = number_from(j.at("latency_std"));
    result.summary.push_back(s);
  }
  return result;
}

void emit_json(const ExperimentResult& result, std::ostream& out) {
  out << result_to_json(result).dump(2) << '\n';
}

}  // namespace sagin
