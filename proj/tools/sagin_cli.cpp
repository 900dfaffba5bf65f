// Command-line front end: plan, sweep, gen-trace, validate, init-scenario.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "sagin/ambiguity.hpp"
#include "sagin/baselines.hpp"
#include "sagin/channel.hpp"
#include "sagin/config.hpp"
#include "sagin/dro.hpp"
#include "sagin/experiment.hpp"
#include "sagin/lp.hpp"
#include "sagin/trace.hpp"

namespace {

using namespace sagin;

// Writes to the named file, or stdout when the name is empty.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

Scenario scenario_or_reference(const std::string& path) {
  return path.empty() ? reference_scenario() : load_scenario(path);
}

struct PlanArgs {
  std::string scenario;
  std::string trace;
  std::string metric = "kantorovich";
  std::string policy = "dro";
  double beta = 0.95;
  int history = 300;
  std::uint64_t seed = 1;
  int support_size = 9;
  double fraction = 0.1;
  std::string out;
  std::string format = "json";
  std::string dump_lp;
};

int run_plan(const PlanArgs& a) {
  if (a.format != "json") throw std::invalid_argument("plan output is JSON only");
  const Scenario scenario = scenario_or_reference(a.scenario);
  std::vector<std::string> warnings;
  const std::vector<double> volumes = ingest_trace(a.trace, a.fraction, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  if (volumes.empty()) throw std::invalid_argument("trace is empty");
  if (a.history < 1) throw std::invalid_argument("--history must be >= 1");
  const size_t hist = std::min(volumes.size(), static_cast<size_t>(a.history));
  const std::vector<double> history(volumes.begin(), volumes.begin() + hist);
  const Quantization q = quantize_trace(history, a.support_size);
  if (q.shrunk) {
    std::cerr << "warning: support shrank from " << q.requested_k << " to "
              << q.support.size() << " points (too few distinct values)\n";
  }
  const Metric metric = parse_metric(a.metric);
  const Policy policy = parse_policy(a.policy);
  const AmbiguitySet amb = make_ambiguity_set(metric, q.support, q.samples, a.beta);
  const ChannelRealization rates = realize_rates(scenario, a.seed);

  if (!a.dump_lp.empty()) {
    const ProblemData data = make_problem_data(scenario, rates, amb.support);
    std::ofstream dump(a.dump_lp);
    if (!dump) throw std::runtime_error("cannot write " + a.dump_lp);
    lp::write_text(build_outer_lp(data, amb).lp, dump);
  }

  const OffloadPlan plan = make_plan(policy, scenario, rates, amb);
  nlohmann::json doc = plan_to_json(plan);
  doc["policy"] = to_string(policy);
  doc["metric"] = to_string(metric);
  doc["theta"] = amb.theta;
  doc["reference_p"] = amb.reference.probs;
  doc["history_size"] = static_cast<int>(hist);
  doc["seed"] = a.seed;
  Output out(a.out);
  out.stream() << doc.dump(2) << "\n";
  return 0;
}

int run_sweep(const std::string& spec_path, const std::string& out_path,
              const std::string& format, int threads) {
  ExperimentSpec spec = load_experiment(spec_path);
  if (!out_path.empty()) spec.output_path = out_path;
  if (threads > 0) spec.threads = threads;
  Output out(spec.output_path);
  std::ostream& os = out.stream();
  ExperimentResult result;
  if (format == "csv") {
    os << kCsvHeader << "\n" << std::flush;
    result = run_experiment(spec, [&os](const ResultRow& r) {
      write_csv_row(r, os);
      os.flush();
    });
  } else if (format == "json") {
    result = run_experiment(spec);
    emit_json(result, os);
  } else {
    throw std::invalid_argument("--format must be csv or json");
  }
  int failed = 0;
  for (const ResultRow& r : result.rows) failed += r.error.empty() ? 0 : 1;
  if (failed > 0) std::cerr << failed << " cell rows failed\n";
  return 0;
}

int run_gen_trace(const SynthParams& params, const std::string& out_path) {
  const auto records = synth_trace(params);
  Output out(out_path);
  write_trace(records, out.stream(), synth_metadata(params));
  return 0;
}

int run_validate(const std::string& path, std::uint64_t seed) {
  const Scenario scenario = scenario_or_reference(path);
  const ChannelRealization rates = realize_rates(scenario, seed);
  auto check = [](const std::vector<std::vector<double>>& m, const char* what) {
    for (const auto& row : m) {
      for (double r : row) {
        if (!(r > 0.0) || !std::isfinite(r)) {
          throw std::invalid_argument(std::string(what) + " rate not positive");
        }
      }
    }
  };
  check(rates.rate_ub, "UAV->BS");
  check(rates.rate_bu, "BS->UAV");
  check(rates.rate_us, "UAV->satellite");
  check(rates.rate_su, "satellite->UAV");
  std::cout << "ok: " << scenario.slots << " slots, " << scenario.num_bs()
            << " base stations, " << scenario.num_sat()
            << " satellites, energy budget " << scenario.energy_budget_j
            << " J\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"UAV offloading planner under task-volume uncertainty"};
  app.require_subcommand(1);

  PlanArgs plan;
  auto* plan_cmd = app.add_subcommand("plan", "Solve one planning instance and print the plan as JSON");
  plan_cmd->add_option("--scenario", plan.scenario, "Scenario JSON (default: built-in reference)");
  plan_cmd->add_option("--trace", plan.trace, "Trace CSV (timestamp,demand)")->required();
  plan_cmd->add_option("--metric", plan.metric, "l1 | linf | kantorovich")
      ->check(CLI::IsMember({"l1", "linf", "kantorovich"}));
  plan_cmd->add_option("--policy", plan.policy, "dro | greedy | deterministic | greedy-deterministic")
      ->check(CLI::IsMember({"dro", "greedy", "deterministic", "greedy-deterministic"}));
  plan_cmd->add_option("--beta", plan.beta, "Confidence level in (0,1)");
  plan_cmd->add_option("--history", plan.history,
                       "Number of leading trace slots used to build the reference distribution");
  plan_cmd->add_option("--seed", plan.seed, "Channel realization seed");
  plan_cmd->add_option("--support-size", plan.support_size, "Support points K");
  plan_cmd->add_option("--fraction", plan.fraction, "Share of per-minute demand collected");
  plan_cmd->add_option("--out", plan.out, "Output file (default stdout)");
  plan_cmd->add_option("--format", plan.format, "json")->check(CLI::IsMember({"json"}));
  plan_cmd->add_option("--dump-lp", plan.dump_lp, "Write the worst-case LP as text to this file");

  std::string spec_path, sweep_out, sweep_format = "csv";
  int threads = 0;
  auto* sweep_cmd = app.add_subcommand(
      "sweep",
      "Run an experiment grid. History = first --history trace slots (or the swept value); "
      "evaluation = the remaining slots in windows of T");
  sweep_cmd->add_option("--spec", spec_path, "Experiment JSON")->required();
  sweep_cmd->add_option("--out", sweep_out, "Output file (overrides the experiment file)");
  sweep_cmd->add_option("--format", sweep_format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
  sweep_cmd->add_option("--threads", threads, "Worker threads (overrides the experiment file)");

  SynthParams synth;
  std::string trace_out;
  auto* gen_cmd = app.add_subcommand("gen-trace", "Write a synthetic demand trace");
  gen_cmd->add_option("--seed", synth.seed, "Generator seed");
  gen_cmd->add_option("--minutes", synth.minutes, "Number of minutes");
  gen_cmd->add_option("--level", synth.level, "Mean demand per minute (bits)");
  gen_cmd->add_option("--burstiness", synth.burstiness, "Spread in [0,1]");
  gen_cmd->add_option("--records-per-minute", synth.records_per_minute, "Flow records per minute");
  gen_cmd->add_option("--out", trace_out, "Output file (default stdout)");

  std::string validate_path;
  std::uint64_t validate_seed = 1;
  auto* validate_cmd = app.add_subcommand("validate", "Check a scenario file");
  validate_cmd->add_option("--scenario", validate_path, "Scenario JSON (default: built-in reference)");
  validate_cmd->add_option("--seed", validate_seed, "Seed for the rate check");

  std::string init_out;
  auto* init_cmd = app.add_subcommand("init-scenario", "Write the built-in reference scenario as JSON");
  init_cmd->add_option("--out", init_out, "Output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*plan_cmd) return run_plan(plan);
    if (*sweep_cmd) return run_sweep(spec_path, sweep_out, sweep_format, threads);
    if (*gen_cmd) return run_gen_trace(synth, trace_out);
    if (*validate_cmd) return run_validate(validate_path, validate_seed);
    if (*init_cmd) {
      Output out(init_out);
      out.stream() << scenario_to_json(reference_scenario()).dump(2) << "\n";
      return 0;
    }
  } catch (const InfeasibleScenario& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
