#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sagin/baselines.hpp"
#include "sagin/config.hpp"
#include "sagin/experiment.hpp"
#include "sagin/trace.hpp"

namespace sagin {
namespace {

TEST(Trace, AggregatesPerMinute) {
  std::istringstream in(
      "# synthetic\n"
      "timestamp,demand\n"
      "0,100\n"
      "0,50\n"
      "1,20\n"
      "3,10\n");
  std::vector<std::string> warnings;
  const std::vector<double> v = aggregate_trace(in, 0.5, &warnings);
  ASSERT_EQ(v.size(), 3u);
  EXPECT_DOUBLE_EQ(v[0], 75.0);
  EXPECT_DOUBLE_EQ(v[1], 10.0);
  EXPECT_DOUBLE_EQ(v[2], 5.0);
  EXPECT_TRUE(warnings.empty());
}

TEST(Trace, ReportsLineNumbers) {
  std::istringstream bad("timestamp,demand\n0,1\n1,abc\n");
  try {
    aggregate_trace(bad, 1.0);
    FAIL() << "expected a parse error";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  std::istringstream backwards("5,1\n4,1\n");
  EXPECT_THROW(aggregate_trace(backwards, 1.0), std::invalid_argument);
  std::istringstream negative("0,-1\n");
  EXPECT_THROW(aggregate_trace(negative, 1.0), std::invalid_argument);
  std::istringstream ok("0,1\n");
  EXPECT_THROW(aggregate_trace(ok, 0.0), std::invalid_argument);
}

TEST(Trace, EmptyInputWarns) {
  std::istringstream in("timestamp,demand\n");
  std::vector<std::string> warnings;
  EXPECT_TRUE(aggregate_trace(in, 1.0, &warnings).empty());
  EXPECT_EQ(warnings.size(), 1u);
}

TEST(Trace, SynthRoundTripAndDeterminism) {
  SynthParams params;
  params.minutes = 120;
  const auto a = synth_trace(params);
  const auto b = synth_trace(params);
  ASSERT_EQ(a.size(), b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].timestamp_min, b[i].timestamp_min);
    EXPECT_EQ(a[i].demand_bits, b[i].demand_bits);
  }
  std::stringstream buf;
  write_trace(a, buf, synth_metadata(params));
  const std::vector<double> minutes = aggregate_trace(buf, 1.0);
  ASSERT_EQ(minutes.size(), 120u);
  double mean = 0.0;
  for (double m : minutes) {
    EXPECT_GT(m, params.level * (1.0 - params.burstiness) - 1.0);
    EXPECT_LT(m, params.level * (1.0 + params.burstiness) + 1.0);
    mean += m / minutes.size();
  }
  EXPECT_NEAR(mean / params.level, 1.0, 0.1);
  params.burstiness = 0.0;
  std::stringstream flat;
  write_trace(synth_trace(params), flat);
  for (double m : aggregate_trace(flat, 1.0)) {
    EXPECT_NEAR(m / params.level, 1.0, 1e-9);
  }
}

TEST(Trace, LongRunMeanMatchesLevel) {
  SynthParams params;
  params.minutes = 10000;
  std::stringstream buf;
  write_trace(synth_trace(params), buf);
  const std::vector<double> minutes = aggregate_trace(buf, 1.0);
  ASSERT_EQ(minutes.size(), 10000u);
  double mean = 0.0;
  for (double m : minutes) mean += m / minutes.size();
  EXPECT_NEAR(mean / params.level, 1.0, 0.02);
}

TEST(Config, ScenarioRoundTrip) {
  const Scenario a = reference_scenario();
  const Scenario b = scenario_from_json(scenario_to_json(a));
  EXPECT_EQ(scenario_to_json(a), scenario_to_json(b));
  EXPECT_EQ(b.num_bs(), 5);
  EXPECT_EQ(b.num_sat(), 3);
  EXPECT_NO_THROW(b.validate());
  EXPECT_DOUBLE_EQ(b.energy_budget_j, default_energy_budget(b));
}

TEST(Config, RateCapacitiesAndDefaults) {
  nlohmann::json doc = scenario_to_json(reference_scenario());
  doc.erase("energy_budget_j");
  doc["base_stations"][0].erase("capacity_bits");
  doc["base_stations"][0]["capacity_bps"] = 10e6;
  const Scenario sc = scenario_from_json(doc);
  EXPECT_DOUBLE_EQ(sc.base_stations[0].capacity_bits, 10e6 * 60.0);
  EXPECT_DOUBLE_EQ(sc.energy_budget_j, default_energy_budget(sc));
  doc["satellites"][0].erase("positions");
  doc["satellites"][0].erase("orbit");
  EXPECT_THROW(scenario_from_json(doc), std::invalid_argument);
}

TEST(Config, PlanRoundTrip) {
  const Scenario sc = reference_scenario();
  const ChannelRealization rates = realize_rates(sc, 3);
  const SupportSet support{{2e8, 6e8, 1e9}};
  const OffloadPlan plan =
      solve_fixed(sc, rates, DiscreteDistribution{{0.2, 0.5, 0.3}}, support);
  const OffloadPlan back = plan_from_json(plan_to_json(plan));
  EXPECT_EQ(plan_to_json(back), plan_to_json(plan));
  EXPECT_EQ(back.x_bs, plan.x_bs);
  EXPECT_EQ(back.y_sat, plan.y_sat);
}

TEST(Baselines, PolicyNames) {
  for (Policy p : {Policy::kDro, Policy::kGreedy, Policy::kDeterministic,
                   Policy::kGreedyDeterministic}) {
    EXPECT_EQ(parse_policy(to_string(p)), p);
  }
  EXPECT_THROW(parse_policy("random"), std::invalid_argument);
  EXPECT_TRUE(metric_independent(Policy::kDeterministic));
  EXPECT_FALSE(metric_independent(Policy::kGreedy));
}

TEST(Baselines, ShapesOfEachPolicy) {
  const Scenario sc = reference_scenario();
  const ChannelRealization rates = realize_rates(sc, 1);
  const SupportSet support{{2e8, 5e8, 8e8}};
  const AmbiguitySet amb =
      make_ambiguity_set(Metric::kL1, support, {2e8, 5e8, 5e8, 8e8}, 0.9);

  const OffloadPlan greedy = greedy_plan(sc, rates, amb);
  EXPECT_FALSE(greedy.allow_local);
  for (const auto& row : greedy.y_uav) {
    for (double v : row) EXPECT_EQ(v, 0.0);
  }
  const OffloadPlan det = deterministic_plan(sc, rates, support);
  ASSERT_EQ(det.support.size(), 1);
  EXPECT_DOUBLE_EQ(det.support.points[0], 5e8);
  EXPECT_DOUBLE_EQ(det.worst_case_p.probs[0], 1.0);
  const OffloadPlan gd = greedy_deterministic_plan(sc, rates, support);
  EXPECT_FALSE(gd.allow_local);
  EXPECT_EQ(gd.support.size(), 1);
  for (Policy p : {Policy::kDro, Policy::kGreedy, Policy::kDeterministic,
                   Policy::kGreedyDeterministic}) {
    const OffloadPlan plan = make_plan(p, sc, rates, amb);
    EXPECT_TRUE(plan_violations(plan, sc).empty()) << to_string(p);
  }
}

// Volumes drawn from a small trace in memory.
std::vector<double> test_volumes(int n) {
  SynthParams params;
  params.minutes = n;
  std::stringstream buf;
  write_trace(synth_trace(params), buf);
  return aggregate_trace(buf, 0.1);
}

ExperimentSpec small_spec() {
  ExperimentSpec spec;
  spec.axis = Axis::kHistorySize;
  spec.values = {20, 40};
  spec.seeds = {1, 2};
  spec.max_windows = 5;
  return spec;
}

TEST(Experiment, FullGridInOrder) {
  const ExperimentSpec spec = small_spec();
  std::vector<ResultRow> seen;
  const ExperimentResult r =
      run_experiment(spec, reference_scenario(), test_volumes(80),
                     [&](const ResultRow& row) { seen.push_back(row); });
  ASSERT_EQ(r.rows.size(), 2u * 2u * 4u * 3u);
  ASSERT_EQ(seen.size(), r.rows.size());
  size_t i = 0;
  for (double v : spec.values) {
    for (std::uint64_t seed : spec.seeds) {
      for (Policy p : spec.policies) {
        for (Metric m : spec.metrics) {
          const ResultRow& row = r.rows[i];
          EXPECT_EQ(row.axis_value, v);
          EXPECT_EQ(row.seed, seed);
          EXPECT_EQ(row.policy, to_string(p));
          EXPECT_EQ(row.metric, to_string(m));
          EXPECT_EQ(row.axis, "history_size");
          EXPECT_TRUE(row.error.empty()) << row.error;
          if (metric_independent(p)) EXPECT_EQ(row.theta, 0.0);
          EXPECT_EQ(seen[i], row);
          ++i;
        }
      }
    }
  }
}

TEST(Experiment, ThreadsDoNotChangeResults) {
  ExperimentSpec spec = small_spec();
  const auto volumes = test_volumes(80);
  const ExperimentResult one = run_experiment(spec, reference_scenario(), volumes);
  spec.threads = 3;
  const ExperimentResult three = run_experiment(spec, reference_scenario(), volumes);
  ASSERT_EQ(one.rows.size(), three.rows.size());
  for (size_t i = 0; i < one.rows.size(); ++i) {
    ResultRow a = one.rows[i], b = three.rows[i];
    a.ms = b.ms = 0.0;
    EXPECT_EQ(a, b) << i;
  }
}

TEST(Experiment, FailedCellsKeepTheirRows) {
  ExperimentSpec spec = small_spec();
  spec.values = {20, 5000};
  const ExperimentResult r = run_experiment(spec, reference_scenario(), test_volumes(80));
  ASSERT_EQ(r.rows.size(), 2u * 2u * 4u * 3u);
  for (const ResultRow& row : r.rows) {
    if (row.axis_value == 5000) {
      EXPECT_FALSE(row.error.empty());
      EXPECT_TRUE(std::isnan(row.latency_s));
    } else {
      EXPECT_TRUE(row.error.empty());
    }
  }
}

TEST(Experiment, CsvAndJson) {
  ExperimentSpec spec = small_spec();
  spec.values = {30};
  spec.seeds = {4};
  const ExperimentResult r = run_experiment(spec, reference_scenario(), test_volumes(60));
  std::stringstream csv;
  emit_csv(r, csv);
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header,
            "policy,metric,axis,axis_value,seed,latency_s,worst_case_latency_s,"
            "energy_j,theta,drops,ms");
  int lines = 0;
  for (std::string line; std::getline(csv, line);) ++lines;
  EXPECT_EQ(lines, 12);

  const ExperimentResult back = result_from_json(result_to_json(r));
  ASSERT_EQ(back.rows.size(), r.rows.size());
  for (size_t i = 0; i < r.rows.size(); ++i) EXPECT_EQ(back.rows[i], r.rows[i]);
  EXPECT_EQ(back.summary.size(), r.summary.size());
}

TEST(Experiment, EmptyResultIsHeaderOnly) {
  std::stringstream csv;
  emit_csv(ExperimentResult{}, csv);
  EXPECT_EQ(csv.str(), std::string(kCsvHeader) + "\n");
}

TEST(Experiment, LinfThetaIsKFoldSmaller) {
  ExperimentSpec spec = small_spec();
  spec.policies = {Policy::kDro};
  spec.metrics = {Metric::kL1, Metric::kLinf};
  spec.values = {30, 50};
  const ExperimentResult r = run_experiment(spec, reference_scenario(), test_volumes(80));
  ASSERT_EQ(r.rows.size() % 2, 0u);
  for (size_t i = 0; i < r.rows.size(); i += 2) {
    EXPECT_EQ(r.rows[i].metric, "l1");
    EXPECT_EQ(r.rows[i + 1].metric, "linf");
    EXPECT_NEAR(r.rows[i + 1].theta * spec.support_size, r.rows[i].theta, 1e-15);
  }
}

TEST(Experiment, SpecParsing) {
  const nlohmann::json doc = {{"scenario", "s.json"},
                              {"trace", "/abs/t.csv"},
                              {"axis", "bs_capacity"},
                              {"values", {1e6, 2e6}},
                              {"metrics", {"l1"}},
                              {"policies", {"dro", "greedy"}},
                              {"seeds", {3}}};
  const ExperimentSpec spec = experiment_from_json(doc, "/base");
  EXPECT_EQ(spec.scenario_path, "/base/s.json");
  EXPECT_EQ(spec.trace_path, "/abs/t.csv");
  EXPECT_EQ(spec.axis, Axis::kBsCapacity);
  EXPECT_EQ(spec.metrics.size(), 1u);
  EXPECT_EQ(spec.policies.size(), 2u);
  nlohmann::json bad = doc;
  bad["values"] = nlohmann::json::array();
  EXPECT_THROW(experiment_from_json(bad), std::invalid_argument);
  bad = doc;
  bad["axis"] = "wind";
  EXPECT_THROW(experiment_from_json(bad), std::invalid_argument);
}

TEST(Experiment, Summary) {
  std::vector<ResultRow> rows(3);
  for (int i = 0; i < 3; ++i) {
    rows[i].policy = "dro";
    rows[i].metric = "l1";
    rows[i].axis_value = 1.0;
    rows[i].latency_s = 1.0 + i;
  }
  rows[2].latency_s = std::nan("");
  rows[2].error = "x";
  const auto s = summarize(rows);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].samples, 2);
  EXPECT_DOUBLE_EQ(s[0].latency_mean, 1.5);
}

}  // namespace
}  // namespace sagin
