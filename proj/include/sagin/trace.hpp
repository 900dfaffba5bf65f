#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace sagin {

struct TraceRecord {
  std::int64_t timestamp_min = 0;
  double demand_bits = 0.0;
};

// Reads `timestamp,demand` rows (a header row and '#' comment lines are
// skipped), sums the demand of each minute and scales by `fraction`. Rows
// must be in nondecreasing timestamp order. Problems are reported with the
// offending line number. An empty input yields an empty list and a warning.
std::vector<double> aggregate_trace(std::istream& in, double fraction,
                                    std::vector<std::string>* warnings = nullptr);

std::vector<double> ingest_trace(const std::string& path, double fraction,
                                 std::vector<std::string>* warnings = nullptr);

struct SynthParams {
  std::uint64_t seed = 1;
  int minutes = 2400;
  // Mean demand per minute, bits.
  double level = 7.5e9;
  // 0 gives a constant trace; 1 lets a minute range over (0, 2 * level).
  double burstiness = 0.8;
  int records_per_minute = 4;
};

// Per-minute demand level * (1 + burstiness * (2B - 1)) with B ~ Beta(2, 2),
// split across several flow records of that minute.
std::vector<TraceRecord> synth_trace(const SynthParams& params);

// One-line description of the marginal distribution, written as a comment.
std::string synth_metadata(const SynthParams& params);

void write_trace(const std::vector<TraceRecord>& records, std::ostream& out,
                 const std::string& comment = {});

}  // namespace sagin
