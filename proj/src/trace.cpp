#include "sagin/trace.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>
#include <stdexcept>

namespace sagin {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_line(int line, const std::string& why) {
  throw std::invalid_argument("trace line " + std::to_string(line) + ": " + why);
}

}  // namespace

std::vector<double> aggregate_trace(std::istream& in, double fraction,
                                    std::vector<std::string>* warnings) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("fraction must lie in (0, 1]");
  }
  std::vector<double> out;
  std::string raw;
  int line = 0;
  bool seen_data = false;
  bool have_minute = false;
  std::int64_t minute = 0;
  double sum = 0.0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = trim(raw);
    if (text.empty() || text[0] == '#') continue;
    const auto comma = text.find(',');
    if (comma == std::string::npos) bad_line(line, "expected timestamp,demand");
    const std::string ts_text = trim(text.substr(0, comma));
    const std::string demand_text = trim(text.substr(comma + 1));
    if (!seen_data && ts_text == "timestamp") {
      seen_data = true;
      continue;
    }
    seen_data = true;
    std::int64_t ts = 0;
    auto [ptr, ec] = std::from_chars(ts_text.data(), ts_text.data() + ts_text.size(), ts);
    if (ec != std::errc() || ptr != ts_text.data() + ts_text.size()) {
      bad_line(line, "timestamp '" + ts_text + "' is not an integer");
    }
    double demand = 0.0;
    try {
      size_t used = 0;
      demand = std::stod(demand_text, &used);
      if (used != demand_text.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      bad_line(line, "demand '" + demand_text + "' is not a number");
    }
    if (!std::isfinite(demand) || demand < 0.0) {
      bad_line(line, "demand must be finite and >= 0");
    }
    if (have_minute && ts < minute) bad_line(line, "timestamps decrease");
    if (have_minute && ts != minute) {
      out.push_back(sum * fraction);
      sum = 0.0;
    }
    minute = ts;
    have_minute = true;
    sum += demand;
  }
  if (have_minute) {
    out.push_back(sum * fraction);
  } else if (warnings != nullptr) {
    warnings->push_back("trace has no data rows");
  }
  return out;
}

std::vector<double> ingest_trace(const std::string& path, double fraction,
                                 std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace " + path);
  return aggregate_trace(in, fraction, warnings);
}

std::vector<TraceRecord> synth_trace(const SynthParams& params) {
  if (params.minutes < 0) throw std::invalid_argument("minutes must be >= 0");
  if (!(params.level >= 0.0)) throw std::invalid_argument("level must be >= 0");
  if (!(params.burstiness >= 0.0 && params.burstiness <= 1.0)) {
    throw std::invalid_argument("burstiness must lie in [0, 1]");
  }
  if (params.records_per_minute < 1) {
    throw std::invalid_argument("records_per_minute must be >= 1");
  }
  std::mt19937_64 rng(params.seed);
  std::gamma_distribution<double> shape2(2.0, 1.0);
  std::gamma_distribution<double> split(1.0, 1.0);
  std::vector<TraceRecord> out;
  out.reserve(static_cast<size_t>(params.minutes) * params.records_per_minute);
  std::vector<double> weights(params.records_per_minute);
  for (int m = 0; m < params.minutes; ++m) {
    const double a = shape2(rng);
    const double b = shape2(rng);
    const double beta = a / (a + b);
    const double demand =
        params.level * (1.0 + params.burstiness * (2.0 * beta - 1.0));
    double total = 0.0;
    for (double& w : weights) total += (w = split(rng));
    for (double w : weights) out.push_back({m, demand * w / total});
  }
  return out;
}

std::string synth_metadata(const SynthParams& params) {
  std::ostringstream s;
  s << "synthetic demand: per-minute total = level*(1+b*(2*B-1)), B~Beta(2,2) "
       "i.i.d., level="
    << params.level << " bits, b=" << params.burstiness
    << ", seed=" << params.seed << ", minutes=" << params.minutes
    << ", records/minute=" << params.records_per_minute
    << " (flat Dirichlet split)";
  return s.str();
}

void write_trace(const std::vector<TraceRecord>& records, std::ostream& out,
                 const std::string& comment) {
  if (!comment.empty()) out << "# " << comment << "\n";
  out << "timestamp,demand\n";
  out << std::setprecision(17);
  for (const TraceRecord& r : records) {
    out << r.timestamp_min << "," << r.demand_bits << "\n";
  }
}

}  // namespace sagin
