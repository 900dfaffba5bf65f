#include "sagin/ambiguity.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace sagin {

void SupportSet::validate() const {
  if (points.empty()) throw std::invalid_argument("support set is empty");
  for (size_t k = 0; k < points.size(); ++k) {
    if (!std::isfinite(points[k]) || points[k] < 0.0) {
      throw std::invalid_argument("support point " + std::to_string(k) +
                                  " must be finite and >= 0");
    }
    if (k > 0 && !(points[k] > points[k - 1])) {
      throw std::invalid_argument("support points must be strictly increasing");
    }
  }
}

int SupportSet::nearest_index(double value) const {
  if (points.empty()) throw std::invalid_argument("support set is empty");
  auto it = std::lower_bound(points.begin(), points.end(), value);
  if (it == points.begin()) return 0;
  if (it == points.end()) return size() - 1;
  const int hi = static_cast<int>(it - points.begin());
  return (value - points[hi - 1] <= points[hi] - value) ? hi - 1 : hi;
}

void DiscreteDistribution::validate(double tolerance) const {
  if (probs.empty()) throw std::invalid_argument("distribution is empty");
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= -tolerance)) {
      throw std::invalid_argument("probability below zero");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > tolerance) {
    throw std::invalid_argument("probabilities sum to " + std::to_string(sum));
  }
}

DiscreteDistribution DiscreteDistribution::uniform(int k) {
  if (k < 1) throw std::invalid_argument("uniform distribution needs K >= 1");
  return {std::vector<double>(k, 1.0 / k)};
}

const char* to_string(Metric metric) {
  switch (metric) {
    case Metric::kL1: return "l1";
    case Metric::kLinf: return "linf";
    case Metric::kKantorovich: return "kantorovich";
  }
  return "?";
}

Metric parse_metric(const std::string& name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "l1") return Metric::kL1;
  if (lower == "linf") return Metric::kLinf;
  if (lower == "kantorovich") return Metric::kKantorovich;
  throw std::invalid_argument("unknown metric '" + name +
                              "' (expected l1, linf or kantorovich)");
}

void AmbiguitySet::validate() const {
  support.validate();
  reference.validate();
  if (reference.size() != support.size()) {
    throw std::invalid_argument("reference and support sizes differ");
  }
  if (!(theta >= 0.0) || !std::isfinite(theta)) {
    throw std::invalid_argument("theta must be finite and >= 0");
  }
  if (!(ground_unit > 0.0)) {
    throw std::invalid_argument("ground_unit must be > 0");
  }
}

DiscreteDistribution empirical_distribution(const std::vector<double>& samples,
                                            const SupportSet& support) {
  support.validate();
  if (samples.empty()) throw std::invalid_argument("no samples");
  std::vector<double> counts(support.size(), 0.0);
  for (size_t i = 0; i < samples.size(); ++i) {
    const int k = support.nearest_index(samples[i]);
    const double point = support.points[k];
    if (std::abs(samples[i] - point) > 1e-9 * (1.0 + std::abs(point))) {
      throw std::invalid_argument("sample " + std::to_string(i) +
                                  " is not a support point; quantize first");
    }
    counts[k] += 1.0;
  }
  for (double& c : counts) c /= static_cast<double>(samples.size());
  return {counts};
}

double tolerance(Metric metric, int k, int history_size, double beta) {
  if (k < 1) throw std::invalid_argument("K must be >= 1");
  if (history_size < 1) throw std::invalid_argument("history size must be >= 1");
  if (!(beta > 0.0 && beta < 1.0)) {
    throw std::invalid_argument("confidence must lie in (0, 1)");
  }
  const double kk = k;
  const double n = history_size;
  double theta = 0.0;
  switch (metric) {
    case Metric::kL1:
      theta = kk / (2.0 * n) * std::log(2.0 * kk / (1.0 - beta));
      break;
    case Metric::kLinf:
      theta = 1.0 / (2.0 * n) * std::log(2.0 * kk / (1.0 - beta));
      break;
    case Metric::kKantorovich:
      theta = kk * std::sqrt(2.0 / n * std::log(1.0 / (1.0 - beta)));
      break;
  }
  return theta < 1e-12 ? 0.0 : theta;
}

double mean_gap(const SupportSet& support) {
  support.validate();
  if (support.size() == 1) return 1.0;
  return (support.points.back() - support.points.front()) /
         (support.size() - 1);
}

double ground_distance(const SupportSet& support, int x, int y,
                       double ground_unit) {
  return std::abs(support.points.at(x) - support.points.at(y)) / ground_unit;
}

namespace {

void require_same_size(const DiscreteDistribution& p,
                       const DiscreteDistribution& p0,
                       const SupportSet& support) {
  if (p.size() != p0.size() || p.size() != support.size()) {
    throw std::invalid_argument("distribution and support sizes differ");
  }
}

// Ordered pairs (x, y), x != y, in row-major order.
std::vector<std::pair<int, int>> ordered_pairs(int k) {
  std::vector<std::pair<int, int>> out;
  out.reserve(static_cast<size_t>(k) * (k - 1));
  for (int x = 0; x < k; ++x) {
    for (int y = 0; y < k; ++y) {
      if (x != y) out.emplace_back(x, y);
    }
  }
  return out;
}

}  // namespace

double distance(Metric metric, const DiscreteDistribution& p,
                const DiscreteDistribution& p0, const SupportSet& support,
                double ground_unit) {
  require_same_size(p, p0, support);
  const int k = p.size();
  switch (metric) {
    case Metric::kL1: {
      double s = 0.0;
      for (int i = 0; i < k; ++i) s += std::abs(p.probs[i] - p0.probs[i]);
      return s;
    }
    case Metric::kLinf: {
      double s = 0.0;
      for (int i = 0; i < k; ++i) {
        s = std::max(s, std::abs(p.probs[i] - p0.probs[i]));
      }
      return s;
    }
    case Metric::kKantorovich: {
      if (k == 1) return 0.0;
      // min sum_l u_l b_l  s.t.  sum_l u_l a_lk >= p_k - p0_k, u >= 0.
      lp::LinearProgram lp;
      const auto pairs = ordered_pairs(k);
      for (size_t l = 0; l < pairs.size(); ++l) {
        lp.add_variable("u" + std::to_string(l),
                        ground_distance(support, pairs[l].first,
                                        pairs[l].second, ground_unit));
      }
      for (int c = 0; c < k; ++c) {
        std::vector<lp::Term> terms;
        for (size_t l = 0; l < pairs.size(); ++l) {
          if (pairs[l].first == c) terms.push_back({static_cast<int>(l), 1.0});
          if (pairs[l].second == c) terms.push_back({static_cast<int>(l), -1.0});
        }
        lp.add_row(terms, lp::Relation::kGreaterEqual,
                   p.probs[c] - p0.probs[c]);
      }
      const lp::Solution s = lp::solve(lp);
      if (!s.optimal()) {
        throw std::runtime_error(std::string("transport LP failed: ") +
                                 lp::to_string(s.status));
      }
      return std::max(0.0, s.objective);
    }
  }
  return 0.0;
}

AmbiguitySet make_ambiguity_set(Metric metric, const SupportSet& support,
                                const std::vector<double>& samples,
                                double beta) {
  AmbiguitySet amb;
  amb.metric = metric;
  amb.support = support;
  amb.reference = empirical_distribution(samples, support);
  amb.confidence = beta;
  amb.history_size = static_cast<int>(samples.size());
  amb.theta = tolerance(metric, support.size(), amb.history_size, beta);
  amb.ground_unit = metric == Metric::kKantorovich ? mean_gap(support) : 1.0;
  return amb;
}

MembershipEncoding membership_constraints(const AmbiguitySet& amb) {
  amb.validate();
  const int k = amb.support.size();
  const std::vector<double>& p0 = amb.reference.probs;
  MembershipEncoding enc;
  enc.num_p = k;
  switch (amb.metric) {
    case Metric::kL1: {
      enc.aux_var_count = k;
      std::vector<lp::Term> budget;
      for (int i = 0; i < k; ++i) {
        const int s = k + i;
        enc.rows.push_back({{{i, 1.0}, {s, -1.0}}, lp::Relation::kLessEqual,
                            p0[i], "l1_pos_" + std::to_string(i)});
        enc.rows.push_back({{{i, -1.0}, {s, -1.0}}, lp::Relation::kLessEqual,
                            -p0[i], "l1_neg_" + std::to_string(i)});
        budget.push_back({s, 1.0});
      }
      enc.rows.push_back({budget, lp::Relation::kLessEqual, amb.theta,
                          "l1_budget"});
      break;
    }
    case Metric::kLinf: {
      for (int i = 0; i < k; ++i) {
        enc.rows.push_back({{{i, 1.0}}, lp::Relation::kLessEqual,
                            p0[i] + amb.theta, "linf_hi_" + std::to_string(i)});
        enc.rows.push_back({{{i, 1.0}}, lp::Relation::kGreaterEqual,
                            p0[i] - amb.theta, "linf_lo_" + std::to_string(i)});
      }
      break;
    }
    case Metric::kKantorovich: {
      const auto pairs = ordered_pairs(k);
      enc.aux_var_count = static_cast<int>(pairs.size());
      std::vector<lp::Term> budget;
      for (size_t l = 0; l < pairs.size(); ++l) {
        budget.push_back({k + static_cast<int>(l),
                          ground_distance(amb.support, pairs[l].first,
                                          pairs[l].second, amb.ground_unit)});
      }
      enc.rows.push_back({budget, lp::Relation::kLessEqual, amb.theta,
                          "kan_budget"});
      for (int c = 0; c < k; ++c) {
        // sum_l u_l a_lc - p_c >= -p0_c
        std::vector<lp::Term> terms{{c, -1.0}};
        for (size_t l = 0; l < pairs.size(); ++l) {
          const int col = k + static_cast<int>(l);
          if (pairs[l].first == c) terms.push_back({col, 1.0});
          if (pairs[l].second == c) terms.push_back({col, -1.0});
        }
        enc.rows.push_back({terms, lp::Relation::kGreaterEqual, -p0[c],
                            "kan_flow_" + std::to_string(c)});
      }
      break;
    }
  }
  return enc;
}

std::vector<int> append_membership(const MembershipEncoding& encoding,
                                   const std::vector<int>& p_columns,
                                   const std::string& prefix,
                                   lp::LinearProgram* lp) {
  if (static_cast<int>(p_columns.size()) != encoding.num_p) {
    throw std::invalid_argument("p column count does not match encoding");
  }
  std::vector<int> aux;
  aux.reserve(encoding.aux_var_count);
  for (int a = 0; a < encoding.aux_var_count; ++a) {
    aux.push_back(lp->add_variable(prefix + std::to_string(a), 0.0));
  }
  for (const lp::Row& row : encoding.rows) {
    std::vector<lp::Term> terms;
    terms.reserve(row.terms.size());
    for (const lp::Term& t : row.terms) {
      const int col = t.index < encoding.num_p
                          ? p_columns[t.index]
                          : aux[t.index - encoding.num_p];
      terms.push_back({col, t.value});
    }
    lp->add_row(std::move(terms), row.relation, row.rhs, row.name);
  }
  return aux;
}

bool encoding_feasible(const MembershipEncoding& encoding,
                       const DiscreteDistribution& p) {
  if (p.size() != encoding.num_p) {
    throw std::invalid_argument("distribution size does not match encoding");
  }
  lp::LinearProgram lp;
  std::vector<int> cols;
  for (int k = 0; k < encoding.num_p; ++k) {
    cols.push_back(lp.add_variable("p" + std::to_string(k), 0.0, p.probs[k],
                                   p.probs[k]));
  }
  append_membership(encoding, cols, "aux", &lp);
  return lp::solve(lp).status == lp::Status::kOptimal;
}

Quantization quantize_trace(const std::vector<double>& values, int k) {
  if (values.empty()) throw std::invalid_argument("no values to quantize");
  if (k < 1) throw std::invalid_argument("K must be >= 1");
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) {
      throw std::invalid_argument("task volumes must be finite and >= 0");
    }
  }
  std::vector<double> distinct(values);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  Quantization out;
  out.requested_k = k;
  if (k > static_cast<int>(distinct.size())) {
    k = static_cast<int>(distinct.size());
    out.shrunk = true;
  }
  const double lo = distinct.front();
  const double hi = distinct.back();
  const double width = (hi - lo) / k;
  for (int i = 0; i < k; ++i) out.support.points.push_back(lo + (i + 0.5) * width);
  out.samples.reserve(values.size());
  for (double v : values) {
    out.samples.push_back(out.support.points[out.support.nearest_index(v)]);
  }
  return out;
}

}  // namespace sagin
