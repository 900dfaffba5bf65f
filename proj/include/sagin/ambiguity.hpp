#pragma once

#include <string>
#include <vector>

#include "sagin/lp.hpp"

namespace sagin {

// Sample space of task volumes (bits per slot), strictly increasing.
struct SupportSet {
  std::vector<double> points;

  int size() const { return static_cast<int>(points.size()); }
  void validate() const;
  // Index of the closest point; ties go to the lower index.
  int nearest_index(double value) const;
};

struct DiscreteDistribution {
  std::vector<double> probs;

  int size() const { return static_cast<int>(probs.size()); }
  void validate(double tolerance = 1e-9) const;
  static DiscreteDistribution uniform(int k);
};

enum class Metric { kL1, kLinf, kKantorovich };

const char* to_string(Metric metric);
// Accepts "l1", "linf", "kantorovich" (case-insensitive).
Metric parse_metric(const std::string& name);

struct AmbiguitySet {
  Metric metric = Metric::kKantorovich;
  double theta = 0.0;
  DiscreteDistribution reference;
  SupportSet support;
  double confidence = 0.95;
  int history_size = 1;
  // Bits per unit of Kantorovich ground distance. 1 keeps raw bits.
  double ground_unit = 1.0;

  void validate() const;
};

DiscreteDistribution empirical_distribution(const std::vector<double>& samples,
                                            const SupportSet& support);

// Closed-form radius for K support points, K' samples, confidence beta.
// Values below 1e-12 are returned as 0.
double tolerance(Metric metric, int k, int history_size, double beta);

// Average spacing of the support, (max - min) / (K - 1); 1 for K = 1.
double mean_gap(const SupportSet& support);

// |x - y| / ground_unit.
double ground_distance(const SupportSet& support, int x, int y,
                       double ground_unit = 1.0);

// L1, L-infinity, or Kantorovich distance. The Kantorovich value is the
// optimum of the transport dual LP over the L = K(K-1) ordered pairs.
double distance(Metric metric, const DiscreteDistribution& p,
                const DiscreteDistribution& p0, const SupportSet& support,
                double ground_unit = 1.0);

// Ambiguity set around the empirical distribution of `samples`, with the
// calibrated radius. Kantorovich sets measure distance in units of the mean
// support gap so that the dimensionless radius is meaningful.
AmbiguitySet make_ambiguity_set(Metric metric, const SupportSet& support,
                                const std::vector<double>& samples,
                                double beta);

// Linear rows describing p in the ball. Columns 0..K-1 are p; columns
// K..K+aux_var_count-1 are auxiliaries (all >= 0). Nonnegativity and the
// simplex row for p are left to the caller.
struct MembershipEncoding {
  int num_p = 0;
  int aux_var_count = 0;
  std::vector<lp::Row> rows;
};

MembershipEncoding membership_constraints(const AmbiguitySet& amb);

// Appends the encoding to `lp`, mapping column k to p_columns[k] and adding
// fresh auxiliary variables. Returns the indices of the auxiliaries.
std::vector<int> append_membership(const MembershipEncoding& encoding,
                                   const std::vector<int>& p_columns,
                                   const std::string& prefix,
                                   lp::LinearProgram* lp);

// True if some auxiliary assignment satisfies every row for this p.
bool encoding_feasible(const MembershipEncoding& encoding,
                       const DiscreteDistribution& p);

struct Quantization {
  SupportSet support;
  // Each input value snapped to its support point.
  std::vector<double> samples;
  int requested_k = 0;
  // Set when K had to shrink to the number of distinct values.
  bool shrunk = false;
};

// K equal-width bin centers over [min, max]; values go to the nearest center.
Quantization quantize_trace(const std::vector<double>& values, int k);

}  // namespace sagin
