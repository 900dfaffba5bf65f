#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

// Dense two-phase simplex for small and medium linear programs.
//
// The solver works on a full tableau in double precision. Every variable may
// carry arbitrary bounds; the solver maps them onto nonnegative internal
// columns (shift, reflection, or free splitting) before running phase 1.
namespace sagin::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Sense { kMinimize, kMaximize };

enum class Relation { kLessEqual, kEqual, kGreaterEqual };

enum class Status {
  kOptimal,
  kInfeasible,
  kUnbounded,
  kIterationLimit,
  // The final basis reproduced the constraints too poorly to be trusted.
  kNumericalFailure,
};

const char* to_string(Status status);
const char* to_string(Relation relation);

struct Term {
  int index = 0;
  double value = 0.0;
};

struct Row {
  std::vector<Term> terms;
  Relation relation = Relation::kLessEqual;
  double rhs = 0.0;
  std::string name;
};

class LinearProgram {
 public:
  explicit LinearProgram(Sense sense = Sense::kMinimize) : sense_(sense) {}

  // Returns the index of the new variable.
  int add_variable(std::string name, double cost, double lower = 0.0,
                   double upper = kInfinity);
  // Returns the index of the new row. Terms with duplicate indices are summed.
  int add_row(std::vector<Term> terms, Relation relation, double rhs,
              std::string name = {});

  void set_cost(int var, double cost) { objective_.at(var) = cost; }
  void set_bounds(int var, double lower, double upper);
  void set_sense(Sense sense) { sense_ = sense; }

  Sense sense() const { return sense_; }
  int num_variables() const { return static_cast<int>(objective_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  const std::vector<double>& objective() const { return objective_; }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<Row>& rows() const { return rows_; }
  const Row& row(int i) const { return rows_.at(i); }

  // Throws std::invalid_argument when a term references a missing variable,
  // a bound pair is inverted, or a right-hand side is not finite.
  void validate() const;

  double evaluate_objective(const std::vector<double>& x) const;
  double row_activity(int i, const std::vector<double>& x) const;

 private:
  Sense sense_;
  std::vector<double> objective_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<std::string> names_;
  std::vector<Row> rows_;
};

struct SolverOptions {
  double pivot_tolerance = 1e-9;
  double feasibility_tolerance = 1e-7;
  double optimality_tolerance = 1e-9;
  // Relaxation of the Harris ratio test.
  double harris_tolerance = 1e-9;
  // Smallest entry used to pivot a zero-level artificial out after phase one.
  double artificial_pivot_tolerance = 1e-7;
  int iteration_limit = 50000;
  // Pivots between refactorizations of the tableau from the original data.
  int refactor_interval = 100;
  int scaling_passes = 4;
  // Consecutive degenerate pivots tolerated under largest-coefficient pricing
  // before switching to Bland's rule.
  int degenerate_streak_limit = 50;
  // Under Bland's rule, pivots below this fraction of the column's largest
  // eligible entry are skipped.
  double bland_relative_pivot = 1e-3;
};

struct Solution {
  Status status = Status::kInfeasible;
  double objective = 0.0;
  std::vector<double> primal;
  // One multiplier per row, expressed as d(optimal objective)/d(rhs) in the
  // problem's own sense.
  std::vector<double> dual;
  int iterations = 0;

  bool optimal() const { return status == Status::kOptimal; }
};

Solution solve(const LinearProgram& lp, const SolverOptions& options = {});

// c - A^T y for the given row multipliers.
std::vector<double> reduced_costs(const LinearProgram& lp,
                                  const std::vector<double>& dual);

// b.y plus the bound contributions implied by the reduced costs. Equals the
// primal objective at an optimal primal/dual pair. Returns -inf (+inf for
// maximization) when a reduced cost pushes toward an infinite bound beyond
// the tolerance.
double dual_objective(const LinearProgram& lp, const std::vector<double>& dual,
                      double tolerance = 1e-9);

// Largest violation of any row or variable bound, absolute units.
double primal_residual(const LinearProgram& lp, const std::vector<double>& x);

// Largest |multiplier * slack| over rows and |reduced cost * bound distance|
// over variables.
double complementary_slackness_residual(const LinearProgram& lp,
                                        const Solution& solution);

// Standard LP dual. Finite nonzero bounds are turned into explicit rows first.
// A minimization primal yields a maximization dual and vice versa. The dual
// variables are the row multipliers (in the order of lp.rows(), followed by
// one per materialized bound row).
LinearProgram dual_of(const LinearProgram& lp);

// One constraint per line, stable formatting, for diffing against external
// solvers.
void write_text(const LinearProgram& lp, std::ostream& out);

}  // namespace sagin::lp
