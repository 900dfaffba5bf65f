#include "sagin/lp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace sagin::lp {

const char* to_string(Status status) {
  switch (status) {
    case Status::kOptimal:
      return "optimal";
    case Status::kInfeasible:
      return "infeasible";
    case Status::kUnbounded:
      return "unbounded";
    case Status::kIterationLimit:
      return "iteration_limit";
    case Status::kNumericalFailure:
      return "numerical_failure";
  }
  return "unknown";
}

const char* to_string(Relation relation) {
  switch (relation) {
    case Relation::kLessEqual:
      return "<=";
    case Relation::kEqual:
      return "=";
    case Relation::kGreaterEqual:
      return ">=";
  }
  return "?";
}

int LinearProgram::add_variable(std::string name, double cost, double lower,
                                double upper) {
  objective_.push_back(cost);
  lower_.push_back(lower);
  upper_.push_back(upper);
  names_.push_back(std::move(name));
  return num_variables() - 1;
}

int LinearProgram::add_row(std::vector<Term> terms, Relation relation,
                           double rhs, std::string name) {
  std::map<int, double> merged;
  for (const Term& t : terms) merged[t.index] += t.value;
  Row row;
  row.terms.reserve(merged.size());
  for (const auto& [index, value] : merged) {
    if (value != 0.0) row.terms.push_back({index, value});
  }
  row.relation = relation;
  row.rhs = rhs;
  row.name = std::move(name);
  rows_.push_back(std::move(row));
  return num_rows() - 1;
}

void LinearProgram::set_bounds(int var, double lower, double upper) {
  lower_.at(var) = lower;
  upper_.at(var) = upper;
}

void LinearProgram::validate() const {
  const int n = num_variables();
  for (int j = 0; j < n; ++j) {
    if (std::isnan(lower_[j]) || std::isnan(upper_[j]) ||
        lower_[j] > upper_[j] || lower_[j] == kInfinity ||
        upper_[j] == -kInfinity) {
      throw std::invalid_argument("invalid bounds on variable " +
                                  std::to_string(j));
    }
    if (!std::isfinite(objective_[j])) {
      throw std::invalid_argument("non-finite cost on variable " +
                                  std::to_string(j));
    }
  }
  for (int i = 0; i < num_rows(); ++i) {
    const Row& r = rows_[i];
    if (!std::isfinite(r.rhs)) {
      throw std::invalid_argument("non-finite rhs on row " + std::to_string(i));
    }
    for (const Term& t : r.terms) {
      if (t.index < 0 || t.index >= n) {
        throw std::invalid_argument("row " + std::to_string(i) +
                                    " references variable " +
                                    std::to_string(t.index) + " of " +
                                    std::to_string(n));
      }
      if (!std::isfinite(t.value)) {
        throw std::invalid_argument("non-finite coefficient on row " +
                                    std::to_string(i));
      }
    }
  }
}

double LinearProgram::evaluate_objective(const std::vector<double>& x) const {
  double total = 0.0;
  for (int j = 0; j < num_variables(); ++j) total += objective_[j] * x.at(j);
  return total;
}

double LinearProgram::row_activity(int i, const std::vector<double>& x) const {
  double total = 0.0;
  for (const Term& t : rows_.at(i).terms) total += t.value * x.at(t.index);
  return total;
}

namespace {

// How an original variable is recovered from the nonnegative internal
// columns: x = offset + sign * z[col] - z[neg_col].
struct VariableMap {
  int col = -1;
  int neg_col = -1;
  double sign = 1.0;
  double offset = 0.0;
};

class Tableau {
 public:
  // `original` is the row-major constraint matrix including slack and
  // artificial columns; it is kept for refactorization.
  Tableau(int rows, int cols, std::vector<double> original,
          std::vector<double> b, std::vector<int> basis)
      : rows_(rows), cols_(cols), original_(std::move(original)),
        original_rhs_(std::move(b)), data_(original_), rhs_(original_rhs_),
        basis_(std::move(basis)), reduced_(cols, 0.0), cost_(cols, 0.0) {}

  double at(int i, int j) const {
    return data_[static_cast<size_t>(i) * cols_ + j];
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const std::vector<double>& rhs() const { return rhs_; }
  const std::vector<int>& basis() const { return basis_; }
  const std::vector<double>& reduced() const { return reduced_; }
  double objective() const { return objective_; }
  int pivots_since_refactor() const { return since_refactor_; }

  void price(const std::vector<double>& cost) {
    cost_ = cost;
    reprice();
  }

  void pivot(int r, int q) {
    double* pr = row(r);
    const double inv = 1.0 / pr[q];
    for (int j = 0; j < cols_; ++j) pr[j] *= inv;
    pr[q] = 1.0;
    rhs_[r] *= inv;
    if (rhs_[r] < 0.0) rhs_[r] = 0.0;
    for (int i = 0; i < rows_; ++i) {
      if (i == r) continue;
      double* pi = row(i);
      const double f = pi[q];
      if (f == 0.0) continue;
      for (int j = 0; j < cols_; ++j) pi[j] -= f * pr[j];
      pi[q] = 0.0;
      rhs_[i] -= f * rhs_[r];
    }
    const double f = reduced_[q];
    if (f != 0.0) {
      for (int j = 0; j < cols_; ++j) reduced_[j] -= f * pr[j];
      reduced_[q] = 0.0;
      objective_ += f * rhs_[r];
    }
    basis_[r] = q;
    ++since_refactor_;
  }

  // Rebuilds B^-1 [A | b] from the original data by Gauss-Jordan elimination
  // with partial pivoting. Returns false if the basis is numerically singular,
  // leaving the tableau untouched.
  bool refactor() {
    std::vector<double> m = original_;
    std::vector<double> b = original_rhs_;
    std::vector<char> assigned(rows_, 0);
    std::vector<int> next_basis(rows_, -1);
    for (int k = 0; k < rows_; ++k) {
      const int c = basis_[k];
      int r = -1;
      double best = 1e-11;
      for (int i = 0; i < rows_; ++i) {
        if (assigned[i]) continue;
        const double v = std::abs(m[static_cast<size_t>(i) * cols_ + c]);
        if (v > best) {
          best = v;
          r = i;
        }
      }
      if (r < 0) return false;
      double* pr = m.data() + static_cast<size_t>(r) * cols_;
      const double inv = 1.0 / pr[c];
      for (int j = 0; j < cols_; ++j) pr[j] *= inv;
      pr[c] = 1.0;
      b[r] *= inv;
      for (int i = 0; i < rows_; ++i) {
        if (i == r) continue;
        double* pi = m.data() + static_cast<size_t>(i) * cols_;
        const double f = pi[c];
        if (f == 0.0) continue;
        for (int j = 0; j < cols_; ++j) pi[j] -= f * pr[j];
        pi[c] = 0.0;
        b[i] -= f * b[r];
      }
      assigned[r] = 1;
      next_basis[r] = c;
    }
    data_ = std::move(m);
    rhs_ = std::move(b);
    basis_ = std::move(next_basis);
    since_refactor_ = 0;
    reprice();
    return true;
  }

 private:
  double* row(int i) { return data_.data() + static_cast<size_t>(i) * cols_; }

  void reprice() {
    reduced_ = cost_;
    objective_ = 0.0;
    for (int i = 0; i < rows_; ++i) {
      const double cb = cost_[basis_[i]];
      if (cb == 0.0) continue;
      const double* r = row(i);
      for (int j = 0; j < cols_; ++j) reduced_[j] -= cb * r[j];
      objective_ += cb * rhs_[i];
    }
    for (int b : basis_) reduced_[b] = 0.0;
  }

  int rows_;
  int cols_;
  std::vector<double> original_;
  std::vector<double> original_rhs_;
  std::vector<double> data_;
  std::vector<double> rhs_;
  std::vector<int> basis_;
  std::vector<double> reduced_;
  std::vector<double> cost_;
  double objective_ = 0.0;
  int since_refactor_ = 0;
};

enum class PhaseResult { kOptimal, kUnbounded, kIterationLimit };

struct PhaseRules {
  std::vector<char> enterable;
  // twin[j] is the opposite half of a split free variable, or -1. A half may
  // not enter while its twin is basic: its exact reduced cost is then zero
  // and its column has no positive entry, so round-off would fake a ray.
  std::vector<int> twin;
  // Basic columns that must stay at zero (artificials after phase one); any
  // nonzero entry in their row blocks the step.
  std::vector<char> pinned;
  double cost_scale = 1.0;
};

PhaseResult run_phase(Tableau& tab, const PhaseRules& rules,
                      const SolverOptions& options, int& iterations) {
  const int m = tab.rows();
  const int n = tab.cols();
  bool bland = false;
  int degenerate_streak = 0;
  const double d_tol = options.optimality_tolerance * rules.cost_scale;
  const double p_tol = options.pivot_tolerance;
  const double harris = options.harris_tolerance;
  std::vector<char> is_basic(n, 0);
  auto mark_basis = [&] {
    std::fill(is_basic.begin(), is_basic.end(), 0);
    for (int b : tab.basis()) is_basic[b] = 1;
  };
  mark_basis();
  while (true) {
    const auto& d = tab.reduced();
    const auto& rhs = tab.rhs();
    const auto& basis = tab.basis();
    int q = -1;
    double best = -d_tol;
    for (int j = 0; j < n; ++j) {
      if (!rules.enterable[j] || is_basic[j]) continue;
      if (rules.twin[j] >= 0 && is_basic[rules.twin[j]]) continue;
      if (d[j] < best) {
        q = j;
        if (bland) break;
        best = d[j];
      }
    }

    int r = -1;
    if (q >= 0) {
      auto blocking = [&](int i) {
        const double a = tab.at(i, q);
        if (rules.pinned[basis[i]]) return std::abs(a) > p_tol;
        return a > p_tol;
      };
      auto level = [&](int i) {
        return rules.pinned[basis[i]] ? 0.0 : std::max(rhs[i], 0.0);
      };
      if (bland) {
        // Lowest index among minimum ratios, ignoring pivots that are tiny
        // next to the column's largest entry.
        double col_max = 0.0;
        for (int i = 0; i < m; ++i) {
          if (blocking(i)) col_max = std::max(col_max, std::abs(tab.at(i, q)));
        }
        const double floor = options.bland_relative_pivot * col_max;
        double min_ratio = kInfinity;
        for (int i = 0; i < m; ++i) {
          if (!blocking(i) || std::abs(tab.at(i, q)) < floor) continue;
          const double ratio = level(i) / std::abs(tab.at(i, q));
          const double slack = 1e-12 * (1.0 + ratio);
          if (r < 0 || ratio < min_ratio - slack ||
              (ratio <= min_ratio + slack && basis[i] < basis[r])) {
            min_ratio = std::min(min_ratio, ratio);
            r = i;
          }
        }
      } else {
        // Two-pass Harris test: bound the step with relaxed levels, then take
        // the largest pivot among rows that block within that bound.
        double bound = kInfinity;
        for (int i = 0; i < m; ++i) {
          if (!blocking(i)) continue;
          bound = std::min(bound, (level(i) + harris) / std::abs(tab.at(i, q)));
        }
        double biggest = 0.0;
        for (int i = 0; i < m; ++i) {
          if (!blocking(i)) continue;
          const double a = std::abs(tab.at(i, q));
          if (level(i) / a <= bound &&
              (a > biggest || (a == biggest && basis[i] < basis[r]))) {
            biggest = a;
            r = i;
          }
        }
      }
    }

    if (q < 0 || r < 0) {
      // Confirm the verdict on a freshly factored tableau.
      if (tab.pivots_since_refactor() > 0 && tab.refactor()) {
        mark_basis();
        continue;
      }
      return q < 0 ? PhaseResult::kOptimal : PhaseResult::kUnbounded;
    }

    if (++iterations > options.iteration_limit) {
      return PhaseResult::kIterationLimit;
    }
    const double step = std::max(rhs[r], 0.0) / std::abs(tab.at(r, q));
    if (step <= 1e-12) {
      if (++degenerate_streak >= options.degenerate_streak_limit) bland = true;
    } else {
      degenerate_streak = 0;
      bland = false;
    }
    tab.pivot(r, q);
    if (tab.pivots_since_refactor() >= options.refactor_interval) {
      tab.refactor();
    }
    mark_basis();
  }
}

}  // namespace

Solution solve(const LinearProgram& lp, const SolverOptions& options) {
  lp.validate();
  const int n = lp.num_variables();
  const auto& lo = lp.lower();
  const auto& hi = lp.upper();

  std::vector<VariableMap> vars(n);
  int structural = 0;
  struct BoundRow {
    int col;
    double width;
  };
  std::vector<BoundRow> bound_rows;
  for (int j = 0; j < n; ++j) {
    VariableMap& v = vars[j];
    if (std::isfinite(lo[j])) {
      v.col = structural++;
      v.offset = lo[j];
      if (std::isfinite(hi[j])) bound_rows.push_back({v.col, hi[j] - lo[j]});
    } else if (std::isfinite(hi[j])) {
      v.col = structural++;
      v.offset = hi[j];
      v.sign = -1.0;
    } else {
      v.col = structural++;
      v.neg_col = structural++;
    }
  }

  const int m_orig = lp.num_rows();
  const int m = m_orig + static_cast<int>(bound_rows.size());
  std::vector<std::vector<double>> a(m, std::vector<double>(structural, 0.0));
  std::vector<double> b(m, 0.0);
  std::vector<Relation> rel(m, Relation::kLessEqual);
  for (int i = 0; i < m_orig; ++i) {
    const Row& row = lp.row(i);
    double rhs = row.rhs;
    for (const Term& t : row.terms) {
      const VariableMap& v = vars[t.index];
      rhs -= t.value * v.offset;
      a[i][v.col] += t.value * v.sign;
      if (v.neg_col >= 0) a[i][v.neg_col] -= t.value;
    }
    b[i] = rhs;
    rel[i] = row.relation;
  }
  for (size_t k = 0; k < bound_rows.size(); ++k) {
    const int i = m_orig + static_cast<int>(k);
    a[i][bound_rows[k].col] = 1.0;
    b[i] = bound_rows[k].width;
  }

  // Geometric row and column scaling, then row equilibration and a sign flip
  // so that b >= 0. Column j of the scaled problem holds z_j / col_factor[j].
  std::vector<double> row_factor(m, 1.0);
  std::vector<double> col_factor(structural, 1.0);
  auto scale_row = [&](int i, double f) {
    row_factor[i] *= f;
    for (double& v : a[i]) v *= f;
    b[i] *= f;
  };
  for (int pass = 0; pass < options.scaling_passes; ++pass) {
    for (int i = 0; i < m; ++i) {
      double big = 0.0, small = kInfinity;
      for (double v : a[i]) {
        if (v == 0.0) continue;
        big = std::max(big, std::abs(v));
        small = std::min(small, std::abs(v));
      }
      if (big > 0.0) scale_row(i, 1.0 / std::sqrt(big * small));
    }
    for (int j = 0; j < structural; ++j) {
      double big = 0.0, small = kInfinity;
      for (int i = 0; i < m; ++i) {
        if (a[i][j] == 0.0) continue;
        big = std::max(big, std::abs(a[i][j]));
        small = std::min(small, std::abs(a[i][j]));
      }
      if (big == 0.0) continue;
      const double f = 1.0 / std::sqrt(big * small);
      col_factor[j] *= f;
      for (int i = 0; i < m; ++i) a[i][j] *= f;
    }
  }
  for (int i = 0; i < m; ++i) {
    double scale = 0.0;
    for (double v : a[i]) scale = std::max(scale, std::abs(v));
    double f = scale > 0.0 ? 1.0 / scale : 1.0;
    if (b[i] < 0.0) {
      f = -f;
      if (rel[i] == Relation::kLessEqual) {
        rel[i] = Relation::kGreaterEqual;
      } else if (rel[i] == Relation::kGreaterEqual) {
        rel[i] = Relation::kLessEqual;
      }
    }
    scale_row(i, f);
  }

  // Column layout: structural | slack or surplus per inequality |
  // artificial per >= and = row.
  int cols = structural;
  std::vector<int> slack_col(m, -1);
  std::vector<int> artificial_col(m, -1);
  for (int i = 0; i < m; ++i) {
    if (rel[i] != Relation::kEqual) slack_col[i] = cols++;
  }
  for (int i = 0; i < m; ++i) {
    if (rel[i] != Relation::kLessEqual) artificial_col[i] = cols++;
  }
  PhaseRules rules;
  rules.twin.assign(cols, -1);
  for (const VariableMap& v : vars) {
    if (v.neg_col >= 0) {
      rules.twin[v.col] = v.neg_col;
      rules.twin[v.neg_col] = v.col;
    }
  }
  std::vector<int> identity_col(m);
  std::vector<double> full(static_cast<size_t>(m) * cols, 0.0);
  for (int i = 0; i < m; ++i) {
    double* r = full.data() + static_cast<size_t>(i) * cols;
    for (int j = 0; j < structural; ++j) r[j] = a[i][j];
    if (rel[i] == Relation::kLessEqual) {
      r[slack_col[i]] = 1.0;
      identity_col[i] = slack_col[i];
    } else {
      if (slack_col[i] >= 0) r[slack_col[i]] = -1.0;
      r[artificial_col[i]] = 1.0;
      identity_col[i] = artificial_col[i];
    }
  }
  double b_norm = 0.0;
  for (double v : b) b_norm = std::max(b_norm, std::abs(v));
  Tableau tab(m, cols, std::move(full), b, identity_col);

  Solution solution;
  int iterations = 0;
  std::vector<char> is_artificial(cols, 0);
  for (int i = 0; i < m; ++i) {
    if (artificial_col[i] >= 0) is_artificial[artificial_col[i]] = 1;
  }

  const bool needs_phase1 =
      std::any_of(is_artificial.begin(), is_artificial.end(),
                  [](char c) { return c != 0; });
  if (needs_phase1) {
    std::vector<double> phase1_cost(cols, 0.0);
    for (int j = 0; j < cols; ++j) phase1_cost[j] = is_artificial[j] ? 1.0 : 0.0;
    tab.price(phase1_cost);
    rules.enterable.assign(cols, 1);
    rules.pinned.assign(cols, 0);
    rules.cost_scale = 1.0;
    const PhaseResult result = run_phase(tab, rules, options, iterations);
    solution.iterations = iterations;
    if (result == PhaseResult::kIterationLimit) {
      solution.status = Status::kIterationLimit;
      return solution;
    }
    if (tab.objective() > options.feasibility_tolerance * (1.0 + b_norm)) {
      solution.status = Status::kInfeasible;
      return solution;
    }
    // Drive zero-level artificials out of the basis where a solid pivot
    // exists; the rest sit in redundant rows and stay pinned at zero.
    for (int i = 0; i < m; ++i) {
      if (!is_artificial[tab.basis()[i]]) continue;
      int q = -1;
      double best = options.artificial_pivot_tolerance;
      for (int j = 0; j < cols; ++j) {
        if (is_artificial[j]) continue;
        const double v = std::abs(tab.at(i, j));
        if (v > best) {
          best = v;
          q = j;
        }
      }
      if (q >= 0) tab.pivot(i, q);
    }
  }

  std::vector<double> cost(cols, 0.0);
  const double sense_sign = lp.sense() == Sense::kMinimize ? 1.0 : -1.0;
  for (int j = 0; j < n; ++j) {
    const VariableMap& v = vars[j];
    const double c = sense_sign * lp.objective()[j];
    cost[v.col] += c * v.sign * col_factor[v.col];
    if (v.neg_col >= 0) cost[v.neg_col] -= c * col_factor[v.neg_col];
  }
  tab.price(cost);
  rules.enterable.assign(cols, 1);
  for (int j = 0; j < cols; ++j) {
    if (is_artificial[j]) rules.enterable[j] = 0;
  }
  rules.pinned = is_artificial;
  rules.cost_scale = 1.0;
  for (double c : cost) rules.cost_scale = std::max(rules.cost_scale, std::abs(c));
  const PhaseResult result = run_phase(tab, rules, options, iterations);
  solution.iterations = iterations;
  if (result == PhaseResult::kIterationLimit) {
    solution.status = Status::kIterationLimit;
    return solution;
  }
  if (result == PhaseResult::kUnbounded) {
    solution.status = Status::kUnbounded;
    return solution;
  }

  std::vector<double> z(cols, 0.0);
  for (int i = 0; i < m; ++i) {
    const int col = tab.basis()[i];
    const double level = std::max(0.0, tab.rhs()[i]);
    z[col] = col < structural ? level * col_factor[col] : level;
  }
  solution.primal.assign(n, 0.0);
  for (int j = 0; j < n; ++j) {
    const VariableMap& v = vars[j];
    double x = v.offset + v.sign * z[v.col];
    if (v.neg_col >= 0) x -= z[v.neg_col];
    solution.primal[j] = std::clamp(x, lo[j], hi[j]);
  }

  solution.dual.assign(m_orig, 0.0);
  for (int i = 0; i < m_orig; ++i) {
    double y = 0.0;
    const int id = identity_col[i];
    for (int r = 0; r < m; ++r) {
      const double cb = cost[tab.basis()[r]];
      if (cb != 0.0) y += cb * tab.at(r, id);
    }
    solution.dual[i] = sense_sign * y * row_factor[i];
  }
  solution.objective = lp.evaluate_objective(solution.primal);

  double worst = 0.0;
  for (int i = 0; i < m_orig; ++i) {
    const Row& row = lp.row(i);
    double scale = std::abs(row.rhs);
    for (const Term& t : row.terms) {
      scale = std::max(scale, std::abs(t.value * solution.primal[t.index]));
    }
    const double act = lp.row_activity(i, solution.primal);
    double viol = 0.0;
    if (row.relation != Relation::kGreaterEqual) {
      viol = std::max(viol, act - row.rhs);
    }
    if (row.relation != Relation::kLessEqual) {
      viol = std::max(viol, row.rhs - act);
    }
    worst = std::max(worst, viol / (1.0 + scale));
  }
  solution.status = worst > 1e-6 ? Status::kNumericalFailure : Status::kOptimal;
  return solution;
}

std::vector<double> reduced_costs(const LinearProgram& lp,
                                  const std::vector<double>& dual) {
  std::vector<double> d = lp.objective();
  for (int i = 0; i < lp.num_rows(); ++i) {
    for (const Term& t : lp.row(i).terms) d[t.index] -= t.value * dual.at(i);
  }
  return d;
}

double dual_objective(const LinearProgram& lp, const std::vector<double>& dual,
                      double tolerance) {
  const bool minimize = lp.sense() == Sense::kMinimize;
  const double bad = minimize ? -kInfinity : kInfinity;
  double total = 0.0;
  for (int i = 0; i < lp.num_rows(); ++i) total += lp.row(i).rhs * dual.at(i);
  const std::vector<double> d = reduced_costs(lp, dual);
  for (int j = 0; j < lp.num_variables(); ++j) {
    if (std::abs(d[j]) <= tolerance) continue;
    // Minimization: positive reduced cost rests on the lower bound.
    const bool at_lower = (d[j] > 0.0) == minimize;
    const double bound = at_lower ? lp.lower()[j] : lp.upper()[j];
    if (!std::isfinite(bound)) return bad;
    total += d[j] * bound;
  }
  return total;
}

double primal_residual(const LinearProgram& lp, const std::vector<double>& x) {
  double worst = 0.0;
  for (int i = 0; i < lp.num_rows(); ++i) {
    const Row& row = lp.row(i);
    const double act = lp.row_activity(i, x);
    if (row.relation != Relation::kGreaterEqual) {
      worst = std::max(worst, act - row.rhs);
    }
    if (row.relation != Relation::kLessEqual) {
      worst = std::max(worst, row.rhs - act);
    }
  }
  for (int j = 0; j < lp.num_variables(); ++j) {
    worst = std::max(worst, lp.lower()[j] - x.at(j));
    worst = std::max(worst, x.at(j) - lp.upper()[j]);
  }
  return worst;
}

double complementary_slackness_residual(const LinearProgram& lp,
                                        const Solution& solution) {
  double worst = 0.0;
  for (int i = 0; i < lp.num_rows(); ++i) {
    const double slack =
        lp.row_activity(i, solution.primal) - lp.row(i).rhs;
    worst = std::max(worst, std::abs(solution.dual.at(i) * slack));
  }
  const std::vector<double> d = reduced_costs(lp, solution.dual);
  for (int j = 0; j < lp.num_variables(); ++j) {
    const double x = solution.primal.at(j);
    const double gap = std::min(std::abs(x - lp.lower()[j]),
                                std::abs(lp.upper()[j] - x));
    if (std::isfinite(gap)) {
      worst = std::max(worst, std::abs(d[j]) * gap);
    } else if (std::abs(d[j]) > 1e-9) {
      worst = kInfinity;
    }
  }
  return worst;
}

LinearProgram dual_of(const LinearProgram& lp) {
  lp.validate();
  const int n = lp.num_variables();
  const bool minimize = lp.sense() == Sense::kMinimize;

  std::vector<Row> rows = lp.rows();
  enum class Sign { kNonnegative, kNonpositive, kFree };
  std::vector<Sign> sign(n);
  for (int j = 0; j < n; ++j) {
    const double l = lp.lower()[j];
    const double u = lp.upper()[j];
    if (l == 0.0) {
      sign[j] = Sign::kNonnegative;
      if (std::isfinite(u)) rows.push_back({{{j, 1.0}}, Relation::kLessEqual, u, "ub"});
    } else if (u == 0.0) {
      sign[j] = Sign::kNonpositive;
      if (std::isfinite(l)) rows.push_back({{{j, 1.0}}, Relation::kGreaterEqual, l, "lb"});
    } else {
      sign[j] = Sign::kFree;
      if (std::isfinite(l)) rows.push_back({{{j, 1.0}}, Relation::kGreaterEqual, l, "lb"});
      if (std::isfinite(u)) rows.push_back({{{j, 1.0}}, Relation::kLessEqual, u, "ub"});
    }
  }

  LinearProgram dual(minimize ? Sense::kMaximize : Sense::kMinimize);
  for (size_t i = 0; i < rows.size(); ++i) {
    const Row& row = rows[i];
    double lower = -kInfinity;
    double upper = kInfinity;
    // A multiplier is d(objective)/d(rhs): tightening a row can only hurt.
    const bool grows_with_rhs = (row.relation == Relation::kGreaterEqual) == minimize;
    if (row.relation != Relation::kEqual) {
      if (grows_with_rhs) {
        lower = 0.0;
      } else {
        upper = 0.0;
      }
    }
    const std::string name = row.name.empty() ? "y" + std::to_string(i) : "y_" + row.name;
    dual.add_variable(name, row.rhs, lower, upper);
  }
  std::vector<std::vector<Term>> columns(n);
  for (size_t i = 0; i < rows.size(); ++i) {
    for (const Term& t : rows[i].terms) {
      columns[t.index].push_back({static_cast<int>(i), t.value});
    }
  }
  for (int j = 0; j < n; ++j) {
    Relation rel = Relation::kEqual;
    if (sign[j] == Sign::kNonnegative) {
      rel = minimize ? Relation::kLessEqual : Relation::kGreaterEqual;
    } else if (sign[j] == Sign::kNonpositive) {
      rel = minimize ? Relation::kGreaterEqual : Relation::kLessEqual;
    }
    dual.add_row(columns[j], rel, lp.objective()[j], lp.names()[j]);
  }
  return dual;
}

void write_text(const LinearProgram& lp, std::ostream& out) {
  auto var_name = [&](int j) {
    const std::string& name = lp.names()[j];
    return name.empty() ? "x" + std::to_string(j) : name;
  };
  auto write_terms = [&](const std::vector<Term>& terms) {
    bool first = true;
    for (const Term& t : terms) {
      if (t.value == 0.0) continue;
      out << (first ? (t.value < 0 ? "-" : "") : (t.value < 0 ? " - " : " + "))
          << std::abs(t.value) << " " << var_name(t.index);
      first = false;
    }
    if (first) out << "0";
  };
  out.precision(17);
  out << (lp.sense() == Sense::kMinimize ? "minimize: " : "maximize: ");
  std::vector<Term> obj;
  for (int j = 0; j < lp.num_variables(); ++j) {
    obj.push_back({j, lp.objective()[j]});
  }
  write_terms(obj);
  out << "\n";
  for (int i = 0; i < lp.num_rows(); ++i) {
    const Row& row = lp.row(i);
    out << (row.name.empty() ? "r" + std::to_string(i) : row.name) << ": ";
    write_terms(row.terms);
    out << " " << to_string(row.relation) << " " << row.rhs << "\n";
  }
  for (int j = 0; j < lp.num_variables(); ++j) {
    out << "bound: " << lp.lower()[j] << " <= " << var_name(j) << " <= "
        << lp.upper()[j] << "\n";
  }
}

}  // namespace sagin::lp
