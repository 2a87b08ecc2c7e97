#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <ostream>
#include <string_view>
#include <utility>
#include <vector>

namespace vesflex::solver {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Status { optimal, infeasible, unbounded, iteration_limit };

std::string_view to_string(Status s);

/// Sparse row entry: (variable index, coefficient).
using Entry = std::pair<std::size_t, double>;

/// Linear program with bounded variables and ranged rows:
///
///   min/max  c'x   s.t.  row_lo <= a_i'x <= row_hi,   lo <= x <= hi
class LinearProgram {
 public:
  enum class Sense { minimize, maximize };

  LinearProgram() = default;
  explicit LinearProgram(Sense sense) : sense_(sense) {}

  std::size_t add_variable(double lo, double hi, double cost = 0.0);
  void set_cost(std::size_t j, double cost);
  void set_bounds(std::size_t j, double lo, double hi);

  std::size_t add_row(std::vector<Entry> entries, double lo, double hi);
  std::size_t add_equality(std::vector<Entry> entries, double rhs) {
    return add_row(std::move(entries), rhs, rhs);
  }
  std::size_t add_less_equal(std::vector<Entry> entries, double rhs) {
    return add_row(std::move(entries), -kInf, rhs);
  }
  std::size_t add_greater_equal(std::vector<Entry> entries, double rhs) {
    return add_row(std::move(entries), rhs, kInf);
  }

  Sense sense() const { return sense_; }
  void set_sense(Sense s) { sense_ = s; }
  std::size_t num_variables() const { return cost_.size(); }
  std::size_t num_rows() const { return rows_.size(); }
  const std::vector<double>& cost() const { return cost_; }
  const std::vector<double>& lower() const { return lo_; }
  const std::vector<double>& upper() const { return hi_; }
  const std::vector<Entry>& row(std::size_t i) const { return rows_[i]; }
  double row_lower(std::size_t i) const { return row_lo_[i]; }
  double row_upper(std::size_t i) const { return row_hi_[i]; }

  /// Throws InputError on non-finite coefficients or crossed bounds.
  void validate() const;

  /// Largest violation of any row or bound by `x`.
  double max_violation(const std::vector<double>& x) const;
  double objective(const std::vector<double>& x) const;

  /// Plain-text tabular dump: one line per variable and per row.
  void dump(std::ostream& out) const;

 private:
  Sense sense_ = Sense::minimize;
  std::vector<double> cost_, lo_, hi_;
  std::vector<std::vector<Entry>> rows_;
  std::vector<double> row_lo_, row_hi_;
};

enum class PivotRule {
  bland,            ///< lowest-index entering and leaving candidates throughout
  dantzig_bland,    ///< steepest reduced cost, switching to Bland while stalled
};

struct LpOptions {
  double tol = 1e-9;
  std::size_t max_iter = 200000;
  PivotRule rule = PivotRule::dantzig_bland;
  std::size_t stall_limit = 50;  ///< degenerate pivots before falling back to Bland
};

struct SolveReport {
  Status status = Status::iteration_limit;
  double objective = 0.0;
  std::optional<std::vector<double>> solution;  ///< present iff optimal
  std::size_t iterations = 0;
  double max_residual = 0.0;  ///< recomputed from the original rows
  /// Lagrangian bound from the dual of the final basis; equals the objective
  /// at optimality up to tolerance.
  double dual_bound = 0.0;
  double tol = 0.0;
  std::size_t max_iter = 0;

  bool optimal() const { return status == Status::optimal; }
};

SolveReport solve_lp(const LinearProgram& lp, const LpOptions& options = {});
inline SolveReport solve_lp(const LinearProgram& lp, double tol) {
  LpOptions o;
  o.tol = tol;
  return solve_lp(lp, o);
}

/// Convex QP with diagonal Hessian, linear equalities and box bounds:
///
///   min  ½ Σ h_j x_j² + c'x   s.t.  E x = d,  lo <= x <= hi,   h_j >= 0
struct BoxQp {
  std::vector<double> hessian_diag;
  std::vector<double> linear;
  std::vector<double> lo, hi;
  std::vector<std::vector<Entry>> eq_rows;
  std::vector<double> eq_rhs;

  std::size_t num_variables() const { return linear.size(); }
  void validate() const;
  double objective(const std::vector<double>& x) const;
};

struct QpOptions {
  double tol = 1e-6;
  std::size_t max_iter = 200000;
  double rho = 1.0;          ///< initial penalty
  double relaxation = 1.6;   ///< over-relaxation factor in (0, 2)
  std::size_t adapt_every = 100;
};

struct QpReport {
  Status status = Status::iteration_limit;
  double objective = 0.0;
  std::optional<std::vector<double>> solution;  ///< present iff optimal; within the box
  /// Equality-exact iterate; differs from `solution` by at most the primal residual.
  std::vector<double> equality_iterate;
  std::size_t iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double tol = 0.0;
  std::size_t max_iter = 0;

  bool optimal() const { return status == Status::optimal; }
};

/// Operator-splitting (ADMM) solver. Each iteration solves the
/// equality-constrained proximal step through the banded Schur complement
/// E D^-1 E', then projects onto the box.
QpReport solve_box_qp(const BoxQp& qp, const QpOptions& options = {});

}  // namespace vesflex::solver
