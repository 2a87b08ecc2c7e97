// Dense bounded-variable primal simplex.
//
// The LP is brought to equality form A x = b, l <= x <= u by adding one slack
// per ranged row (a'x - s = 0, s in [row_lo, row_hi]). Phase 1 starts from an
// all-artificial basis with nonbasic variables parked at a finite bound and
// minimises the sum of artificials; phase 2 keeps any remaining artificials
// pinned to [0, 0]. The full tableau B^-1 A is kept explicitly.

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <string>

#include "vesflex/core.hpp"
#include "vesflex/solver.hpp"

namespace vesflex::solver {

std::string_view to_string(Status s) {
  switch (s) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::unbounded: return "unbounded";
    case Status::iteration_limit: return "iteration-limit";
  }
  return "unknown";
}

std::size_t LinearProgram::add_variable(double lo, double hi, double cost) {
  cost_.push_back(cost);
  lo_.push_back(lo);
  hi_.push_back(hi);
  return cost_.size() - 1;
}

void LinearProgram::set_cost(std::size_t j, double cost) { cost_.at(j) = cost; }

void LinearProgram::set_bounds(std::size_t j, double lo, double hi) {
  if (std::isnan(lo) || std::isnan(hi) || lo > hi) {
    throw InputError("LP: invalid bounds on variable " + std::to_string(j));
  }
  lo_.at(j) = lo;
  hi_.at(j) = hi;
}

std::size_t LinearProgram::add_row(std::vector<Entry> entries, double lo, double hi) {
  rows_.push_back(std::move(entries));
  row_lo_.push_back(lo);
  row_hi_.push_back(hi);
  return rows_.size() - 1;
}

void LinearProgram::validate() const {
  for (std::size_t j = 0; j < cost_.size(); ++j) {
    if (!std::isfinite(cost_[j])) throw InputError("LP cost " + std::to_string(j) + " is not finite");
    if (std::isnan(lo_[j]) || std::isnan(hi_[j]) || lo_[j] > hi_[j] || lo_[j] == kInf ||
        hi_[j] == -kInf) {
      throw InputError("LP variable " + std::to_string(j) + " has invalid bounds");
    }
  }
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    for (const auto& [j, a] : rows_[i]) {
      if (j >= cost_.size()) throw InputError("LP row " + std::to_string(i) + " references unknown variable");
      if (!std::isfinite(a)) throw InputError("LP row " + std::to_string(i) + " has a non-finite coefficient");
    }
    if (std::isnan(row_lo_[i]) || std::isnan(row_hi_[i]) || row_lo_[i] > row_hi_[i] ||
        row_lo_[i] == kInf || row_hi_[i] == -kInf) {
      throw InputError("LP row " + std::to_string(i) + " has invalid bounds");
    }
  }
}

double LinearProgram::max_violation(const std::vector<double>& x) const {
  double worst = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    worst = std::max({worst, lo_[j] - x[j], x[j] - hi_[j]});
  }
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    double v = 0.0;
    for (const auto& [j, a] : rows_[i]) v += a * x[j];
    worst = std::max({worst, row_lo_[i] - v, v - row_hi_[i]});
  }
  return worst;
}

double LinearProgram::objective(const std::vector<double>& x) const {
  double v = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) v += cost_[j] * x[j];
  return v;
}

void LinearProgram::dump(std::ostream& out) const {
  const auto precision = out.precision();
  out << std::setprecision(17);
  out << "# sense " << (sense_ == Sense::minimize ? "min" : "max") << "\n";
  out << "# var index cost lo hi\n";
  for (std::size_t j = 0; j < cost_.size(); ++j) {
    out << "var " << j << ' ' << cost_[j] << ' ' << lo_[j] << ' ' << hi_[j] << '\n';
  }
  out << "# row index lo hi nnz (col coef)...\n";
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    out << "row " << i << ' ' << row_lo_[i] << ' ' << row_hi_[i] << ' ' << rows_[i].size();
    for (const auto& [j, a] : rows_[i]) out << ' ' << j << ' ' << a;
    out << '\n';
  }
  out << std::setprecision(static_cast<int>(precision));
}

namespace {

enum class NonbasicState { lower, upper, free_zero, basic };

class Simplex {
 public:
  Simplex(const LinearProgram& lp, const LpOptions& opt) : lp_(lp), opt_(opt) { build(); }

  SolveReport run() {
    SolveReport report;
    report.tol = opt_.tol;
    report.max_iter = opt_.max_iter;

    // Phase 1: minimise the sum of artificials.
    std::vector<double> phase1_cost(ncols_ + m_, 0.0);
    std::fill(phase1_cost.begin() + static_cast<std::ptrdiff_t>(ncols_), phase1_cost.end(), 1.0);
    auto status = iterate(phase1_cost, report.iterations);
    if (status == Status::iteration_limit) {
      report.status = status;
      return report;
    }
    double infeasibility = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] >= ncols_) infeasibility += xb_[i];
    }
    if (infeasibility > feasibility_tol()) {
      report.status = Status::infeasible;
      return report;
    }
    for (std::size_t i = 0; i < m_; ++i) {
      lo_[ncols_ + i] = 0.0;
      hi_[ncols_ + i] = 0.0;
    }
    drive_out_artificials();

    // Phase 2.
    std::vector<double> phase2_cost(ncols_ + m_, 0.0);
    const double sign = lp_.sense() == LinearProgram::Sense::maximize ? -1.0 : 1.0;
    for (std::size_t j = 0; j < lp_.num_variables(); ++j) phase2_cost[j] = sign * lp_.cost()[j];
    status = iterate(phase2_cost, report.iterations);
    report.status = status;
    if (status != Status::optimal) return report;

    std::vector<double> x(lp_.num_variables());
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = value(j);
    report.objective = lp_.objective(x);
    report.max_residual = lp_.max_violation(x);
    report.dual_bound = sign * dual_bound(phase2_cost);
    report.solution = std::move(x);
    return report;
  }

 private:
  void build() {
    const std::size_t n = lp_.num_variables();
    m_ = lp_.num_rows();
    std::vector<std::size_t> slack_of(m_, SIZE_MAX);
    ncols_ = n;
    for (std::size_t i = 0; i < m_; ++i) {
      if (lp_.row_lower(i) != lp_.row_upper(i)) slack_of[i] = ncols_++;
    }
    const std::size_t total = ncols_ + m_;
    lo_.assign(total, 0.0);
    hi_.assign(total, kInf);
    for (std::size_t j = 0; j < n; ++j) {
      lo_[j] = lp_.lower()[j];
      hi_[j] = lp_.upper()[j];
    }
    a_.assign(m_ * ncols_, 0.0);
    b_.assign(m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      for (const auto& [j, coef] : lp_.row(i)) a_[i * ncols_ + j] += coef;
      if (slack_of[i] != SIZE_MAX) {
        a_[i * ncols_ + slack_of[i]] = -1.0;
        lo_[slack_of[i]] = lp_.row_lower(i);
        hi_[slack_of[i]] = lp_.row_upper(i);
      } else {
        b_[i] = lp_.row_lower(i);
      }
    }

    state_.assign(total, NonbasicState::lower);
    x_.assign(total, 0.0);
    for (std::size_t j = 0; j < ncols_; ++j) {
      if (std::isfinite(lo_[j])) {
        state_[j] = NonbasicState::lower;
        x_[j] = lo_[j];
      } else if (std::isfinite(hi_[j])) {
        state_[j] = NonbasicState::upper;
        x_[j] = hi_[j];
      } else {
        state_[j] = NonbasicState::free_zero;
        x_[j] = 0.0;
      }
    }

    tableau_ = a_;
    basis_.resize(m_);
    xb_.resize(m_);
    art_sign_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      double r = b_[i];
      for (std::size_t j = 0; j < ncols_; ++j) r -= a_[i * ncols_ + j] * x_[j];
      art_sign_[i] = r >= 0.0 ? 1.0 : -1.0;
      if (art_sign_[i] < 0.0) {
        for (std::size_t j = 0; j < ncols_; ++j) tableau_[i * ncols_ + j] = -tableau_[i * ncols_ + j];
      }
      basis_[i] = ncols_ + i;
      state_[ncols_ + i] = NonbasicState::basic;
      xb_[i] = std::abs(r);
    }
    double bnorm = 0.0;
    for (double v : b_) bnorm = std::max(bnorm, std::abs(v));
    scale_ = std::max(1.0, bnorm);
  }

  double feasibility_tol() const { return std::max(1e-7, opt_.tol * 100.0) * scale_; }

  double value(std::size_t j) const {
    if (state_[j] != NonbasicState::basic) return x_[j];
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] == j) return xb_[i];
    }
    return 0.0;
  }

  double t(std::size_t i, std::size_t j) const { return tableau_[i * ncols_ + j]; }

  std::vector<double> reduced_costs(const std::vector<double>& cost) const {
    std::vector<double> d(cost.begin(), cost.begin() + static_cast<std::ptrdiff_t>(ncols_));
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      const double* row = &tableau_[i * ncols_];
      for (std::size_t j = 0; j < ncols_; ++j) d[j] -= cb * row[j];
    }
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < ncols_) d[basis_[i]] = 0.0;
    }
    return d;
  }

  Status iterate(const std::vector<double>& cost, std::size_t& iterations) {
    auto d = reduced_costs(cost);
    std::size_t stalled = 0;
    std::size_t since_refresh = 0;
    while (true) {
      if (iterations >= opt_.max_iter) return Status::iteration_limit;
      if (++since_refresh >= 200) {
        d = reduced_costs(cost);
        since_refresh = 0;
      }
      const bool use_bland = opt_.rule == PivotRule::bland || stalled >= opt_.stall_limit;

      // Pricing.
      std::size_t q = SIZE_MAX;
      double best = 0.0;
      double dir = 0.0;
      for (std::size_t j = 0; j < ncols_; ++j) {
        if (state_[j] == NonbasicState::basic || lo_[j] == hi_[j]) continue;
        double gain = 0.0;
        double dj_dir = 0.0;
        switch (state_[j]) {
          case NonbasicState::lower:
            if (d[j] < -opt_.tol) { gain = -d[j]; dj_dir = 1.0; }
            break;
          case NonbasicState::upper:
            if (d[j] > opt_.tol) { gain = d[j]; dj_dir = -1.0; }
            break;
          case NonbasicState::free_zero:
            if (std::abs(d[j]) > opt_.tol) { gain = std::abs(d[j]); dj_dir = d[j] > 0.0 ? -1.0 : 1.0; }
            break;
          case NonbasicState::basic: break;
        }
        if (gain <= 0.0) continue;
        if (use_bland) {
          q = j;
          dir = dj_dir;
          break;
        }
        if (gain > best) {
          best = gain;
          q = j;
          dir = dj_dir;
        }
      }
      if (q == SIZE_MAX) return Status::optimal;

      // Ratio test. Basic i moves at rate alpha_i = -dir * T(i, q).
      constexpr double kPivotTol = 1e-9;
      double step = kInf;
      std::size_t leave = SIZE_MAX;
      double leave_alpha = 0.0;
      if (std::isfinite(lo_[q]) && std::isfinite(hi_[q])) step = hi_[q] - lo_[q];
      for (std::size_t i = 0; i < m_; ++i) {
        const double alpha = -dir * t(i, q);
        if (std::abs(alpha) <= kPivotTol) continue;
        const std::size_t bv = basis_[i];
        double limit = kInf;
        if (alpha < 0.0 && std::isfinite(lo_[bv])) {
          limit = std::max(0.0, xb_[i] - lo_[bv]) / -alpha;
        } else if (alpha > 0.0 && std::isfinite(hi_[bv])) {
          limit = std::max(0.0, hi_[bv] - xb_[i]) / alpha;
        }
        if (!std::isfinite(limit)) continue;
        const double tie = std::isfinite(step) ? 1e-12 * std::max(1.0, step) : 0.0;
        bool take = limit < step - tie;
        if (!take && leave != SIZE_MAX && limit <= step + tie) {
          take = use_bland ? bv < basis_[leave]
                           : (std::abs(alpha) > std::abs(leave_alpha) ||
                              (std::abs(alpha) == std::abs(leave_alpha) && bv < basis_[leave]));
        }
        if (take) {
          step = limit;
          leave = i;
          leave_alpha = alpha;
        }
      }
      if (!std::isfinite(step)) return Status::unbounded;
      ++iterations;
      stalled = step <= 1e-12 ? stalled + 1 : 0;

      for (std::size_t i = 0; i < m_; ++i) xb_[i] += -dir * t(i, q) * step;

      if (leave == SIZE_MAX) {
        // Bound flip of the entering variable.
        if (state_[q] == NonbasicState::lower) {
          state_[q] = NonbasicState::upper;
          x_[q] = hi_[q];
        } else {
          state_[q] = NonbasicState::lower;
          x_[q] = lo_[q];
        }
        continue;
      }

      const std::size_t out = basis_[leave];
      const double entering_value = x_[q] + dir * step;
      if (leave_alpha < 0.0) {
        state_[out] = NonbasicState::lower;
        x_[out] = lo_[out];
      } else {
        state_[out] = NonbasicState::upper;
        x_[out] = hi_[out];
      }
      pivot(leave, q, d);
      basis_[leave] = q;
      state_[q] = NonbasicState::basic;
      xb_[leave] = entering_value;
    }
  }

  void pivot(std::size_t r, std::size_t q, std::vector<double>& d) {
    double* prow = &tableau_[r * ncols_];
    const double inv = 1.0 / prow[q];
    nz_.clear();
    for (std::size_t j = 0; j < ncols_; ++j) {
      if (prow[j] != 0.0) {
        prow[j] *= inv;
        nz_.push_back(j);
      }
    }
    prow[q] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* row = &tableau_[i * ncols_];
      const double f = row[q];
      if (f == 0.0) continue;
      for (std::size_t j : nz_) row[j] -= f * prow[j];
      row[q] = 0.0;
    }
    const double fd = d[q];
    if (fd != 0.0) {
      for (std::size_t j : nz_) d[j] -= fd * prow[j];
    }
    d[q] = 0.0;
  }

  void drive_out_artificials() {
    std::vector<double> dummy(ncols_, 0.0);
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < ncols_) continue;
      std::size_t q = SIZE_MAX;
      double best = 1e-7;
      for (std::size_t j = 0; j < ncols_; ++j) {
        if (state_[j] == NonbasicState::basic) continue;
        if (std::abs(t(r, j)) > best) {
          best = std::abs(t(r, j));
          q = j;
        }
      }
      if (q == SIZE_MAX) continue;  // redundant row: the artificial stays pinned at zero
      const std::size_t out = basis_[r];
      state_[out] = NonbasicState::lower;
      x_[out] = 0.0;
      const double entering_value = x_[q];
      pivot(r, q, dummy);
      basis_[r] = q;
      state_[q] = NonbasicState::basic;
      xb_[r] = entering_value;
    }
  }

  // Solves B'y = c_B from the original columns and returns the Lagrangian
  // bound b'y + Σ_j min_{x_j in [l_j, u_j]} (c_j - a_j'y) x_j.
  double dual_bound(const std::vector<double>& cost) const {
    std::vector<double> bt(m_ * m_, 0.0);  // row k of B' = column basis_[k] of [A | diag(sign)]
    std::vector<double> y(m_);
    for (std::size_t k = 0; k < m_; ++k) {
      const std::size_t col = basis_[k];
      for (std::size_t i = 0; i < m_; ++i) {
        bt[k * m_ + i] = col < ncols_ ? a_[i * ncols_ + col] : (col - ncols_ == i ? art_sign_[i] : 0.0);
      }
      y[k] = cost[col];
    }
    // Gaussian elimination with partial pivoting.
    std::vector<std::size_t> perm(m_);
    for (std::size_t i = 0; i < m_; ++i) perm[i] = i;
    for (std::size_t c = 0; c < m_; ++c) {
      std::size_t p = c;
      for (std::size_t r = c + 1; r < m_; ++r) {
        if (std::abs(bt[r * m_ + c]) > std::abs(bt[p * m_ + c])) p = r;
      }
      if (std::abs(bt[p * m_ + c]) < 1e-14) continue;
      if (p != c) {
        for (std::size_t j = 0; j < m_; ++j) std::swap(bt[p * m_ + j], bt[c * m_ + j]);
        std::swap(y[p], y[c]);
      }
      for (std::size_t r = c + 1; r < m_; ++r) {
        const double f = bt[r * m_ + c] / bt[c * m_ + c];
        if (f == 0.0) continue;
        for (std::size_t j = c; j < m_; ++j) bt[r * m_ + j] -= f * bt[c * m_ + j];
        y[r] -= f * y[c];
      }
    }
    for (std::size_t c = m_; c-- > 0;) {
      double s = y[c];
      for (std::size_t j = c + 1; j < m_; ++j) s -= bt[c * m_ + j] * y[j];
      y[c] = std::abs(bt[c * m_ + c]) < 1e-14 ? 0.0 : s / bt[c * m_ + c];
    }

    double bound = 0.0;
    for (std::size_t i = 0; i < m_; ++i) bound += b_[i] * y[i];
    for (std::size_t j = 0; j < ncols_; ++j) {
      double dj = cost[j];
      for (std::size_t i = 0; i < m_; ++i) dj -= a_[i * ncols_ + j] * y[i];
      const double xj = value(j);
      if (std::abs(dj) <= opt_.tol) {
        bound += dj * xj;
      } else if (dj > 0.0) {
        bound += std::isfinite(lo_[j]) ? dj * lo_[j] : -kInf;
      } else {
        bound += std::isfinite(hi_[j]) ? dj * hi_[j] : -kInf;
      }
    }
    return bound;
  }

  const LinearProgram& lp_;
  LpOptions opt_;
  std::size_t m_ = 0;
  std::size_t ncols_ = 0;  // structural + slack columns
  std::vector<double> a_, b_, tableau_;
  std::vector<double> lo_, hi_, x_, xb_, art_sign_;
  std::vector<NonbasicState> state_;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> nz_;
  double scale_ = 1.0;
};

}  // namespace

SolveReport solve_lp(const LinearProgram& lp, const LpOptions& options) {
  lp.validate();
  Simplex simplex(lp, options);
  return simplex.run();
}

}  // namespace vesflex::solver
