#include <algorithm>
#include <cmath>
#include <string>

#include "vesflex/core.hpp"
#include "vesflex/solver.hpp"

namespace vesflex::solver {

void BoxQp::validate() const {
  const std::size_t n = linear.size();
  if (hessian_diag.size() != n || lo.size() != n || hi.size() != n) {
    throw InputError("box QP: hessian, linear and bound vectors must have equal length");
  }
  if (eq_rows.size() != eq_rhs.size()) throw InputError("box QP: equality rows and rhs differ in length");
  for (std::size_t j = 0; j < n; ++j) {
    if (!(hessian_diag[j] >= 0.0) || !std::isfinite(hessian_diag[j])) {
      throw InputError("box QP: hessian diagonal must be finite and non-negative (entry " +
                       std::to_string(j) + ")");
    }
    if (!std::isfinite(linear[j])) throw InputError("box QP: linear term is not finite");
    if (std::isnan(lo[j]) || std::isnan(hi[j]) || lo[j] > hi[j]) {
      throw InputError("box QP: invalid bounds on variable " + std::to_string(j));
    }
  }
  for (std::size_t i = 0; i < eq_rows.size(); ++i) {
    for (const auto& [j, a] : eq_rows[i]) {
      if (j >= n || !std::isfinite(a)) {
        throw InputError("box QP: malformed equality row " + std::to_string(i));
      }
    }
    if (!std::isfinite(eq_rhs[i])) throw InputError("box QP: equality rhs is not finite");
  }
}

double BoxQp::objective(const std::vector<double>& x) const {
  double v = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) v += 0.5 * hessian_diag[j] * x[j] * x[j] + linear[j] * x[j];
  return v;
}

namespace {

// Symmetric positive definite band matrix, lower band stored row-wise:
// entry (i, k) with i - bw <= k <= i lives at i * (bw + 1) + (k - i + bw).
class BandCholesky {
 public:
  BandCholesky() = default;
  BandCholesky(std::size_t n, std::size_t bw) : n_(n), bw_(bw), l_(n * (bw + 1), 0.0) {}

  double& at(std::size_t i, std::size_t k) { return l_[i * (bw_ + 1) + (k + bw_ - i)]; }
  double at(std::size_t i, std::size_t k) const { return l_[i * (bw_ + 1) + (k + bw_ - i)]; }

  void factor() {
    for (std::size_t i = 0; i < n_; ++i) {
      const std::size_t k0 = i > bw_ ? i - bw_ : 0;
      for (std::size_t k = k0; k <= i; ++k) {
        double s = at(i, k);
        const std::size_t j0 = std::max(k0, k > bw_ ? k - bw_ : 0);
        for (std::size_t j = j0; j < k; ++j) s -= at(i, j) * at(k, j);
        if (k == i) {
          if (!(s > 0.0)) throw InputError("box QP: equality rows are linearly dependent");
          at(i, i) = std::sqrt(s);
        } else {
          at(i, k) = s / at(k, k);
        }
      }
    }
  }

  void solve(std::vector<double>& b) const {
    for (std::size_t i = 0; i < n_; ++i) {
      const std::size_t k0 = i > bw_ ? i - bw_ : 0;
      double s = b[i];
      for (std::size_t k = k0; k < i; ++k) s -= at(i, k) * b[k];
      b[i] = s / at(i, i);
    }
    for (std::size_t i = n_; i-- > 0;) {
      double s = b[i];
      const std::size_t k1 = std::min(n_ - 1, i + bw_);
      for (std::size_t k = i + 1; k <= k1; ++k) s -= at(k, i) * b[k];
      b[i] = s / at(i, i);
    }
  }

 private:
  std::size_t n_ = 0;
  std::size_t bw_ = 0;
  std::vector<double> l_;
};

class Admm {
 public:
  Admm(const BoxQp& qp, const QpOptions& opt) : qp_(qp), opt_(opt), n_(qp.num_variables()), m_(qp.eq_rows.size()) {
    // Columns of E, for E' products.
    cols_.resize(n_);
    for (std::size_t i = 0; i < m_; ++i) {
      for (const auto& [j, a] : qp_.eq_rows[i]) cols_[j].emplace_back(i, a);
    }
    for (const auto& col : cols_) {
      if (col.empty()) continue;
      auto [lo, hi] = std::minmax_element(col.begin(), col.end(),
                                          [](const Entry& a, const Entry& b) { return a.first < b.first; });
      bandwidth_ = std::max(bandwidth_, hi->first - lo->first);
    }
    rho_ = opt.rho;
    factor();
  }

  QpReport run() {
    QpReport rep;
    rep.tol = opt_.tol;
    rep.max_iter = opt_.max_iter;
    std::vector<double> z(n_), y(n_, 0.0), x(n_), g(n_), nu(m_), z_prev(n_), xhat(n_);
    for (std::size_t j = 0; j < n_; ++j) z[j] = std::clamp(0.0, qp_.lo[j], qp_.hi[j]);
    const double alpha = opt_.relaxation;

    for (std::size_t it = 1; it <= opt_.max_iter; ++it) {
      // Proximal step restricted to E x = d.
      for (std::size_t j = 0; j < n_; ++j) g[j] = rho_ * z[j] - y[j] - qp_.linear[j];
      for (std::size_t i = 0; i < m_; ++i) {
        double s = -qp_.eq_rhs[i];
        for (const auto& [j, a] : qp_.eq_rows[i]) s += a * g[j] / diag_[j];
        nu[i] = s;
      }
      if (m_ > 0) schur_.solve(nu);
      for (std::size_t j = 0; j < n_; ++j) {
        double etnu = 0.0;
        for (const auto& [i, a] : cols_[j]) etnu += a * nu[i];
        x[j] = (g[j] - etnu) / diag_[j];
      }

      z_prev = z;
      double r_prim = 0.0;
      double r_dual = 0.0;
      for (std::size_t j = 0; j < n_; ++j) {
        xhat[j] = alpha * x[j] + (1.0 - alpha) * z_prev[j];
        z[j] = std::clamp(xhat[j] + y[j] / rho_, qp_.lo[j], qp_.hi[j]);
        y[j] += rho_ * (xhat[j] - z[j]);
        r_prim = std::max(r_prim, std::abs(x[j] - z[j]));
        r_dual = std::max(r_dual, rho_ * std::abs(z[j] - z_prev[j]));
      }
      rep.iterations = it;
      rep.primal_residual = r_prim;
      rep.dual_residual = r_dual;
      if (r_prim <= opt_.tol && r_dual <= opt_.tol) {
        rep.status = Status::optimal;
        rep.objective = qp_.objective(z);
        rep.equality_iterate = x;
        rep.solution = z;
        return rep;
      }
      if (opt_.adapt_every > 0 && it % opt_.adapt_every == 0 && r_dual > 0.0) {
        const double ratio = std::sqrt(r_prim / r_dual);
        if (ratio > 5.0 || ratio < 0.2) {
          rho_ = std::clamp(rho_ * ratio, 1e-6, 1e6);
          factor();
        }
      }
    }
    rep.equality_iterate = x;
    return rep;
  }

 private:
  void factor() {
    diag_.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) diag_[j] = qp_.hessian_diag[j] + rho_;
    if (m_ == 0) return;
    schur_ = BandCholesky(m_, bandwidth_);
    for (std::size_t j = 0; j < n_; ++j) {
      const auto& col = cols_[j];
      for (std::size_t p = 0; p < col.size(); ++p) {
        for (std::size_t q = 0; q < col.size(); ++q) {
          const auto [i, a] = col[p];
          const auto [k, b] = col[q];
          if (k <= i) schur_.at(i, k) += a * b / diag_[j];
        }
      }
    }
    schur_.factor();
  }

  const BoxQp& qp_;
  QpOptions opt_;
  std::size_t n_;
  std::size_t m_;
  std::vector<std::vector<Entry>> cols_;
  std::size_t bandwidth_ = 0;
  double rho_ = 1.0;
  std::vector<double> diag_;
  BandCholesky schur_;
};

}  // namespace

QpReport solve_box_qp(const BoxQp& qp, const QpOptions& options) {
  qp.validate();
  if (!(options.relaxation > 0.0 && options.relaxation < 2.0)) {
    throw InputError("box QP: relaxation must lie in (0, 2)");
  }
  if (!(options.rho > 0.0)) throw InputError("box QP: rho must be positive");
  Admm admm(qp, options);
  return admm.run();
}

}  // namespace vesflex::solver
