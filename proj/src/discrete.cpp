#include "vesflex/discrete.hpp"

#include <algorithm>
#include <cmath>

namespace vesflex::discrete {

Dynamics build(const flexset::Scenario& scn, double theta_margin) {
  scn.validate();
  Dynamics d;
  d.layout.n = scn.steps();
  const auto n = d.layout.n;
  const double a = std::exp(-scn.dt() / scn.params.time_constant());
  const double gain = (1.0 - a) * scn.params.static_gain();
  d.lo.assign(d.layout.count(), 0.0);
  d.hi.assign(d.layout.count(), scn.params.p_rated);
  d.rows.reserve(n);
  d.rhs.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    double lo = scn.bounds.theta_lo(k + 1) + theta_margin;
    double hi = scn.bounds.theta_hi(k + 1) - theta_margin;
    if (lo > hi) lo = hi = 0.5 * (scn.bounds.theta_lo(k + 1) + scn.bounds.theta_hi(k + 1));
    d.lo[d.layout.theta(k + 1)] = lo;
    d.hi[d.layout.theta(k + 1)] = hi;

    std::vector<solver::Entry> row{{d.layout.p(k), gain}, {d.layout.theta(k + 1), 1.0}};
    double rhs = (1.0 - a) * (scn.dist.theta_a()[k] + scn.params.r * scn.dist.q_d()[k]);
    if (k == 0) {
      rhs += a * scn.theta0;
    } else {
      row.emplace_back(d.layout.theta(k), -a);
    }
    d.rows.push_back(std::move(row));
    d.rhs.push_back(rhs);
  }
  return d;
}

std::size_t add_to(solver::LinearProgram& lp, const Dynamics& dyn) {
  const std::size_t first = lp.num_variables();
  for (std::size_t j = 0; j < dyn.layout.count(); ++j) lp.add_variable(dyn.lo[j], dyn.hi[j]);
  for (std::size_t i = 0; i < dyn.rows.size(); ++i) {
    auto row = dyn.rows[i];
    for (auto& e : row) e.first += first;
    lp.add_equality(std::move(row), dyn.rhs[i]);
  }
  return first;
}

solver::BoxQp as_box_qp(const Dynamics& dyn) {
  solver::BoxQp qp;
  qp.hessian_diag.assign(dyn.layout.count(), 0.0);
  qp.linear.assign(dyn.layout.count(), 0.0);
  qp.lo = dyn.lo;
  qp.hi = dyn.hi;
  qp.eq_rows = dyn.rows;
  qp.eq_rhs = dyn.rhs;
  return qp;
}

Trajectory extract_power(const std::vector<double>& x, const Layout& layout, const flexset::Scenario& scn,
                         std::size_t offset) {
  std::vector<double> p(layout.n);
  for (std::size_t k = 0; k < layout.n; ++k) p[k] = std::clamp(x[offset + layout.p(k)], 0.0, scn.params.p_rated);
  return Trajectory(scn.dt(), std::move(p), "kW");
}

}  // namespace vesflex::discrete
