#include "vesflex/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vesflex/csv.hpp"
#include "vesflex/discrete.hpp"

namespace vesflex::planner {

std::string_view to_string(Norm n) {
  switch (n) {
    case Norm::two: return "two";
    case Norm::one: return "one";
    case Norm::inf: return "inf";
  }
  return "?";
}

Norm parse_norm(std::string_view s) {
  if (s == "two") return Norm::two;
  if (s == "one") return Norm::one;
  if (s == "inf") return Norm::inf;
  throw InputError("unknown norm '" + std::string(s) + "' (expected two, one or inf)");
}

double TrackingError::value(Norm n) const {
  switch (n) {
    case Norm::two: return l2;
    case Norm::one: return l1;
    case Norm::inf: return linf;
  }
  return l2;
}

namespace {

TrackingError tracking_error(const Trajectory& r, const Trajectory& p) {
  TrackingError e;
  double sq = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double d = std::abs(r[k] - p[k]);
    e.l1 += d * p.dt();
    sq += d * d * p.dt();
    e.linf = std::max(e.linf, d);
  }
  e.l2 = std::sqrt(sq);
  return e;
}

std::vector<double> solve_two(const discrete::Dynamics& dyn, const Trajectory& r, const PlanOptions& opt,
                              SolveSummary& summary) {
  auto qp = discrete::as_box_qp(dyn);
  for (std::size_t k = 0; k < dyn.layout.n; ++k) {
    qp.hessian_diag[dyn.layout.p(k)] = 2.0 * r.dt();
    qp.linear[dyn.layout.p(k)] = -2.0 * r[k] * r.dt();
  }
  const auto rep = solver::solve_box_qp(qp, opt.qp);
  summary.status = rep.status;
  summary.iterations = rep.iterations;
  summary.residual = rep.primal_residual;
  summary.objective = rep.objective;
  return rep.equality_iterate;
}

void add_epigraph(solver::LinearProgram& lp, const discrete::Layout& layout, const Trajectory& r, Norm norm) {
  std::size_t peak = 0;
  if (norm == Norm::inf) peak = lp.add_variable(0.0, solver::kInf, 1.0);
  for (std::size_t k = 0; k < layout.n; ++k) {
    const std::size_t e = norm == Norm::inf ? peak : lp.add_variable(0.0, solver::kInf, r.dt());
    lp.add_greater_equal({{e, 1.0}, {layout.p(k), 1.0}}, r[k]);
    lp.add_greater_equal({{e, 1.0}, {layout.p(k), -1.0}}, -r[k]);
  }
}

std::vector<double> solve_linear(const discrete::Dynamics& dyn, const Trajectory& r, Norm norm,
                                 const PlanOptions& opt, SolveSummary& summary) {
  solver::LinearProgram lp(solver::LinearProgram::Sense::minimize);
  discrete::add_to(lp, dyn);
  add_epigraph(lp, dyn.layout, r, norm);
  const auto rep = solver::solve_lp(lp, opt.lp);
  summary.status = rep.status;
  summary.iterations = rep.iterations;
  summary.residual = rep.max_residual;
  summary.objective = rep.objective;
  return rep.solution.value_or(std::vector<double>{});
}

}  // namespace

PlanResult plan(const PlanRequest& req, const PlanOptions& opt) {
  req.scn.validate();
  const std::size_t h = req.horizon == 0 ? req.scn.steps() : req.horizon;
  if (h == 0 || h > req.scn.steps()) {
    throw InputError("plan: horizon of " + std::to_string(h) + " steps does not fit a scenario of " +
                     std::to_string(req.scn.steps()) + " steps");
  }
  if (req.r_ba.size() < h || !same_step(req.r_ba.dt(), req.scn.dt())) {
    throw InputError("plan: reference has " + std::to_string(req.r_ba.size()) + " samples at dt " +
                     std::to_string(req.r_ba.dt()) + " h, need " + std::to_string(h) + " at dt " +
                     std::to_string(req.scn.dt()) + " h");
  }
  const auto scn = h == req.scn.steps() ? req.scn : req.scn.window(0, h, req.scn.theta0);
  const auto r = req.r_ba.slice(0, h);

  PlanResult out;
  const auto reach = flexset::reachable_intervals(scn);
  if (!reach.feasible()) {
    out.first_empty = reach.first_empty;
    out.solve.status = solver::Status::infeasible;
    return out;
  }
  double margin = opt.theta_margin;
  if (!flexset::reachable_intervals(scn, margin).feasible()) margin = 0.0;
  const auto dyn = discrete::build(scn, margin);

  const auto x = req.norm == Norm::two ? solve_two(dyn, r, opt, out.solve)
                                       : solve_linear(dyn, r, req.norm, opt, out.solve);
  if (out.solve.status != solver::Status::optimal) return out;

  out.feasible = true;
  out.p_star = discrete::extract_power(x, dyn.layout, scn);
  out.theta_star = thermal::simulate(scn.params, scn.theta0, out.p_star, scn.dist);
  out.error = tracking_error(r, out.p_star);
  return out;
}

solver::LinearProgram tracking_lp(const flexset::Scenario& scn, const Trajectory& r_ba, Norm norm,
                                  double theta_margin) {
  if (r_ba.size() < scn.steps()) throw InputError("tracking_lp: reference shorter than the scenario");
  const auto dyn = discrete::build(scn, theta_margin);
  solver::LinearProgram lp(solver::LinearProgram::Sense::minimize);
  discrete::add_to(lp, dyn);
  if (norm != Norm::two) add_epigraph(lp, dyn.layout, r_ba, norm);
  return lp;
}

RecedingResult receding_horizon(const flexset::Scenario& scn, const std::vector<Trajectory>& forecasts,
                                std::size_t horizon, std::size_t apply_steps, Norm norm,
                                const PlanOptions& opt) {
  scn.validate();
  if (horizon == 0 || apply_steps == 0 || apply_steps > horizon) {
    throw InputError("receding_horizon: need 0 < apply_steps <= horizon");
  }
  RecedingResult out;
  std::vector<double> p;
  std::vector<double> theta{scn.theta0};
  std::size_t offset = 0;
  for (std::size_t i = 0; i < forecasts.size() && offset < scn.steps(); ++i) {
    const std::size_t h = std::min(horizon, scn.steps() - offset);
    if (forecasts[i].size() < h) {
      throw InputError("receding_horizon: forecast " + std::to_string(i) + " has " +
                       std::to_string(forecasts[i].size()) + " samples, window needs " + std::to_string(h));
    }
    PlanRequest req{scn.window(offset, h, theta.back()), forecasts[i], norm, h};
    out.window_start.push_back(offset);
    out.windows.push_back(plan(req, opt));
    const auto& res = out.windows.back();
    if (!res.feasible) {
      out.feasible = false;
      break;
    }
    const std::size_t apply = std::min(apply_steps, h);
    for (std::size_t k = 0; k < apply; ++k) {
      p.push_back(res.p_star[k]);
      theta.push_back(res.theta_star[k + 1]);
    }
    offset += apply;
  }
  out.executed_p = Trajectory(scn.dt(), std::move(p), "kW");
  out.executed_theta = Trajectory(scn.dt(), std::move(theta), "C");
  return out;
}

Trajectory read_reference_csv(const std::string& path) {
  const auto table = csv::read_file(path, {"t_hours", "r_ba_kW"});
  const double dt = csv::uniform_step(table.column_values("t_hours"));
  return Trajectory(dt, table.column_values("r_ba_kW"), "kW");
}

void write_plan_csv(const std::string& path, const PlanResult& result) {
  csv::Table t;
  t.header = {"t_hours", "p_star_kW", "theta_C"};
  const auto n = result.p_star.size();
  for (std::size_t k = 0; k <= n; ++k) {
    t.rows.push_back({result.theta_star.time(k), k < n ? result.p_star[k] : std::numeric_limits<double>::quiet_NaN(),
                      result.theta_star[k]});
  }
  csv::write_file(path, t);
}

}  // namespace vesflex::planner
