#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "vesflex/flexset.hpp"
#include "vesflex/solver.hpp"

namespace vesflex::planner {

enum class Norm { two, one, inf };

std::string_view to_string(Norm n);
Norm parse_norm(std::string_view s);  ///< "two" | "one" | "inf"

struct PlanRequest {
  flexset::Scenario scn;
  Trajectory r_ba;  ///< kW, desired demand; at least `horizon` samples
  Norm norm = Norm::two;
  std::size_t horizon = 0;  ///< steps; 0 means the whole scenario
};

struct TrackingError {
  double l1 = 0.0;    ///< Σ |r - p| dt, kWh
  double l2 = 0.0;    ///< sqrt(Σ (r - p)² dt)
  double linf = 0.0;  ///< max |r - p|, kW
  double value(Norm n) const;
};

struct SolveSummary {
  solver::Status status = solver::Status::iteration_limit;
  std::size_t iterations = 0;
  double objective = 0.0;
  double residual = 0.0;  ///< LP row residual or QP primal residual
};

struct PlanResult {
  bool feasible = false;
  std::size_t first_empty = 0;  ///< first unreachable temperature sample when infeasible
  Trajectory p_star;            ///< kW, horizon samples
  Trajectory theta_star;        ///< °C, horizon + 1 samples
  TrackingError error;
  SolveSummary solve;
};

struct PlanOptions {
  /// Temperature bounds are tightened by this much inside the solver so the
  /// re-simulated trajectory is a strict member despite solver tolerance.
  double theta_margin = 1e-4;
  solver::QpOptions qp{.tol = 1e-9};
  solver::LpOptions lp;
};

/// Closest member of the flexibility set to `r_ba` in the requested norm.
/// An empty flexibility set is reported through `feasible`; an initial
/// temperature outside the bounds throws InputError.
PlanResult plan(const PlanRequest& req, const PlanOptions& opt = {});

/// The LP solved for the one- and inf-norms over the full scenario, with
/// temperature bounds tightened by `theta_margin`. For the two-norm the
/// epigraph part is omitted and only the feasible region is returned.
solver::LinearProgram tracking_lp(const flexset::Scenario& scn, const Trajectory& r_ba, Norm norm,
                                  double theta_margin = 0.0);

struct RecedingResult {
  bool feasible = true;
  Trajectory executed_p;
  Trajectory executed_theta;
  std::vector<PlanResult> windows;
  std::vector<std::size_t> window_start;  ///< step offset of each window
};

/// Window i starts at step i * apply_steps with forecast `forecasts[i]`,
/// plans over min(horizon, remaining) steps and applies the first
/// apply_steps samples. Stops at the end of the scenario, when forecasts run
/// out, or at the first infeasible window.
RecedingResult receding_horizon(const flexset::Scenario& scn, const std::vector<Trajectory>& forecasts,
                                std::size_t horizon, std::size_t apply_steps, Norm norm = Norm::two,
                                const PlanOptions& opt = {});

/// Reads `t_hours,r_ba_kW`.
Trajectory read_reference_csv(const std::string& path);
/// Writes `t_hours,p_star_kW,theta_C`; the last row carries only the final temperature.
void write_plan_csv(const std::string& path, const PlanResult& result);

}  // namespace vesflex::planner
