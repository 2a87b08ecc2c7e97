#pragma once

#include <cstddef>
#include <vector>

#include "vesflex/flexset.hpp"
#include "vesflex/solver.hpp"

namespace vesflex::discrete {

/// Variable layout shared by the trajectory LPs and QPs: p_0..p_{N-1}
/// followed by theta_1..theta_N (theta_0 is fixed by the scenario).
struct Layout {
  std::size_t n = 0;
  std::size_t p(std::size_t k) const { return k; }
  std::size_t theta(std::size_t k) const { return n + k - 1; }
  std::size_t count() const { return 2 * n; }
};

/// Exact zero-order-hold dynamics as equality rows, plus variable boxes:
/// p in [0, p_rated], theta_k inside the bounds shrunk by `theta_margin`.
struct Dynamics {
  Layout layout;
  std::vector<std::vector<solver::Entry>> rows;
  std::vector<double> rhs;
  std::vector<double> lo, hi;
};

Dynamics build(const flexset::Scenario& scn, double theta_margin = 0.0);

/// Appends the variables (zero cost) and rows to `lp`; returns the index of
/// the first variable added.
std::size_t add_to(solver::LinearProgram& lp, const Dynamics& dyn);

/// Box QP over the same variables with zero objective.
solver::BoxQp as_box_qp(const Dynamics& dyn);

/// Copies the p block out of a solution vector, clamped to [0, p_rated].
Trajectory extract_power(const std::vector<double>& x, const Layout& layout, const flexset::Scenario& scn,
                         std::size_t offset = 0);

}  // namespace vesflex::discrete
