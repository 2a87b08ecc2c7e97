#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vesflex {

/// Raised for malformed inputs and violated preconditions. Domain outcomes
/// (infeasible plans, QoS violations) are reported through result types.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Uniformly sampled time series. Sample k is associated with t = k * dt
/// (hours); the unit label is informational only.
class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(double dt, std::vector<double> values, std::string unit = {})
      : dt_(dt), values_(std::move(values)), unit_(std::move(unit)) {
    if (!(dt_ > 0.0) || !std::isfinite(dt_)) {
      throw InputError("trajectory step must be positive, got " + std::to_string(dt_));
    }
    for (std::size_t k = 0; k < values_.size(); ++k) {
      if (!std::isfinite(values_[k])) {
        throw InputError("trajectory sample " + std::to_string(k) + " is not finite");
      }
    }
  }

  static Trajectory constant(double dt, std::size_t n, double value, std::string unit = {}) {
    return Trajectory(dt, std::vector<double>(n, value), std::move(unit));
  }

  double dt() const { return dt_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  const std::vector<double>& values() const { return values_; }
  std::span<const double> view() const { return values_; }
  double operator[](std::size_t k) const { return values_[k]; }
  const std::string& unit() const { return unit_; }
  double time(std::size_t k) const { return static_cast<double>(k) * dt_; }
  double duration() const { return static_cast<double>(values_.size()) * dt_; }

  Trajectory slice(std::size_t first, std::size_t count) const {
    if (first + count > values_.size()) {
      throw InputError("trajectory slice [" + std::to_string(first) + ", " +
                       std::to_string(first + count) + ") exceeds length " +
                       std::to_string(values_.size()));
    }
    return Trajectory(dt_, {values_.begin() + static_cast<std::ptrdiff_t>(first),
                            values_.begin() + static_cast<std::ptrdiff_t>(first + count)},
                      unit_);
  }

 private:
  double dt_ = 1.0;
  std::vector<double> values_;
  std::string unit_;
};

/// Two steps are the same when they agree to 1e-12 relative.
inline bool same_step(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
}

inline void require_same_shape(const Trajectory& a, const Trajectory& b, const char* what) {
  if (!same_step(a.dt(), b.dt()) || a.size() != b.size()) {
    throw InputError(std::string(what) + ": shape mismatch (dt " + std::to_string(a.dt()) +
                     " h x " + std::to_string(a.size()) + " samples vs dt " +
                     std::to_string(b.dt()) + " h x " + std::to_string(b.size()) + " samples)");
  }
}

}  // namespace vesflex
