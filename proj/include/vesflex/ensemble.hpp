#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace vesflex::ensemble {

/// n identical loads that can each deviate by ±u for one slot of `slot` hours.
struct PulseLoadSpec {
  double u = 1.0;     ///< kW
  double slot = 1.0;  ///< hours
  std::size_t n = 1;
  void validate() const;
};

/// Per-load sequences over {-1, 0, +1}; entries are multiples of u.
struct EnsembleSchedule {
  double u = 1.0;
  std::vector<std::vector<int>> loads;

  std::size_t slots() const { return loads.empty() ? 0 : loads.front().size(); }
  std::size_t loads_used() const;  ///< loads with at least one nonzero slot
  std::vector<double> aggregate() const;  ///< column sums times u, kW
};

/// True iff every load reads as idle slots and adjacent opposite-sign pairs.
/// Throws InputError on ragged rows or entries outside {-1, 0, +1}.
bool validate_schedule(const EnsembleSchedule& s);

/// Net signed pulse pairs that must start at each slot: the running sum of
/// the reference. Throws InputError on non-integer entries.
std::vector<long> pair_starts(const std::vector<double>& ref_units);

struct Tracking {
  bool feasible = false;
  std::size_t required = 0;  ///< minimum loads for exact tracking (0 when infeasible)
  EnsembleSchedule schedule;
  std::string reason;
};

/// Exact tracking of `ref_units` (multiples of u per slot) with at most
/// `max_loads` loads. References that do not sum to zero cannot be tracked.
Tracking schedule_tracking(const std::vector<double>& ref_units, std::size_t max_loads, double u = 1.0);

/// Fewest loads that track the reference exactly; empty when no number does.
std::optional<std::size_t> min_loads(const std::vector<double>& ref_units);

/// Fewest loads when the reference repeats forever, so pulse pairs may wrap
/// from the last slot to the first.
std::optional<std::size_t> min_loads_periodic(const std::vector<double>& ref_units);

/// Best cyclic starting slot for a single finite pass of the reference.
struct Rotation {
  std::size_t shift = 0;
  std::size_t loads = 0;
};
std::optional<Rotation> min_loads_over_rotations(const std::vector<double>& ref_units);

/// +A for tau slots then -A for tau slots, repeated `cycles` times.
std::vector<double> square_wave(long amplitude, std::size_t half_period, std::size_t cycles = 1);

/// Slope ±1 staircase through 0, +peak, 0, -peak, starting at 0 and rising.
/// `period` is 4 * peak, or 4 * peak + 1 with a repeated zero at the end.
std::vector<double> triangle_staircase(long peak, std::size_t period);

/// For each half-period, the largest square-wave amplitude (kW) that n loads
/// track exactly.
std::vector<std::pair<std::size_t, double>> amplitude_timescale_curve(const PulseLoadSpec& spec,
                                                                      const std::vector<std::size_t>& half_periods,
                                                                      std::size_t cycles = 2);

/// Reads `slot,deviation_units`; slots must count up from 0.
std::vector<double> read_reference_csv(const std::string& path);
void write_reference_csv(const std::string& path, const std::vector<double>& ref_units);
/// `slot,load_1,...,load_m,aggregate_kW` with load entries in units of u.
void write_schedule_csv(const std::string& path, const EnsembleSchedule& s);

}  // namespace vesflex::ensemble
