#include "vesflex/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "vesflex/core.hpp"
#include "vesflex/csv.hpp"

namespace vesflex::ensemble {

void PulseLoadSpec::validate() const {
  if (!(u > 0.0) || !std::isfinite(u)) throw InputError("ensemble: u must be positive");
  if (!(slot > 0.0) || !std::isfinite(slot)) throw InputError("ensemble: slot length must be positive");
  if (n == 0) throw InputError("ensemble: need at least one load");
}

std::size_t EnsembleSchedule::loads_used() const {
  return static_cast<std::size_t>(std::count_if(loads.begin(), loads.end(), [](const std::vector<int>& row) {
    return std::any_of(row.begin(), row.end(), [](int v) { return v != 0; });
  }));
}

std::vector<double> EnsembleSchedule::aggregate() const {
  std::vector<double> out(slots(), 0.0);
  for (const auto& row : loads) {
    for (std::size_t t = 0; t < row.size(); ++t) out[t] += row[t] * u;
  }
  return out;
}

bool validate_schedule(const EnsembleSchedule& s) {
  const auto h = s.slots();
  for (std::size_t i = 0; i < s.loads.size(); ++i) {
    const auto& row = s.loads[i];
    if (row.size() != h) throw InputError("schedule: load " + std::to_string(i) + " has a different number of slots");
    for (int v : row) {
      if (v < -1 || v > 1) throw InputError("schedule: load " + std::to_string(i) + " has an entry outside {-1, 0, +1}");
    }
  }
  for (const auto& row : s.loads) {
    std::size_t t = 0;
    while (t < h) {
      if (row[t] == 0) {
        ++t;
      } else if (t + 1 < h && row[t + 1] == -row[t]) {
        t += 2;
      } else {
        return false;
      }
    }
  }
  return true;
}

std::vector<long> pair_starts(const std::vector<double>& ref_units) {
  std::vector<long> n(ref_units.size());
  long run = 0;
  for (std::size_t t = 0; t < ref_units.size(); ++t) {
    const double v = ref_units[t];
    const double r = std::round(v);
    if (!std::isfinite(v) || std::abs(v - r) > 1e-9 || std::abs(r) > 1e9) {
      throw InputError("ensemble: reference slot " + std::to_string(t) + " is not an integer multiple of u");
    }
    run += static_cast<long>(r);
    n[t] = run;
  }
  return n;
}

namespace {

std::size_t peak_overlap(const std::vector<long>& n) {
  std::size_t best = 0;
  long prev = 0;
  for (long v : n) {
    best = std::max(best, static_cast<std::size_t>(std::labs(prev) + std::labs(v)));
    prev = v;
  }
  return best;
}

}  // namespace

Tracking schedule_tracking(const std::vector<double>& ref_units, std::size_t max_loads, double u) {
  if (!(u > 0.0)) throw InputError("ensemble: u must be positive");
  const auto n = pair_starts(ref_units);
  const auto h = ref_units.size();
  Tracking out;
  out.schedule.u = u;
  if (h > 0 && n.back() != 0) {
    out.reason = "reference sums to " + std::to_string(n.back()) +
                 " units but every pulse pair contributes +1 and -1, so any schedule sums to 0";
    return out;
  }
  const auto need = peak_overlap(n);
  if (need > max_loads) {
    out.required = need;
    out.reason = "exact tracking needs " + std::to_string(need) + " loads, " + std::to_string(max_loads) + " allowed";
    return out;
  }
  // Pairs starting at slot t occupy t and t + 1; assigning them in start
  // order to the lowest free load uses exactly `need` loads.
  std::vector<std::vector<int>> loads;
  std::vector<std::size_t> busy_until;  // first slot at which each load is free again
  for (std::size_t t = 0; t < h; ++t) {
    const int sign = n[t] > 0 ? 1 : -1;
    for (long c = 0; c < std::labs(n[t]); ++c) {
      std::size_t pick = 0;
      while (pick < loads.size() && busy_until[pick] > t) ++pick;
      if (pick == loads.size()) {
        loads.emplace_back(h, 0);
        busy_until.push_back(0);
      }
      loads[pick][t] = sign;
      loads[pick][t + 1] = -sign;
      busy_until[pick] = t + 2;
    }
  }
  out.feasible = true;
  out.required = loads.size();
  out.schedule.loads = std::move(loads);
  return out;
}

std::optional<std::size_t> min_loads(const std::vector<double>& ref_units) {
  const auto n = pair_starts(ref_units);
  if (!n.empty() && n.back() != 0) return std::nullopt;
  return peak_overlap(n);
}

std::optional<std::size_t> min_loads_periodic(const std::vector<double>& ref_units) {
  auto n = pair_starts(ref_units);
  if (n.empty()) return std::size_t{0};
  if (n.back() != 0) return std::nullopt;
  // Any constant offset c added to the running sum is a valid periodic
  // assignment; the cost is convex in c, so scanning the breakpoints suffices.
  const auto [lo, hi] = std::minmax_element(n.begin(), n.end());
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (long c = -*hi; c <= -*lo; ++c) {
    std::size_t worst = 0;
    for (std::size_t t = 0; t < n.size(); ++t) {
      const long a = n[(t + n.size() - 1) % n.size()] + c;
      const long b = n[t] + c;
      worst = std::max(worst, static_cast<std::size_t>(std::labs(a) + std::labs(b)));
    }
    best = std::min(best, worst);
  }
  return best;
}

std::optional<Rotation> min_loads_over_rotations(const std::vector<double>& ref_units) {
  std::optional<Rotation> best;
  for (std::size_t s = 0; s < std::max<std::size_t>(ref_units.size(), 1); ++s) {
    std::vector<double> r(ref_units.size());
    for (std::size_t t = 0; t < r.size(); ++t) r[t] = ref_units[(t + s) % r.size()];
    const auto m = min_loads(r);
    if (!m) return std::nullopt;
    if (!best || *m < best->loads) best = Rotation{s, *m};
  }
  return best;
}

std::vector<double> square_wave(long amplitude, std::size_t half_period, std::size_t cycles) {
  std::vector<double> r;
  r.reserve(2 * half_period * cycles);
  for (std::size_t c = 0; c < cycles; ++c) {
    r.insert(r.end(), half_period, static_cast<double>(amplitude));
    r.insert(r.end(), half_period, static_cast<double>(-amplitude));
  }
  return r;
}

std::vector<double> triangle_staircase(long peak, std::size_t period) {
  if (peak < 1) throw InputError("triangle: peak must be at least 1");
  const auto base = static_cast<std::size_t>(4 * peak);
  if (period != base && period != base + 1) {
    throw InputError("triangle: period must be " + std::to_string(base) + " or " + std::to_string(base + 1) +
                     " slots for peak " + std::to_string(peak));
  }
  std::vector<double> r;
  for (std::size_t t = 0; t < base; ++t) {
    const long q = static_cast<long>(t % base);
    long v = q <= peak ? q : q <= 3 * peak ? 2 * peak - q : q - 4 * peak;
    r.push_back(static_cast<double>(v));
  }
  if (period == base + 1) r.push_back(0.0);
  return r;
}

std::vector<std::pair<std::size_t, double>> amplitude_timescale_curve(const PulseLoadSpec& spec,
                                                                      const std::vector<std::size_t>& half_periods,
                                                                      std::size_t cycles) {
  spec.validate();
  std::vector<std::pair<std::size_t, double>> out;
  for (std::size_t tau : half_periods) {
    if (tau == 0) throw InputError("ensemble: half-period must be at least one slot");
    long amp = 0;
    // The aggregate can never exceed n units, so the scan is bounded.
    while (amp < static_cast<long>(spec.n) &&
           schedule_tracking(square_wave(amp + 1, tau, cycles), spec.n, spec.u).feasible) {
      ++amp;
    }
    out.emplace_back(tau, static_cast<double>(amp) * spec.u);
  }
  return out;
}

std::vector<double> read_reference_csv(const std::string& path) {
  const auto table = csv::read_file(path, {"slot", "deviation_units"});
  const auto slot = table.column_values("slot");
  for (std::size_t t = 0; t < slot.size(); ++t) {
    if (slot[t] != static_cast<double>(t)) {
      throw InputError(path + ": slot column must count 0, 1, 2, ... (row " + std::to_string(t + 1) + ")");
    }
  }
  return table.column_values("deviation_units");
}

void write_reference_csv(const std::string& path, const std::vector<double>& ref_units) {
  csv::Table t;
  t.header = {"slot", "deviation_units"};
  for (std::size_t k = 0; k < ref_units.size(); ++k) t.rows.push_back({static_cast<double>(k), ref_units[k]});
  csv::write_file(path, t);
}

void write_schedule_csv(const std::string& path, const EnsembleSchedule& s) {
  csv::Table t;
  t.header = {"slot"};
  for (std::size_t i = 0; i < s.loads.size(); ++i) t.header.push_back("load_" + std::to_string(i + 1));
  t.header.push_back("aggregate_kW");
  const auto agg = s.aggregate();
  for (std::size_t k = 0; k < s.slots(); ++k) {
    std::vector<double> row{static_cast<double>(k)};
    for (const auto& l : s.loads) row.push_back(l[k]);
    row.push_back(agg[k]);
    t.rows.push_back(std::move(row));
  }
  csv::write_file(path, t);
}

}  // namespace vesflex::ensemble
