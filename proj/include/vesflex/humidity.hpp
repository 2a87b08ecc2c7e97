#pragma once

#include <optional>
#include <string>

namespace vesflex::humidity {

/// Dry-bulb temperature (°C) and humidity ratio (kg water / kg dry air).
struct MoistAirState {
  double temp = 0.0;
  double w = 0.0;
  void validate() const;  ///< w >= 0, temp in [-50, 60]
};

struct PsychroConstants {
  double cp_air = 1.0;            ///< kJ/kg/°C
  double cp_water_vapor = 4.184;  ///< kJ/kg/°C
  double h_g = 2256.0;            ///< kJ/kg
  void validate() const;
};

struct AhuOperatingPoint {
  double m_dot_sa = 0.0;  ///< kg/s
  MoistAirState mixed;
  MoistAirState conditioned;
  double eta_cop_ch = 0.0;
  void validate() const;
};

/// h = cp T + W (h_g + cp_w T), kJ/kg dry air.
double specific_enthalpy(const MoistAirState& s, const PsychroConstants& k = {});

/// ṁ (h(mixed) - h(conditioned)), kW thermal. Negative when the coil heats.
double coil_thermal_power(const AhuOperatingPoint& op, const PsychroConstants& k = {});

/// Coil thermal power over the chiller-plant COP, kW electric. An infinite
/// COP yields 0.
double electric_demand_cd(const AhuOperatingPoint& op, const PsychroConstants& k = {});

/// Linear blend of T and W; oa_fraction 0 returns `ra`, 1 returns `oa`.
MoistAirState mix_air(const MoistAirState& oa, const MoistAirState& ra, double oa_fraction);

struct LoadSplit {
  double sensible = 0.0;  ///< cp ΔT, kJ/kg
  double latent = 0.0;    ///< h_g ΔW, kJ/kg
  /// latent / (sensible + latent); empty when both components are zero.
  std::optional<double> latent_fraction;
};

LoadSplit latent_sensible_split(const MoistAirState& mixed, const MoistAirState& conditioned,
                                const PsychroConstants& k = {});

/// Fraction from already-known component values.
LoadSplit split_from_components(double sensible, double latent);

/// Relative error of a temperature-only demand model: the latent fraction.
/// Throws InputError when the approximate enthalpy difference is not positive.
double humidity_neglect_error(const MoistAirState& mixed, const MoistAirState& conditioned,
                              const PsychroConstants& k = {});

/// Design-point states: 75 °F return/mixed air at W = 0.009 and 55 °F
/// conditioned air at W = 0.004.
MoistAirState design_mixed();
MoistAirState design_conditioned();

}  // namespace vesflex::humidity
