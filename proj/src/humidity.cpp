#include "vesflex/humidity.hpp"

#include <cmath>

#include "vesflex/core.hpp"
#include "vesflex/thermal.hpp"

namespace vesflex::humidity {

void MoistAirState::validate() const {
  if (!std::isfinite(temp) || temp < -50.0 || temp > 60.0) {
    throw InputError("air temperature " + std::to_string(temp) + " C outside [-50, 60]");
  }
  if (!std::isfinite(w) || w < 0.0) throw InputError("humidity ratio must be finite and >= 0");
}

void PsychroConstants::validate() const {
  if (!(cp_air > 0.0) || !(cp_water_vapor > 0.0) || !(h_g > 0.0) || !std::isfinite(cp_air) ||
      !std::isfinite(cp_water_vapor) || !std::isfinite(h_g)) {
    throw InputError("psychrometric constants must be positive and finite");
  }
}

void AhuOperatingPoint::validate() const {
  if (!(m_dot_sa > 0.0) || !std::isfinite(m_dot_sa)) throw InputError("supply air mass flow must be positive");
  if (!(eta_cop_ch > 0.0)) throw InputError("chiller COP must be positive");
  mixed.validate();
  conditioned.validate();
}

double specific_enthalpy(const MoistAirState& s, const PsychroConstants& k) {
  s.validate();
  k.validate();
  return k.cp_air * s.temp + s.w * (k.h_g + k.cp_water_vapor * s.temp);
}

double coil_thermal_power(const AhuOperatingPoint& op, const PsychroConstants& k) {
  op.validate();
  return op.m_dot_sa * (specific_enthalpy(op.mixed, k) - specific_enthalpy(op.conditioned, k));
}

double electric_demand_cd(const AhuOperatingPoint& op, const PsychroConstants& k) {
  const double q = coil_thermal_power(op, k);
  if (std::isinf(op.eta_cop_ch)) return 0.0;
  return q / op.eta_cop_ch;
}

MoistAirState mix_air(const MoistAirState& oa, const MoistAirState& ra, double oa_fraction) {
  oa.validate();
  ra.validate();
  if (!(oa_fraction >= 0.0 && oa_fraction <= 1.0)) throw InputError("outdoor air fraction must lie in [0, 1]");
  if (oa_fraction == 0.0) return ra;
  if (oa_fraction == 1.0) return oa;
  return {oa_fraction * oa.temp + (1.0 - oa_fraction) * ra.temp, oa_fraction * oa.w + (1.0 - oa_fraction) * ra.w};
}

LoadSplit split_from_components(double sensible, double latent) {
  LoadSplit s{sensible, latent, std::nullopt};
  if (sensible != 0.0 || latent != 0.0) s.latent_fraction = latent / (sensible + latent);
  return s;
}

LoadSplit latent_sensible_split(const MoistAirState& mixed, const MoistAirState& conditioned,
                                const PsychroConstants& k) {
  mixed.validate();
  conditioned.validate();
  k.validate();
  return split_from_components(k.cp_air * (mixed.temp - conditioned.temp), k.h_g * (mixed.w - conditioned.w));
}

double humidity_neglect_error(const MoistAirState& mixed, const MoistAirState& conditioned,
                              const PsychroConstants& k) {
  const auto s = latent_sensible_split(mixed, conditioned, k);
  if (!(s.sensible + s.latent > 0.0)) {
    throw InputError("humidity_neglect_error: the coil does not cool this stream");
  }
  return *s.latent_fraction;
}

MoistAirState design_mixed() { return {thermal::fahrenheit_to_celsius(75.0), 0.009}; }
MoistAirState design_conditioned() { return {thermal::fahrenheit_to_celsius(55.0), 0.004}; }

}  // namespace vesflex::humidity
