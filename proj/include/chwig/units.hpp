#pragma once

//! Natural-unit system used throughout: hbar = c = 1 and the electron mass
//! m_e = 1.  Energies and momenta are measured in electron masses, lengths
//! and times in reduced electron Compton units.  The anchors below are the
//! CODATA-2018 values; everything else is derived from them so that
//! round-trip conversions are exact to machine precision.

namespace chwig::units {

// ------------------------------------------------------------- anchors ---
//! Electron rest energy m_e c^2 in MeV (CODATA 2018).
inline constexpr double electron_mass_MeV = 0.51099895000;
//! Electron rest energy in eV.
inline constexpr double electron_mass_eV = electron_mass_MeV * 1.0e6;
//! Reduced Planck constant in eV s (CODATA 2018, exact by definition).
inline constexpr double hbar_eV_s = 6.582119569e-16;
//! Speed of light in m/s (exact by definition).
inline constexpr double c_m_per_s = 2.99792458e8;
//! Fine-structure constant.
inline constexpr double alpha_fs = 1.0 / 137.035999;

// ------------------------------------------------------------- derived ---
//! One natural time unit, hbar / (m_e c^2), in seconds (~1.288e-21 s).
inline constexpr double natural_time_s = hbar_eV_s / electron_mass_eV;
//! One natural length unit, the reduced Compton length hbar / (m_e c),
//! in metres (~3.8616e-13 m).
inline constexpr double natural_length_m = natural_time_s * c_m_per_s;
inline constexpr double natural_length_cm = natural_length_m * 1.0e2;
inline constexpr double natural_length_nm = natural_length_m * 1.0e9;

// --------------------------------------------------------- conversions ---
constexpr double energy_eV_to_natural(double e_eV) {
  return e_eV / electron_mass_eV;
}
constexpr double energy_natural_to_eV(double e) { return e * electron_mass_eV; }

constexpr double length_nm_to_natural(double x_nm) {
  return x_nm / natural_length_nm;
}
constexpr double length_natural_to_nm(double x) { return x * natural_length_nm; }
constexpr double length_m_to_natural(double x_m) { return x_m / natural_length_m; }
constexpr double length_natural_to_m(double x) { return x * natural_length_m; }

constexpr double time_s_to_natural(double t_s) { return t_s / natural_time_s; }
constexpr double time_natural_to_s(double t) { return t * natural_time_s; }
constexpr double time_natural_to_ps(double t) { return t * natural_time_s * 1.0e12; }
constexpr double time_natural_to_fs(double t) { return t * natural_time_s * 1.0e15; }
constexpr double time_natural_to_as(double t) { return t * natural_time_s * 1.0e18; }
constexpr double time_as_to_natural(double t_as) {
  return t_as * 1.0e-18 / natural_time_s;
}

//! Packet momentum-space width (natural units) for a position-space rms
//! width given in nanometres: sigma = 1 / sigma_x.
constexpr double sigma_from_width_nm(double sigma_x_nm) {
  return 1.0 / length_nm_to_natural(sigma_x_nm);
}

} // namespace chwig::units
