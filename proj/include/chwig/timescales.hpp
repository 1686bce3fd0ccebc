#pragma once

//! Characteristic scales of the emitted photon's phase-space distribution:
//! packet-spreading times, divergence angles of the spreading time, the
//! shock-front (Mach) angle, transverse flash duration, arrival times and
//! the effective correlation radius.
//!
//! Conventions: u_p is the electron velocity, u_k = k/(n^2 omega) the
//! photon's energy-transport velocity (magnitude 1/n); d = u_p - u_k,
//! w = u_p x u_k, A = |d|^2, B = |w|^2.

#include <Eigen/Dense>
#include <optional>

#include "chwig/errors.hpp"
#include "chwig/kinematics.hpp"

namespace chwig {

//! Velocity pair of the emission vertex and the derived invariants.
struct GeometryVectors {
  Eigen::Vector3d u_p = Eigen::Vector3d::Zero();
  Eigen::Vector3d u_k = Eigen::Vector3d::Zero();

  Eigen::Vector3d d() const { return u_p - u_k; }
  Eigen::Vector3d w() const { return u_p.cross(u_k); }
  double A() const { return d().squaredNorm(); }
  double B() const { return w().squaredNorm(); }

  //! Electron along +z with speed beta; photon at polar angle theta in the
  //! x-z plane, transport speed 1/n.
  static GeometryVectors from_angles(double beta, double n, double theta);

  //! Velocities taken from an emission vertex.
  static GeometryVectors from_kinematics(const EmissionKinematics& kin);
};

//! Longitudinal/transverse spreading coefficients
//! a = 1/(omega n^2) - 1/eps,  b = 1/eps - 1/omega.
struct SpreadingCoefficients {
  double a = 0.0;
  double b = 0.0;
};
SpreadingCoefficients spreading_coefficients(double omega, double eps,
                                             double n);

//! Inverse spreading time 1/t_d = sigma^2 (a A + b B) / (2 A).
//! Always finite for non-collinear geometry; changes sign across the
//! divergence angles.
double inv_spreading_time(double sigma, double omega, double eps, double n,
                          const GeometryVectors& g);

//! Spreading time t_d (can be +-inf where 1/t_d vanishes).
double spreading_time(double sigma, double omega, double eps, double n,
                      const GeometryVectors& g);

//! Inverse forward spreading time 1/t~_d = sigma^2 a / 2 (theta = 0 limit).
double inv_spreading_time_forward(double sigma, double omega, double eps,
                                  double n);
double spreading_time_forward(double sigma, double omega, double eps,
                              double n);

//! Spreading time exactly on the classical cone cos(theta) = 1/(beta n):
//! t_d = (2 eps / sigma^2) n^2 / (1 - n^2); frequency-independent.
double spreading_time_on_cone(double sigma, double eps, double n);

//! Formation length beta * |t_d|.
double formation_length(double beta, double t_d);

//! Shock-front angle theta_M = pi - asin(sin(theta) / (n |u_k - u_p|));
//! throws MachUndefined when the argument exceeds 1.
double mach_angle(double theta, double n, const GeometryVectors& g);

//! Squared effective temporal variance of the correlation envelope,
//! tau_d^2 with 1/tau_d^2 = (sigma^2 b / 2)(1/t_d + 1/t~_d);
//! may be negative on the far side of the divergence angles.
double tau_d_squared(double sigma, double omega, double eps, double n,
                     const GeometryVectors& g);

//! Divergence angles of t_d to first order in delta = omega/eps:
//! cos(theta) = (1 -+ sqrt(delta (n^2-1)(beta^2 n^2 - 1))) / (beta n).
//! Returned ascending; throws NoCherenkov when beta*n <= 1.
std::pair<double, double> theta_inf_approx(double beta, double n,
                                           double delta);

//! Exact divergence angles: sign changes of a A(theta) + b B(theta)
//! located on a uniform theta grid and refined by bisection.
struct ThetaInfRoots {
  double lo = 0.0;
  double hi = 0.0;
};
std::optional<ThetaInfRoots> theta_inf_exact(double beta, double n,
                                             double omega, double eps,
                                             int grid_points = 10000);

//! Spread packet width sigma_x^2(t') = (1 + (t'/t_d)^2) / sigma^2.
double sigma_x_sq(double t_prime, double sigma, double inv_t_d);

//! Transverse flash duration sigma_t(t') = sigma_x(t') |d| / (sqrt(2) |w|).
double flash_sigma_t(double t_prime, double sigma, double inv_t_d,
                     const GeometryVectors& g);

//! Arrival-time direction l0 = (u_p - u_k) x (u_k x u_p) / |u_p x u_k|^2.
//! l0 . u_k = 1 identically; on the classical cone l0 = n * (photon
//! direction), so l0 . r is the ballistic transit time.
Eigen::Vector3d l0_vector(const GeometryVectors& g);

//! Most-probable arrival time t0 = l0 . (r + grad zeta).
double arrival_time(const Eigen::Vector3d& r, const Eigen::Vector3d& grad_zeta,
                    const GeometryVectors& g);

//! Classical arrival time l0 . r.
double classical_arrival_time(const Eigen::Vector3d& r,
                              const GeometryVectors& g);

//! Quantum arrival-time shift l0 . grad zeta.
double arrival_shift(const Eigen::Vector3d& grad_zeta,
                     const GeometryVectors& g);

//! Squared inverse effective correlation radius along R at delay t':
//! R^2 / R_eff^2 = [ |R x d|^2 / A + t'^2 (R.w)^2 /
//!                   (tau_d^2 A (1 + (t'/t~_d)^2)) ] / sigma_x^2(t').
double correlation_ratio(const Eigen::Vector3d& R, double t_prime,
                         double sigma, double omega, double eps, double n,
                         const GeometryVectors& g);

//! Effective correlation radius along the unit direction n_hat.
double effective_correlation_radius(const Eigen::Vector3d& n_hat,
                                    double t_prime, double sigma, double omega,
                                    double eps, double n,
                                    const GeometryVectors& g);

//! Bundle of everything above for one (beta, n, theta, sigma, omega) point.
struct TimescaleReport {
  double beta = 0.0, n = 0.0, theta = 0.0, sigma = 0.0, omega = 0.0;
  double eps = 0.0;
  double a = 0.0, b = 0.0, A = 0.0, B = 0.0;
  double inv_t_d = 0.0;
  double t_d = 0.0;
  double t_d_forward = 0.0;
  double tau_d_sq = 0.0;
  double sigma_x0 = 0.0;    //!< sigma_x(0) = 1/sigma
  double sigma_t0 = 0.0;    //!< flash duration at t' = 0
  double formation = 0.0;   //!< beta |t_d|
  double theta_mach = 0.0;  //!< NaN when undefined
  double theta_ch = 0.0;    //!< classical cone angle (NaN when beta n <= 1)
  double theta_ch_recoil = 0.0; //!< recoil-corrected cone angle (NaN if closed)
  double theta_inf_lo = 0.0;    //!< NaN when absent
  double theta_inf_hi = 0.0;
  unsigned flags = 0;
};

TimescaleReport timescale_report(double beta, double n, double theta,
                                 double sigma, double omega);

//! gamma = 1/sqrt(1-beta^2) and its inverse.
double gamma_from_beta(double beta);
double beta_from_gamma(double gamma);

} // namespace chwig
