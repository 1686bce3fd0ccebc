#include "chwig/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace chwig {

namespace {

double clamped_acos(double c) {
  return std::acos(std::clamp(c, -1.0, 1.0));
}

void check_helicity(int two_lambda, const char* what) {
  if (two_lambda != 1 && two_lambda != -1)
    throw NonPhysical(std::string(what) + " helicity must be +1 or -1");
}

} // namespace

bool TriangleGeometry::closes(double p_perp, double pprime_perp,
                              double k_perp) {
  if (!(p_perp >= 0.0 && pprime_perp >= 0.0 && k_perp >= 0.0)) return false;
  return k_perp <= pprime_perp + p_perp &&
         pprime_perp <= p_perp + k_perp &&
         p_perp <= pprime_perp + k_perp;
}

TriangleGeometry TriangleGeometry::make(double p_perp, double pprime_perp,
                                        double k_perp) {
  if (!closes(p_perp, pprime_perp, k_perp))
    throw InvalidTriangle("transverse momenta do not close into a triangle");
  TriangleGeometry t;
  t.p_perp = p_perp;
  t.pprime_perp = pprime_perp;
  t.k_perp = k_perp;

  // Interior angles from the law of cosines; arguments are clamped so that
  // boundary (collinear) triangles produce exact 0 / pi angles.
  // Degenerate legs (one side of zero length) leave the angle at that
  // vertex ill-defined; we pick the collinear limit consistently.
  const double pp = p_perp * pprime_perp;
  const double kp = k_perp * pprime_perp;
  const double pk = p_perp * k_perp;
  t.alpha = pp > 0.0 ? clamped_acos((p_perp * p_perp +
                                     pprime_perp * pprime_perp -
                                     k_perp * k_perp) / (2.0 * pp))
                     : 0.0;
  t.beta = kp > 0.0 ? clamped_acos((pprime_perp * pprime_perp +
                                    k_perp * k_perp - p_perp * p_perp) /
                                   (2.0 * kp))
                    : M_PI - t.alpha;
  t.gamma = pk > 0.0 ? clamped_acos((p_perp * p_perp + k_perp * k_perp -
                                     pprime_perp * pprime_perp) / (2.0 * pk))
                     : M_PI - t.alpha - t.beta;
  t.area = 0.5 * pp * std::sin(t.alpha);
  const double scale = std::max({p_perp, pprime_perp, k_perp});
  t.degenerate = !(t.area > 1.0e-14 * scale * scale);
  return t;
}

AzimuthalSolution resolve_azimuths(const TriangleGeometry& tri,
                                   Configuration cfg, double phi_prime) {
  const double s = (cfg == Configuration::plus) ? +1.0 : -1.0;
  AzimuthalSolution a;
  a.phi_prime = phi_prime;
  a.phi = phi_prime + s * tri.alpha;
  a.phi_gamma = phi_prime + s * (tri.alpha + tri.gamma);
  return a;
}

PhotonState PhotonState::in_medium(const Eigen::Vector3d& k,
                                   const Medium& medium, int lambda_gamma) {
  check_helicity(lambda_gamma, "photon");
  const double kmag = k.norm();
  if (!(kmag > 0.0)) throw NonPhysical("photon momentum must be non-zero");

  PhotonState ph;
  ph.k = k;
  ph.lambda_gamma = lambda_gamma;
  if (medium.is_constant()) {
    ph.n = medium.refractive_index(kmag);
    ph.omega = kmag / ph.n;
    return ph;
  }
  // fixed point omega <- |k| / n(omega), started from the vacuum value
  double omega = kmag;
  omega = std::clamp(omega, medium.omega_min(), medium.omega_max());
  for (int it = 0; it < 200; ++it) {
    const double n = medium.refractive_index(omega);
    double next = kmag / n;
    next = std::clamp(next, medium.omega_min(), medium.omega_max());
    if (std::abs(next - omega) <= 1.0e-12 * std::max(omega, next)) {
      omega = next;
      break;
    }
    omega = next;
  }
  ph.n = medium.refractive_index(omega);
  ph.omega = kmag / ph.n;
  if (!(ph.omega >= medium.omega_min() && ph.omega <= medium.omega_max()))
    throw OutOfTableRange("solved photon frequency leaves the table");
  return ph;
}

EmissionKinematics EmissionKinematics::from_vectors(
    const Eigen::Vector3d& p_prime, int two_lambda_prime,
    const Eigen::Vector3d& k, int lambda_gamma, int two_lambda,
    const Medium& medium) {
  check_helicity(two_lambda, "initial electron");
  check_helicity(two_lambda_prime, "final electron");

  EmissionKinematics kin;
  kin.electron_out.p = p_prime;
  kin.electron_out.two_lambda = two_lambda_prime;
  kin.electron_in.p = p_prime + k;
  kin.electron_in.two_lambda = two_lambda;
  // Store the photon momentum as p - p', so the stored triple satisfies
  // momentum conservation exactly (the re-derived k differs from the
  // argument by at most one rounding).
  kin.photon = PhotonState::in_medium(kin.electron_in.p - p_prime, medium,
                                      lambda_gamma);
  kin.delta_e = kin.eps() - kin.eps_prime() - kin.photon.omega;
  return kin;
}

EmissionKinematics EmissionKinematics::from_triangle(
    const TriangleGeometry& tri, Configuration cfg, double phi_prime,
    double pprime_z, double k_z, int two_lambda, int two_lambda_prime,
    int lambda_gamma, const Medium& medium) {
  const AzimuthalSolution az = resolve_azimuths(tri, cfg, phi_prime);
  const Eigen::Vector3d pp(tri.pprime_perp * std::cos(az.phi_prime),
                           tri.pprime_perp * std::sin(az.phi_prime),
                           pprime_z);
  const Eigen::Vector3d kv(tri.k_perp * std::cos(az.phi_gamma),
                           tri.k_perp * std::sin(az.phi_gamma), k_z);
  return from_vectors(pp, two_lambda_prime, kv, lambda_gamma, two_lambda,
                      medium);
}

PolarAngles polar_angles(const Eigen::Vector3d& v) {
  const double rho = std::hypot(v.x(), v.y());
  PolarAngles a;
  a.theta = std::atan2(rho, v.z());
  a.phi = (rho > 0.0) ? std::atan2(v.y(), v.x()) : 0.0;
  return a;
}

double classical_cherenkov_cos(double beta, double n) {
  if (!(beta > 0.0 && beta < 1.0)) throw NonPhysical("beta must be in (0,1)");
  if (!(n > 0.0)) throw NonPhysical("index must be positive");
  if (!(beta * n > 1.0))
    throw NoCherenkov("beta*n <= 1: no emission cone");
  return 1.0 / (beta * n);
}

double recoil_cherenkov_cos(double beta, double n, double omega, double eps) {
  const double base = classical_cherenkov_cos(beta, n);
  const double c = base + omega / (2.0 * eps) * (n * n - 1.0) / (beta * n);
  if (!(c <= 1.0))
    throw NoCherenkov("frequency above the recoil cutoff: cone closed");
  return c;
}

double recoil_cutoff_omega(double eps, double beta, double n) {
  // Algebraic value; +/-inf for n == 1 signals "no finite recoil cutoff".
  return 2.0 * eps * (beta * n - 1.0) / (n * n - 1.0);
}

} // namespace chwig
