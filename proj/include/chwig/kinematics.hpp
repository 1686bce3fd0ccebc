#pragma once

//! Emission kinematics for a single photon radiated by an electron inside a
//! refractive medium.  Momentum conservation p = p' + k holds exactly by
//! construction; the energy mismatch delta_e = eps(p) - eps(p') - omega is
//! carried along as data (it is the detuning of the time integral, not a
//! constraint).

#include <Eigen/Dense>
#include <optional>

#include "chwig/errors.hpp"
#include "chwig/medium.hpp"

namespace chwig {

//! Which of the two azimuthal closures of the transverse triangle is meant:
//! Plus places the outgoing pair counter-clockwise from the initial
//! transverse momentum, Minus clockwise.
enum class Configuration { plus, minus };

//! Closed triangle of transverse momentum magnitudes |p_t|, |p'_t|, |k_t|
//! with its interior angles and area.
struct TriangleGeometry {
  double p_perp = 0.0;      //!< initial electron transverse momentum
  double pprime_perp = 0.0; //!< final electron transverse momentum
  double k_perp = 0.0;      //!< photon transverse momentum
  double alpha = 0.0;       //!< interior angle between p_t and p'_t
  double beta = 0.0;        //!< interior angle between p'_t and k_t sides
  double gamma = 0.0;       //!< interior angle between p_t and k_t
  double area = 0.0;        //!< triangle area
  bool degenerate = false;  //!< collinear (zero-area) closure

  //! Do the three magnitudes satisfy the closed triangle inequalities?
  static bool closes(double p_perp, double pprime_perp, double k_perp);

  //! Build the triangle; throws InvalidTriangle if it cannot close.
  static TriangleGeometry make(double p_perp, double pprime_perp,
                               double k_perp);
};

//! Azimuths of the three transverse momenta for one closure configuration.
struct AzimuthalSolution {
  double phi;       //!< initial electron
  double phi_prime; //!< final electron
  double phi_gamma; //!< photon
};

//! Resolve the azimuths given the final electron's azimuth.  The transverse
//! vectors then satisfy p_t = p'_t + k_t identically.
AzimuthalSolution resolve_azimuths(const TriangleGeometry& tri,
                                   Configuration cfg, double phi_prime);

//! Free electron with definite helicity (two_lambda = +-1, i.e. twice the
//! half-integer helicity).
struct ElectronState {
  Eigen::Vector3d p = Eigen::Vector3d::Zero();
  int two_lambda = +1;

  double energy() const { return std::sqrt(1.0 + p.squaredNorm()); }
  double gamma() const { return energy(); }
  double beta() const { return p.norm() / energy(); }
  Eigen::Vector3d velocity() const { return p / energy(); }
};

//! Photon inside the medium: |k| = n(omega) * omega.
struct PhotonState {
  Eigen::Vector3d k = Eigen::Vector3d::Zero();
  double omega = 0.0;
  double n = 1.0; //!< n(omega) at the solved frequency
  int lambda_gamma = +1;

  //! Energy-transport velocity u_k = k / (n^2 omega), magnitude 1/n.
  Eigen::Vector3d group_velocity() const { return k / (n * n * omega); }

  //! Solve |k| = n(omega) omega for omega (fixed point from omega = |k|).
  static PhotonState in_medium(const Eigen::Vector3d& k, const Medium& medium,
                               int lambda_gamma);
};

//! Full emission vertex.  p = p' + k exactly.
struct EmissionKinematics {
  ElectronState electron_in;
  ElectronState electron_out;
  PhotonState photon;
  double delta_e = 0.0; //!< eps - eps' - omega

  double eps() const { return electron_in.energy(); }
  double eps_prime() const { return electron_out.energy(); }

  //! Build from the outgoing pair; the initial momentum is their exact sum.
  static EmissionKinematics from_vectors(const Eigen::Vector3d& p_prime,
                                         int two_lambda_prime,
                                         const Eigen::Vector3d& k,
                                         int lambda_gamma, int two_lambda,
                                         const Medium& medium);

  //! Build from a transverse triangle plus longitudinal components.  The
  //! photon's frequency is solved from |k|; p = p' + k exactly.
  static EmissionKinematics from_triangle(const TriangleGeometry& tri,
                                          Configuration cfg, double phi_prime,
                                          double pprime_z, double k_z,
                                          int two_lambda,
                                          int two_lambda_prime,
                                          int lambda_gamma,
                                          const Medium& medium);
};

//! Polar/azimuth angles of a momentum vector (theta in [0,pi]).
struct PolarAngles {
  double theta;
  double phi;
};
PolarAngles polar_angles(const Eigen::Vector3d& v);

//! Classical Cherenkov cone: cos(theta) = 1/(beta n).
//! Throws NoCherenkov when beta * n <= 1.
double classical_cherenkov_cos(double beta, double n);

//! Recoil-corrected cone: cos(theta) = 1/(beta n) + (omega/2eps)(n^2-1)/(beta n).
double recoil_cherenkov_cos(double beta, double n, double omega, double eps);

//! Highest frequency with a recoil-corrected cone: 2 eps (beta n - 1)/(n^2 - 1).
double recoil_cutoff_omega(double eps, double beta, double n);

} // namespace chwig
