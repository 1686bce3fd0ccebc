#pragma once

//! Helicity amplitude of single-photon emission in a medium, decomposed in
//! small Wigner rotation matrices.  The amplitude is a sum of four
//! intermediate spin-projection channels; each channel carries a real
//! signed modulus and an azimuthal phase, and the total dynamic phase
//! zeta_fi is the argument of the coherent channel sum.

#include <Eigen/Dense>
#include <array>
#include <complex>

#include "chwig/kinematics.hpp"

namespace chwig {

//! Spin-1/2 rotation matrix element d^{1/2}_{sigma lambda}(theta); the spin
//! projections are passed doubled (two_sigma, two_lambda in {-1,+1}).
double wigner_d_half(int two_sigma, int two_lambda, double theta);

//! Spin-1 rotation matrix element d^1_{sigma_gamma lambda_gamma}(theta)
//! with sigma_gamma in {-1,0,+1} and lambda_gamma in {-1,+1}.
double wigner_d_one(int sigma_gamma, int lambda_gamma, double theta);

//! Lab polar/azimuth angles of the three momenta at the vertex.
struct VertexAngles {
  double theta = 0.0, phi = 0.0;             //!< initial electron
  double theta_prime = 0.0, phi_prime = 0.0; //!< final electron
  double theta_gamma = 0.0, phi_gamma = 0.0; //!< photon

  static VertexAngles from_kinematics(const EmissionKinematics& kin);
};

//! One spin-projection channel: signed real modulus (no coupling factor)
//! and azimuthal phase.
struct ChannelTerm {
  int two_sigma = 0;       //!< intermediate electron projection, doubled
  int two_sigma_prime = 0; //!< final electron projection, doubled
  int sigma_gamma = 0;     //!< photon projection
  double modulus = 0.0;    //!< signed real channel amplitude
  double phase = 0.0;      //!< zeta = -sigma phi + sigma' phi' + sigma_g phi_g
};

//! The four channels for fixed helicities (two_lambda, two_lambda_prime,
//! lambda_gamma all in {-1,+1}).
std::array<ChannelTerm, 4> channel_terms(const VertexAngles& ang,
                                         int two_lambda,
                                         int two_lambda_prime,
                                         int lambda_gamma);

//! Energy-dependent coupling (electron mass = 1):
//! g = sqrt(4 pi alpha) (2 lambda sqrt(eps-1) sqrt(eps'+1)
//!                       + 2 lambda' sqrt(eps'-1) sqrt(eps+1)).
double coupling_g(double eps, double eps_prime, int two_lambda,
                  int two_lambda_prime);

//! Coherent channel sum M_fi = g * sum_i M_i exp(i zeta_i).
struct Amplitude {
  std::complex<double> value{0.0, 0.0};
  double zeta_fi = 0.0; //!< arg(value) in (-pi, pi]
  double mod_sq = 0.0;  //!< |value|^2
};

Amplitude transition_amplitude(const EmissionKinematics& kin);

//! |M_fi|^2 evaluated through the explicit interference expansion
//! g^2 [sum_i M_i^2 + 2 sum_{i<j} M_i M_j cos(zeta_i - zeta_j)];
//! algebraically identical to transition_amplitude().mod_sq.
double mod_sq_interference_expansion(const EmissionKinematics& kin);

//! Gradient of zeta_fi under a joint translation of p and k (p' fixed);
//! this is the derivative combination entering the arrival-time shift.
//! Central differences at steps h and h/2 are Richardson-combined; the
//! relative disagreement of the two estimates is reported.
struct PhaseGradient {
  Eigen::Vector3d grad = Eigen::Vector3d::Zero();
  double rel_disagreement = 0.0; //!< |D(h/2) - D(h)| / |grad|
  bool consistent = true;        //!< rel_disagreement <= rel_tol
  bool one_sided = false;        //!< fallback stencil used on some axis
};

PhaseGradient phase_gradient(const EmissionKinematics& kin,
                             const Medium& medium, double rel_tol = 1.0e-4);

} // namespace chwig
