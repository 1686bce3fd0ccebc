#pragma once

//! Paraxial Wigner function of the emitted photon as a one-dimensional
//! oscillatory integral over the emission delay t'.
//!
//! With u = t' / t_d and v = t' / t~_d the integrand of
//!   W ~ prefactor * 2 Int_0^inf dt' (exp(re)/G) cos(t' dE - g/2 + im)
//! is built from
//!   G  = sqrt(A)/(2 sigma^2) [(1+u^2)(1+v^2)]^(1/4)          (envelope norm)
//!   g  = atan(u) + atan(v)                                    (Gouy phase)
//!   re = -[X + t'^2 Y / (tau_d^2 (1+v^2))] sigma^2 / (1+u^2)  (envelope)
//!   im = [q1 X - (sigma^2 b/2)(1-u v) Y/(1+v^2)] t' sigma^2/(1+u^2)
//! where X = |R x d|^2 / A, Y = (R.w)^2 / A, and R is any representative of
//! the observation point on its drift line (R x d and R.w are invariant
//! under R -> R - d t').
//!
//! The same integral is also computed through the complex-Gaussian route
//!   f(t') = exp(i t' dE + E_c) / (sqrt(eta) sqrt(eta A + chi B)),
//!   eta = 1/(2 sigma^2) + i t' a / 4,  chi = i t' b / 4,
//!   E_c = -(eta |RxD|^2 + chi (R.w)^2) / (2 eta (eta A + chi B)),
//! which serves as an independent oracle and as the realness check
//! (the full-line integral of f must be real).

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

#include "chwig/amplitudes.hpp"
#include "chwig/kinematics.hpp"
#include "chwig/timescales.hpp"

namespace chwig {

//! Scalar inputs of the time integral for one emission vertex.
struct WignerParams {
  double sigma = 0.0;   //!< packet momentum width
  double omega = 0.0;   //!< photon frequency
  double eps = 0.0;     //!< initial electron energy
  double eps_prime = 0.0;
  double n = 0.0;       //!< refractive index at omega
  double delta_e = 0.0; //!< eps - eps' - omega
  Eigen::Vector3d d = Eigen::Vector3d::Zero(); //!< u_p - u_k
  Eigen::Vector3d w = Eigen::Vector3d::Zero(); //!< u_p x u_k
  double A = 0.0, B = 0.0;
  double a = 0.0, b = 0.0;
  double q1 = 0.0; //!< 1/t_d
  double q2 = 0.0; //!< 1/t~_d
  double inv_tau_sq = 0.0; //!< 1/tau_d^2 = (sigma^2 b/2)(q1 + q2)
};

WignerParams wigner_params(const EmissionKinematics& kin, double sigma);

//! The two rotation/translation invariants of the observation point.
struct EnvelopeGeometry {
  double X = 0.0; //!< |R x d|^2 / A
  double Y = 0.0; //!< (R . w)^2 / A
};
EnvelopeGeometry envelope_geometry(const Eigen::Vector3d& R,
                                   const WignerParams& p);

// ------------------------------------------------- integrand components ---
double gouy_phase(double t, const WignerParams& p);
//! Single-arctan closed form; equals gouy_phase modulo pi.
double gouy_phase_closed(double t, const WignerParams& p);
double envelope_norm_G(double t, const WignerParams& p);
double re_exponent(double t, const WignerParams& p, const EnvelopeGeometry& e);
double im_exponent(double t, const WignerParams& p, const EnvelopeGeometry& e);

//! Amplitude/phase split of the integrand with analytic derivatives:
//! integrand = amp(t) * cos(psi(t)), amp = exp(re)/G,
//! psi = t dE - g/2 + im.
struct IntegrandDerivs {
  double amp = 0.0;
  double damp = 0.0; //!< d(amp)/dt
  double psi = 0.0;
  double dpsi = 0.0;
  double ddpsi = 0.0;
};
IntegrandDerivs integrand_derivs(double t, const WignerParams& p,
                                 const EnvelopeGeometry& e);

//! Complex-Gaussian route evaluated literally (independent of the
//! amplitude/phase split above).
std::complex<double> complex_integrand(double t, const WignerParams& p,
                                       const EnvelopeGeometry& e);

// ------------------------------------------------------------ quadrature ---
struct QuadratureOptions {
  double rel_tol = 1.0e-9;
  long budget = 200000;      //!< max Gauss-Kronrod panel evaluations
  double t_cap_factor = 1.0e6; //!< march stops at factor*max(|t_d|,|t~_d|)
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = false;
  long panels = 0;    //!< Gauss-Kronrod panels evaluated
  double t_max = 0.0; //!< where the march stopped
  bool tail_applied = false;
};

//! 2 Int_0^inf amp cos(psi) dt' with adaptive Gauss-Kronrod marching and an
//! integration-by-parts tail once oscillation dominates the envelope.
QuadratureResult time_integral(const WignerParams& p,
                               const EnvelopeGeometry& e,
                               const QuadratureOptions& opt = {});

//! Half-line integral of the complex route: direction=+1 gives
//! Int_0^inf f dt', direction=-1 gives Int_-inf^0 f dt'.
struct ComplexQuadratureResult {
  std::complex<double> value{0.0, 0.0};
  double error = 0.0;
  bool converged = false;
  long panels = 0;
  double t_max = 0.0;
  bool tail_applied = false;
};
ComplexQuadratureResult time_integral_complex(const WignerParams& p,
                                              const EnvelopeGeometry& e,
                                              int direction,
                                              const QuadratureOptions& opt = {});

//! One 15-point Gauss-Kronrod panel on [a,b] (exposed for validation).
struct GK15Result {
  double value = 0.0;
  double error = 0.0; //!< |K15 - G7|
};
GK15Result gauss_kronrod_15(const std::function<double(double)>& f, double a,
                            double b);

// -------------------------------------------------------------- sampling ---
//! Gaussian electron packet: momentum-space width sigma about mean_p.
struct GaussianPacket {
  Eigen::Vector3d mean_p = Eigen::Vector3d::Zero();
  double sigma = 0.0;
};

struct WignerSample {
  double value = 0.0;     //!< W at (r, t)
  double prefactor = 0.0; //!< everything except the time integral
  double integral = 0.0;  //!< the time integral
  Eigen::Vector3d grad_zeta = Eigen::Vector3d::Zero();
  double grad_rel_disagreement = 0.0;
  unsigned flags = 0;
  QuadratureResult quad;
};

//! W at observation point r and time t for a fixed-helicity vertex whose
//! initial electron momentum is weighted by the packet Gaussian.
WignerSample wigner_point(const Eigen::Vector3d& r, double t,
                          const EmissionKinematics& kin,
                          const GaussianPacket& packet, const Medium& medium,
                          const QuadratureOptions& opt = {});

//! Same without the packet weight exp(-(p - <p>)^2/sigma^2); used by the
//! electron-trace quadrature where that weight is absorbed into the
//! Gauss-Hermite measure.
WignerSample wigner_point_core(const Eigen::Vector3d& r, double t,
                               const EmissionKinematics& kin, double sigma,
                               const Medium& medium,
                               const QuadratureOptions& opt = {});

//! Sum of complete fixed-helicity evaluations over the photon helicity.
WignerSample wigner_point_photon_summed(const Eigen::Vector3d& r, double t,
                                        const EmissionKinematics& kin,
                                        const GaussianPacket& packet,
                                        const Medium& medium,
                                        const QuadratureOptions& opt = {});

//! Gauss-Hermite nodes/weights for weight exp(-x^2) (Golub-Welsch).
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussHermiteRule gauss_hermite(int n);

//! Photon Wigner function traced over the electron packet: a tensor
//! Gauss-Hermite quadrature over initial momenta p = <p> + sigma x, with
//! p' = p - k per node.  Sums both final electron helicities when
//! sum_final_helicity is set.  In the width->0 limit this reduces to
//! wigner_point at the packet centre.
WignerSample trace_electron(const Eigen::Vector3d& r, double t,
                            const Eigen::Vector3d& k, int lambda_gamma,
                            int two_lambda, const GaussianPacket& packet,
                            const Medium& medium, int nodes_per_axis = 5,
                            bool sum_final_helicity = true,
                            const QuadratureOptions& opt = {});

//! Least-squares Gaussian fit of a sampled envelope w(t) (log-quadratic on
//! |w| above a floor); recovers centre and rms width.
struct GaussianFit {
  double amplitude = 0.0;
  double t0 = 0.0;
  double sigma_t = 0.0;
  bool ok = false;
};
GaussianFit fit_gaussian_envelope(const std::vector<double>& ts,
                                  const std::vector<double>& ws);

} // namespace chwig
