#include "chwig/timescales.hpp"

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace chwig {

namespace {
constexpr double nan_d = std::numeric_limits<double>::quiet_NaN();
}

GeometryVectors GeometryVectors::from_angles(double beta, double n,
                                             double theta) {
  if (!(beta > 0.0 && beta < 1.0)) throw NonPhysical("beta must be in (0,1)");
  if (!(n > 0.0)) throw NonPhysical("index must be positive");
  GeometryVectors g;
  g.u_p = Eigen::Vector3d(0.0, 0.0, beta);
  g.u_k = Eigen::Vector3d(std::sin(theta) / n, 0.0, std::cos(theta) / n);
  return g;
}

GeometryVectors GeometryVectors::from_kinematics(const EmissionKinematics& k) {
  GeometryVectors g;
  g.u_p = k.electron_in.velocity();
  g.u_k = k.photon.group_velocity();
  return g;
}

SpreadingCoefficients spreading_coefficients(double omega, double eps,
                                             double n) {
  if (!(omega > 0.0) || !(eps >= 1.0) || !(n > 0.0))
    throw NonPhysical("need omega > 0, eps >= 1, n > 0");
  SpreadingCoefficients c;
  c.a = 1.0 / (omega * n * n) - 1.0 / eps;
  c.b = 1.0 / eps - 1.0 / omega;
  return c;
}

double inv_spreading_time(double sigma, double omega, double eps, double n,
                          const GeometryVectors& g) {
  if (!(sigma > 0.0)) throw NonPhysical("sigma must be positive");
  spreading_coefficients(omega, eps, n); // argument validation
  const double A = g.A();
  if (!(A > 0.0))
    throw NonPhysical("u_p = u_k: spreading geometry degenerate");
  // a A + b B rearranged as (u_k.d)^2/omega + (B - A)/eps.  The two forms
  // are algebraically identical (|u_k| = 1/n and the Lagrange identity give
  // A/n^2 - B = (u_k.d)^2), but the straightforward one loses ~5 digits to
  // cancellation near the classical cone, where u_k.d vanishes.
  const double ukd = g.u_k.dot(g.d());
  const double num = ukd * ukd / omega + (g.B() - A) / eps;
  return 0.5 * sigma * sigma * num / A;
}

double spreading_time(double sigma, double omega, double eps, double n,
                      const GeometryVectors& g) {
  return 1.0 / inv_spreading_time(sigma, omega, eps, n, g);
}

double inv_spreading_time_forward(double sigma, double omega, double eps,
                                  double n) {
  if (!(sigma > 0.0)) throw NonPhysical("sigma must be positive");
  return 0.5 * sigma * sigma * spreading_coefficients(omega, eps, n).a;
}

double spreading_time_forward(double sigma, double omega, double eps,
                              double n) {
  return 1.0 / inv_spreading_time_forward(sigma, omega, eps, n);
}

double spreading_time_on_cone(double sigma, double eps, double n) {
  if (!(sigma > 0.0)) throw NonPhysical("sigma must be positive");
  if (n == 1.0) return std::numeric_limits<double>::infinity();
  return 2.0 * eps / (sigma * sigma) * n * n / (1.0 - n * n);
}

double formation_length(double beta, double t_d) {
  return beta * std::abs(t_d);
}

double mach_angle(double theta, double n, const GeometryVectors& g) {
  const double arg = std::abs(std::sin(theta)) / (n * std::sqrt(g.A()));
  if (arg > 1.0)
    throw MachUndefined("sin(theta)/(n |u_k - u_p|) exceeds 1");
  return M_PI - std::asin(arg);
}

double tau_d_squared(double sigma, double omega, double eps, double n,
                     const GeometryVectors& g) {
  const double b = spreading_coefficients(omega, eps, n).b;
  const double q1 = inv_spreading_time(sigma, omega, eps, n, g);
  const double q2 = inv_spreading_time_forward(sigma, omega, eps, n);
  return 1.0 / (0.5 * sigma * sigma * b * (q1 + q2));
}

std::pair<double, double> theta_inf_approx(double beta, double n,
                                           double delta) {
  if (!(beta * n > 1.0)) throw NoCherenkov("beta*n <= 1: no divergence pair");
  if (!(delta > 0.0 && delta < 1.0))
    throw NonPhysical("delta = omega/eps must be in (0,1)");
  const double root =
      std::sqrt(delta * (n * n - 1.0) * (beta * beta * n * n - 1.0));
  const double c_hi = (1.0 + root) / (beta * n); // smaller angle
  const double c_lo = (1.0 - root) / (beta * n); // larger angle
  if (!(c_hi <= 1.0))
    throw NoCherenkov("first-order divergence angle does not exist");
  return {std::acos(c_hi), std::acos(c_lo)};
}

std::optional<ThetaInfRoots> theta_inf_exact(double beta, double n,
                                             double omega, double eps,
                                             int grid_points) {
  if (grid_points < 16) throw NonPhysical("grid too coarse");
  spreading_coefficients(omega, eps, n); // argument validation
  const double u = beta;
  auto denom = [&](double theta) {
    // same cancellation-safe rearrangement as inv_spreading_time
    const double c = std::cos(theta), s = std::sin(theta);
    const double A = 1.0 / (n * n) + u * u - 2.0 * u * c / n;
    const double B = u * u * s * s / (n * n);
    const double ukd = (u * c - 1.0 / n) / n;
    return ukd * ukd / omega + (B - A) / eps;
  };
  auto bisect = [&](double lo, double hi) {
    double flo = denom(lo);
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = denom(mid);
      if (fm == 0.0) return mid;
      if ((flo < 0.0) == (fm < 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
      if (hi - lo <= 1.0e-15 * std::max(1.0, hi)) break;
    }
    return 0.5 * (lo + hi);
  };

  std::vector<double> roots;
  double prev_theta = 0.0;
  double prev_val = denom(prev_theta);
  for (int i = 1; i <= grid_points; ++i) {
    const double theta = M_PI * static_cast<double>(i) / grid_points;
    const double val = denom(theta);
    if ((prev_val < 0.0) != (val < 0.0))
      roots.push_back(bisect(prev_theta, theta));
    prev_theta = theta;
    prev_val = val;
  }
  if (roots.size() != 2) return std::nullopt;
  return ThetaInfRoots{roots[0], roots[1]};
}

double sigma_x_sq(double t_prime, double sigma, double inv_t_d) {
  const double u = t_prime * inv_t_d;
  return (1.0 + u * u) / (sigma * sigma);
}

double flash_sigma_t(double t_prime, double sigma, double inv_t_d,
                     const GeometryVectors& g) {
  const double B = g.B();
  if (!(B > 0.0))
    throw NonPhysical("collinear u_p, u_k: flash duration undefined");
  return std::sqrt(sigma_x_sq(t_prime, sigma, inv_t_d) * g.A() / (2.0 * B));
}

Eigen::Vector3d l0_vector(const GeometryVectors& g) {
  const double B = g.B();
  if (!(B > 0.0))
    throw NonPhysical("collinear u_p, u_k: arrival direction undefined");
  return g.d().cross(g.u_k.cross(g.u_p)) / B;
}

double arrival_time(const Eigen::Vector3d& r, const Eigen::Vector3d& grad_zeta,
                    const GeometryVectors& g) {
  return l0_vector(g).dot(r + grad_zeta);
}

double classical_arrival_time(const Eigen::Vector3d& r,
                              const GeometryVectors& g) {
  return l0_vector(g).dot(r);
}

double arrival_shift(const Eigen::Vector3d& grad_zeta,
                     const GeometryVectors& g) {
  return l0_vector(g).dot(grad_zeta);
}

double correlation_ratio(const Eigen::Vector3d& R, double t_prime,
                         double sigma, double omega, double eps, double n,
                         const GeometryVectors& g) {
  const double A = g.A();
  const double q1 = inv_spreading_time(sigma, omega, eps, n, g);
  const double q2 = inv_spreading_time_forward(sigma, omega, eps, n);
  const double inv_tau_sq =
      0.5 * sigma * sigma * spreading_coefficients(omega, eps, n).b *
      (q1 + q2);
  const double rx = R.cross(g.d()).squaredNorm();
  const double rd = R.dot(g.w());
  const double v = t_prime * q2;
  const double num = rx / A + t_prime * t_prime * inv_tau_sq * rd * rd /
                                  (A * (1.0 + v * v));
  return num / sigma_x_sq(t_prime, sigma, q1);
}

double effective_correlation_radius(const Eigen::Vector3d& n_hat,
                                    double t_prime, double sigma, double omega,
                                    double eps, double n,
                                    const GeometryVectors& g) {
  // The ratio is homogeneous of degree two in the direction vector, so
  // |n_hat|/sqrt(ratio(n_hat)) is scale invariant; skipping the explicit
  // normalisation keeps the exact zero along u_p - u_k (1/0 -> inf).
  const double ratio =
      correlation_ratio(n_hat, t_prime, sigma, omega, eps, n, g);
  if (!(ratio > 0.0)) return std::numeric_limits<double>::infinity();
  return n_hat.norm() / std::sqrt(ratio);
}

TimescaleReport timescale_report(double beta, double n, double theta,
                                 double sigma, double omega) {
  TimescaleReport r;
  r.beta = beta;
  r.n = n;
  r.theta = theta;
  r.sigma = sigma;
  r.omega = omega;
  r.eps = gamma_from_beta(beta);

  const GeometryVectors g = GeometryVectors::from_angles(beta, n, theta);
  const auto [a, b] = spreading_coefficients(omega, r.eps, n);
  r.a = a;
  r.b = b;
  r.A = g.A();
  r.B = g.B();
  r.inv_t_d = inv_spreading_time(sigma, omega, r.eps, n, g);
  r.t_d = 1.0 / r.inv_t_d;
  r.t_d_forward = spreading_time_forward(sigma, omega, r.eps, n);
  r.tau_d_sq = tau_d_squared(sigma, omega, r.eps, n, g);
  r.sigma_x0 = 1.0 / sigma;
  r.formation = formation_length(beta, r.t_d);

  try {
    r.sigma_t0 = flash_sigma_t(0.0, sigma, r.inv_t_d, g);
  } catch (const NonPhysical&) {
    r.sigma_t0 = nan_d;
    r.flags |= row_degenerate;
  }
  try {
    r.theta_mach = mach_angle(theta, n, g);
  } catch (const MachUndefined&) {
    r.theta_mach = nan_d;
    r.flags |= row_mach_undef;
  }
  try {
    r.theta_ch = std::acos(classical_cherenkov_cos(beta, n));
  } catch (const NoCherenkov&) {
    r.theta_ch = nan_d;
    r.flags |= row_no_cherenkov;
  }
  try {
    r.theta_ch_recoil = std::acos(recoil_cherenkov_cos(beta, n, omega, r.eps));
  } catch (const NoCherenkov&) {
    r.theta_ch_recoil = nan_d;
  }
  if (const auto roots = theta_inf_exact(beta, n, omega, r.eps)) {
    r.theta_inf_lo = roots->lo;
    r.theta_inf_hi = roots->hi;
  } else {
    r.theta_inf_lo = nan_d;
    r.theta_inf_hi = nan_d;
  }
  return r;
}

double gamma_from_beta(double beta) {
  if (!(beta >= 0.0 && beta < 1.0)) throw NonPhysical("beta must be in [0,1)");
  return 1.0 / std::sqrt((1.0 - beta) * (1.0 + beta));
}

double beta_from_gamma(double gamma) {
  if (!(gamma >= 1.0)) throw NonPhysical("gamma must be >= 1");
  return std::sqrt((gamma - 1.0) * (gamma + 1.0)) / gamma;
}

} // namespace chwig
