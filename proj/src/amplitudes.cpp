#include "chwig/amplitudes.hpp"

#include <cmath>
#include <string>

namespace chwig {

namespace {

constexpr double sqrt2 = 1.4142135623730951;
constexpr double four_pi_alpha = 4.0 * M_PI / 137.035999;

void check_pm1(int v, const char* what) {
  if (v != 1 && v != -1)
    throw NonPhysical(std::string(what) + " must be +1 or -1");
}

//! Wrap an angle difference to (-pi, pi].
double wrap_pi(double x) {
  x = std::remainder(x, 2.0 * M_PI);
  if (x <= -M_PI) x += 2.0 * M_PI;
  return x;
}

} // namespace

double wigner_d_half(int two_sigma, int two_lambda, double theta) {
  check_pm1(two_sigma, "two_sigma");
  check_pm1(two_lambda, "two_lambda");
  if (two_sigma == two_lambda) return std::cos(0.5 * theta);
  return -static_cast<double>(two_sigma) * std::sin(0.5 * theta);
}

double wigner_d_one(int sigma_gamma, int lambda_gamma, double theta) {
  check_pm1(lambda_gamma, "lambda_gamma");
  switch (sigma_gamma) {
    case +1: {
      const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
      return lambda_gamma == +1 ? c * c : s * s;
    }
    case 0:
      return lambda_gamma / sqrt2 * std::sin(theta);
    case -1: {
      const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
      return lambda_gamma == +1 ? s * s : c * c;
    }
    default:
      throw NonPhysical("sigma_gamma must be -1, 0 or +1");
  }
}

namespace {

// Principal value in (-pi, pi].
double wrap_angle(double x) {
  x = std::remainder(x, 2.0 * M_PI);
  return (x <= -M_PI) ? x + 2.0 * M_PI : x;
}

} // namespace

VertexAngles VertexAngles::from_kinematics(const EmissionKinematics& kin) {
  VertexAngles a;
  const PolarAngles pa = polar_angles(kin.electron_in.p);
  const PolarAngles pb = polar_angles(kin.electron_out.p);
  const PolarAngles pk = polar_angles(kin.photon.k);
  a.theta = pa.theta;
  a.theta_prime = pb.theta;
  a.theta_gamma = pk.theta;
  // Azimuths enter the vertex phase multiplied by half-integer spin
  // projections, so the phase is 4pi-periodic in each azimuth and the
  // branch matters.  Resolve phi and phi_gamma on the branch nearest
  // phi_prime (the free reference azimuth): this keeps the phase a
  // continuous function of the momenta and makes the reflection of the
  // whole vertex through the plane of p' flip the phase sign exactly.
  a.phi_prime = pb.phi;
  a.phi = a.phi_prime + wrap_angle(pa.phi - a.phi_prime);
  a.phi_gamma = a.phi_prime + wrap_angle(pk.phi - a.phi_prime);
  return a;
}

std::array<ChannelTerm, 4> channel_terms(const VertexAngles& ang,
                                         int two_lambda,
                                         int two_lambda_prime,
                                         int lambda_gamma) {
  check_pm1(two_lambda, "two_lambda");
  check_pm1(two_lambda_prime, "two_lambda_prime");
  check_pm1(lambda_gamma, "lambda_gamma");

  auto dh = [&](int two_sigma, double theta, int two_l) {
    return wigner_d_half(two_sigma, two_l, theta);
  };
  auto zeta = [&](int two_sigma, int two_sigma_prime, int sigma_gamma) {
    return -0.5 * two_sigma * ang.phi + 0.5 * two_sigma_prime * ang.phi_prime +
           sigma_gamma * ang.phi_gamma;
  };
  auto make = [&](int ts, int tsp, int sg, double sign) {
    ChannelTerm t;
    t.two_sigma = ts;
    t.two_sigma_prime = tsp;
    t.sigma_gamma = sg;
    t.modulus = sign * dh(ts, ang.theta, two_lambda) *
                dh(tsp, ang.theta_prime, two_lambda_prime) *
                wigner_d_one(sg, lambda_gamma, ang.theta_gamma);
    t.phase = zeta(ts, tsp, sg);
    return t;
  };

  return {make(+1, -1, +1, +sqrt2), make(+1, +1, 0, -1.0),
          make(-1, +1, -1, -sqrt2), make(-1, -1, 0, +1.0)};
}

double coupling_g(double eps, double eps_prime, int two_lambda,
                  int two_lambda_prime) {
  check_pm1(two_lambda, "two_lambda");
  check_pm1(two_lambda_prime, "two_lambda_prime");
  if (!(eps >= 1.0 && eps_prime >= 1.0))
    throw NonPhysical("electron energies must be >= rest mass");
  return std::sqrt(four_pi_alpha) *
         (two_lambda * std::sqrt(eps - 1.0) * std::sqrt(eps_prime + 1.0) +
          two_lambda_prime * std::sqrt(eps_prime - 1.0) * std::sqrt(eps + 1.0));
}

Amplitude transition_amplitude(const EmissionKinematics& kin) {
  const VertexAngles ang = VertexAngles::from_kinematics(kin);
  const auto terms =
      channel_terms(ang, kin.electron_in.two_lambda,
                    kin.electron_out.two_lambda, kin.photon.lambda_gamma);
  const double g = coupling_g(kin.eps(), kin.eps_prime(),
                              kin.electron_in.two_lambda,
                              kin.electron_out.two_lambda);
  std::complex<double> sum{0.0, 0.0};
  for (const auto& t : terms)
    sum += t.modulus * std::polar(1.0, t.phase);

  Amplitude amp;
  amp.value = g * sum;
  amp.zeta_fi = std::atan2(amp.value.imag(), amp.value.real());
  amp.mod_sq = std::norm(amp.value);
  return amp;
}

double mod_sq_interference_expansion(const EmissionKinematics& kin) {
  const VertexAngles ang = VertexAngles::from_kinematics(kin);
  const auto terms =
      channel_terms(ang, kin.electron_in.two_lambda,
                    kin.electron_out.two_lambda, kin.photon.lambda_gamma);
  const double g = coupling_g(kin.eps(), kin.eps_prime(),
                              kin.electron_in.two_lambda,
                              kin.electron_out.two_lambda);
  double s = 0.0;
  for (const auto& t : terms) s += t.modulus * t.modulus;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      s += 2.0 * terms[i].modulus * terms[j].modulus *
           std::cos(terms[i].phase - terms[j].phase);
  return g * g * s;
}

PhaseGradient phase_gradient(const EmissionKinematics& kin,
                             const Medium& medium, double rel_tol) {
  // Azimuths (and with them zeta_fi) are ill-defined on the polar axis.
  const double scale_p = kin.electron_in.p.norm();
  const double scale_k = kin.photon.k.norm();
  if (std::hypot(kin.electron_in.p.x(), kin.electron_in.p.y()) <
          1.0e-12 * scale_p ||
      std::hypot(kin.photon.k.x(), kin.photon.k.y()) < 1.0e-12 * scale_k ||
      std::hypot(kin.electron_out.p.x(), kin.electron_out.p.y()) <
          1.0e-12 * std::max(kin.electron_out.p.norm(), scale_k))
    throw DegenerateAxis("momentum too close to the polar axis");

  const double zeta0 = transition_amplitude(kin).zeta_fi;

  // zeta at k -> k + q with p' fixed; p = p' + k + q follows automatically,
  // i.e. p and k translate jointly and momentum conservation is preserved.
  auto zeta_shifted = [&](const Eigen::Vector3d& q) {
    const EmissionKinematics shifted = EmissionKinematics::from_vectors(
        kin.electron_out.p, kin.electron_out.two_lambda, kin.photon.k + q,
        kin.photon.lambda_gamma, kin.electron_in.two_lambda, medium);
    double z = transition_amplitude(shifted).zeta_fi;
    // unwrap to the branch nearest the unshifted phase
    z = zeta0 + wrap_pi(z - zeta0);
    return z;
  };

  PhaseGradient out;
  Eigen::Vector3d d_h = Eigen::Vector3d::Zero();
  Eigen::Vector3d d_h2 = Eigen::Vector3d::Zero();
  for (int i = 0; i < 3; ++i) {
    const double scale =
        std::max(std::abs(kin.electron_in.p[i]), std::abs(kin.photon.k[i]));
    const double h = std::max(1.0e-6 * scale, 1.0e-9);
    Eigen::Vector3d e = Eigen::Vector3d::Zero();
    e[i] = 1.0;

    const double zp = zeta_shifted(h * e);
    const double zm = zeta_shifted(-h * e);
    const double zp2 = zeta_shifted(0.5 * h * e);
    const double zm2 = zeta_shifted(-0.5 * h * e);

    const bool jump = std::abs(zp - zeta0) > 0.5 * M_PI ||
                      std::abs(zm - zeta0) > 0.5 * M_PI;
    if (!jump) {
      d_h[i] = (zp - zm) / (2.0 * h);
      d_h2[i] = (zp2 - zm2) / h;
      out.grad[i] = (4.0 * d_h2[i] - d_h[i]) / 3.0;
    } else {
      // near a branch cut: fall back to the side with the smaller jump
      out.one_sided = true;
      const double s = (std::abs(zp - zeta0) <= std::abs(zm - zeta0)) ? 1.0
                                                                      : -1.0;
      const double z1 = (s > 0) ? zp : zm;
      const double z2 = (s > 0) ? zp2 : zm2;
      d_h[i] = s * (z1 - zeta0) / h;
      d_h2[i] = s * (z2 - zeta0) / (0.5 * h);
      out.grad[i] = 2.0 * d_h2[i] - d_h[i]; // first-order Richardson
    }
  }
  const double norm = out.grad.norm();
  out.rel_disagreement =
      (d_h2 - d_h).norm() / std::max(norm, 1.0e-300);
  out.consistent = out.rel_disagreement <= rel_tol;
  return out;
}

} // namespace chwig
