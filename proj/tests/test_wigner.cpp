#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "chwig/timescales.hpp"
#include "chwig/units.hpp"
#include "chwig/wigner.hpp"

using namespace chwig;

namespace {

double eV(double e) { return units::energy_eV_to_natural(e); }

// Scalar parameter set frozen together with the reference integrals: the
// gamma = 1.4, n = 1.5, 10 nm, 2.5 eV vertex on the classical cone, with a
// synthetic observation point 0.3 packet widths off the drift line.
WignerParams frozen_params(double delta_e) {
  WignerParams p;
  p.sigma = 3.86159267928126e-5;
  p.omega = eV(2.5);
  p.eps = 1.4;
  p.eps_prime = 1.4;
  p.n = 1.5;
  p.delta_e = delta_e;
  p.A = 0.045351473922902494;
  p.B = 0.020156210632401108;
  p.a = 90843.5434920635;
  p.b = -204398.86571428573;
  p.q1 = -2.9587099247395225e-10;
  p.q2 = 6.77324828195367e-05;
  p.inv_tau_sq = 0.5 * p.sigma * p.sigma * p.b * (p.q1 + p.q2);
  const double beta = std::sqrt(1.0 - 1.0 / 1.96);
  const GeometryVectors g =
      GeometryVectors::from_angles(beta, 1.5, std::acos(1.0 / (beta * 1.5)));
  p.d = g.d();
  p.w = g.w();
  return p;
}

EnvelopeGeometry frozen_geometry() {
  EnvelopeGeometry e;
  e.X = 60354490.002007276;
  e.Y = 135168.64589906728;
  return e;
}

// the 11 eV / 10 degree triangle vertex used across the test suites
EmissionKinematics reference_vertex(const Medium& m) {
  const double om = eV(11.0), th = 10.0 * M_PI / 180.0;
  const double p_perp = 1e-5;
  const double beta = std::sqrt(1.0 - 1.0 / (1.4 * 1.4));
  const TriangleGeometry tri =
      TriangleGeometry::make(p_perp, 0.99 * p_perp, 1.5 * om * std::sin(th));
  return EmissionKinematics::from_triangle(tri, Configuration::plus, 0.0,
                                           0.9 * beta,
                                           1.5 * om * std::cos(th), +1, +1, +1,
                                           m);
}

} // namespace

TEST_SUITE("wigner") {

TEST_CASE("Gauss-Kronrod panel on polynomials and sine") {
  const GK15Result p = gauss_kronrod_15(
      [](double x) { return std::pow(x, 10); }, 0.0, 1.0);
  CHECK(p.value == doctest::Approx(1.0 / 11.0).epsilon(1e-14));
  CHECK(p.error < 1e-12);
  const GK15Result s =
      gauss_kronrod_15([](double x) { return std::sin(x); }, 0.0, M_PI);
  CHECK(s.value == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(std::abs(s.value - 2.0) <= std::max(s.error, 1e-12));
}

TEST_CASE("Gauss-Hermite rule") {
  const GaussHermiteRule r = gauss_hermite(5);
  REQUIRE(r.nodes.size() == 5);
  const double nodes[5] = {-2.0201828704560856, -0.95857246461381851, 0.0,
                           0.95857246461381851, 2.0201828704560856};
  const double weights[5] = {0.019953242059045913, 0.39361932315224116,
                             0.94530872048294188, 0.39361932315224116,
                             0.019953242059045913};
  for (int i = 0; i < 5; ++i) {
    CHECK(r.nodes[i] == doctest::Approx(nodes[i]).scale(1.0).epsilon(1e-12));
    CHECK(r.weights[i] == doctest::Approx(weights[i]).epsilon(1e-12));
  }
  // weights integrate exp(-x^2): total sqrt(pi), x^2 moment sqrt(pi)/2
  for (int n : {1, 3, 7, 12}) {
    const GaussHermiteRule q = gauss_hermite(n);
    double s = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
      s += q.weights[i];
      m2 += q.weights[i] * q.nodes[i] * q.nodes[i];
    }
    CHECK(s == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));
    if (n >= 2)
      CHECK(m2 == doctest::Approx(0.5 * std::sqrt(M_PI)).epsilon(1e-12));
  }
}

TEST_CASE("phase accumulates one arctan per spreading direction") {
  const WignerParams p = frozen_params(5e-5);
  for (const double t : {0.0, 13.0, 4.1e3, 8.9e4, 2.2e6, 7.7e9}) {
    const double direct = gouy_phase(t, p);
    const double closed = gouy_phase_closed(t, p);
    // the closed single-arctan form may differ by a multiple of pi
    CHECK(std::abs(std::sin(direct - closed)) < 1e-10);
  }
  // small times: no branch crossing, exact agreement
  CHECK(gouy_phase(10.0, p) ==
        doctest::Approx(gouy_phase_closed(10.0, p)).epsilon(1e-12));
}

TEST_CASE("envelope exponent never amplifies at physical points") {
  // For invariants produced by an actual observation point the damping
  // exponent is non-positive at every retarded time: the component of R
  // along u_p x u_k contributes to both invariants, which pins X >= Y A/B,
  // and A a^2 - |b| B (2 a A + b B) = (a A + b B)^2 >= 0 does the rest.
  const WignerParams p = frozen_params(5e-5);
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double mag = std::pow(10.0, 2.0 + 6.0 * u(rng));
    const Eigen::Vector3d R = mag * Eigen::Vector3d(2.0 * u(rng) - 1.0,
                                                    2.0 * u(rng) - 1.0,
                                                    2.0 * u(rng) - 1.0);
    const EnvelopeGeometry e = envelope_geometry(R, p);
    const double t = std::pow(10.0, 12.0 * u(rng) - 1.0) *
                     (u(rng) < 0.5 ? -1.0 : 1.0);
    CHECK(re_exponent(t, p, e) <= 1e-10);
  }
}

TEST_CASE("complex route equals the amplitude/phase split pointwise") {
  const WignerParams p = frozen_params(5e-5);
  const EnvelopeGeometry e = frozen_geometry();
  for (const double t : {0.0, 7.0e3, 3.1e4, 2.2e5, 4.4e7}) {
    const IntegrandDerivs d = integrand_derivs(t, p, e);
    const std::complex<double> fc = complex_integrand(t, p, e);
    CHECK(fc.real() ==
          doctest::Approx(d.amp * std::cos(d.psi)).epsilon(1e-11));
    CHECK(fc.imag() ==
          doctest::Approx(d.amp * std::sin(d.psi)).epsilon(1e-11));
    CHECK(std::abs(fc) == doctest::Approx(d.amp).epsilon(1e-11));
  }
}

TEST_CASE("analytic derivatives match finite differences") {
  const WignerParams p = frozen_params(5e-5);
  const EnvelopeGeometry e = frozen_geometry();
  for (const double t : {3.0e2, 7.0e3, 6.0e4, 9.0e5}) {
    const double h = std::max(t, 1e3) * 1e-6;
    const IntegrandDerivs c = integrand_derivs(t, p, e);
    const IntegrandDerivs hi = integrand_derivs(t + h, p, e);
    const IntegrandDerivs lo = integrand_derivs(t - h, p, e);
    CHECK(c.damp ==
          doctest::Approx((hi.amp - lo.amp) / (2 * h)).epsilon(1e-6));
    CHECK(c.dpsi ==
          doctest::Approx((hi.psi - lo.psi) / (2 * h)).epsilon(1e-6));
    CHECK(c.ddpsi ==
          doctest::Approx((hi.dpsi - lo.dpsi) / (2 * h)).epsilon(1e-5));
  }
}

TEST_CASE("time integral against independent high-precision references") {
  const EnvelopeGeometry e = frozen_geometry();
  struct Ref {
    double delta_e, value, rel;
  };
  // frozen from a 40-digit evaluation of the contour-rotated complex form
  const Ref refs[] = {
      {5.0e-7, 7.7417072974811199397e-3, 1e-8},
      {5.0e-5, 3.7257312052700630849e-4, 1e-8},
      {3.0e-4, 3.7818385640072289279e-6, 1e-6},
  };
  for (const Ref& r : refs) {
    const WignerParams p = frozen_params(r.delta_e);
    const QuadratureResult q = time_integral(p, e);
    CHECK(q.converged);
    CHECK(q.value == doctest::Approx(r.value).epsilon(r.rel));
  }
  // pure normalisation/phase case: no envelope offsets at all
  const WignerParams p0 = frozen_params(1e-4);
  const QuadratureResult q0 = time_integral(p0, EnvelopeGeometry{});
  CHECK(q0.converged);
  CHECK(q0.value ==
        doctest::Approx(1.378102538249988085e-4).epsilon(1e-8));
}

TEST_CASE("complex half-line integrals: frozen value and realness") {
  const EnvelopeGeometry e = frozen_geometry();
  const WignerParams p = frozen_params(5e-5);
  const ComplexQuadratureResult plus = time_integral_complex(p, e, +1);
  CHECK(plus.converged);
  CHECK(plus.value.real() ==
        doctest::Approx(1.8628656026350315425e-4).epsilon(1e-8));
  CHECK(plus.value.imag() ==
        doctest::Approx(2.3706738580229680676e-4).epsilon(1e-8));

  // evaluate the negative half-line literally and add: the full-line
  // integral of the complex integrand must be real
  const ComplexQuadratureResult minus = time_integral_complex(p, e, -1);
  CHECK(minus.converged);
  const std::complex<double> full = plus.value + minus.value;
  CHECK(std::abs(full.imag()) <= 1e-10 * std::abs(full));
  CHECK(full.real() ==
        doctest::Approx(time_integral(p, e).value).epsilon(1e-8));
}

TEST_CASE("half-line consistency at a heavier detuning") {
  const EnvelopeGeometry e = frozen_geometry();
  const WignerParams p = frozen_params(3e-4);
  const ComplexQuadratureResult plus = time_integral_complex(p, e, +1);
  const ComplexQuadratureResult minus = time_integral_complex(p, e, -1);
  CHECK(plus.converged);
  CHECK(minus.converged);
  const std::complex<double> full = plus.value + minus.value;
  CHECK(std::abs(full.imag()) <= 1e-9 * std::abs(full));
  CHECK(full.real() ==
        doctest::Approx(3.7818385640072289279e-6).epsilon(1e-6));
}

TEST_CASE("exhausted budget is reported, not hidden") {
  const WignerParams p = frozen_params(5e-5);
  QuadratureOptions opt;
  opt.budget = 2;
  const QuadratureResult q = time_integral(p, frozen_geometry(), opt);
  CHECK_FALSE(q.converged);
}

TEST_CASE("parameters derived from a vertex are self-consistent") {
  const Medium m = Medium::constant(1.5);
  const EmissionKinematics kin = reference_vertex(m);
  const double sigma = 1e-5;
  const WignerParams p = wigner_params(kin, sigma);
  const GeometryVectors g = GeometryVectors::from_kinematics(kin);
  CHECK(p.A == doctest::Approx(g.A()).epsilon(1e-14));
  CHECK(p.B == doctest::Approx(g.B()).epsilon(1e-14));
  CHECK(p.delta_e == doctest::Approx(kin.delta_e).epsilon(1e-14));
  CHECK(p.q1 == doctest::Approx(inv_spreading_time(sigma, p.omega, p.eps, p.n,
                                                   g)).epsilon(1e-13));
  CHECK(p.q2 == doctest::Approx(inv_spreading_time_forward(
                    sigma, p.omega, p.eps, p.n)).epsilon(1e-13));
  CHECK(p.inv_tau_sq ==
        doctest::Approx(0.5 * sigma * sigma * p.b * (p.q1 + p.q2))
            .epsilon(1e-13));
}

TEST_CASE("observation invariants do not depend on the drift representative") {
  const Medium m = Medium::constant(1.5);
  const EmissionKinematics kin = reference_vertex(m);
  const WignerParams p = wigner_params(kin, 1e-5);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const Eigen::Vector3d R(1e5 * u(rng), 1e5 * u(rng), 1e5 * u(rng));
    const EnvelopeGeometry e0 = envelope_geometry(R, p);
    for (const double t : {3.0e2, -4.0e3}) {
      const EnvelopeGeometry et = envelope_geometry(R - t * p.d, p);
      CHECK(et.X == doctest::Approx(e0.X).scale(1e-3).epsilon(1e-9));
      CHECK(et.Y == doctest::Approx(e0.Y).scale(1e-3).epsilon(1e-9));
    }
  }
}

TEST_CASE("a sampled point: weight, prefactor and flags") {
  const Medium m = Medium::constant(1.5);
  const EmissionKinematics kin = reference_vertex(m);
  const double sigma = 1e-5;
  const GaussianPacket packet{kin.electron_in.p, sigma};

  // observation point a few flash widths from the classical arrival
  const GeometryVectors g = GeometryVectors::from_kinematics(kin);
  const Eigen::Vector3d r =
      2.0e7 * kin.photon.group_velocity().normalized();
  const double t = classical_arrival_time(r, g);

  const WignerSample s = wigner_point(r, t, kin, packet, m);
  CHECK((s.flags & row_not_converged) == 0);
  CHECK(std::isfinite(s.value));
  CHECK(s.prefactor > 0.0);
  // packet centred on the vertex momentum: the Gaussian weight is 1
  CHECK(s.value ==
        doctest::Approx(s.prefactor * s.integral).epsilon(1e-13));

  // a displaced packet centre applies the momentum-space Gaussian
  GaussianPacket off = packet;
  off.mean_p += Eigen::Vector3d(0.5 * sigma, 0.0, -0.25 * sigma);
  const WignerSample s2 = wigner_point(r, t, kin, off, m);
  const double expect =
      std::exp(-(kin.electron_in.p - off.mean_p).squaredNorm() /
               (sigma * sigma));
  CHECK(s2.value ==
        doctest::Approx(s.value * expect).epsilon(1e-10));
}

TEST_CASE("photon-helicity sum is the sum of complete evaluations") {
  const Medium m = Medium::constant(1.5);
  const EmissionKinematics kin = reference_vertex(m);
  const GaussianPacket packet{kin.electron_in.p, 1e-5};
  const GeometryVectors g = GeometryVectors::from_kinematics(kin);
  const Eigen::Vector3d r = 2.0e7 * kin.photon.group_velocity().normalized();
  const double t = classical_arrival_time(r, g);

  const WignerSample sum =
      wigner_point_photon_summed(r, t, kin, packet, m);
  CHECK((sum.flags & row_helicity_sum) != 0);

  double manual = 0.0;
  for (const int lg : {+1, -1}) {
    const EmissionKinematics k2 = EmissionKinematics::from_vectors(
        kin.electron_out.p, kin.electron_out.two_lambda, kin.photon.k, lg,
        kin.electron_in.two_lambda, m);
    manual += wigner_point(r, t, k2, packet, m).value;
  }
  CHECK(sum.value == doctest::Approx(manual).epsilon(1e-12));
}

TEST_CASE("electron trace collapses to the central vertex at zero width") {
  const Medium m = Medium::constant(1.5);
  const EmissionKinematics kin = reference_vertex(m);
  // width far below the momentum resolution: all quadrature nodes coincide
  const double sigma = 1e-18;
  const GaussianPacket packet{kin.electron_in.p, sigma};
  const GeometryVectors g = GeometryVectors::from_kinematics(kin);
  const Eigen::Vector3d r = 2.0e7 * kin.photon.group_velocity().normalized();
  const double t = classical_arrival_time(r, g);

  const WignerSample traced =
      trace_electron(r, t, kin.photon.k, kin.photon.lambda_gamma,
                     kin.electron_in.two_lambda, packet, m, 5, false);
  const WignerSample point = wigner_point(r, t, kin, packet, m);
  CHECK(traced.value == doctest::Approx(point.value).epsilon(1e-12));
}

TEST_CASE("electron trace nudges nodes off the polar axis") {
  const Medium m = Medium::constant(1.5);
  const Eigen::Vector3d k(0.0, 0.0, eV(5.0));
  const GaussianPacket packet{Eigen::Vector3d(0.0, 0.0, 0.63), 1e-6};
  const WignerSample s =
      trace_electron(Eigen::Vector3d(1e6, 0.0, 1e6), 1.5e6, k, +1, +1, packet,
                     m, 1, false);
  CHECK((s.flags & row_degenerate) != 0);
  CHECK(std::isfinite(s.value));
}

TEST_CASE("Gaussian envelope fit recovers synthetic parameters") {
  const double amp = -7.5, t0 = 250.0, st = 40.0;
  std::vector<double> ts, ws;
  for (int i = 0; i <= 40; ++i) {
    const double t = t0 - 3.0 * st + 6.0 * st * i / 40.0;
    ts.push_back(t);
    ws.push_back(amp * std::exp(-0.5 * (t - t0) * (t - t0) / (st * st)));
  }
  const GaussianFit fit = fit_gaussian_envelope(ts, ws);
  CHECK(fit.ok);
  CHECK(fit.t0 == doctest::Approx(t0).epsilon(1e-8));
  CHECK(fit.sigma_t == doctest::Approx(st).epsilon(1e-8));
  CHECK(fit.amplitude == doctest::Approx(amp).epsilon(1e-8));

  // degenerate input is rejected
  const GaussianFit flat =
      fit_gaussian_envelope({1, 2, 3, 4, 5}, {0, 0, 0, 0, 0});
  CHECK_FALSE(flat.ok);
}

} // TEST_SUITE
