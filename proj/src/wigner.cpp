#include "chwig/wigner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace chwig {

namespace {

constexpr double pi = M_PI;

// 15-point Kronrod / 7-point Gauss pair on [-1,1] (QUADPACK dqk15).
// xgk[1], xgk[3], xgk[5], xgk[7] are the embedded Gauss abscissae.
constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class V, class F>
std::pair<V, double> gk15_panel(F&& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const V fc = f(c);
  V resk = wgk[7] * fc;
  V resg = wg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = h * xgk[j];
    const V f1 = f(c - dx);
    const V f2 = f(c + dx);
    resk += wgk[j] * (f1 + f2);
    if (j % 2 == 1) resg += wg[j / 2] * (f1 + f2);
  }
  return {resk * h, std::abs((resk - resg) * h)};
}

template <class V, class F>
void adapt_panel(F&& f, double a, double b, double tol, int depth, V& value,
                 double& err, long& panels, long budget) {
  const auto [v, e] = gk15_panel<V>(f, a, b);
  ++panels;
  if (e <= tol || depth >= 24 || panels >= budget) {
    value += v;
    err += e;
    return;
  }
  const double mid = 0.5 * (a + b);
  adapt_panel<V>(f, a, mid, 0.5 * tol, depth + 1, value, err, panels, budget);
  adapt_panel<V>(f, mid, b, 0.5 * tol, depth + 1, value, err, panels, budget);
}

struct MarchScales {
  double h0 = 0.0;
  double t_cap = 0.0;
};

MarchScales march_scales(const WignerParams& p, const EnvelopeGeometry& e,
                         const QuadratureOptions& opt) {
  const double inf = std::numeric_limits<double>::infinity();
  const double knee1 = (p.q1 != 0.0) ? 1.0 / (8.0 * std::abs(p.q1)) : inf;
  const double knee2 = (p.q2 != 0.0) ? 1.0 / (8.0 * std::abs(p.q2)) : inf;
  const double osc =
      (p.delta_e != 0.0) ? pi / (4.0 * std::abs(p.delta_e)) : inf;
  const IntegrandDerivs d0 = integrand_derivs(0.0, p, e);
  const double osc0 =
      (d0.dpsi != 0.0) ? pi / (4.0 * std::abs(d0.dpsi)) : inf;

  MarchScales s;
  const double knee_max =
      std::max(std::isfinite(knee1) ? knee1 : 0.0,
               std::isfinite(knee2) ? knee2 : 0.0);
  s.t_cap = opt.t_cap_factor * 8.0 * std::max(knee_max, 0.0);
  if (!(s.t_cap > 0.0)) s.t_cap = opt.t_cap_factor;
  s.h0 = std::min({knee1, knee2, osc, osc0, s.t_cap / 16.0});
  if (!(s.h0 > 0.0) || !std::isfinite(s.h0)) s.h0 = s.t_cap * 1.0e-6;
  return s;
}

//! Two leading integration-by-parts terms of Int_T^inf amp exp(i psi) dt
//! for direction s (the march variable is sigma = s*t >= 0):
//! term1 = i A / Phi', term2 = -(A' Phi' - A Phi'') / Phi'^3, both times
//! exp(i Phi(T)); the error is estimated from the term ratio.
struct TailTerms {
  std::complex<double> value{0.0, 0.0}; //!< without the exp(i Phi) factor
  double magnitude1 = 0.0;
  double magnitude2 = 0.0;
  double err = 0.0;
  bool usable = false;
};

TailTerms ibp_tail(const WignerParams& p, const EnvelopeGeometry& e,
                   double sigma_T, int s) {
  TailTerms out;
  const IntegrandDerivs d = integrand_derivs(s * sigma_T, p, e);
  const double amp_bar = d.amp;
  const double damp_bar = s * d.damp;   // d/dsigma of amp(s sigma)
  const double dphi = s * d.dpsi;       // d/dsigma of psi(s sigma)
  const double ddphi = d.ddpsi;         // second derivative, chain s^2 = 1
  if (!(std::abs(dphi) > 0.0) || !(amp_bar >= 0.0)) return out;

  const std::complex<double> i1(0.0, 1.0);
  const std::complex<double> term1 = i1 * amp_bar / dphi;
  const std::complex<double> term2 =
      -std::complex<double>((damp_bar * dphi - amp_bar * ddphi) /
                            (dphi * dphi * dphi),
                            0.0);
  out.value = term1 + term2;
  out.magnitude1 = std::abs(term1);
  out.magnitude2 = std::abs(term2);
  if (out.magnitude2 < 0.25 * out.magnitude1 && out.magnitude1 > 0.0) {
    out.err = out.magnitude2 * out.magnitude2 /
                  std::max(out.magnitude1, 1.0e-300) +
              1.0e-300;
    out.usable = true;
  }
  return out;
}

template <class V>
struct MarchOut {
  V value{};
  double err = 0.0;
  bool converged = false;
  long panels = 0;
  double t_max = 0.0;
  bool tail_applied = false;
};

//! March sigma = s*t from 0 outward in oscillation-resolved segments with
//! adaptive panels, stopping on the integration-by-parts tail, envelope
//! exhaustion, the hard time cap, or the panel budget.
template <class V, class F, class TailFn>
MarchOut<V> march(const WignerParams& p, const EnvelopeGeometry& e,
                  const QuadratureOptions& opt, F&& f, TailFn&& tail_value) {
  const MarchScales sc = march_scales(p, e, opt);
  MarchOut<V> out;
  double T = 0.0;
  double h = sc.h0;
  double env_max = integrand_derivs(0.0, p, e).amp;
  double peak = 0.0;

  while (true) {
    const double hseg = std::min(h, sc.t_cap - T);
    // seed the segment tolerance from its own one-panel estimate so the
    // first segments are not over-refined
    const auto [rough, rough_err] = gk15_panel<V>(f, T, T + hseg);
    ++out.panels;
    (void)rough_err;
    const double scale = std::max(
        {peak, std::abs(out.value), std::abs(rough), 1.0e-300});
    const double tol_seg = 0.5 * opt.rel_tol * scale;
    V seg{};
    double seg_err = 0.0;
    adapt_panel<V>(f, T, T + hseg, tol_seg, 0, seg, seg_err, out.panels,
                   opt.budget);
    out.value += seg;
    out.err += seg_err;
    peak = std::max(peak, std::abs(seg));
    T += hseg;
    out.t_max = T;

    const double amp_T = integrand_derivs(T, p, e).amp;
    env_max = std::max(env_max, amp_T);
    const double tol_abs =
        opt.rel_tol * std::max({std::abs(out.value), peak, 1.0e-300});

    // integration-by-parts tail once oscillation dominates the envelope
    const TailTerms tt = ibp_tail(p, e, T, 1);
    if (tt.usable && tt.err < 0.5 * tol_abs) {
      const auto [tv, terr] = tail_value(T, tt);
      out.value += tv;
      out.err += terr;
      out.tail_applied = true;
      out.converged = true;
      break;
    }
    // envelope exhausted far below its running maximum
    if (env_max > 0.0 && amp_T < 1.0e-14 * env_max) {
      out.converged = true;
      break;
    }
    if (T >= sc.t_cap || out.panels >= opt.budget) {
      // an envelope that never rose above underflow is a genuine zero
      out.converged = (env_max == 0.0 && T >= sc.t_cap);
      break;
    }
    // let segments grow toward the local oscillation scale
    const double dpsi_T = integrand_derivs(T, p, e).dpsi;
    const double h_target =
        (dpsi_T != 0.0) ? pi / (4.0 * std::abs(dpsi_T)) : 2.0 * h;
    h = std::clamp(h_target, h, 2.0 * h);
  }
  return out;
}

} // namespace

WignerParams wigner_params(const EmissionKinematics& kin, double sigma) {
  if (!(sigma > 0.0)) throw NonPhysical("sigma must be positive");
  WignerParams p;
  p.sigma = sigma;
  p.omega = kin.photon.omega;
  p.eps = kin.eps();
  p.eps_prime = kin.eps_prime();
  p.n = kin.photon.n;
  p.delta_e = kin.delta_e;
  const GeometryVectors g = GeometryVectors::from_kinematics(kin);
  p.d = g.d();
  p.w = g.w();
  p.A = g.A();
  p.B = g.B();
  const auto co = spreading_coefficients(p.omega, p.eps, p.n);
  p.a = co.a;
  p.b = co.b;
  p.q1 = inv_spreading_time(sigma, p.omega, p.eps, p.n, g);
  p.q2 = inv_spreading_time_forward(sigma, p.omega, p.eps, p.n);
  p.inv_tau_sq = 0.5 * sigma * sigma * p.b * (p.q1 + p.q2);
  return p;
}

EnvelopeGeometry envelope_geometry(const Eigen::Vector3d& R,
                                   const WignerParams& p) {
  if (!(p.A > 0.0)) throw NonPhysical("degenerate geometry: A = 0");
  EnvelopeGeometry e;
  e.X = R.cross(p.d).squaredNorm() / p.A;
  const double rd = R.dot(p.w);
  e.Y = rd * rd / p.A;
  return e;
}

double gouy_phase(double t, const WignerParams& p) {
  return std::atan(t * p.q1) + std::atan(t * p.q2);
}

double gouy_phase_closed(double t, const WignerParams& p) {
  const double s2 = p.sigma * p.sigma;
  const double num = t / (8.0 * s2) * (2.0 * p.a * p.A + p.b * p.B);
  const double den = p.A / (4.0 * s2 * s2) -
                     t * t / 16.0 * p.a * (p.a * p.A + p.b * p.B);
  return std::atan(num / den);
}

double envelope_norm_G(double t, const WignerParams& p) {
  const double u = t * p.q1, v = t * p.q2;
  return std::sqrt(p.A) / (2.0 * p.sigma * p.sigma) *
         std::pow((1.0 + u * u) * (1.0 + v * v), 0.25);
}

double re_exponent(double t, const WignerParams& p,
                   const EnvelopeGeometry& e) {
  const double u = t * p.q1, v = t * p.q2;
  const double d1 = 1.0 + u * u, d2 = 1.0 + v * v;
  const double s2 = p.sigma * p.sigma;
  return -s2 / d1 * (e.X + t * t * p.inv_tau_sq * e.Y / d2);
}

double im_exponent(double t, const WignerParams& p,
                   const EnvelopeGeometry& e) {
  const double u = t * p.q1, v = t * p.q2;
  const double d1 = 1.0 + u * u, d2 = 1.0 + v * v;
  const double s2 = p.sigma * p.sigma;
  return t * s2 / d1 *
         (p.q1 * e.X -
          0.5 * s2 * p.b * (1.0 - t * t * p.q1 * p.q2) / d2 * e.Y);
}

IntegrandDerivs integrand_derivs(double t, const WignerParams& p,
                                 const EnvelopeGeometry& e) {
  const double q1 = p.q1, q2 = p.q2;
  const double u = t * q1, v = t * q2;
  const double d1 = 1.0 + u * u, d2 = 1.0 + v * v;
  const double s2 = p.sigma * p.sigma;

  // envelope normalisation and Gouy phase
  const double g0 = std::sqrt(p.A) / (2.0 * s2);
  const double G = g0 * std::pow(d1 * d2, 0.25);
  const double dlnG = 0.5 * (u * q1 / d1 + v * q2 / d2);
  const double g = std::atan(u) + std::atan(v);
  const double dg = q1 / d1 + q2 / d2;
  const double ddg =
      -2.0 * u * q1 * q1 / (d1 * d1) - 2.0 * v * q2 * q2 / (d2 * d2);

  // real exponent re = -(S + P)
  const double S = s2 * e.X / d1;
  const double dS = -S * 2.0 * u * q1 / d1;
  const double cY = s2 * p.inv_tau_sq * e.Y;
  const double P = cY * t * t / (d1 * d2);
  const double dP = cY *
                    (2.0 * t * d1 * d2 -
                     t * t * (2.0 * u * q1 * d2 + 2.0 * v * q2 * d1)) /
                    (d1 * d1 * d2 * d2);
  const double re = -S - P;
  const double dre = -dS - dP;

  // imaginary exponent im = T1 - T2
  const double c1 = s2 * q1 * e.X;
  const double T1 = c1 * t / d1;
  const double dT1 = c1 * (1.0 - u * u) / (d1 * d1);
  const double ddT1 = -2.0 * u * q1 * c1 * (3.0 - u * u) / (d1 * d1 * d1);

  const double c2 = s2 * e.Y * 0.5 * s2 * p.b;
  const double N = t - t * t * t * q1 * q2;
  const double dN = 1.0 - 3.0 * t * t * q1 * q2;
  const double ddN = -6.0 * t * q1 * q2;
  const double D = d1 * d2;
  const double dD = 2.0 * t * q1 * q1 * d2 + 2.0 * t * q2 * q2 * d1;
  const double ddD = 2.0 * q1 * q1 * d2 + 2.0 * q2 * q2 * d1 +
                     8.0 * t * t * q1 * q1 * q2 * q2;
  const double hq = N / D;
  const double dhq = (dN * D - N * dD) / (D * D);
  const double ddhq = (ddN * D - N * ddD) / (D * D) - 2.0 * (dD / D) * dhq;
  const double T2 = c2 * hq;
  const double dT2 = c2 * dhq;
  const double ddT2 = c2 * ddhq;

  const double im = T1 - T2;
  const double dim = dT1 - dT2;
  const double ddim = ddT1 - ddT2;

  IntegrandDerivs out;
  out.amp = std::exp(re) / G;
  out.damp = out.amp * (dre - dlnG);
  out.psi = t * p.delta_e - 0.5 * g + im;
  out.dpsi = p.delta_e - 0.5 * dg + dim;
  out.ddpsi = -0.5 * ddg + ddim;
  return out;
}

std::complex<double> complex_integrand(double t, const WignerParams& p,
                                       const EnvelopeGeometry& e) {
  using cd = std::complex<double>;
  const double s2 = p.sigma * p.sigma;
  const cd eta(1.0 / (2.0 * s2), 0.25 * t * p.a);
  const cd chi(0.0, 0.25 * t * p.b);
  const cd den = eta * p.A + chi * p.B;
  const double rx = e.X * p.A; // |R x d|^2
  const double rd2 = e.Y * p.A; // (R.w)^2
  const cd ec = -(eta * rx + chi * rd2) / (2.0 * eta * den);
  const cd pref = 1.0 / (std::sqrt(eta) * std::sqrt(den));
  return pref * std::exp(cd(0.0, t * p.delta_e) + ec);
}

QuadratureResult time_integral(const WignerParams& p,
                               const EnvelopeGeometry& e,
                               const QuadratureOptions& opt) {
  auto f = [&](double t) {
    const IntegrandDerivs d = integrand_derivs(t, p, e);
    return 2.0 * d.amp * std::cos(d.psi);
  };
  auto tail = [&](double T, const TailTerms& tt) {
    const double psi = integrand_derivs(T, p, e).psi;
    const std::complex<double> val =
        2.0 * std::polar(1.0, psi) * tt.value;
    return std::pair<double, double>(val.real(), 2.0 * tt.err);
  };
  const auto m = march<double>(p, e, opt, f, tail);
  QuadratureResult r;
  r.value = m.value;
  r.error = m.err;
  r.converged = m.converged;
  r.panels = m.panels;
  r.t_max = m.t_max;
  r.tail_applied = m.tail_applied;
  return r;
}

ComplexQuadratureResult time_integral_complex(const WignerParams& p,
                                              const EnvelopeGeometry& e,
                                              int direction,
                                              const QuadratureOptions& opt) {
  if (direction != 1 && direction != -1)
    throw NonPhysical("direction must be +1 or -1");
  const double s = static_cast<double>(direction);
  auto f = [&](double sig) { return complex_integrand(s * sig, p, e); };
  auto tail = [&](double T, const TailTerms&) {
    // rebuild the tail with direction-aware derivatives
    const IntegrandDerivs d = integrand_derivs(s * T, p, e);
    const double amp_bar = d.amp;
    const double damp_bar = s * d.damp;
    const double dphi = s * d.dpsi;
    const double ddphi = d.ddpsi;
    const std::complex<double> i1(0.0, 1.0);
    const std::complex<double> term1 = i1 * amp_bar / dphi;
    const std::complex<double> term2 = -std::complex<double>(
        (damp_bar * dphi - amp_bar * ddphi) / (dphi * dphi * dphi), 0.0);
    const std::complex<double> m_T = complex_integrand(s * T, p, e);
    const std::complex<double> phase =
        (std::abs(m_T) > 0.0) ? m_T / std::abs(m_T)
                              : std::complex<double>(0.0, 0.0);
    const double err = std::abs(term2) * std::abs(term2) /
                           std::max(std::abs(term1), 1.0e-300) +
                       1.0e-300;
    return std::pair<std::complex<double>, double>(phase * (term1 + term2),
                                                   err);
  };
  const auto m = march<std::complex<double>>(p, e, opt, f, tail);
  ComplexQuadratureResult r;
  // substitution t = s*sig gives Int over the half-line directly:
  // Int_0^inf f dt (s=+1)  or  Int_-inf^0 f dt = Int_0^inf f(-sig) dsig
  r.value = m.value;
  r.error = m.err;
  r.converged = m.converged;
  r.panels = m.panels;
  r.t_max = m.t_max;
  r.tail_applied = m.tail_applied;
  return r;
}

GK15Result gauss_kronrod_15(const std::function<double(double)>& f, double a,
                            double b) {
  const auto [v, e] = gk15_panel<double>(f, a, b);
  return {v, e};
}

namespace {

double packet_weight(const Eigen::Vector3d& pvec,
                     const GaussianPacket& packet) {
  if (!(packet.sigma > 0.0)) throw NonPhysical("packet sigma must be > 0");
  return std::exp(-(pvec - packet.mean_p).squaredNorm() /
                  (packet.sigma * packet.sigma));
}

} // namespace

WignerSample wigner_point_core(const Eigen::Vector3d& r, double t,
                               const EmissionKinematics& kin, double sigma,
                               const Medium& medium,
                               const QuadratureOptions& opt) {
  const WignerParams p = wigner_params(kin, sigma);
  const PhaseGradient pg = phase_gradient(kin, medium);

  const Eigen::Vector3d u_k = kin.photon.group_velocity();
  const Eigen::Vector3d R = r + pg.grad - u_k * t;
  const EnvelopeGeometry env = envelope_geometry(R, p);
  const QuadratureResult quad = time_integral(p, env, opt);

  const Amplitude amp = transition_amplitude(kin);
  const double sqrt_pi = std::sqrt(pi);
  const double packet_norm = std::pow(2.0 * sqrt_pi / sigma, 3);
  const double mode_norm =
      std::sqrt(4.0 * pi) /
      (std::pow(2.0 * p.n * p.n, 2) * 2.0 * p.eps_prime * 2.0 * p.eps);

  WignerSample s;
  s.prefactor = packet_norm * mode_norm * amp.mod_sq;
  s.integral = quad.value;
  s.value = s.prefactor * s.integral;
  s.grad_zeta = pg.grad;
  s.grad_rel_disagreement = pg.rel_disagreement;
  s.quad = quad;
  if (!quad.converged) s.flags |= row_not_converged;
  if (!pg.consistent) s.flags |= row_gradient_bad;
  if (!medium.weakly_dispersive(kin.photon.omega)) s.flags |= row_dispersive;
  return s;
}

WignerSample wigner_point(const Eigen::Vector3d& r, double t,
                          const EmissionKinematics& kin,
                          const GaussianPacket& packet, const Medium& medium,
                          const QuadratureOptions& opt) {
  WignerSample s = wigner_point_core(r, t, kin, packet.sigma, medium, opt);
  const double wgt = packet_weight(kin.electron_in.p, packet);
  s.prefactor *= wgt;
  s.value *= wgt;
  return s;
}

WignerSample wigner_point_photon_summed(const Eigen::Vector3d& r, double t,
                                        const EmissionKinematics& kin,
                                        const GaussianPacket& packet,
                                        const Medium& medium,
                                        const QuadratureOptions& opt) {
  WignerSample total;
  for (int lg : {+1, -1}) {
    EmissionKinematics k2 = kin;
    k2.photon.lambda_gamma = lg;
    const WignerSample s = wigner_point(r, t, k2, packet, medium, opt);
    total.value += s.value;
    total.prefactor += s.prefactor;
    total.integral += s.integral;
    total.flags |= s.flags;
    total.quad.panels += s.quad.panels;
    total.quad.error += s.quad.error;
    total.quad.t_max = std::max(total.quad.t_max, s.quad.t_max);
    total.quad.converged =
        (total.flags & row_not_converged) == 0;
  }
  total.flags |= row_helicity_sum;
  return total;
}

GaussHermiteRule gauss_hermite(int n) {
  if (n < 1) throw NonPhysical("need at least one node");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    const double b = std::sqrt(0.5 * (i + 1));
    J(i, i + 1) = b;
    J(i + 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  GaussHermiteRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double sqrt_pi = std::sqrt(pi);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = sqrt_pi * v0 * v0;
  }
  return rule;
}

WignerSample trace_electron(const Eigen::Vector3d& r, double t,
                            const Eigen::Vector3d& k, int lambda_gamma,
                            int two_lambda, const GaussianPacket& packet,
                            const Medium& medium, int nodes_per_axis,
                            bool sum_final_helicity,
                            const QuadratureOptions& opt) {
  if (nodes_per_axis < 1) throw NonPhysical("need at least one node per axis");
  const GaussHermiteRule rule = gauss_hermite(nodes_per_axis);
  const double sigma = packet.sigma;
  if (!(sigma > 0.0)) throw NonPhysical("packet sigma must be > 0");

  WignerSample total;
  double acc = 0.0;
  const std::array<int, 2> lps = {two_lambda, -two_lambda};
  const int n_lp = sum_final_helicity ? 2 : 1;

  for (int ia = 0; ia < nodes_per_axis; ++ia)
    for (int ib = 0; ib < nodes_per_axis; ++ib)
      for (int ic = 0; ic < nodes_per_axis; ++ic) {
        Eigen::Vector3d pnode =
            packet.mean_p + sigma * Eigen::Vector3d(rule.nodes[ia],
                                                    rule.nodes[ib],
                                                    rule.nodes[ic]);
        const double wnode =
            rule.weights[ia] * rule.weights[ib] * rule.weights[ic];
        for (int il = 0; il < n_lp; ++il) {
          for (int attempt = 0; attempt < 2; ++attempt) {
            try {
              const EmissionKinematics kin = EmissionKinematics::from_vectors(
                  pnode - k, lps[il], k, lambda_gamma, two_lambda, medium);
              const WignerSample s =
                  wigner_point_core(r, t, kin, sigma, medium, opt);
              acc += wnode * s.value;
              total.flags |= s.flags;
              total.quad.panels += s.quad.panels;
              total.quad.error += std::abs(wnode) * s.quad.error;
              total.quad.t_max = std::max(total.quad.t_max, s.quad.t_max);
              break;
            } catch (const DegenerateAxis&) {
              // nudge the node off the polar axis and retry once
              pnode.x() += 1.0e-10 * std::max(1.0, pnode.norm());
              total.flags |= row_degenerate;
            }
          }
        }
      }

  total.value = acc / std::pow(pi, 1.5);
  total.integral = total.value;
  total.prefactor = 1.0;
  if (sum_final_helicity) total.flags |= row_helicity_sum;
  total.quad.converged = (total.flags & row_not_converged) == 0;
  return total;
}

GaussianFit fit_gaussian_envelope(const std::vector<double>& ts,
                                  const std::vector<double>& ws) {
  GaussianFit fit;
  if (ts.size() != ws.size() || ts.size() < 5) return fit;

  double wmax = 0.0;
  std::size_t imax = 0;
  for (std::size_t i = 0; i < ws.size(); ++i)
    if (std::abs(ws[i]) > wmax) {
      wmax = std::abs(ws[i]);
      imax = i;
    }
  if (!(wmax > 0.0)) return fit;
  const double floor = 1.0e-3 * wmax;

  std::vector<double> t_sel, y_sel;
  for (std::size_t i = 0; i < ws.size(); ++i)
    if (std::abs(ws[i]) >= floor) {
      t_sel.push_back(ts[i]);
      y_sel.push_back(std::log(std::abs(ws[i])));
    }
  if (t_sel.size() < 5) return fit;

  // centre and scale the abscissa for conditioning
  double tm = 0.0;
  for (double v : t_sel) tm += v;
  tm /= static_cast<double>(t_sel.size());
  double tsc = 0.0;
  for (double v : t_sel) tsc = std::max(tsc, std::abs(v - tm));
  if (!(tsc > 0.0)) return fit;

  Eigen::MatrixXd M(t_sel.size(), 3);
  Eigen::VectorXd y(t_sel.size());
  for (std::size_t i = 0; i < t_sel.size(); ++i) {
    const double s = (t_sel[i] - tm) / tsc;
    M(i, 0) = 1.0;
    M(i, 1) = s;
    M(i, 2) = s * s;
    y(i) = y_sel[i];
  }
  const Eigen::Vector3d c = M.householderQr().solve(y);
  if (!(c(2) < 0.0)) return fit;

  const double s_peak = -c(1) / (2.0 * c(2));
  fit.t0 = tm + tsc * s_peak;
  fit.sigma_t = tsc / std::sqrt(-2.0 * c(2));
  const double ln_amp = c(0) - c(1) * c(1) / (4.0 * c(2));
  const double sign = (ws[imax] >= 0.0) ? 1.0 : -1.0;
  fit.amplitude = sign * std::exp(ln_amp);
  fit.ok = true;
  return fit;
}

} // namespace chwig
