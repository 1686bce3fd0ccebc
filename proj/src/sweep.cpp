#include "chwig/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "chwig/amplitudes.hpp"
#include "chwig/kinematics.hpp"
#include "chwig/timescales.hpp"
#include "chwig/units.hpp"
#include "chwig/version.hpp"
#include "chwig/wigner.hpp"

namespace chwig {

namespace {

constexpr double nan_d = std::numeric_limits<double>::quiet_NaN();

double deg2rad(double d) { return d * M_PI / 180.0; }
double rad2deg(double r) { return r * 180.0 / M_PI; }

std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_escape(const std::string& f) {
  if (f.find_first_of(",\"\n\r") == std::string::npos) return f;
  std::string out = "\"";
  for (const char c : f) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

std::vector<double> make_grid(double lo, double hi, int count) {
  if (count < 1) throw BadConfig("sweep_count must be >= 1");
  std::vector<double> g(count);
  if (count == 1) {
    g[0] = lo;
    return g;
  }
  for (int i = 0; i < count; ++i)
    g[i] = lo + (hi - lo) * static_cast<double>(i) /
                    static_cast<double>(count - 1);
  return g;
}

// ------------------------------------------------------- shared parsing ---

struct CommonParams {
  double beta = 0.0;
  double gamma = 0.0;
  double n = 0.0;
  double sigma = 0.0;
  double omega = 0.0;
  Medium medium = Medium::constant(1.0);
};

CommonParams parse_common(const Config& cfg) {
  CommonParams c;
  if (cfg.has("beta")) {
    c.beta = cfg.get_double("beta");
    c.gamma = gamma_from_beta(c.beta);
  } else if (cfg.has("gamma")) {
    c.gamma = cfg.get_double("gamma");
    c.beta = beta_from_gamma(c.gamma);
  } else {
    throw BadConfig("need beta or gamma");
  }
  c.omega = units::energy_eV_to_natural(cfg.get_double("omega_ev"));
  if (!(c.omega > 0.0)) throw BadConfig("omega_ev must be positive");
  if (cfg.has("medium_file")) {
    c.medium = Medium::from_file(cfg.get_string("medium_file"));
    c.n = c.medium.refractive_index(c.omega);
  } else {
    c.n = cfg.get_double("n");
    c.medium = Medium::constant(c.n);
  }
  const double sx = cfg.get_double("sigma_x_nm");
  if (!(sx > 0.0)) throw BadConfig("sigma_x_nm must be positive");
  c.sigma = units::sigma_from_width_nm(sx);
  return c;
}

struct SliceParams {
  double p_perp = 1.0e-5;
  double ratio = 0.99;
  double pprime_z = 0.0;
  Configuration config = Configuration::plus;
  int two_lambda = +1;
  int two_lambda_prime = +1;
  int lambda_gamma = +1;
};

SliceParams parse_slice(const Config& cfg, double beta) {
  SliceParams s;
  s.p_perp = cfg.get_double("p_perp", 1.0e-5);
  s.ratio = cfg.get_double("pprime_perp_ratio", 0.99);
  s.pprime_z = cfg.get_double("pprime_z_frac", 0.9) * beta;
  const std::string c = cfg.get_string("configuration", "plus");
  if (c == "plus") s.config = Configuration::plus;
  else if (c == "minus") s.config = Configuration::minus;
  else throw BadConfig("configuration must be plus or minus");
  s.two_lambda = cfg.get_int("two_lambda", +1);
  s.two_lambda_prime = cfg.get_int("two_lambda_prime", +1);
  s.lambda_gamma = cfg.get_int("lambda_gamma", +1);
  return s;
}

struct Prepared {
  std::vector<Column> schema; //!< names/units, values empty
  std::vector<double> grid;
  std::function<std::pair<std::vector<double>, unsigned>(double)> row;
};

// --------------------------------------------------- timescales scenario ---

Prepared prepare_timescales(const Config& cfg) {
  const CommonParams c = parse_common(cfg);
  const std::string sweep = cfg.get_string("sweep", "theta");
  Prepared p;
  if (sweep == "theta") {
    p.grid = make_grid(cfg.get_double("sweep_min_deg"),
                       cfg.get_double("sweep_max_deg"),
                       cfg.get_int("sweep_count", 200));
    p.schema.push_back({"theta", "deg", {}});
  } else if (sweep == "n") {
    p.grid = make_grid(cfg.get_double("sweep_min"), cfg.get_double("sweep_max"),
                       cfg.get_int("sweep_count", 200));
    p.schema.push_back({"n", "", {}});
  } else if (sweep == "omega") {
    p.grid = make_grid(cfg.get_double("sweep_min_ev"),
                       cfg.get_double("sweep_max_ev"),
                       cfg.get_int("sweep_count", 200));
    p.schema.push_back({"omega", "eV", {}});
  } else {
    throw BadConfig("timescales sweep must be theta, n or omega");
  }
  const double theta_fixed = deg2rad(cfg.get_double("theta_deg", 0.0));
  for (const char* name :
       {"t_d", "t_d_ps", "t_d_forward", "sigma_x0_nm", "sigma_t0_as",
        "theta_mach_deg", "theta_ch_deg", "theta_ch_recoil_deg",
        "theta_inf_lo_deg", "theta_inf_hi_deg", "formation_um", "tau_d_sq"})
    p.schema.push_back({name,
                        std::string(name) == "t_d" ||
                                std::string(name) == "t_d_forward"
                            ? "tc"
                            : "",
                        {}});

  p.row = [c, sweep, theta_fixed](double x) {
    double theta = theta_fixed, n = c.n, omega = c.omega;
    double sweep_out = x;
    if (sweep == "theta") theta = deg2rad(x);
    else if (sweep == "n") n = x;
    else omega = units::energy_eV_to_natural(x);
    const TimescaleReport r =
        timescale_report(c.beta, n, theta, c.sigma, omega);
    std::vector<double> row = {
        sweep_out,
        r.t_d,
        units::time_natural_to_ps(r.t_d),
        r.t_d_forward,
        units::length_natural_to_nm(r.sigma_x0),
        units::time_natural_to_as(r.sigma_t0),
        rad2deg(r.theta_mach),
        rad2deg(r.theta_ch),
        rad2deg(r.theta_ch_recoil),
        rad2deg(r.theta_inf_lo),
        rad2deg(r.theta_inf_hi),
        units::length_natural_to_m(r.formation) * 1.0e6,
        r.tau_d_sq};
    return std::make_pair(row, r.flags);
  };
  return p;
}

// --------------------------------------------------- correlation scenario ---

Prepared prepare_correlation(const Config& cfg) {
  const CommonParams c = parse_common(cfg);
  double theta;
  if (cfg.get_string("theta_mode", "cherenkov") == "cherenkov")
    theta = std::acos(classical_cherenkov_cos(c.beta, c.n));
  else
    theta = deg2rad(cfg.get_double("theta_deg"));
  const GeometryVectors g = GeometryVectors::from_angles(c.beta, c.n, theta);
  const double t_d =
      spreading_time(c.sigma, c.omega, c.gamma, c.n, g);
  const double tprime = cfg.get_double("tprime_factor", 50.0) * std::abs(t_d);
  double theta_mach = nan_d;
  try {
    theta_mach = mach_angle(theta, c.n, g);
  } catch (const MachUndefined&) {
  }

  Prepared p;
  p.grid = make_grid(cfg.get_double("sweep_min_deg", 1.0),
                     cfg.get_double("sweep_max_deg", 179.0),
                     cfg.get_int("sweep_count", 179));
  p.schema = {{"theta_R", "deg", {}},
              {"r_eff", "nm", {}},
              {"r_eff_over_upt", "", {}},
              {"theta_mach", "deg", {}},
              {"tprime", "tc", {}}};
  p.row = [c, g, tprime, theta_mach](double thr_deg) {
    const double thr = deg2rad(thr_deg);
    const Eigen::Vector3d n_hat(std::sin(thr), 0.0, std::cos(thr));
    const double r_eff = effective_correlation_radius(
        n_hat, tprime, c.sigma, c.omega, c.gamma, c.n, g);
    std::vector<double> row = {thr_deg, units::length_natural_to_nm(r_eff),
                               r_eff / (c.beta * tprime),
                               rad2deg(theta_mach), tprime};
    return std::make_pair(row, 0u);
  };
  return p;
}

// ------------------------------------------------------ arrival scenario ---

Prepared prepare_arrival(const Config& cfg) {
  const CommonParams c = parse_common(cfg);
  const SliceParams s = parse_slice(cfg, c.beta);
  const std::string sweep = cfg.get_string("sweep", "theta");
  const double theta_fixed = deg2rad(cfg.get_double("theta_deg", 10.0));

  Prepared p;
  if (sweep == "theta") {
    p.grid = make_grid(cfg.get_double("sweep_min_deg"),
                       cfg.get_double("sweep_max_deg"),
                       cfg.get_int("sweep_count", 500));
    p.schema.push_back({"theta", "deg", {}});
  } else if (sweep == "n") {
    p.grid = make_grid(cfg.get_double("sweep_min"), cfg.get_double("sweep_max"),
                       cfg.get_int("sweep_count", 300));
    p.schema.push_back({"n", "", {}});
  } else {
    throw BadConfig("arrival sweep must be theta or n");
  }
  for (const auto& [name, unit] :
       std::vector<std::pair<const char*, const char*>>{
           {"allowed", ""},
           {"delta_t", "as"},
           {"sigma_t", "as"},
           {"t_d", "ps"},
           {"theta_ch", "deg"},
           {"zeta", "rad"},
           {"mod_sq", ""},
           {"delta_e", "me"}})
    p.schema.push_back({name, unit, {}});

  p.row = [c, s, sweep, theta_fixed](double x) {
    double theta = theta_fixed, n = c.n;
    if (sweep == "theta") theta = deg2rad(x);
    else n = x;
    const Medium medium = Medium::constant(n);
    unsigned flags = 0;

    // geometry track: packet-spreading scales for the beta-along-z packet
    const GeometryVectors g = GeometryVectors::from_angles(c.beta, n, theta);
    const double q1 = inv_spreading_time(c.sigma, c.omega, c.gamma, n, g);
    const double sigma_t =
        units::time_natural_to_as(flash_sigma_t(0.0, c.sigma, q1, g));
    const double t_d_ps = units::time_natural_to_ps(1.0 / q1);
    const Eigen::Vector3d l0 = l0_vector(g);
    double theta_ch = nan_d;
    try {
      theta_ch = rad2deg(std::acos(classical_cherenkov_cos(c.beta, n)));
    } catch (const NoCherenkov&) {
      flags |= row_no_cherenkov;
    }

    // amplitude track: transverse-triangle slice at this angle
    const double k_perp = n * c.omega * std::sin(theta);
    const double k_z = n * c.omega * std::cos(theta);
    double allowed = 0.0, delta_t = nan_d, zeta = nan_d, mod_sq = nan_d,
           delta_e = nan_d;
    if (TriangleGeometry::closes(s.p_perp, s.ratio * s.p_perp, k_perp)) {
      allowed = 1.0;
      const TriangleGeometry tri =
          TriangleGeometry::make(s.p_perp, s.ratio * s.p_perp, k_perp);
      const EmissionKinematics kin = EmissionKinematics::from_triangle(
          tri, s.config, 0.0, s.pprime_z, k_z, s.two_lambda,
          s.two_lambda_prime, s.lambda_gamma, medium);
      const Amplitude amp = transition_amplitude(kin);
      zeta = amp.zeta_fi;
      mod_sq = amp.mod_sq;
      delta_e = kin.delta_e;
      try {
        const PhaseGradient pg = phase_gradient(kin, medium);
        if (!pg.consistent) flags |= row_gradient_bad;
        delta_t = units::time_natural_to_as(l0.dot(pg.grad));
      } catch (const DegenerateAxis&) {
        flags |= row_degenerate;
      }
    } else {
      flags |= row_forbidden;
    }

    std::vector<double> row = {x,       allowed, delta_t, sigma_t, t_d_ps,
                               theta_ch, zeta,    mod_sq,  delta_e};
    return std::make_pair(row, flags);
  };
  return p;
}

// -------------------------------------------------- wigner_scan scenario ---

Prepared prepare_wigner_scan(const Config& cfg, const SweepOptions& opt) {
  const CommonParams c = parse_common(cfg);
  const SliceParams s = parse_slice(cfg, c.beta);
  const double theta = deg2rad(cfg.get_double("theta_deg"));

  const double k_perp = c.n * c.omega * std::sin(theta);
  const double k_z = c.n * c.omega * std::cos(theta);
  if (!TriangleGeometry::closes(s.p_perp, s.ratio * s.p_perp, k_perp))
    throw BadConfig("wigner_scan: transverse triangle does not close at "
                    "theta_deg");
  const TriangleGeometry tri =
      TriangleGeometry::make(s.p_perp, s.ratio * s.p_perp, k_perp);
  const EmissionKinematics kin = EmissionKinematics::from_triangle(
      tri, s.config, 0.0, s.pprime_z, k_z, s.two_lambda, s.two_lambda_prime,
      s.lambda_gamma, c.medium);

  const GeometryVectors g = GeometryVectors::from_kinematics(kin);
  const PhaseGradient pg = phase_gradient(kin, c.medium);
  const double q1 = inv_spreading_time(c.sigma, kin.photon.omega, kin.eps(),
                                       kin.photon.n, g);
  const double sigma_t_pred = flash_sigma_t(0.0, c.sigma, q1, g);

  Eigen::Vector3d r;
  if (cfg.has("r_x_nm") || cfg.has("r_y_nm") || cfg.has("r_z_nm")) {
    r = Eigen::Vector3d(
        units::length_nm_to_natural(cfg.get_double("r_x_nm", 0.0)),
        units::length_nm_to_natural(cfg.get_double("r_y_nm", 0.0)),
        units::length_nm_to_natural(cfg.get_double("r_z_nm", 0.0)));
  } else {
    // Place the point on the flash centroid: the phase gradient displaces
    // the envelope centre off the classical ray by -grad(zeta), which can
    // exceed the packet width.
    const double dist =
        units::length_nm_to_natural(cfg.get_double("auto_r_dist_nm", 5000.0));
    r = dist * kin.photon.group_velocity().normalized() - pg.grad;
  }
  const double t0_pred = arrival_time(r, pg.grad, g);

  double t_center = t0_pred;
  if (cfg.has("t_center") && cfg.get_string("t_center") != "auto")
    t_center = cfg.get_double("t_center");
  const double span = cfg.get_double("t_span_sigmas", 2.5) * sigma_t_pred;
  const int count = cfg.get_int("t_count", 41);

  const GaussianPacket packet{kin.electron_in.p, c.sigma};
  QuadratureOptions qopt;
  qopt.rel_tol = opt.rel_tol;

  Prepared p;
  p.grid = make_grid(t_center - span, t_center + span, count);
  p.schema = {{"t", "tc", {}},    {"t_minus_t0", "as", {}},
              {"w", "", {}},      {"integral", "", {}},
              {"prefactor", "", {}}, {"t0_pred", "tc", {}},
              {"sigma_t_pred", "as", {}}};
  const Medium medium = c.medium;
  p.row = [r, kin, packet, medium, qopt, t0_pred, sigma_t_pred](double t) {
    const WignerSample w = wigner_point(r, t, kin, packet, medium, qopt);
    std::vector<double> row = {
        t,
        units::time_natural_to_as(t - t0_pred),
        w.value,
        w.integral,
        w.prefactor,
        t0_pred,
        units::time_natural_to_as(sigma_t_pred)};
    return std::make_pair(row, w.flags);
  };
  return p;
}

Prepared prepare(const Config& cfg, const SweepOptions& opt) {
  const std::string scenario = cfg.get_string("scenario");
  if (scenario == "timescales") return prepare_timescales(cfg);
  if (scenario == "correlation") return prepare_correlation(cfg);
  if (scenario == "arrival") return prepare_arrival(cfg);
  if (scenario == "wigner_scan") return prepare_wigner_scan(cfg, opt);
  throw BadConfig("unknown scenario: " + scenario);
}

} // namespace

bool ResultTable::any_not_converged() const {
  return std::any_of(flags.begin(), flags.end(), [](unsigned f) {
    return (f & row_not_converged) != 0;
  });
}

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw BadConfig("format must be csv or json");
}

ResultTable run_scenario(const Config& cfg, const SweepOptions& opt) {
  Prepared prep = prepare(cfg, opt);
  const std::size_t n = prep.grid.size();
  std::vector<std::pair<std::vector<double>, unsigned>> rows(n);

  const int jobs = std::clamp(opt.jobs, 1, 64);
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::string err_msg;
  std::atomic<bool> failed{false};

  auto work = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n || failed.load()) break;
      try {
        rows[i] = prep.row(prep.grid[i]);
      } catch (const std::exception& ex) {
        const std::lock_guard<std::mutex> lock(err_mutex);
        if (!failed.exchange(true)) err_msg = ex.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  if (failed.load()) throw Error("sweep row failed: " + err_msg);

  ResultTable table;
  table.columns = std::move(prep.schema);
  for (auto& col : table.columns) col.values.reserve(n);
  table.flags.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& [vals, f] = rows[i];
    if (vals.size() != table.columns.size())
      throw Error("internal: row width mismatch");
    for (std::size_t j = 0; j < vals.size(); ++j)
      table.columns[j].values.push_back(vals[j]);
    table.flags.push_back(f);
  }

  char hash_buf[32];
  std::snprintf(hash_buf, sizeof hash_buf, "%016llx",
                static_cast<unsigned long long>(cfg.fnv1a()));
  table.provenance = {
      std::string("generator = chwig ") + version_string,
      std::string("config_fnv1a = ") + hash_buf,
      std::string("rel_tol = ") + fmt_g17(opt.rel_tol),
      std::string("scenario = ") + cfg.get_string("scenario"),
  };
  return table;
}

void validate_scenario(const Config& cfg) {
  SweepOptions opt;
  Prepared prep = prepare(cfg, opt);
  if (prep.grid.empty()) throw BadConfig("empty sweep grid");
  (void)prep.row(prep.grid.front());
}

void write_csv(std::ostream& out, const ResultTable& table) {
  for (const auto& line : table.provenance) out << "# " << line << "\n";
  bool first = true;
  for (const auto& col : table.columns) {
    if (!first) out << ",";
    first = false;
    const std::string header =
        col.unit.empty() ? col.name : col.name + "[" + col.unit + "]";
    out << csv_escape(header);
  }
  out << ",flags\n";
  for (std::size_t i = 0; i < table.rows(); ++i) {
    for (const auto& col : table.columns) {
      const double v = col.values[i];
      if (std::isfinite(v)) out << csv_escape(fmt_g17(v));
      out << ",";
    }
    out << table.flags[i] << "\n";
  }
}

void write_json(std::ostream& out, const ResultTable& table) {
  nlohmann::json j;
  j["provenance"] = table.provenance;
  j["columns"] = nlohmann::json::array();
  for (const auto& col : table.columns) {
    nlohmann::json jc;
    jc["name"] = col.name;
    jc["unit"] = col.unit;
    nlohmann::json vals = nlohmann::json::array();
    for (const double v : col.values) {
      if (std::isfinite(v)) vals.push_back(v);
      else vals.push_back(nullptr);
    }
    jc["values"] = std::move(vals);
    j["columns"].push_back(std::move(jc));
  }
  j["flags"] = table.flags;
  out << j.dump(2) << "\n";
}

} // namespace chwig
