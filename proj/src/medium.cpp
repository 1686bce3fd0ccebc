#include "chwig/medium.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

// The packaged pchip header calls unqualified isnan() on doubles, which has
// no ADL namespace; make std::isnan visible to that lookup.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>

#include "chwig/units.hpp"

namespace chwig {

struct Medium::Table {
  boost::math::interpolators::pchip<std::vector<double>> spline;
  Table(std::vector<double> x, std::vector<double> y)
      : spline(std::move(x), std::move(y)) {}
};

Medium Medium::constant(double n) {
  if (!(n > 0.0) || !std::isfinite(n))
    throw NonPhysical("refractive index must be positive and finite");
  Medium m;
  m.constant_ = true;
  m.n_const_ = n;
  m.lo_ = 0.0;
  m.hi_ = std::numeric_limits<double>::infinity();
  return m;
}

Medium Medium::tabulated(std::vector<double> omega_eV,
                         std::vector<double> n_values) {
  if (omega_eV.size() != n_values.size())
    throw BadTableFile("frequency and index columns differ in length");
  if (omega_eV.size() < 4)
    throw BadTableFile("need at least four table points");
  for (std::size_t i = 0; i < omega_eV.size(); ++i) {
    if (!std::isfinite(omega_eV[i]) || !std::isfinite(n_values[i]))
      throw BadTableFile("non-finite table entry");
    if (!(omega_eV[i] > 0.0))
      throw BadTableFile("frequencies must be positive");
    if (!(n_values[i] > 0.0))
      throw BadTableFile("refractive index must be positive");
    if (i > 0 && !(omega_eV[i] > omega_eV[i - 1]))
      throw BadTableFile("frequencies must be strictly increasing");
  }
  std::vector<double> omega_nat(omega_eV.size());
  std::transform(omega_eV.begin(), omega_eV.end(), omega_nat.begin(),
                 units::energy_eV_to_natural);
  Medium m;
  m.constant_ = false;
  m.lo_ = omega_nat.front();
  m.hi_ = omega_nat.back();
  m.table_ =
      std::make_shared<const Table>(std::move(omega_nat), std::move(n_values));
  return m;
}

Medium Medium::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BadTableFile("cannot open table file: " + path);
  std::vector<double> omega, n;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto pos = line.find('#'); pos != std::string::npos)
      line.erase(pos);
    std::istringstream ss(line);
    double w, nn;
    if (!(ss >> w)) continue; // blank / comment-only line
    if (!(ss >> nn))
      throw BadTableFile(path + " line " + std::to_string(lineno) +
                         ": expected two columns");
    std::string extra;
    if (ss >> extra)
      throw BadTableFile(path + " line " + std::to_string(lineno) +
                         ": expected exactly two columns");
    omega.push_back(w);
    n.push_back(nn);
  }
  return tabulated(std::move(omega), std::move(n));
}

double Medium::refractive_index(double omega) const {
  if (constant_) return n_const_;
  if (!(omega >= lo_ && omega <= hi_))
    throw OutOfTableRange("omega outside tabulated range");
  return table_->spline(omega);
}

double Medium::dn_domega(double omega) const {
  if (constant_) return 0.0;
  if (!(omega >= lo_ && omega <= hi_))
    throw OutOfTableRange("omega outside tabulated range");
  double h = 1.0e-6 * std::max(std::abs(omega), lo_);
  // keep the central stencil inside the table
  h = std::min({h, omega - lo_, hi_ - omega});
  if (h > 0.0) {
    return (table_->spline(omega + h) - table_->spline(omega - h)) / (2.0 * h);
  }
  // at an exact table edge: second-order one-sided difference
  h = 1.0e-6 * (hi_ - lo_);
  const double s = (omega <= lo_) ? 1.0 : -1.0;
  const double f0 = table_->spline(omega);
  const double f1 = table_->spline(omega + s * h);
  const double f2 = table_->spline(omega + 2.0 * s * h);
  return s * (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h);
}

double Medium::dispersion_metric(double omega) const {
  if (constant_) return 0.0;
  return omega / refractive_index(omega) * dn_domega(omega);
}

bool Medium::weakly_dispersive(double omega, double threshold) const {
  return std::abs(dispersion_metric(omega)) <= threshold;
}

} // namespace chwig
