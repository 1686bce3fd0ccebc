#pragma once

//! Refractive medium: either a constant index or a tabulated n(omega)
//! interpolated with a monotone (PCHIP) cubic.  Frequencies are in natural
//! units everywhere in this interface; table files are in eV for
//! convenience and converted on load.

#include <memory>
#include <string>
#include <vector>

#include "chwig/errors.hpp"

namespace chwig {

class Medium {
public:
  //! Non-dispersive medium with constant index n > 0.
  static Medium constant(double n);

  //! Tabulated medium.  omega_eV must be strictly increasing with at least
  //! four points; n_values must be positive.
  static Medium tabulated(std::vector<double> omega_eV,
                          std::vector<double> n_values);

  //! Load a two-column (omega_eV  n) whitespace-separated table.  Blank
  //! lines and text after '#' are ignored.
  static Medium from_file(const std::string& path);

  //! n(omega); omega in natural units.  Throws OutOfTableRange for
  //! tabulated media if omega is outside the table.
  double refractive_index(double omega) const;

  //! dn/domega by central finite difference on the interpolant (0 for a
  //! constant medium); omega in natural units.
  double dn_domega(double omega) const;

  //! Dimensionless dispersion strength (omega/n) dn/domega.
  double dispersion_metric(double omega) const;

  //! True when |dispersion_metric| <= threshold (default 0.1), i.e. the
  //! non-dispersive formulas can be trusted at this frequency.
  bool weakly_dispersive(double omega, double threshold = 0.1) const;

  bool is_constant() const { return constant_; }
  //! Table range in natural units (0 / +inf for constant media).
  double omega_min() const { return lo_; }
  double omega_max() const { return hi_; }

private:
  Medium() = default;

  bool constant_ = true;
  double n_const_ = 1.0;
  double lo_ = 0.0;
  double hi_ = 0.0;
  // pimpl keeps boost out of this header
  struct Table;
  std::shared_ptr<const Table> table_;
};

} // namespace chwig
