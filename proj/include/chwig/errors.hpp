#pragma once

#include <stdexcept>
#include <string>

namespace chwig {

//! Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

//! Transverse momentum magnitudes cannot close into a triangle.
struct InvalidTriangle : Error {
  using Error::Error;
};

//! beta*n <= 1: no Cherenkov emission cone exists for these parameters.
struct NoCherenkov : Error {
  using Error::Error;
};

//! |sin(theta)| / (n |u_k - u_p|) > 1: the shock-front angle is undefined.
struct MachUndefined : Error {
  using Error::Error;
};

//! Frequency outside the tabulated refractive-index range.
struct OutOfTableRange : Error {
  using Error::Error;
};

//! Non-physical input (negative index, zero width, ...).
struct NonPhysical : Error {
  using Error::Error;
};

//! Malformed refractive-index table file.
struct BadTableFile : Error {
  using Error::Error;
};

//! Malformed or inconsistent scenario configuration.
struct BadConfig : Error {
  using Error::Error;
};

//! Momentum direction too close to the polar axis for azimuth derivatives.
struct DegenerateAxis : Error {
  using Error::Error;
};

//! Bit flags attached to sweep rows; rows are still emitted when flagged.
enum RowFlag : unsigned {
  row_ok            = 0u,
  row_forbidden     = 1u << 0, //!< outside the kinematically allowed band
  row_degenerate    = 1u << 1, //!< degenerate geometry (collinear / axis)
  row_not_converged = 1u << 2, //!< quadrature stopped at its budget
  row_mach_undef    = 1u << 3, //!< shock-front angle undefined
  row_no_cherenkov  = 1u << 4, //!< beta*n <= 1
  row_gradient_bad  = 1u << 5, //!< phase-gradient extrapolation inconsistent
  row_dispersive    = 1u << 6, //!< medium dispersion above the trust threshold
  row_helicity_sum  = 1u << 7, //!< value is a sum over final helicities
};

} // namespace chwig
