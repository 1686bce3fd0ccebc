#include <doctest.h>

#include "chwig/units.hpp"

using namespace chwig::units;

TEST_SUITE("units") {

TEST_CASE("anchor constants") {
  // frozen reference values (CODATA anchors and their combinations)
  CHECK(electron_mass_eV == doctest::Approx(510998.95).epsilon(1e-12));
  CHECK(hbar_eV_s == doctest::Approx(6.582119569e-16).epsilon(1e-12));
  CHECK(c_m_per_s == 2.99792458e8);
  CHECK(alpha_fs == doctest::Approx(1.0 / 137.035999).epsilon(1e-15));
  CHECK(natural_time_s ==
        doctest::Approx(1.2880886680882613e-21).epsilon(1e-12));
  CHECK(natural_length_m ==
        doctest::Approx(3.86159267928126e-13).epsilon(1e-12));
  CHECK(natural_length_nm ==
        doctest::Approx(3.86159267928126e-4).epsilon(1e-12));
}

TEST_CASE("energy round trips") {
  CHECK(energy_eV_to_natural(electron_mass_eV) == doctest::Approx(1.0).epsilon(1e-15));
  const double e = 2.5;
  CHECK(energy_natural_to_eV(energy_eV_to_natural(e)) ==
        doctest::Approx(e).epsilon(1e-14));
}

TEST_CASE("length round trips and scale") {
  CHECK(length_nm_to_natural(10.0) ==
        doctest::Approx(25896.05075038948).epsilon(1e-12));
  CHECK(length_natural_to_nm(length_nm_to_natural(7.25)) ==
        doctest::Approx(7.25).epsilon(1e-14));
  CHECK(length_m_to_natural(1e-9) ==
        doctest::Approx(length_nm_to_natural(1.0)).epsilon(1e-14));
}

TEST_CASE("time round trips and attosecond scale") {
  // one attosecond expressed in natural time units
  CHECK(time_as_to_natural(1.0) ==
        doctest::Approx(776.3440706952008).epsilon(1e-12));
  CHECK(time_natural_to_as(time_as_to_natural(3.5)) ==
        doctest::Approx(3.5).epsilon(1e-14));
  CHECK(time_natural_to_ps(time_s_to_natural(1e-12)) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(time_natural_to_fs(time_s_to_natural(2e-15)) ==
        doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("momentum width from real-space width") {
  // a 10 nm packet has sigma = 1 / (10 nm in natural lengths)
  const double s = sigma_from_width_nm(10.0);
  CHECK(s == doctest::Approx(3.86159267928126e-5).epsilon(1e-12));
  CHECK(s * length_nm_to_natural(10.0) == doctest::Approx(1.0).epsilon(1e-14));
}

} // TEST_SUITE
