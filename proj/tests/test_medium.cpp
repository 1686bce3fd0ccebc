#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "chwig/medium.hpp"
#include "chwig/units.hpp"

using namespace chwig;

namespace {
const std::string data_dir = CHWIG_TEST_DATA_DIR;
double eV(double e) { return units::energy_eV_to_natural(e); }
// the polynomial behind glass_like_index.txt
double poly_n(double E_eV) {
  return 1.44 + 0.004 * E_eV + 0.0016 * E_eV * E_eV;
}
} // namespace

TEST_SUITE("medium") {

TEST_CASE("constant medium") {
  const Medium m = Medium::constant(1.5);
  CHECK(m.is_constant());
  CHECK(m.refractive_index(eV(2.5)) == 1.5);
  CHECK(m.dn_domega(eV(2.5)) == 0.0);
  CHECK(m.dispersion_metric(eV(2.5)) == 0.0);
  CHECK(m.weakly_dispersive(eV(2.5)));
  CHECK_THROWS_AS(Medium::constant(0.0), NonPhysical);
  CHECK_THROWS_AS(Medium::constant(-1.2), NonPhysical);
}

TEST_CASE("tabulated medium interpolates through the nodes") {
  std::vector<double> E = {1.0, 2.0, 3.0, 4.0, 5.0};
  std::vector<double> n = {1.45, 1.46, 1.48, 1.51, 1.55};
  const Medium m = Medium::tabulated(E, n);
  CHECK_FALSE(m.is_constant());
  for (std::size_t i = 0; i < E.size(); ++i)
    CHECK(m.refractive_index(eV(E[i])) == doctest::Approx(n[i]).epsilon(1e-14));
  // monotone data stays monotone between nodes (PCHIP property)
  double prev = m.refractive_index(eV(1.0));
  for (double x = 1.05; x < 5.0; x += 0.05) {
    const double cur = m.refractive_index(eV(x));
    CHECK(cur >= prev - 1e-15);
    prev = cur;
  }
}

TEST_CASE("tabulated medium input validation") {
  using V = std::vector<double>;
  CHECK_THROWS_AS(Medium::tabulated(V{1, 2, 3}, V{1.4, 1.4, 1.4}), BadTableFile);
  CHECK_THROWS_AS(Medium::tabulated(V{1, 2, 2, 4}, V{1.4, 1.4, 1.4, 1.4}),
                  BadTableFile);
  CHECK_THROWS_AS(Medium::tabulated(V{1, 2, 3, 4}, V{1.4, 1.4, -1.0, 1.4}),
                  BadTableFile);
  CHECK_THROWS_AS(Medium::tabulated(V{1, 2, 3, 4}, V{1.4, 1.4, 1.4}),
                  BadTableFile);
}

TEST_CASE("from_file parses comments and blank lines") {
  const Medium m = Medium::from_file(data_dir + "/glass_like_index.txt");
  // node values are reproduced exactly
  CHECK(m.refractive_index(eV(2.5)) == doctest::Approx(1.46).epsilon(1e-14));
  CHECK(m.refractive_index(eV(5.0)) == doctest::Approx(1.50).epsilon(1e-14));
  // between nodes the monotone cubic tracks the generating polynomial
  for (double E = 0.6; E < 5.0; E += 0.1)
    CHECK(m.refractive_index(eV(E)) ==
          doctest::Approx(poly_n(E)).epsilon(5e-4));
}

TEST_CASE("from_file rejects malformed tables") {
  CHECK_THROWS_AS(Medium::from_file(data_dir + "/bad_three_columns.txt"),
                  BadTableFile);
  CHECK_THROWS_AS(Medium::from_file(data_dir + "/does_not_exist.txt"),
                  BadTableFile);
  // the error message carries the offending line number
  try {
    Medium::from_file(data_dir + "/bad_three_columns.txt");
  } catch (const BadTableFile& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("out-of-range lookups throw") {
  const Medium m = Medium::from_file(data_dir + "/glass_like_index.txt");
  CHECK_THROWS_AS(m.refractive_index(eV(0.49)), OutOfTableRange);
  CHECK_THROWS_AS(m.refractive_index(eV(5.01)), OutOfTableRange);
  CHECK(m.omega_min() == doctest::Approx(eV(0.5)).epsilon(1e-14));
  CHECK(m.omega_max() == doctest::Approx(eV(5.0)).epsilon(1e-14));
}

TEST_CASE("derivative and dispersion metric") {
  const Medium m = Medium::from_file(data_dir + "/glass_like_index.txt");
  // dn/dE of the generating polynomial is 0.004 + 0.0032 E (per eV);
  // convert to natural frequency: dn/domega = dn/dE * dE/domega
  for (double E : {1.2, 2.5, 3.7}) {
    const double expect =
        (0.004 + 0.0032 * E) * units::electron_mass_eV; // per natural unit
    CHECK(m.dn_domega(eV(E)) == doctest::Approx(expect).epsilon(2e-2));
    const double metric = m.dispersion_metric(eV(E));
    CHECK(metric == doctest::Approx(eV(E) * m.dn_domega(eV(E)) /
                                    m.refractive_index(eV(E)))
                        .epsilon(1e-12));
  }
  // edge evaluation must not step outside the table
  CHECK(std::isfinite(m.dn_domega(m.omega_min())));
  CHECK(std::isfinite(m.dn_domega(m.omega_max())));
  // glass-like dispersion at optical energies is weak
  CHECK(m.weakly_dispersive(eV(2.5)));
  CHECK_FALSE(m.weakly_dispersive(eV(2.5), 1e-9));
}

} // TEST_SUITE
