#pragma once

//! Scenario sweeps over angle / index / direction / time grids, with
//! deterministic parallel row evaluation and CSV/JSON serialisation.

#include <iosfwd>
#include <string>
#include <vector>

#include "chwig/config.hpp"

namespace chwig {

struct Column {
  std::string name;
  std::string unit; //!< empty for dimensionless
  std::vector<double> values;
};

struct ResultTable {
  std::vector<Column> columns;          //!< equal-length value columns
  std::vector<unsigned> flags;          //!< per-row flag bitmask
  std::vector<std::string> provenance;  //!< "key = value" comment lines
  std::size_t rows() const { return flags.size(); }
  bool any_not_converged() const;
};

enum class OutputFormat { csv, json };
OutputFormat parse_format(const std::string& name);

//! RFC-4180 CSV: provenance as leading '#' lines, header "name[unit]",
//! doubles as %.17g, NaN as empty field.
void write_csv(std::ostream& out, const ResultTable& table);
//! The same table as a JSON object; NaN becomes null.
void write_json(std::ostream& out, const ResultTable& table);

struct SweepOptions {
  int jobs = 1;
  double rel_tol = 1.0e-9;
};

//! Run the scenario described by the config ("scenario" key selects
//! timescales / correlation / arrival / wigner_scan).
ResultTable run_scenario(const Config& cfg, const SweepOptions& opt);

//! Parse and cross-check a config without running the full sweep
//! (evaluates the first row); throws BadConfig / NonPhysical on problems.
void validate_scenario(const Config& cfg);

} // namespace chwig
