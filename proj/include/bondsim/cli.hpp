#pragma once

// Experiment runner behind the `bondsim` executable.

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "bondsim/prmodel.hpp"

namespace bondsim {

// Consistency of one printed regime-table column.
struct TableCheck {
  Regime regime = Regime::kLow;
  int channel = 0;
  double on_product = 0.0;   // lambda_x * printed mean ON period
  double off_product = 0.0;  // lambda_y * printed mean OFF period
  double derived_utilization = 0.0;
  double printed_utilization = 0.0;
  bool pass = false;
};

// Checks all 60 preset columns: |lambda * T - 1| <= rate_tol for both
// periods and |derived u - printed u| <= utilization_tol.
std::vector<TableCheck> validate_tables(double rate_tol = 0.02, double utilization_tol = 0.015);

// Prints one line per check; returns true when every check passed.
bool print_table_report(std::ostream& out, std::span<const TableCheck> checks);

// Parses `key=value` lines; `#` starts a comment.
std::vector<std::pair<std::string, std::string>> read_key_value_config(std::istream& in);

/// Entry point of the command-line tool (arguments exclude the program name).
///
///   bondsim run [flags]              one simulation, human-readable report
///   bondsim sweep --out FILE [flags] CSV over channels x regimes x schemes x seeds
///   bondsim validate-tables          preset table consistency report
///
/// Returns the process exit status.
int cli_main(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace bondsim
