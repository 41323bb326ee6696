// Copyright 2026 The rsa-mf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace rsa::cli {

enum class Command { solve, sweep, phase_lines, jump, critical_c, lambda0, svmc_check, ed_scaling };
enum class Format { csv, json };

const char* to_string(Command c) noexcept;
std::optional<Command> command_from_string(const std::string& s);

/// Bad flag, unknown key, out-of-range value or missing field. Exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exit code 4.
class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  Command command = Command::solve;

  int p = 3;
  double c = 0.8;
  std::string field = "none";  // none | bimodal | gaussian
  double h0 = 0.5;
  double sigma = 1.0;
  int nodes = 64;
  std::optional<double> nu;

  double s = 0.5;       // solve, lambda0 candidates
  double lambda = 0.5;  // solve, sweep, ed-scaling
  double s_min = 0.0;
  double s_max = 1.0;
  double s_step = 0.002;
  double lambda_min = 0.0;
  double lambda_max = 1.0;
  double lambda_step = 0.005;
  double s_tol = 1e-10;
  double jump_threshold = 1e-3;
  double beta = std::numeric_limits<double>::infinity();

  double c_lo = 0.5;
  double c_hi = 1.0;
  double width = 1e-3;
  std::vector<double> betas{1e2, 1e3, 1e4, 1e6};
  std::vector<int> sizes{40, 80, 160};
  long cap = 5000;

  std::string output;  // empty writes to stdout
  Format format = Format::csv;
  int workers = 1;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

using KeyValues = std::map<std::string, std::string>;

/// Defaults for keys the user did not set; they depend on the command.
RunConfig defaults_for(Command command);

/// Builds a validated config; keys not listed in config_keys() are rejected.
RunConfig config_from_keys(const KeyValues& kv);

/// Every key accepted by config files, flags (with '_' written as '-') and
/// emitted metadata.
const std::vector<std::string>& config_keys();

/// The config as key/value pairs, in a fixed order. Output location and
/// worker count are execution details and are left out.
std::vector<std::pair<std::string, std::string>> to_keys(const RunConfig& config);

/// Argument parsing: `rsa-mf <command> [--key value ...] [--config file.json]`.
/// Flags override file values; RSA_MF_WORKERS overrides the worker count.
/// Returns nullopt when help was printed.
std::optional<RunConfig> parse_args(int argc, const char* const* argv);

/// Config file: one flat JSON object.
KeyValues read_config_file(const std::string& path);

/// Reconstructs the config from the "# key=value" block of an emitted CSV.
RunConfig parse_metadata(const std::string& csv_text);

using Cell = std::variant<double, long, std::string>;

struct Table {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string format_number(double v);
std::string render_csv(const Table& table);
std::string render_json(const Table& table);

/// Runs the command through the C interface.
Table run(const RunConfig& config);

/// Writes the rendered table to config.output (stdout when empty).
void emit(const Table& table, const RunConfig& config);

}  // namespace rsa::cli
