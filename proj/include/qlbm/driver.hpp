#pragma once

#include "qlbm/lattice.hpp"
#include "qlbm/pipeline.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qlbm {

enum class Mode { Quantum, Classical, Both };

std::string to_string(Mode m);
Mode        parse_mode(std::string const &s);

struct RunConfig
{
  SimConfig             sim;
  Mode                  mode = Mode::Both;
  std::filesystem::path out_dir = "qlbm_out";
  int                   dump_every = 0; // 0: final step only
  bool                  compare = false;
  double                threshold = 1e-8; // L-inf relative, --compare
  bool                  check_stages = true;
};

struct ConfigError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

/// Command-line arguments (without the program and subcommand names). A
/// `--config FILE` JSON object supplies values that explicit flags override.
RunConfig load_config(std::vector<std::string> const &args);

/// Throws ConfigError on an inconsistent configuration.
void validate(RunConfig const &cfg);

struct FieldError
{
  double linf = 0.0;
  double l2 = 0.0;
};

/// max|a - b| / max(max|b|, 1e-300) and ||a - b||_2 / max(||b||_2, 1e-300).
FieldError compare_fields(Field<double> const &a, Field<double> const &b);

struct StepComparison
{
  int        step = 0;
  FieldError omega, psi, u, v;

  double worst() const;
};

struct Snapshot
{
  int           step = 0;
  Field<double> omega, psi, u, v;
};

struct ComparisonReport
{
  RunConfig                   config;
  std::vector<StepComparison> errors;        // both mode, every step
  std::vector<double>         probabilities; // quantum success probability per step
  double                      max_stage_deviation = 0.0;
  std::vector<StageReport>    last_stages;
  double                      residual_omega = 0.0; // max |x_n - x_{n-1}| at the last step
  double                      residual_psi = 0.0;
  double                      max_linf = 0.0;
  bool                        within_threshold = true;

  std::vector<Snapshot> quantum;   // dumped steps
  std::vector<Snapshot> classical; // dumped steps
};

ComparisonReport run_simulation(RunConfig const &cfg);

/// Writes the dumped fields (quantum into out_dir, classical into
/// out_dir/classical in both mode, else into out_dir) and report.json.
void emit_outputs(ComparisonReport const &report);

std::string report_json(ComparisonReport const &report);

} // namespace qlbm
