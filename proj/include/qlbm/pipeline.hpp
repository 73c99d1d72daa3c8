#pragma once

#include "qlbm/circuit.hpp"
#include "qlbm/circuits.hpp"
#include "qlbm/lattice.hpp"

#include <string>
#include <vector>

namespace qlbm {

/// Per-stage record of one quantum time step.
struct StageReport
{
  std::string name;
  GateCounts  gates{};
  double      constant = 1.0;        // cumulative scalar on the tracked blocks
  double      branch_probability = 1.0; // weight of a1 = a2 = 0 after the stage
  double      max_deviation = 0.0;   // against the classical stage, field units; -1 if unchecked
};

struct StepOptions
{
  bool check_stages = true;
};

struct QuantumStepResult
{
  Field<double>            omega;
  Field<double>            psi;
  double                   lambda_norm = 0.0;
  double                   success_probability = 1.0;
  bool                     trivial = false; // all-zero input, nothing encoded
  std::vector<StageReport> stages;
};

/// One time step on the simulated register: encode, collide, stream, sum,
/// impose walls, post-select a1 = a2 = 0 and rescale blocks 0 and 1.
/// Velocities are left to the caller.
QuantumStepResult run_timestep(Field<double> const &omega, Field<double> const &psi, Field<double> const &u,
                               Field<double> const &v, SimConfig const &cfg, StepOptions const &options = {});

} // namespace qlbm
