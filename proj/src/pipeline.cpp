#include "qlbm/pipeline.hpp"

#include "qlbm/lbm.hpp"
#include "qlbm/statevector.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qlbm {

namespace {

using Flat = Eigen::ArrayXd;

Flat flat(Field<double> const &f) { return Eigen::Map<Eigen::ArrayXd const>(f.data(), f.size()); }

Field<double> unflat(Eigen::ArrayXd const &a, Eigen::Index nx, Eigen::Index ny)
{
  return Eigen::Map<Field<double> const>(a.data(), ny, nx);
}

/// Largest |amplitude * ||lambda|| / constant - expected| over the listed blocks.
double deviation(Statevector const &state, RegisterLayout const &layout, double scale,
                 std::vector<std::pair<int, Flat>> const &expected)
{
  double worst = 0.0;
  for (auto const &[blk, want] : expected) {
    Flat const got = read_slice(state, blk, layout) * scale;
    worst = std::max(worst, (got - want).abs().maxCoeff());
  }
  return worst;
}

double good_branch(Statevector const &state, RegisterLayout const &layout)
{
  std::array<int, 2> const anc{layout.a1(), layout.a2()};
  std::array<int, 2> const zero{0, 0};
  return branch_probability(state, std::span<int const>(anc), std::span<int const>(zero));
}

} // namespace

QuantumStepResult run_timestep(Field<double> const &omega, Field<double> const &psi, Field<double> const &u,
                               Field<double> const &v, SimConfig const &cfg, StepOptions const &options)
{
  auto const layout = RegisterLayout::for_grid(omega.cols(), omega.rows());
  auto const nx = layout.nx(), ny = layout.ny();
  if (psi.rows() != ny || psi.cols() != nx || u.rows() != ny || u.cols() != nx || v.rows() != ny || v.cols() != nx) {
    throw std::invalid_argument("run_timestep: field shapes differ");
  }

  QuantumStepResult result;
  auto const        wall = lbm::wall_vorticity(psi, cfg);
  if ((omega == 0.0).all() && (psi == 0.0).all() && (wall == 0.0).all()) {
    result.omega = omega;
    result.psi = psi;
    result.trivial = true;
    return result;
  }

  auto const lambda = assemble_lambda(omega, psi, cfg);
  auto const blocks = build_diagonal(u, v, cfg);
  result.lambda_norm = lambda.norm;

  Statevector state(layout.total_qubits());
  std::vector<int> main;
  for (int q = 0; q < layout.main_qubits(); ++q) { main.push_back(q); }
  Circuit const encode{prepare(main, lambda.entries)};

  // Classical images of each stage.
  DistributionSet<double> fhat, ghat, fs, gs;
  Field<double>           omega_sum, psi_sum, omega_new, psi_new;
  if (options.check_stages) {
    auto const f0 = lbm::equilibrium_f(omega, u, v, cfg);
    auto const g0 = lbm::equilibrium_g(psi);
    std::tie(fhat, ghat) = lbm::collide(f0, g0, omega, psi, u, v, cfg);
    fs = lbm::stream(fhat);
    gs = lbm::stream(ghat);
    std::tie(omega_sum, psi_sum) = lbm::macros(fs, gs);
    auto [fb, gb] = lbm::apply_boundaries(fs, gs, psi, cfg);
    std::tie(omega_new, psi_new) = lbm::macros(fb, gb);
  }

  auto distribution_blocks = [&](DistributionSet<double> const &f, DistributionSet<double> const &g) {
    std::vector<std::pair<int, Flat>> e;
    for (int a = 0; a < LatticeSpec::kLinks; ++a) {
      e.emplace_back(readout::kCollidedF + a, flat(f[a]));
      e.emplace_back(readout::kCollidedG + a, flat(g[a]));
    }
    return e;
  };

  struct Stage
  {
    char const                       *name;
    Circuit                           circuit;
    double                            constant;
    std::vector<std::pair<int, Flat>> expected;
    std::vector<std::pair<int, Flat>> wall; // carried at its own constant
    double                            wall_constant;
  };

  std::vector<Stage> stages;
  stages.push_back({"encode", encode, 1.0, {}, {}, 1.0});
  stages.push_back({"collision", collision_circuit(blocks), prefactor::kCollision, {}, {}, prefactor::kWallAfterCollision});
  stages.push_back({"propagation", propagation_circuit(layout), prefactor::kPropagation, {}, {}, prefactor::kWallAfterCollision});
  stages.push_back({"macros", macros_circuit(layout), prefactor::kMacros, {}, {}, prefactor::kWallAfterCollision});
  stages.push_back({"boundary", boundary_circuit(layout), prefactor::kBoundary, {}, {}, 1.0});
  if (options.check_stages) {
    stages[0].expected.emplace_back(block::kF, flat(omega));
    stages[0].expected.emplace_back(block::kG, flat(psi));
    stages[0].expected.emplace_back(block::kWall, flat(wall));
    stages[1].expected = distribution_blocks(fhat, ghat);
    stages[1].wall.emplace_back(readout::kWallAfterCollision, flat(wall));
    stages[2].expected = distribution_blocks(fs, gs);
    stages[2].wall.emplace_back(readout::kWallAfterCollision, flat(wall));
    stages[3].expected.emplace_back(readout::kOmegaAfterMacros, flat(omega_sum));
    stages[3].expected.emplace_back(readout::kPsiAfterMacros, flat(psi_sum));
    stages[3].wall.emplace_back(readout::kWallAfterCollision, flat(wall));
    stages[4].expected.emplace_back(readout::kOmegaFinal, flat(omega_new));
    stages[4].expected.emplace_back(readout::kPsiFinal, flat(psi_new));
  }

  for (auto const &stage : stages) {
    apply_circuit(state, stage.circuit);
    StageReport r;
    r.name = stage.name;
    r.gates = count_gates(stage.circuit);
    r.constant = stage.constant;
    r.branch_probability = good_branch(state, layout);
    if (options.check_stages) {
      r.max_deviation = std::max(deviation(state, layout, lambda.norm / stage.constant, stage.expected),
                                 deviation(state, layout, lambda.norm / stage.wall_constant, stage.wall));
    } else {
      r.max_deviation = -1.0;
    }
    result.stages.push_back(std::move(r));
  }

  std::array<int, 2> const anc{layout.a1(), layout.a2()};
  std::array<int, 2> const zero{0, 0};
  double const p = project_ancilla(state, std::span<int const>(anc), std::span<int const>(zero));
  if (p < 1e-12) { throw std::runtime_error("run_timestep: post-selection probability " + std::to_string(p) + " below 1e-12"); }
  result.success_probability = p;
  double const scale = std::sqrt(p) * lambda.norm / prefactor::kBoundary;
  result.omega = unflat(read_slice(state, readout::kOmegaFinal, layout) * scale, nx, ny);
  result.psi = unflat(read_slice(state, readout::kPsiFinal, layout) * scale, nx, ny);
  return result;
}

} // namespace qlbm
