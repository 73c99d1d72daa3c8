#include "qlbm/gate_count.hpp"

#include "qlbm/circuits.hpp"

#include <stdexcept>

namespace qlbm {

namespace {

std::int64_t count_mcx(Circuit const &c) { return static_cast<std::int64_t>(count_of(count_gates(c), GateKind::MCX)); }

} // namespace

std::int64_t prep_cnot_bound(int n)
{
  if (n < 1 || n > 30) { throw std::invalid_argument("prep_cnot_bound: n out of range"); }
  std::int64_t const p2 = std::int64_t{1} << n;
  return 2 * p2 * p2 - (2 * n + 3) * p2 + 2 * n;
}

std::int64_t diagonal_cnot_count(int n)
{
  if (n < 1 || n > 60) { throw std::invalid_argument("diagonal_cnot_count: n out of range"); }
  return 2 * (std::int64_t{1} << n);
}

GateAccounting gate_count_report(int n_main_qubits)
{
  int const position = n_main_qubits - RegisterLayout::kBlockQubits;
  if (position < 2 || n_main_qubits > 30) {
    throw std::invalid_argument("gate_count_report: need 7 <= n <= 30 main qubits");
  }
  GateAccounting r;
  r.main_qubits = n_main_qubits;
  r.x_qubits = (position + 1) / 2;
  r.y_qubits = position / 2;
  r.prep_cnot_bound = prep_cnot_bound(n_main_qubits);
  r.diagonal_cnot = diagonal_cnot_count(n_main_qubits);

  RegisterLayout const layout{r.x_qubits, r.y_qubits};
  RegisterLayout const wider{r.x_qubits + 1, r.y_qubits + 1};
  r.propagation_mcx = count_mcx(propagation_circuit(layout));
  r.propagation_mcx_per_register_qubit = count_mcx(propagation_circuit(wider)) - r.propagation_mcx;
  r.macros_gates = static_cast<std::int64_t>(macros_circuit(layout).size());
  r.boundary_gates = static_cast<std::int64_t>(boundary_circuit(layout).size());
  // The collision circuit needs a velocity field only for its diagonal entries.
  DiagonalBlocks blocks;
  blocks.layout = layout;
  blocks.assembled = Eigen::ArrayXd::Zero(RegisterLayout::kBlocks * layout.cells());
  r.collision_gates = static_cast<std::int64_t>(collision_circuit(blocks).size());
  return r;
}

} // namespace qlbm
