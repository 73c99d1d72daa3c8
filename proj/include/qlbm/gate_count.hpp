#pragma once

#include <cstdint>

namespace qlbm {

/// Resource accounting for an n-qubit main register. The closed forms are
/// the textbook bounds for a generic amplitude loader and a generic diagonal;
/// the remaining counts come from the circuits this library builds.
struct GateAccounting
{
  int           main_qubits = 0;
  int           x_qubits = 0;
  int           y_qubits = 0;
  std::int64_t  prep_cnot_bound = 0; // 2*4^n - (2n+3)*2^n + 2n
  std::int64_t  diagonal_cnot = 0;   // 2*2^n
  std::int64_t  propagation_mcx = 0;
  std::int64_t  propagation_mcx_per_register_qubit = 0; // growth when x and y both gain a qubit
  std::int64_t  macros_gates = 0;
  std::int64_t  boundary_gates = 0;
  std::int64_t  collision_gates = 0;
};

std::int64_t prep_cnot_bound(int n);
std::int64_t diagonal_cnot_count(int n);

/// n >= 7 (five block qubits plus at least one per axis); the position
/// qubits are split as evenly as possible, x taking the odd one.
GateAccounting gate_count_report(int n_main_qubits);

} // namespace qlbm
