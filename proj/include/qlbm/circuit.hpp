#pragma once

#include <Eigen/Core>

#include <array>
#include <complex>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace qlbm {

enum class GateKind { H, X, Swap, MCX, MCSwap, MCH, Diagonal, Prepare };

inline constexpr std::size_t kGateKindCount = 8;

std::string_view to_string(GateKind kind);

/// A control qubit; polarity 0 triggers on |0> (open circle), 1 on |1>.
struct Control
{
  int qubit;
  int polarity = 1;

  friend bool operator==(Control const &, Control const &) = default;
};

/// One gate of a circuit. Build these through the factory functions below so
/// that payload validation happens once, at construction.
struct CircuitOp
{
  GateKind             kind = GateKind::X;
  std::vector<int>     targets;
  std::vector<Control> controls;
  Eigen::VectorXcd     diagonal;   // Diagonal: 2^|targets| unit-modulus entries
  Eigen::VectorXd      amplitudes; // Prepare: 2^|targets| real entries, not normalized
};

using Circuit = std::vector<CircuitOp>;

// Factories. Controlled variants are chosen from the presence of controls:
// hadamard() yields H or MCH, pauli_x() yields X or MCX, swap() yields SWAP or MCSwap.
CircuitOp hadamard(int target, std::vector<Control> controls = {});
CircuitOp pauli_x(int target, std::vector<Control> controls = {});
CircuitOp swap(int a, int b, std::vector<Control> controls = {});
CircuitOp diagonal(std::vector<int> targets, Eigen::VectorXcd entries, std::vector<Control> controls = {});
CircuitOp prepare(std::vector<int> targets, Eigen::VectorXd amplitudes);

/// Throws std::invalid_argument if op is not applicable to an n_qubits register.
void validate(CircuitOp const &op, int n_qubits);

/// Exact inverse: reversed order, conjugated diagonals. Prepare is not invertible.
Circuit inverse(Circuit const &circuit);

using GateCounts = std::array<std::size_t, kGateKindCount>;

GateCounts count_gates(Circuit const &circuit);
std::size_t count_of(GateCounts const &counts, GateKind kind);

/// Appends `tail` to `head`.
void append(Circuit &head, Circuit const &tail);

/// One gate per line: kind, targets, controls with polarity, payload digest.
void dump(std::ostream &os, Circuit const &circuit);
std::string dump(Circuit const &circuit);

} // namespace qlbm
