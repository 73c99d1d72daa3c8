#include "qlbm/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qlbm {

namespace {

constexpr double kUnitModulusTolerance = 1e-12;

bool single_target(GateKind kind)
{
  return kind == GateKind::H || kind == GateKind::X || kind == GateKind::MCX || kind == GateKind::MCH;
}

std::uint64_t fnv1a(void const *data, std::size_t bytes, std::uint64_t hash = 1469598103934665603ull)
{
  auto const *p = static_cast<unsigned char const *>(data);
  for (std::size_t i = 0; i < bytes; ++i) {
    hash ^= p[i];
    hash *= 1099511628211ull;
  }
  return hash;
}

} // namespace

std::string_view to_string(GateKind kind)
{
  switch (kind) {
  case GateKind::H: return "H";
  case GateKind::X: return "X";
  case GateKind::Swap: return "SWAP";
  case GateKind::MCX: return "MCX";
  case GateKind::MCSwap: return "MCSWAP";
  case GateKind::MCH: return "MCH";
  case GateKind::Diagonal: return "DIAG";
  case GateKind::Prepare: return "PREP";
  }
  return "?";
}

CircuitOp hadamard(int target, std::vector<Control> controls)
{
  CircuitOp op;
  op.kind = controls.empty() ? GateKind::H : GateKind::MCH;
  op.targets = {target};
  op.controls = std::move(controls);
  return op;
}

CircuitOp pauli_x(int target, std::vector<Control> controls)
{
  CircuitOp op;
  op.kind = controls.empty() ? GateKind::X : GateKind::MCX;
  op.targets = {target};
  op.controls = std::move(controls);
  return op;
}

CircuitOp swap(int a, int b, std::vector<Control> controls)
{
  CircuitOp op;
  op.kind = controls.empty() ? GateKind::Swap : GateKind::MCSwap;
  op.targets = {a, b};
  op.controls = std::move(controls);
  return op;
}

CircuitOp diagonal(std::vector<int> targets, Eigen::VectorXcd entries, std::vector<Control> controls)
{
  if (targets.empty() || targets.size() >= 31) { throw std::invalid_argument("diagonal: bad target count"); }
  if (entries.size() != (Eigen::Index{1} << targets.size())) {
    throw std::invalid_argument("diagonal: payload length must be 2^targets");
  }
  for (Eigen::Index i = 0; i < entries.size(); ++i) {
    if (std::abs(std::abs(entries[i]) - 1.0) > kUnitModulusTolerance) {
      throw std::invalid_argument("diagonal: entry " + std::to_string(i) + " is not of unit modulus");
    }
  }
  CircuitOp op;
  op.kind = GateKind::Diagonal;
  op.targets = std::move(targets);
  op.controls = std::move(controls);
  op.diagonal = std::move(entries);
  return op;
}

CircuitOp prepare(std::vector<int> targets, Eigen::VectorXd amplitudes)
{
  if (targets.empty() || targets.size() >= 31) { throw std::invalid_argument("prepare: bad target count"); }
  if (amplitudes.size() != (Eigen::Index{1} << targets.size())) {
    throw std::invalid_argument("prepare: vector length must be 2^targets");
  }
  if (!amplitudes.allFinite()) { throw std::invalid_argument("prepare: non-finite entry"); }
  if (amplitudes.squaredNorm() == 0.0) { throw std::invalid_argument("prepare: zero vector"); }
  CircuitOp op;
  op.kind = GateKind::Prepare;
  op.targets = std::move(targets);
  op.amplitudes = std::move(amplitudes);
  return op;
}

void validate(CircuitOp const &op, int n_qubits)
{
  std::vector<int> used;
  used.reserve(op.targets.size() + op.controls.size());
  for (int t : op.targets) { used.push_back(t); }
  for (auto const &c : op.controls) {
    if (c.polarity != 0 && c.polarity != 1) { throw std::invalid_argument("control polarity must be 0 or 1"); }
    used.push_back(c.qubit);
  }
  for (int q : used) {
    if (q < 0 || q >= n_qubits) {
      throw std::invalid_argument("qubit index " + std::to_string(q) + " out of range for " + std::to_string(n_qubits) +
                                  "-qubit state");
    }
  }
  std::sort(used.begin(), used.end());
  if (std::adjacent_find(used.begin(), used.end()) != used.end()) {
    throw std::invalid_argument("targets and controls must be pairwise disjoint");
  }

  auto const n_targets = op.targets.size();
  if (single_target(op.kind) && n_targets != 1) { throw std::invalid_argument("single-qubit gate needs one target"); }
  if ((op.kind == GateKind::Swap || op.kind == GateKind::MCSwap) && n_targets != 2) {
    throw std::invalid_argument("swap needs two targets");
  }
  if ((op.kind == GateKind::H || op.kind == GateKind::X || op.kind == GateKind::Swap) && !op.controls.empty()) {
    throw std::invalid_argument("uncontrolled gate kind carries controls");
  }
  if (op.kind == GateKind::Diagonal) {
    if (op.diagonal.size() != (Eigen::Index{1} << n_targets)) {
      throw std::invalid_argument("diagonal payload length must be 2^targets");
    }
  }
  if (op.kind == GateKind::Prepare) {
    if (!op.controls.empty()) { throw std::invalid_argument("prepare cannot be controlled"); }
    if (op.amplitudes.size() != (Eigen::Index{1} << n_targets)) {
      throw std::invalid_argument("prepare vector length must be 2^targets");
    }
  }
}

Circuit inverse(Circuit const &circuit)
{
  Circuit out;
  out.reserve(circuit.size());
  for (auto it = circuit.rbegin(); it != circuit.rend(); ++it) {
    if (it->kind == GateKind::Prepare) { throw std::invalid_argument("inverse: state preparation is not invertible"); }
    CircuitOp op = *it;
    if (op.kind == GateKind::Diagonal) { op.diagonal = op.diagonal.conjugate(); }
    out.push_back(std::move(op));
  }
  return out;
}

GateCounts count_gates(Circuit const &circuit)
{
  GateCounts counts{};
  for (auto const &op : circuit) { ++counts[static_cast<std::size_t>(op.kind)]; }
  return counts;
}

std::size_t count_of(GateCounts const &counts, GateKind kind) { return counts[static_cast<std::size_t>(kind)]; }

void append(Circuit &head, Circuit const &tail) { head.insert(head.end(), tail.begin(), tail.end()); }

void dump(std::ostream &os, Circuit const &circuit)
{
  for (auto const &op : circuit) {
    os << to_string(op.kind) << " t=[";
    for (std::size_t i = 0; i < op.targets.size(); ++i) { os << (i ? "," : "") << op.targets[i]; }
    os << "] c=[";
    for (std::size_t i = 0; i < op.controls.size(); ++i) {
      os << (i ? "," : "") << op.controls[i].qubit << (op.controls[i].polarity ? "+" : "-");
    }
    os << "]";
    if (op.kind == GateKind::Diagonal) {
      auto const h = fnv1a(op.diagonal.data(), sizeof(std::complex<double>) * op.diagonal.size());
      os << " payload=" << op.diagonal.size() << ":" << std::hex << h << std::dec;
    } else if (op.kind == GateKind::Prepare) {
      auto const h = fnv1a(op.amplitudes.data(), sizeof(double) * op.amplitudes.size());
      os << " payload=" << op.amplitudes.size() << ":" << std::hex << h << std::dec;
    }
    os << "\n";
  }
}

std::string dump(Circuit const &circuit)
{
  std::ostringstream os;
  dump(os, circuit);
  return os.str();
}

} // namespace qlbm
