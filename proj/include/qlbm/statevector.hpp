#pragma once

#include "qlbm/circuit.hpp"
#include "qlbm/register_layout.hpp"

#include <Eigen/Core>

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qlbm {

/// Dense 2^n amplitude vector. Qubit q is bit q of the basis index.
template <typename Scalar = double> class BasicStatevector
{
public:
  using Complex = std::complex<Scalar>;
  using Vector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

  static constexpr int kMaxQubits = 30;

  /// |0...0> on n qubits.
  explicit BasicStatevector(int n_qubits)
    : n_(n_qubits)
  {
    if (n_qubits < 1 || n_qubits > kMaxQubits) { throw std::invalid_argument("statevector: unsupported qubit count"); }
    amps_ = Vector::Zero(Eigen::Index{1} << n_qubits);
    amps_[0] = Complex(1);
  }

  static BasicStatevector from_amplitudes(Vector amplitudes)
  {
    auto const size = static_cast<std::uint64_t>(amplitudes.size());
    if (size < 2 || (size & (size - 1)) != 0) { throw std::invalid_argument("statevector: length must be 2^n"); }
    BasicStatevector s(std::countr_zero(size));
    s.amps_ = std::move(amplitudes);
    return s;
  }

  int qubits() const { return n_; }
  Eigen::Index size() const { return amps_.size(); }
  Vector const &amplitudes() const { return amps_; }
  Vector &amplitudes() { return amps_; }
  Complex operator[](Eigen::Index i) const { return amps_[i]; }
  Scalar norm() const { return amps_.norm(); }

private:
  int    n_;
  Vector amps_;
};

using Statevector = BasicStatevector<double>;

namespace detail {

using Index = std::uint64_t;

struct ControlMask
{
  Index mask = 0;
  Index value = 0;
};

inline ControlMask control_mask(std::vector<Control> const &controls)
{
  ControlMask m;
  for (auto const &c : controls) {
    m.mask |= Index{1} << c.qubit;
    if (c.polarity) { m.value |= Index{1} << c.qubit; }
  }
  return m;
}

/// Visits every basis index i < 2^n with (i & fixed) == value, in increasing order.
template <typename Fn> void for_each_index(int n, Index fixed, Index value, Fn &&fn)
{
  Index const free = ((Index{1} << n) - 1) & ~fixed;
  Index       s = 0;
  do {
    fn(s | value);
    s = (s - free) & free;
  } while (s != 0);
}

/// Scatters the low bits of `sub` onto the qubit positions in `targets`.
inline Index scatter(Index sub, std::vector<int> const &targets)
{
  Index out = 0;
  for (std::size_t j = 0; j < targets.size(); ++j) {
    if ((sub >> j) & 1u) { out |= Index{1} << targets[j]; }
  }
  return out;
}

inline Index gather(Index i, std::vector<int> const &targets)
{
  Index out = 0;
  for (std::size_t j = 0; j < targets.size(); ++j) { out |= ((i >> targets[j]) & 1u) << j; }
  return out;
}

} // namespace detail

template <typename Scalar> void apply_gate(BasicStatevector<Scalar> &state, CircuitOp const &op);

/// Loads `vector / ||vector||` into the `targets` register, which must be in
/// |0...0>. Returns the norm used so callers can undo the normalization.
template <typename Scalar>
Scalar prepare_amplitudes(BasicStatevector<Scalar> &state, std::span<double const> vector, std::vector<int> targets)
{
  Eigen::VectorXd v = Eigen::Map<Eigen::VectorXd const>(vector.data(), static_cast<Eigen::Index>(vector.size()));
  auto const      norm = v.norm();
  apply_gate(state, prepare(std::move(targets), std::move(v)));
  return static_cast<Scalar>(norm);
}

template <typename Scalar> void apply_gate(BasicStatevector<Scalar> &state, CircuitOp const &op)
{
  using detail::Index;
  using Complex = std::complex<Scalar>;
  validate(op, state.qubits());
  auto      &a = state.amplitudes();
  int const  n = state.qubits();
  auto const ctl = detail::control_mask(op.controls);

  switch (op.kind) {
  case GateKind::X:
  case GateKind::MCX: {
    Index const t = Index{1} << op.targets[0];
    detail::for_each_index(n, ctl.mask | t, ctl.value, [&](Index i) { std::swap(a[i], a[i | t]); });
    break;
  }
  case GateKind::H:
  case GateKind::MCH: {
    Index const  t = Index{1} << op.targets[0];
    Scalar const r = Scalar(1) / std::sqrt(Scalar(2));
    detail::for_each_index(n, ctl.mask | t, ctl.value, [&](Index i) {
      Complex const x0 = a[i];
      Complex const x1 = a[i | t];
      a[i] = r * (x0 + x1);
      a[i | t] = r * (x0 - x1);
    });
    break;
  }
  case GateKind::Swap:
  case GateKind::MCSwap: {
    Index const p = Index{1} << op.targets[0];
    Index const q = Index{1} << op.targets[1];
    detail::for_each_index(n, ctl.mask | p | q, ctl.value | p, [&](Index i) { std::swap(a[i], a[(i & ~p) | q]); });
    break;
  }
  case GateKind::Diagonal: {
    Index tmask = 0;
    for (int t : op.targets) { tmask |= Index{1} << t; }
    auto const entries = op.diagonal.template cast<Complex>().eval();
    for (Index sub = 0; sub < (Index{1} << op.targets.size()); ++sub) {
      Complex const d = entries[static_cast<Eigen::Index>(sub)];
      if (d == Complex(1)) { continue; }
      detail::for_each_index(n, ctl.mask | tmask, ctl.value | detail::scatter(sub, op.targets), [&](Index i) { a[i] *= d; });
    }
    break;
  }
  case GateKind::Prepare: {
    Index tmask = 0;
    for (int t : op.targets) { tmask |= Index{1} << t; }
    Scalar const tol = Scalar(1e-12);
    for (Index i = 0; i < static_cast<Index>(a.size()); ++i) {
      if ((i & tmask) != 0 && std::abs(a[i]) > tol) {
        throw std::invalid_argument("prepare: target register is not in the ground state");
      }
    }
    Eigen::VectorXd const v = op.amplitudes / op.amplitudes.norm();
    detail::for_each_index(n, tmask, 0, [&](Index base) {
      Complex const head = a[base];
      for (Index sub = 0; sub < static_cast<Index>(v.size()); ++sub) {
        a[base | detail::scatter(sub, op.targets)] = head * static_cast<Scalar>(v[static_cast<Eigen::Index>(sub)]);
      }
    });
    break;
  }
  }
}

template <typename Scalar> void apply_circuit(BasicStatevector<Scalar> &state, Circuit const &circuit)
{
  for (auto const &op : circuit) { apply_gate(state, op); }
}

/// Squared norm of the branch where each ancilla matches its outcome bit.
template <typename Scalar>
Scalar branch_probability(BasicStatevector<Scalar> const &state, std::span<int const> ancillas, std::span<int const> outcome)
{
  if (ancillas.size() != outcome.size()) { throw std::invalid_argument("project: outcome length mismatch"); }
  detail::Index mask = 0, value = 0;
  for (std::size_t j = 0; j < ancillas.size(); ++j) {
    if (ancillas[j] < 0 || ancillas[j] >= state.qubits()) { throw std::invalid_argument("project: ancilla out of range"); }
    if (outcome[j] != 0 && outcome[j] != 1) { throw std::invalid_argument("project: outcome bits must be 0 or 1"); }
    mask |= detail::Index{1} << ancillas[j];
    if (outcome[j]) { value |= detail::Index{1} << ancillas[j]; }
  }
  Scalar     p = 0;
  auto const &a = state.amplitudes();
  detail::for_each_index(state.qubits(), mask, value, [&](detail::Index i) { p += std::norm(a[static_cast<Eigen::Index>(i)]); });
  return p;
}

/// Exact post-selection: zeroes amplitudes inconsistent with `outcome`,
/// renormalizes the survivors and returns the branch probability.
template <typename Scalar>
Scalar project_ancilla(BasicStatevector<Scalar> &state, std::span<int const> ancillas, std::span<int const> outcome)
{
  Scalar const p = branch_probability(state, ancillas, outcome);
  if (!(p > Scalar(0))) { throw std::runtime_error("project: post-selected branch has zero norm"); }
  detail::Index mask = 0, value = 0;
  for (std::size_t j = 0; j < ancillas.size(); ++j) {
    mask |= detail::Index{1} << ancillas[j];
    if (outcome[j]) { value |= detail::Index{1} << ancillas[j]; }
  }
  Scalar const scale = Scalar(1) / std::sqrt(p);
  auto        &a = state.amplitudes();
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if ((static_cast<detail::Index>(i) & mask) == value) {
      a[i] *= scale;
    } else {
      a[i] = 0;
    }
  }
  return p;
}

/// Real parts of one N*M block of the main register, x fastest, with both
/// ancillas at |0>. Imaginary residue above 1e-9 means the block encoding
/// bookkeeping went wrong, so it is reported instead of dropped.
template <typename Scalar>
Eigen::Array<Scalar, Eigen::Dynamic, 1> read_slice(BasicStatevector<Scalar> const &state, int block, RegisterLayout const &layout)
{
  if (state.qubits() != layout.total_qubits()) { throw std::invalid_argument("read_slice: layout does not match state"); }
  if (block < 0 || block >= RegisterLayout::kBlocks) { throw std::invalid_argument("read_slice: block out of range"); }
  auto const                               cells = layout.cells();
  Eigen::Array<Scalar, Eigen::Dynamic, 1> out(cells);
  auto const                              &a = state.amplitudes();
  for (Eigen::Index k = 0; k < cells; ++k) {
    auto const z = a[block * cells + k];
    if (std::abs(z.imag()) > Scalar(1e-9)) {
      throw std::runtime_error("read_slice: imaginary contamination " + std::to_string(static_cast<double>(z.imag())) +
                               " in block " + std::to_string(block));
    }
    out[k] = z.real();
  }
  return out;
}

} // namespace qlbm
