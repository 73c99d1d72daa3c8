#pragma once

#include <Eigen/Core>

#include <bit>
#include <stdexcept>
#include <string>

namespace qlbm {

/// Qubit map of the encoded lattice. Little-endian: x occupies the lowest
/// bits, then y, then the 5-bit block selector, then the two ancillas, so a
/// main-register basis index decodes as k = block * (N*M) + y * N + x.
struct RegisterLayout
{
  static constexpr int kBlockQubits = 5;
  static constexpr int kBlocks = 1 << kBlockQubits;

  int x_qubits = 0;
  int y_qubits = 0;

  static RegisterLayout for_grid(Eigen::Index nx, Eigen::Index ny)
  {
    auto check = [](Eigen::Index n, char const *axis) {
      if (n < 2 || !std::has_single_bit(static_cast<unsigned long long>(n))) {
        throw std::invalid_argument(std::string("grid size along ") + axis + " must be a power of two >= 2, got " +
                                    std::to_string(n));
      }
    };
    check(nx, "x");
    check(ny, "y");
    return {std::countr_zero(static_cast<unsigned long long>(nx)), std::countr_zero(static_cast<unsigned long long>(ny))};
  }

  Eigen::Index nx() const { return Eigen::Index{1} << x_qubits; }
  Eigen::Index ny() const { return Eigen::Index{1} << y_qubits; }
  Eigen::Index cells() const { return nx() * ny(); }

  int main_qubits() const { return x_qubits + y_qubits + kBlockQubits; }
  int total_qubits() const { return main_qubits() + 2; }

  int x_qubit(int j) const { return j; }
  int y_qubit(int j) const { return x_qubits + j; }
  int block_qubit(int j) const { return x_qubits + y_qubits + j; }
  int top_qubit() const { return main_qubits() - 1; }
  int a1() const { return main_qubits(); }
  int a2() const { return main_qubits() + 1; }

  Eigen::Index index(int block, Eigen::Index x, Eigen::Index y) const { return block * cells() + y * nx() + x; }
};

} // namespace qlbm
