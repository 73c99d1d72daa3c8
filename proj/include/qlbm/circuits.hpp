#pragma once

#include "qlbm/circuit.hpp"
#include "qlbm/lattice.hpp"
#include "qlbm/register_layout.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace qlbm {

/// Block map of the encoded vector (each block is one N*M field, x fastest).
/// Blocks 16..31 repeat 0..15.
namespace block {
inline constexpr int kF = 0;     // f_alpha(omega), alpha = 0..4
inline constexpr int kG = 5;     // g_alpha(psi)
inline constexpr int kS = 10;    // source per link
inline constexpr int kWall = 15; // wall vorticity
inline constexpr int kHalf = 16;
} // namespace block

/// Where each quantity sits in the a1 = a2 = 0 branch after a stage, and the
/// scalar it carries relative to its value / ||lambda||.
///
/// Collision, propagation and macros work in the upper copy (blocks 16..31);
/// the boundary stage moves omega and psi down to blocks 0 and 1. The wall
/// vorticity enters with prefactor 1/sqrt(2) in A and reaches 1/2 after the
/// collision, matching the 1/4 of the summed fields only after the boundary
/// stage halves it again.
namespace readout {
inline constexpr int kCollidedF = block::kHalf + block::kF; // + alpha
inline constexpr int kCollidedG = block::kHalf + block::kG; // + alpha
inline constexpr int kWallAfterCollision = block::kHalf + block::kWall;
inline constexpr int kOmegaAfterMacros = block::kHalf + block::kF;
inline constexpr int kPsiAfterMacros = block::kHalf + block::kG;
inline constexpr int kOmegaFinal = 0;
inline constexpr int kPsiFinal = 1;
} // namespace readout

/// Stage prefactors (cumulative), fixed rationals times powers of sqrt(2).
namespace prefactor {
inline constexpr double kSqrt2 = 1.41421356237309504880;
inline constexpr double kCollision = 1.0 / kSqrt2;
inline constexpr double kPropagation = 1.0 / kSqrt2;
inline constexpr double kMacros = 0.25;
inline constexpr double kWallAfterCollision = 0.5;
inline constexpr double kBoundary = 1.0 / (4.0 * kSqrt2);
inline constexpr double kWallWeight = 1.0 / kSqrt2; // d entries of A
} // namespace prefactor

/// The 32*N*M encoding vector and its norm.
struct LambdaVector
{
  RegisterLayout  layout;
  Eigen::VectorXd entries;
  double          norm = 0.0;

  Eigen::Index cells() const { return layout.cells(); }
  auto         segment(int blk) const { return entries.segment(blk * cells(), cells()); }
};

/// Blocks: omega per link, psi per link, source per link, wall vorticity, then
/// a verbatim copy. Throws if the vector is identically zero; callers handle
/// that fixed point without encoding.
LambdaVector assemble_lambda(Field<double> const &omega, Field<double> const &psi, SimConfig const &cfg);

/// Diagonal factors of the collision operator.
struct DiagonalBlocks
{
  RegisterLayout  layout;
  Eigen::ArrayXd  a;         // 5*N*M: w_a (1 + e_a.u / cs^2)
  Eigen::ArrayXd  b;         // 5*N*M: w_a
  Eigen::ArrayXd  c;         // 5*N*M: dt w_a
  Eigen::ArrayXd  d;         // N*M: 1/sqrt(2)
  Eigen::ArrayXd  assembled; // 32*N*M diagonal of A, halves identical
};

/// Thrown when an entry of A leaves [-1, 1]. Rescaling would change the stage
/// constants, so it is left to the caller.
struct MagnitudeGuardError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

DiagonalBlocks build_diagonal(Field<double> const &u, Field<double> const &v, SimConfig const &cfg);

/// B1 = A1 + i sqrt(I - A1^2) on the first half, B2 = A2 - i sqrt(I - A2^2) on the second.
struct UnitaryExtension
{
  Eigen::VectorXcd b1;
  Eigen::VectorXcd b2;

  Eigen::VectorXcd stacked() const;
};

UnitaryExtension unitary_extension(Eigen::ArrayXd const &assembled);

/// Appends gates exchanging the contents of basis labels s and t of the
/// sub-register `qubits` (bit j of a label is qubits[j]); `extra` controls
/// restrict it further. Adjacent labels take one MCX, a two-bit exchange one
/// MC-SWAP, anything else a conjugated MCX path.
void append_transposition(Circuit &circuit, std::vector<int> const &qubits, std::uint64_t s, std::uint64_t t,
                          std::vector<Control> const &extra = {});

enum class Shift { Right, Left };

/// Modular incrementer (Right) or decrementer (Left) on `subregister`
/// (least-significant qubit first), each gate also conditioned on `controls`.
Circuit shift_circuit(Shift direction, std::vector<int> const &subregister, std::vector<Control> const &controls = {});

/// Block-encoded A, then the five source-alignment gadgets and the addition.
Circuit collision_circuit(DiagonalBlocks const &blocks);

/// Streaming of f_1..f_4 and g_1..g_4 by controlled shifts.
Circuit propagation_circuit(RegisterLayout const &layout);

/// Sums the five f and the five g blocks.
Circuit macros_circuit(RegisterLayout const &layout);

/// Zeroes omega and psi on the walls, adds the wall vorticity, lands omega
/// and psi in blocks 0 and 1.
Circuit boundary_circuit(RegisterLayout const &layout);

/// Controls selecting one block of the a1 = a2 = 0 branch.
std::vector<Control> block_controls(RegisterLayout const &layout, int blk, bool with_ancillas = true);

} // namespace qlbm
