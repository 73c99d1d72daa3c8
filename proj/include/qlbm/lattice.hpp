#pragma once

#include <Eigen/Core>

#include <array>

namespace qlbm {

/// N x M grid, one row per y line, x fastest in memory, so data()[y * N + x]
/// matches the block layout of the quantum register.
template <typename Scalar = double> using Field = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// D2Q5 with rest particle.
struct LatticeSpec
{
  static constexpr int kLinks = 5;

  // e_0 = (0,0), e_1 = (+1,0), e_2 = (-1,0), e_3 = (0,+1), e_4 = (0,-1)
  static constexpr std::array<int, kLinks> ex{0, 1, -1, 0, 0};
  static constexpr std::array<int, kLinks> ey{0, 0, 0, 1, -1};

  static constexpr std::array<double, kLinks> w{2.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
  static constexpr double                     cs2 = 1.0 / 3.0;
};

/// Five link-indexed grids (f_alpha or g_alpha).
template <typename Scalar = double> struct DistributionSet
{
  std::array<Field<Scalar>, LatticeSpec::kLinks> link;

  Field<Scalar>       &operator[](int alpha) { return link[static_cast<std::size_t>(alpha)]; }
  Field<Scalar> const &operator[](int alpha) const { return link[static_cast<std::size_t>(alpha)]; }

  static DistributionSet zero(Eigen::Index nx, Eigen::Index ny)
  {
    DistributionSet d;
    for (auto &l : d.link) { l = Field<Scalar>::Zero(ny, nx); }
    return d;
  }
};

/// Lattice-unit run parameters. Physical viscosity never enters: with
/// epsilon = 1 the effective diffusivity is fixed by the lattice.
struct SimConfig
{
  Eigen::Index nx = 16;
  Eigen::Index ny = 16;
  double       dt = 1.0;
  double       dx = 1.0;
  double       dy = 1.0;
  double       epsilon = 1.0; // dt / tau
  double       lid_velocity = 1.0;
  int          steps = 500;
  // Poisson source S = source_coefficient * omega.
  double source_coefficient = 1.0;

  double tau() const { return dt / epsilon; }
};

} // namespace qlbm
