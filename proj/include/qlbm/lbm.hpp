#pragma once

#include "qlbm/lattice.hpp"

#include <Eigen/Core>

#include <stdexcept>
#include <utility>

/// Classical D2Q5 lattice Boltzmann solver for the stream function-vorticity
/// equations. It is both the standalone reference solver and the oracle the
/// quantum pipeline is checked against, so streaming is periodic (a cyclic
/// shift, like the quantum walk) and walls are imposed afterwards.
namespace qlbm::lbm {

template <typename Scalar> using FieldPair = std::pair<Field<Scalar>, Field<Scalar>>;
template <typename Scalar> using DistributionPair = std::pair<DistributionSet<Scalar>, DistributionSet<Scalar>>;

namespace detail {

template <typename A, typename B> void require_same_shape(A const &a, B const &b, char const *what)
{
  if (a.rows() != b.rows() || a.cols() != b.cols()) { throw std::invalid_argument(std::string(what) + ": shape mismatch"); }
}

} // namespace detail

/// f_eq_a = w_a * omega * (1 + e_a . (u, v) / cs^2), lattice speed dx/dt and dy/dt.
template <typename Scalar>
DistributionSet<Scalar>
equilibrium_f(Field<Scalar> const &omega, Field<Scalar> const &u, Field<Scalar> const &v, SimConfig const &cfg = {})
{
  detail::require_same_shape(omega, u, "equilibrium_f");
  detail::require_same_shape(omega, v, "equilibrium_f");
  Scalar const cx = Scalar(cfg.dx / cfg.dt);
  Scalar const cy = Scalar(cfg.dy / cfg.dt);
  Scalar const inv_cs2 = Scalar(1.0 / LatticeSpec::cs2);

  DistributionSet<Scalar> f;
  for (int a = 0; a < LatticeSpec::kLinks; ++a) {
    auto const  i = static_cast<std::size_t>(a);
    Scalar const w = Scalar(LatticeSpec::w[i]);
    Scalar const kx = Scalar(LatticeSpec::ex[i]) * inv_cs2 / cx;
    Scalar const ky = Scalar(LatticeSpec::ey[i]) * inv_cs2 / cy;
    f[a] = w * omega * (Scalar(1) + kx * u + ky * v);
  }
  return f;
}

/// g_eq_a = w_a * psi.
template <typename Scalar> DistributionSet<Scalar> equilibrium_g(Field<Scalar> const &psi)
{
  DistributionSet<Scalar> g;
  for (int a = 0; a < LatticeSpec::kLinks; ++a) { g[a] = Scalar(LatticeSpec::w[static_cast<std::size_t>(a)]) * psi; }
  return g;
}

template <typename Scalar> Field<Scalar> source_term(Field<Scalar> const &omega, SimConfig const &cfg)
{
  return Scalar(cfg.source_coefficient) * omega;
}

/// BGK relaxation for both populations; the Poisson population also picks up
/// dt * w_a * S.
template <typename Scalar>
DistributionPair<Scalar> collide(DistributionSet<Scalar> const &f, DistributionSet<Scalar> const &g, Field<Scalar> const &omega,
                                 Field<Scalar> const &psi, Field<Scalar> const &u, Field<Scalar> const &v, SimConfig const &cfg)
{
  auto const   feq = equilibrium_f(omega, u, v, cfg);
  auto const   geq = equilibrium_g(psi);
  auto const   s = source_term(omega, cfg);
  Scalar const eps = Scalar(cfg.epsilon);
  Scalar const dt = Scalar(cfg.dt);

  DistributionPair<Scalar> out;
  for (int a = 0; a < LatticeSpec::kLinks; ++a) {
    Scalar const w = Scalar(LatticeSpec::w[static_cast<std::size_t>(a)]);
    detail::require_same_shape(f[a], omega, "collide");
    detail::require_same_shape(g[a], omega, "collide");
    out.first[a] = (Scalar(1) - eps) * f[a] + eps * feq[a];
    out.second[a] = (Scalar(1) - eps) * g[a] + eps * geq[a] + dt * w * s;
  }
  return out;
}

/// f_a(x + e_a) = fhat_a(x), periodic in both axes.
template <typename Scalar> DistributionSet<Scalar> stream(DistributionSet<Scalar> const &fhat)
{
  DistributionSet<Scalar> out;
  for (int a = 0; a < LatticeSpec::kLinks; ++a) {
    auto const  &src = fhat[a];
    Eigen::Index const ny = src.rows(), nx = src.cols();
    auto const         i = static_cast<std::size_t>(a);
    Eigen::Index const sx = (LatticeSpec::ex[i] % nx + nx) % nx;
    Eigen::Index const sy = (LatticeSpec::ey[i] % ny + ny) % ny;
    out[a].resize(ny, nx);
    for (Eigen::Index y = 0; y < ny; ++y) {
      for (Eigen::Index x = 0; x < nx; ++x) { out[a]((y + sy) % ny, (x + sx) % nx) = src(y, x); }
    }
  }
  return out;
}

/// True on the four boundary lines.
inline Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> wall_mask(Eigen::Index nx, Eigen::Index ny)
{
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> m =
    Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>::Constant(ny, nx, false);
  m.row(0).setConstant(true);
  m.row(ny - 1).setConstant(true);
  m.col(0).setConstant(true);
  m.col(nx - 1).setConstant(true);
  return m;
}

/// Wall vorticity from the no-slip Taylor expansion,
///   omega_wall = -2 psi_in / h^2 - 2 U_wall / h,
/// psi_in being the first line inside the domain. Zero off the walls.
/// Walls are written bottom, left, right, top, so the lid owns its corners.
template <typename Scalar> Field<Scalar> wall_vorticity(Field<Scalar> const &psi, SimConfig const &cfg)
{
  Eigen::Index const ny = psi.rows(), nx = psi.cols();
  if (nx < 2 || ny < 2) { throw std::invalid_argument("wall_vorticity: grid must be at least 2x2"); }
  Scalar const  hx2 = Scalar(cfg.dx * cfg.dx);
  Scalar const  hy2 = Scalar(cfg.dy * cfg.dy);
  Scalar const  lid = Scalar(2.0 * cfg.lid_velocity / cfg.dy);
  Field<Scalar> w = Field<Scalar>::Zero(ny, nx);
  for (Eigen::Index x = 0; x < nx; ++x) { w(0, x) = Scalar(-2) * psi(1, x) / hy2; }
  for (Eigen::Index y = 0; y < ny; ++y) { w(y, 0) = Scalar(-2) * psi(y, 1) / hx2; }
  for (Eigen::Index y = 0; y < ny; ++y) { w(y, nx - 1) = Scalar(-2) * psi(y, nx - 2) / hx2; }
  for (Eigen::Index x = 0; x < nx; ++x) { w(ny - 1, x) = Scalar(-2) * psi(ny - 2, x) / hy2 - lid; }
  return w;
}

/// Sets the single inward-pointing unknown population on every wall node so
/// that sum_a f_a equals the wall vorticity and sum_a g_a vanishes. `psi` is
/// the stream function the wall vorticity is built from.
template <typename Scalar>
DistributionPair<Scalar>
apply_boundaries(DistributionSet<Scalar> f, DistributionSet<Scalar> g, Field<Scalar> const &psi, SimConfig const &cfg)
{
  Eigen::Index const ny = psi.rows(), nx = psi.cols();
  auto const         target = wall_vorticity(psi, cfg);

  auto close = [&](Eigen::Index y, Eigen::Index x, int inward) {
    Scalar fs = 0, gs = 0;
    for (int a = 0; a < LatticeSpec::kLinks; ++a) {
      if (a == inward) { continue; }
      fs += f[a](y, x);
      gs += g[a](y, x);
    }
    f[inward](y, x) = target(y, x) - fs;
    g[inward](y, x) = -gs;
  };
  for (Eigen::Index x = 0; x < nx; ++x) { close(0, x, 3); }
  for (Eigen::Index y = 0; y < ny; ++y) { close(y, 0, 1); }
  for (Eigen::Index y = 0; y < ny; ++y) { close(y, nx - 1, 2); }
  for (Eigen::Index x = 0; x < nx; ++x) { close(ny - 1, x, 4); }
  return {std::move(f), std::move(g)};
}

/// omega = sum_a f_a, psi = sum_a g_a.
template <typename Scalar> FieldPair<Scalar> macros(DistributionSet<Scalar> const &f, DistributionSet<Scalar> const &g)
{
  Field<Scalar> omega = f[0];
  Field<Scalar> psi = g[0];
  for (int a = 1; a < LatticeSpec::kLinks; ++a) {
    detail::require_same_shape(f[a], omega, "macros");
    detail::require_same_shape(g[a], psi, "macros");
    omega += f[a];
    psi += g[a];
  }
  return {std::move(omega), std::move(psi)};
}

/// u = d(psi)/dy, v = -d(psi)/dx; central differences inside, one-sided
/// second order on the walls, then the walls take their prescribed velocity
/// (lid row last: u = U, v = 0).
template <typename Scalar> FieldPair<Scalar> velocity_from_stream(Field<Scalar> const &psi, SimConfig const &cfg)
{
  Eigen::Index const ny = psi.rows(), nx = psi.cols();
  Field<Scalar>      u(ny, nx), v(ny, nx);
  Scalar const       hx = Scalar(cfg.dx), hy = Scalar(cfg.dy);

  auto d_dy = [&](Eigen::Index y, Eigen::Index x) -> Scalar {
    if (ny < 3) { return (psi(ny - 1, x) - psi(0, x)) / hy; }
    if (y == 0) { return (Scalar(-3) * psi(0, x) + Scalar(4) * psi(1, x) - psi(2, x)) / (Scalar(2) * hy); }
    if (y == ny - 1) {
      return (Scalar(3) * psi(ny - 1, x) - Scalar(4) * psi(ny - 2, x) + psi(ny - 3, x)) / (Scalar(2) * hy);
    }
    return (psi(y + 1, x) - psi(y - 1, x)) / (Scalar(2) * hy);
  };
  auto d_dx = [&](Eigen::Index y, Eigen::Index x) -> Scalar {
    if (nx < 3) { return (psi(y, nx - 1) - psi(y, 0)) / hx; }
    if (x == 0) { return (Scalar(-3) * psi(y, 0) + Scalar(4) * psi(y, 1) - psi(y, 2)) / (Scalar(2) * hx); }
    if (x == nx - 1) {
      return (Scalar(3) * psi(y, nx - 1) - Scalar(4) * psi(y, nx - 2) + psi(y, nx - 3)) / (Scalar(2) * hx);
    }
    return (psi(y, x + 1) - psi(y, x - 1)) / (Scalar(2) * hx);
  };

  for (Eigen::Index y = 0; y < ny; ++y) {
    for (Eigen::Index x = 0; x < nx; ++x) {
      u(y, x) = d_dy(y, x);
      v(y, x) = -d_dx(y, x);
    }
  }
  u.row(0).setZero();
  v.row(0).setZero();
  u.col(0).setZero();
  v.col(0).setZero();
  u.col(nx - 1).setZero();
  v.col(nx - 1).setZero();
  u.row(ny - 1).setConstant(Scalar(cfg.lid_velocity));
  v.row(ny - 1).setZero();
  return {std::move(u), std::move(v)};
}

template <typename Scalar = double> struct State
{
  Field<Scalar>           omega, psi, u, v;
  DistributionSet<Scalar> f, g;
};

/// Zero vorticity and stream function, velocities post-processed from psi,
/// populations at equilibrium.
template <typename Scalar = double> State<Scalar> initial_state(SimConfig const &cfg)
{
  State<Scalar> s;
  s.omega = Field<Scalar>::Zero(cfg.ny, cfg.nx);
  s.psi = Field<Scalar>::Zero(cfg.ny, cfg.nx);
  std::tie(s.u, s.v) = velocity_from_stream(s.psi, cfg);
  s.f = equilibrium_f(s.omega, s.u, s.v, cfg);
  s.g = equilibrium_g(s.psi);
  return s;
}

/// collide -> stream -> walls -> macros -> velocity.
template <typename Scalar> State<Scalar> step(State<Scalar> const &s, SimConfig const &cfg)
{
  auto [fhat, ghat] = collide(s.f, s.g, s.omega, s.psi, s.u, s.v, cfg);
  auto [f, g] = apply_boundaries(stream(fhat), stream(ghat), s.psi, cfg);
  State<Scalar> next;
  std::tie(next.omega, next.psi) = macros(f, g);
  // The closure makes the wall sums exact up to rounding; pin them exactly.
  auto const wall = wall_mask(s.psi.cols(), s.psi.rows());
  next.omega = wall.select(wall_vorticity(s.psi, cfg), next.omega);
  next.psi = wall.select(Field<Scalar>::Zero(s.psi.rows(), s.psi.cols()), next.psi);
  std::tie(next.u, next.v) = velocity_from_stream(next.psi, cfg);
  next.f = std::move(f);
  next.g = std::move(g);
  return next;
}

} // namespace qlbm::lbm
