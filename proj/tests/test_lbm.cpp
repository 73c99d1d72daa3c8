#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qlbm/lbm.hpp"

#include <random>
#include <vector>

using namespace qlbm;

namespace {

Field<double> random_field(Eigen::Index nx, Eigen::Index ny, std::mt19937_64 &rng, double lo = -1, double hi = 1)
{
  std::uniform_real_distribution<double> d(lo, hi);
  Field<double>                          f(ny, nx);
  for (Eigen::Index i = 0; i < f.size(); ++i) { f.data()[i] = d(rng); }
  return f;
}

// Straight-line cavity step on flat arrays, y-major, written from the update
// rules without touching the library.
struct Plain
{
  int                 n, m; // x, y sizes
  std::vector<double> omega, psi, u, v;

  double &at(std::vector<double> &a, int x, int y) { return a[static_cast<std::size_t>(y * n + x)]; }

  void velocity(double lid)
  {
    for (int y = 0; y < m; ++y) {
      for (int x = 0; x < n; ++x) {
        double dpy, dpx;
        if (y == 0) {
          dpy = (-3 * at(psi, x, 0) + 4 * at(psi, x, 1) - at(psi, x, 2)) / 2;
        } else if (y == m - 1) {
          dpy = (3 * at(psi, x, m - 1) - 4 * at(psi, x, m - 2) + at(psi, x, m - 3)) / 2;
        } else {
          dpy = (at(psi, x, y + 1) - at(psi, x, y - 1)) / 2;
        }
        if (x == 0) {
          dpx = (-3 * at(psi, 0, y) + 4 * at(psi, 1, y) - at(psi, 2, y)) / 2;
        } else if (x == n - 1) {
          dpx = (3 * at(psi, n - 1, y) - 4 * at(psi, n - 2, y) + at(psi, n - 3, y)) / 2;
        } else {
          dpx = (at(psi, x + 1, y) - at(psi, x - 1, y)) / 2;
        }
        bool const wall = x == 0 || y == 0 || x == n - 1;
        at(u, x, y) = wall ? 0.0 : dpy;
        at(v, x, y) = wall ? 0.0 : -dpx;
        if (y == m - 1) {
          at(u, x, y) = lid;
          at(v, x, y) = 0.0;
        }
      }
    }
  }

  void step(double lid, double k)
  {
    int const    ex[5] = {0, 1, -1, 0, 0};
    int const    ey[5] = {0, 0, 0, 1, -1};
    double const w[5] = {2.0 / 6, 1.0 / 6, 1.0 / 6, 1.0 / 6, 1.0 / 6};
    auto const   size = static_cast<std::size_t>(n * m);
    std::vector<std::vector<double>> f(5, std::vector<double>(size)), g(5, std::vector<double>(size));
    for (int y = 0; y < m; ++y) {
      for (int x = 0; x < n; ++x) {
        for (int a = 0; a < 5; ++a) {
          int const tx = (x + ex[a] + n) % n;
          int const ty = (y + ey[a] + m) % m;
          double const om = at(omega, x, y), ps = at(psi, x, y);
          f[a][static_cast<std::size_t>(ty * n + tx)] = w[a] * om * (1 + 3 * (ex[a] * at(u, x, y) + ey[a] * at(v, x, y)));
          g[a][static_cast<std::size_t>(ty * n + tx)] = w[a] * ps + w[a] * k * om;
        }
      }
    }
    std::vector<double> target(size, 0.0);
    auto                wall_node = [&](int x, int y, double value, int inward) {
      auto const i = static_cast<std::size_t>(y * n + x);
      target[i] = value;
      double fs = 0, gs = 0;
      for (int a = 0; a < 5; ++a) {
        if (a != inward) {
          fs += f[a][i];
          gs += g[a][i];
        }
      }
      f[inward][i] = value - fs;
      g[inward][i] = -gs;
    };
    for (int x = 0; x < n; ++x) { wall_node(x, 0, -2 * at(psi, x, 1), 3); }
    for (int y = 0; y < m; ++y) { wall_node(0, y, -2 * at(psi, 1, y), 1); }
    for (int y = 0; y < m; ++y) { wall_node(n - 1, y, -2 * at(psi, n - 2, y), 2); }
    for (int x = 0; x < n; ++x) { wall_node(x, m - 1, -2 * at(psi, x, m - 2) - 2 * lid, 4); }
    for (std::size_t i = 0; i < size; ++i) {
      omega[i] = f[0][i] + f[1][i] + f[2][i] + f[3][i] + f[4][i];
      psi[i] = g[0][i] + g[1][i] + g[2][i] + g[3][i] + g[4][i];
    }
    velocity(lid);
  }
};

double max_diff(Field<double> const &a, std::vector<double> const &b)
{
  double worst = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) { worst = std::max(worst, std::abs(a.data()[i] - b[static_cast<std::size_t>(i)])); }
  return worst;
}

} // namespace

TEST_CASE("lattice constants")
{
  double sw = 0, swx = 0, swy = 0;
  for (std::size_t a = 0; a < 5; ++a) {
    sw += LatticeSpec::w[a];
    swx += LatticeSpec::w[a] * LatticeSpec::ex[a];
    swy += LatticeSpec::w[a] * LatticeSpec::ey[a];
  }
  CHECK(sw == doctest::Approx(1.0));
  CHECK(swx == 0.0);
  CHECK(swy == 0.0);
}

TEST_CASE("equilibrium_f")
{
  Field<double> one = Field<double>::Ones(2, 2), zero = Field<double>::Zero(2, 2);
  auto const    f = lbm::equilibrium_f(one, zero, zero);
  CHECK(f[0](0, 0) == doctest::Approx(1.0 / 3));
  for (int a = 1; a < 5; ++a) { CHECK(f[a](1, 1) == doctest::Approx(1.0 / 6)); }

  Field<double> u = Field<double>::Constant(2, 2, 0.3);
  CHECK(lbm::equilibrium_f(one, u, zero)[1](0, 1) == doctest::Approx(0.316666666666667));

  std::mt19937_64 rng(3);
  auto const      om = random_field(4, 4, rng);
  auto const      fr = lbm::equilibrium_f(om, random_field(4, 4, rng), random_field(4, 4, rng));
  CHECK((lbm::macros(fr, fr).first - om).abs().maxCoeff() < 1e-15);
  CHECK_THROWS_AS(lbm::equilibrium_f(om, Field<double>::Zero(3, 4).eval(), Field<double>::Zero(4, 4).eval()),
                  std::invalid_argument);
}

TEST_CASE("equilibrium_g")
{
  Field<double> one = Field<double>::Ones(2, 2);
  auto const    g = lbm::equilibrium_g(one);
  CHECK(g[0](0, 0) == doctest::Approx(1.0 / 3));
  CHECK(g[4](0, 0) == doctest::Approx(1.0 / 6));
  CHECK((lbm::equilibrium_g(Field<double>::Zero(2, 2).eval())[2] == 0.0).all());
}

TEST_CASE("collide")
{
  SimConfig     cfg;
  Field<double> zero = Field<double>::Zero(3, 3);
  auto const    f0 = DistributionSet<double>::zero(3, 3);
  std::mt19937_64 rng(8);
  auto const      psi = random_field(3, 3, rng);

  SUBCASE("no vorticity leaves g at equilibrium")
  {
    auto const [fh, gh] = lbm::collide(f0, f0, zero, psi, zero, zero, cfg);
    auto const geq = lbm::equilibrium_g(psi);
    for (int a = 0; a < 5; ++a) { CHECK((gh[a] - geq[a]).abs().maxCoeff() < 1e-15); }
  }
  SUBCASE("unit vorticity with the negative source")
  {
    cfg.source_coefficient = -1.0;
    Field<double> om = zero;
    om(1, 1) = 1.0;
    auto const [fh, gh] = lbm::collide(f0, f0, om, zero, zero, zero, cfg);
    for (int a = 0; a < 5; ++a) { CHECK(gh[a](1, 1) == doctest::Approx(-LatticeSpec::w[static_cast<std::size_t>(a)])); }
  }
  SUBCASE("epsilon 0 keeps f and adds only the source")
  {
    cfg.epsilon = 0.0;
    auto       f = DistributionSet<double>::zero(3, 3);
    auto       g = DistributionSet<double>::zero(3, 3);
    for (int a = 0; a < 5; ++a) {
      f[a] = random_field(3, 3, rng);
      g[a] = random_field(3, 3, rng);
    }
    auto const om = random_field(3, 3, rng);
    auto const [fh, gh] = lbm::collide(f, g, om, psi, zero, zero, cfg);
    for (int a = 0; a < 5; ++a) {
      CHECK((fh[a] - f[a]).abs().maxCoeff() == 0.0);
      CHECK((gh[a] - g[a] - LatticeSpec::w[static_cast<std::size_t>(a)] * om).abs().maxCoeff() < 1e-15);
    }
  }
  SUBCASE("epsilon 1 ignores the incoming populations")
  {
    auto const om = random_field(3, 3, rng), u = random_field(3, 3, rng), v = random_field(3, 3, rng);
    auto       f1 = DistributionSet<double>::zero(3, 3), f2 = f1;
    for (int a = 0; a < 5; ++a) {
      f1[a] = random_field(3, 3, rng);
      f2[a] = random_field(3, 3, rng);
    }
    auto const r1 = lbm::collide(f1, f1, om, psi, u, v, cfg);
    auto const r2 = lbm::collide(f2, f2, om, psi, u, v, cfg);
    for (int a = 0; a < 5; ++a) {
      CHECK((r1.first[a] - r2.first[a]).abs().maxCoeff() == 0.0);
      CHECK((r1.second[a] - r2.second[a]).abs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("stream")
{
  auto d = DistributionSet<double>::zero(4, 4);
  d[1](2, 3) = 1.0; // y = 2, x = 3
  d[3](3, 1) = 1.0;
  std::mt19937_64 rng(4);
  d[0] = random_field(4, 4, rng);
  auto const s = lbm::stream(d);
  CHECK(s[1](2, 0) == 1.0);
  CHECK(s[3](0, 1) == 1.0);
  CHECK((s[0] - d[0]).abs().maxCoeff() == 0.0);

  // Opposite links undo each other.
  auto back = DistributionSet<double>::zero(4, 4);
  for (int a = 0; a < 5; ++a) { back[a] = random_field(4, 4, rng); }
  auto       swapped = lbm::stream(back);
  std::swap(swapped[1], swapped[2]);
  std::swap(swapped[3], swapped[4]);
  auto restored = lbm::stream(swapped);
  std::swap(restored[1], restored[2]);
  std::swap(restored[3], restored[4]);
  for (int a = 0; a < 5; ++a) { CHECK((restored[a] - back[a]).abs().maxCoeff() == 0.0); }
}

TEST_CASE("walls")
{
  SimConfig cfg;
  SUBCASE("quiet wall")
  {
    cfg.lid_velocity = 0.0;
    auto const w = lbm::wall_vorticity(Field<double>::Zero(4, 4).eval(), cfg);
    CHECK((w == 0.0).all());
  }
  SUBCASE("lid value")
  {
    Field<double> psi = Field<double>::Zero(4, 4);
    psi(2, 1) = 0.5;
    auto const w = lbm::wall_vorticity(psi, cfg);
    CHECK(w(3, 1) == doctest::Approx(-3.0));
    CHECK(w(3, 2) == doctest::Approx(-2.0));
    CHECK(w(1, 1) == 0.0);
  }
  SUBCASE("boundary closure")
  {
    std::mt19937_64 rng(21);
    auto            f = DistributionSet<double>::zero(5, 5), g = f;
    for (int a = 0; a < 5; ++a) {
      f[a] = random_field(5, 5, rng);
      g[a] = random_field(5, 5, rng);
    }
    auto const psi = random_field(5, 5, rng);
    auto const [fb, gb] = lbm::apply_boundaries(f, g, psi, cfg);
    auto const [om, ps] = lbm::macros(fb, gb);
    auto const mask = lbm::wall_mask(5, 5);
    auto const target = lbm::wall_vorticity(psi, cfg);
    for (Eigen::Index y = 0; y < 5; ++y) {
      for (Eigen::Index x = 0; x < 5; ++x) {
        if (mask(y, x)) {
          CHECK(std::abs(ps(y, x)) < 1e-15);
          CHECK(om(y, x) == doctest::Approx(target(y, x)));
        } else {
          CHECK(fb[2](y, x) == f[2](y, x));
        }
      }
    }
  }
}

TEST_CASE("macros")
{
  std::mt19937_64 rng(6);
  auto            f = DistributionSet<double>::zero(3, 4), g = f;
  auto const [z1, z2] = lbm::macros(f, g);
  CHECK((z1 == 0.0).all());
  CHECK((z2 == 0.0).all());
  for (int a = 0; a < 5; ++a) {
    f[a] = random_field(3, 4, rng);
    g[a] = random_field(3, 4, rng);
  }
  auto const [om, ps] = lbm::macros(f, g);
  CHECK(om(2, 1) == doctest::Approx(f[0](2, 1) + f[1](2, 1) + f[2](2, 1) + f[3](2, 1) + f[4](2, 1)));
  CHECK(ps(0, 2) == doctest::Approx(g[0](0, 2) + g[1](0, 2) + g[2](0, 2) + g[3](0, 2) + g[4](0, 2)));
}

TEST_CASE("velocity from stream function")
{
  SimConfig     cfg;
  Field<double> psi(6, 6);
  SUBCASE("constant")
  {
    psi.setConstant(2.5);
    auto const [u, v] = lbm::velocity_from_stream(psi, cfg);
    CHECK(u.block(1, 1, 4, 4).abs().maxCoeff() == 0.0);
    CHECK(v.block(1, 1, 4, 4).abs().maxCoeff() == 0.0);
  }
  SUBCASE("linear in y")
  {
    for (int y = 0; y < 6; ++y) { psi.row(y).setConstant(y); }
    auto const [u, v] = lbm::velocity_from_stream(psi, cfg);
    CHECK((u.block(1, 1, 4, 4) - 1.0).abs().maxCoeff() < 1e-14);
    CHECK(v.block(1, 1, 4, 4).abs().maxCoeff() < 1e-14);
  }
  SUBCASE("bilinear")
  {
    for (int y = 0; y < 6; ++y) {
      for (int x = 0; x < 6; ++x) { psi(y, x) = x * y; }
    }
    auto const [u, v] = lbm::velocity_from_stream(psi, cfg);
    for (int y = 1; y < 5; ++y) {
      for (int x = 1; x < 5; ++x) {
        CHECK(u(y, x) == doctest::Approx(x));
        CHECK(v(y, x) == doctest::Approx(-y));
      }
    }
    CHECK((u.row(5) == cfg.lid_velocity).all());
    CHECK((u.col(0).head(5) == 0.0).all());
  }
}

TEST_CASE("quiet cavity stays at rest")
{
  SimConfig cfg;
  cfg.nx = cfg.ny = 8;
  cfg.lid_velocity = 0.0;
  auto s = lbm::initial_state<double>(cfg);
  for (int n = 0; n < 20; ++n) { s = lbm::step(s, cfg); }
  CHECK((s.omega == 0.0).all());
  CHECK((s.psi == 0.0).all());
  CHECK((s.u == 0.0).all());
}

TEST_CASE("step matches a straight-line reimplementation")
{
  SimConfig cfg;
  cfg.nx = cfg.ny = 4;
  for (double k : {1.0, -1.0, 1.0 / 6}) {
    cfg.source_coefficient = k;
    auto  s = lbm::initial_state<double>(cfg);
    Plain p{4, 4, std::vector<double>(16, 0.0), std::vector<double>(16, 0.0), std::vector<double>(16), std::vector<double>(16)};
    p.velocity(cfg.lid_velocity);
    for (int n = 0; n < 3; ++n) {
      s = lbm::step(s, cfg);
      p.step(cfg.lid_velocity, k);
      CHECK(max_diff(s.omega, p.omega) < 1e-13);
      CHECK(max_diff(s.psi, p.psi) < 1e-13);
      CHECK(max_diff(s.u, p.u) < 1e-13);
      CHECK(max_diff(s.v, p.v) < 1e-13);
    }
  }
}

TEST_CASE("cavity reaches a steady state in 500 steps")
{
  SimConfig cfg;
  auto      s = lbm::initial_state<double>(cfg);
  auto      prev = s;
  for (int n = 0; n < 500; ++n) {
    prev = s;
    s = lbm::step(s, cfg);
  }
  CHECK((s.omega - prev.omega).abs().maxCoeff() < 1e-6);
  CHECK((s.psi - prev.psi).abs().maxCoeff() < 1e-6);
  auto const mask = lbm::wall_mask(16, 16);
  CHECK(mask.select(s.psi.abs(), 0.0).maxCoeff() == 0.0);
}
