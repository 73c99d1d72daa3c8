#include "qlbm/circuits.hpp"

#include "qlbm/lbm.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <sstream>
#include <string>

namespace qlbm {

namespace {

using Links = LatticeSpec;

std::vector<Control> concat(std::vector<Control> a, std::vector<Control> const &b)
{
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::vector<int> block_qubits(RegisterLayout const &layout)
{
  std::vector<int> q;
  for (int j = 0; j < RegisterLayout::kBlockQubits; ++j) { q.push_back(layout.block_qubit(j)); }
  return q;
}

std::vector<int> main_qubits(RegisterLayout const &layout)
{
  std::vector<int> q;
  for (int j = 0; j < layout.main_qubits(); ++j) { q.push_back(j); }
  return q;
}

std::vector<int> x_register(RegisterLayout const &layout)
{
  std::vector<int> q;
  for (int j = 0; j < layout.x_qubits; ++j) { q.push_back(layout.x_qubit(j)); }
  return q;
}

std::vector<int> y_register(RegisterLayout const &layout)
{
  std::vector<int> q;
  for (int j = 0; j < layout.y_qubits; ++j) { q.push_back(layout.y_qubit(j)); }
  return q;
}

/// Controls on selected block bits: pairs (bit, value).
std::vector<Control> block_bits(RegisterLayout const &layout, std::initializer_list<std::pair<int, int>> bits)
{
  std::vector<Control> c;
  for (auto [bit, value] : bits) { c.push_back({layout.block_qubit(bit), value}); }
  return c;
}

std::vector<Control> good_branch(RegisterLayout const &layout) { return {{layout.a1(), 0}, {layout.a2(), 0}}; }

/// Main register plus one ancilla flag on top: a diagonal that is i on the
/// wall nodes of blocks 0 and 1 when the flag is 0, -i when it is 1, and 1
/// elsewhere. Averaging the two halves gives the wall mask.
Eigen::VectorXcd wall_mask_extension(RegisterLayout const &layout)
{
  auto const         cells = layout.cells();
  Eigen::Index const half = cells * RegisterLayout::kBlocks;
  Eigen::VectorXcd   d = Eigen::VectorXcd::Ones(2 * half);
  auto const         mask = lbm::wall_mask(layout.nx(), layout.ny());
  for (int blk : {0, 1}) {
    for (Eigen::Index y = 0; y < layout.ny(); ++y) {
      for (Eigen::Index x = 0; x < layout.nx(); ++x) {
        if (!mask(y, x)) { continue; }
        Eigen::Index const k = layout.index(blk, x, y);
        d[k] = std::complex<double>(0, 1);
        d[half + k] = std::complex<double>(0, -1);
      }
    }
  }
  return d;
}

} // namespace

std::vector<Control> block_controls(RegisterLayout const &layout, int blk, bool with_ancillas)
{
  if (blk < 0 || blk >= RegisterLayout::kBlocks) { throw std::invalid_argument("block_controls: block out of range"); }
  std::vector<Control> c;
  for (int j = 0; j < RegisterLayout::kBlockQubits; ++j) { c.push_back({layout.block_qubit(j), (blk >> j) & 1}); }
  if (with_ancillas) { c = concat(c, good_branch(layout)); }
  return c;
}

LambdaVector assemble_lambda(Field<double> const &omega, Field<double> const &psi, SimConfig const &cfg)
{
  if (omega.rows() != psi.rows() || omega.cols() != psi.cols()) { throw std::invalid_argument("assemble_lambda: shape mismatch"); }
  LambdaVector lambda;
  lambda.layout = RegisterLayout::for_grid(omega.cols(), omega.rows());
  auto const cells = lambda.layout.cells();

  auto const source = lbm::source_term(omega, cfg);
  auto const wall = lbm::wall_vorticity(psi, cfg);
  auto flat = [](Field<double> const &f) { return Eigen::Map<Eigen::VectorXd const>(f.data(), f.size()); };

  lambda.entries.resize(RegisterLayout::kBlocks * cells);
  for (int a = 0; a < Links::kLinks; ++a) {
    lambda.entries.segment((block::kF + a) * cells, cells) = flat(omega);
    lambda.entries.segment((block::kG + a) * cells, cells) = flat(psi);
    lambda.entries.segment((block::kS + a) * cells, cells) = flat(source);
  }
  lambda.entries.segment(block::kWall * cells, cells) = flat(wall);
  lambda.entries.tail(block::kHalf * cells) = lambda.entries.head(block::kHalf * cells).eval();

  if (!lambda.entries.allFinite()) { throw std::invalid_argument("assemble_lambda: non-finite field value"); }
  lambda.norm = lambda.entries.norm();
  if (lambda.norm == 0.0) { throw std::invalid_argument("assemble_lambda: all-zero state has nothing to encode"); }
  return lambda;
}

DiagonalBlocks build_diagonal(Field<double> const &u, Field<double> const &v, SimConfig const &cfg)
{
  if (u.rows() != v.rows() || u.cols() != v.cols()) { throw std::invalid_argument("build_diagonal: shape mismatch"); }
  DiagonalBlocks out;
  out.layout = RegisterLayout::for_grid(u.cols(), u.rows());
  auto const cells = out.layout.cells();
  auto const n5 = Links::kLinks * cells;

  Field<double> const ones = Field<double>::Ones(u.rows(), u.cols());
  auto const          feq = lbm::equilibrium_f(ones, u, v, cfg);

  out.a.resize(n5);
  out.b.resize(n5);
  out.c.resize(n5);
  out.d = Eigen::ArrayXd::Constant(cells, prefactor::kWallWeight);
  for (int a = 0; a < Links::kLinks; ++a) {
    double const w = Links::w[static_cast<std::size_t>(a)];
    out.a.segment(a * cells, cells) = Eigen::Map<Eigen::ArrayXd const>(feq[a].data(), cells);
    out.b.segment(a * cells, cells).setConstant(w);
    out.c.segment(a * cells, cells).setConstant(cfg.dt * w);
  }

  Eigen::ArrayXd half(block::kHalf * cells);
  half << out.a, out.b, out.c, out.d;
  out.assembled.resize(RegisterLayout::kBlocks * cells);
  out.assembled << half, half;

  if (!out.assembled.allFinite()) { throw MagnitudeGuardError("build_diagonal: non-finite entry"); }
  Eigen::Index worst = 0;
  double const peak = out.assembled.abs().maxCoeff(&worst);
  if (peak > 1.0) {
    std::ostringstream msg;
    msg << "build_diagonal: |A| = " << peak << " > 1 at entry " << worst << " (block " << worst / cells << ", node "
        << worst % cells << "); velocities must satisfy |u|, |v| <= 1 in lattice units";
    throw MagnitudeGuardError(msg.str());
  }
  return out;
}

Eigen::VectorXcd UnitaryExtension::stacked() const
{
  Eigen::VectorXcd out(b1.size() + b2.size());
  out << b1, b2;
  return out;
}

UnitaryExtension unitary_extension(Eigen::ArrayXd const &assembled)
{
  auto const n = assembled.size();
  if (n < 2 || n % 2 != 0) { throw std::invalid_argument("unitary_extension: expected two equal halves"); }
  if ((assembled.abs() > 1.0).any()) { throw MagnitudeGuardError("unitary_extension: entry outside [-1, 1]"); }
  auto extend = [](Eigen::ArrayXd const &a, double sign) {
    Eigen::VectorXcd b(a.size());
    for (Eigen::Index k = 0; k < a.size(); ++k) {
      b[k] = std::complex<double>(a[k], sign * std::sqrt(std::max(0.0, 1.0 - a[k] * a[k])));
    }
    return b;
  };
  return {extend(assembled.head(n / 2), +1.0), extend(assembled.tail(n / 2), -1.0)};
}

void append_transposition(Circuit &circuit, std::vector<int> const &qubits, std::uint64_t s, std::uint64_t t,
                          std::vector<Control> const &extra)
{
  auto const width = qubits.size();
  if (width == 0 || width > 63) { throw std::invalid_argument("transposition: bad register width"); }
  std::uint64_t const all = (std::uint64_t{1} << width) - 1;
  if (s > all || t > all) { throw std::invalid_argument("transposition: label out of range"); }
  if (s == t) { return; }

  auto others = [&](std::uint64_t label, std::uint64_t skip) {
    std::vector<Control> c;
    for (std::size_t j = 0; j < width; ++j) {
      if ((skip >> j) & 1u) { continue; }
      c.push_back({qubits[j], static_cast<int>((label >> j) & 1u)});
    }
    return concat(c, extra);
  };

  std::uint64_t const diff = s ^ t;
  int const           k = std::popcount(diff);
  if (k == 1) {
    circuit.push_back(pauli_x(qubits[static_cast<std::size_t>(std::countr_zero(diff))], others(s, diff)));
    return;
  }
  if (k == 2) {
    int const p = std::countr_zero(diff);
    int const q = 63 - std::countl_zero(diff);
    if (((s >> p) & 1u) != ((s >> q) & 1u)) {
      circuit.push_back(swap(qubits[static_cast<std::size_t>(p)], qubits[static_cast<std::size_t>(q)], others(s, diff)));
      return;
    }
  }

  // Walk s -> t one bit at a time; conjugating the last step by the first
  // k-1 leaves every intermediate label in place.
  Circuit       path;
  std::uint64_t at = s;
  for (std::size_t j = 0; j < width; ++j) {
    std::uint64_t const bit = std::uint64_t{1} << j;
    if (!(diff & bit)) { continue; }
    path.push_back(pauli_x(qubits[j], others(at, bit)));
    at ^= bit;
  }
  for (auto const &op : path) { circuit.push_back(op); }
  for (auto it = path.rbegin() + 1; it != path.rend(); ++it) { circuit.push_back(*it); }
}

Circuit shift_circuit(Shift direction, std::vector<int> const &subregister, std::vector<Control> const &controls)
{
  if (subregister.empty()) { throw std::invalid_argument("shift_circuit: empty register"); }
  auto const m = subregister.size();
  Circuit    c;
  // Bit j of an incremented counter flips when all lower bits are 1; go from
  // the top bit down so the lower bits are still unflipped when read.
  for (std::size_t step = 0; step < m; ++step) {
    std::size_t const j = direction == Shift::Right ? m - 1 - step : step;
    std::vector<Control> ctl;
    for (std::size_t i = 0; i < j; ++i) { ctl.push_back({subregister[i], 1}); }
    c.push_back(pauli_x(subregister[j], concat(ctl, controls)));
  }
  return c;
}

Circuit collision_circuit(DiagonalBlocks const &blocks)
{
  auto const &layout = blocks.layout;
  int const   a1 = layout.a1();
  int const   a2 = layout.a2();
  auto const  ext = unitary_extension(blocks.assembled);

  Circuit c;
  c.push_back(hadamard(a1));
  c.push_back(diagonal(main_qubits(layout), ext.stacked()));
  c.push_back(swap(a1, layout.top_qubit()));
  c.push_back(hadamard(a1));

  // Each source block is lifted to a2 = 1 and every lifted block is then
  // relabelled by an XOR on the low block bits. The masks are chosen so that
  // source alpha ends up under g_alpha and no lift lands on an occupied slot.
  constexpr std::array<int, Links::kLinks> relabel{2, 6, 14, 2, 7};
  for (int a = 0; a < Links::kLinks; ++a) {
    std::vector<Control> sel = block_controls(layout, block::kHalf + block::kS + a, false);
    sel.push_back({a1, 0});
    c.push_back(pauli_x(a2, sel));
    for (int j = 0; j < RegisterLayout::kBlockQubits - 1; ++j) {
      if ((relabel[static_cast<std::size_t>(a)] >> j) & 1) { c.push_back(pauli_x(layout.block_qubit(j), {{a2, 1}})); }
    }
  }
  c.push_back(hadamard(a2, {{a1, 0}, {layout.top_qubit(), 1}}));
  return c;
}

Circuit propagation_circuit(RegisterLayout const &layout)
{
  Circuit c;
  for (int base : {block::kHalf + block::kF, block::kHalf + block::kG}) {
    for (int a = 1; a < Links::kLinks; ++a) {
      auto const i = static_cast<std::size_t>(a);
      auto const ctl = block_controls(layout, base + a);
      Shift const dir = (Links::ex[i] + Links::ey[i]) > 0 ? Shift::Right : Shift::Left;
      auto const  reg = Links::ex[i] != 0 ? x_register(layout) : y_register(layout);
      append(c, shift_circuit(dir, reg, ctl));
    }
  }
  return c;
}

Circuit macros_circuit(RegisterLayout const &layout)
{
  auto const bq = block_qubits(layout);
  // Everything happens in the upper copy of the good branch; labels below are
  // relative to it.
  std::vector<Control> const upper = concat({{layout.top_qubit(), 1}}, good_branch(layout));
  auto                       low = std::vector<int>(bq.begin(), bq.end() - 1);

  Circuit c;
  // g_0..g_4 from 5..9 to 8..12, through the empty source slots.
  for (int a = Links::kLinks - 1; a >= 0; --a) { append_transposition(c, low, block::kG + a, 8 + a, upper); }

  c.push_back(hadamard(layout.block_qubit(0), concat(block_bits(layout, {{2, 0}}), upper)));
  c.push_back(hadamard(layout.block_qubit(0), concat(block_bits(layout, {{2, 1}, {1, 0}}), upper)));
  c.push_back(hadamard(layout.block_qubit(1), concat(block_bits(layout, {{0, 0}}), upper)));
  c.push_back(hadamard(layout.block_qubit(2), concat(block_bits(layout, {{0, 0}, {1, 0}}), upper)));

  append_transposition(c, low, 8, block::kG, upper);
  return c;
}

Circuit boundary_circuit(RegisterLayout const &layout)
{
  int const  a1 = layout.a1();
  int const  a2 = layout.a2();
  int const  top = layout.top_qubit();
  auto const bq = block_qubits(layout);
  auto const low = std::vector<int>(bq.begin(), bq.end() - 1);

  Circuit c;
  // Wall vorticity (upper copy, block 15) moves under a2 = 1 in the lower
  // copy, where it is halved twice against empty neighbours to match the
  // 1/4 carried by omega and psi.
  c.push_back(swap(a2, top, concat(block_bits(layout, {{0, 1}, {1, 1}, {2, 1}, {3, 1}}), {{a1, 0}})));
  std::vector<Control> const wall_slot = {{a1, 0}, {a2, 1}, {top, 0}};
  c.push_back(hadamard(layout.block_qubit(0), concat(block_bits(layout, {{1, 1}, {2, 1}, {3, 1}}), wall_slot)));
  c.push_back(hadamard(layout.block_qubit(1), concat(block_bits(layout, {{0, 1}, {2, 1}, {3, 1}}), wall_slot)));

  // omega and psi down to blocks 0 and 1.
  append_transposition(c, bq, block::kHalf + block::kF, 0, good_branch(layout));
  append_transposition(c, bq, block::kHalf + block::kG, 1, good_branch(layout));

  // Wall mask on blocks 0 and 1, block-encoded against the empty a2 = 1 slots.
  std::vector<Control> const pair01 = concat(block_bits(layout, {{1, 0}, {2, 0}, {3, 0}, {4, 0}}), {{a1, 0}});
  c.push_back(hadamard(a2, pair01));
  auto targets = main_qubits(layout);
  targets.push_back(a2);
  c.push_back(diagonal(targets, wall_mask_extension(layout)));
  c.push_back(hadamard(a2, pair01));

  // Clear the mask residue out of the way, bring the wall vorticity under
  // omega and add.
  c.push_back(pauli_x(layout.block_qubit(1), concat(block_bits(layout, {{2, 0}, {3, 0}, {4, 0}}), {{a2, 1}, {a1, 0}})));
  append_transposition(c, low, 15, 0, {{top, 0}, {a1, 0}, {a2, 1}});
  c.push_back(hadamard(a2, pair01));
  return c;
}

} // namespace qlbm
