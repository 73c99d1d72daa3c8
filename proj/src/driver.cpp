#include "qlbm/driver.hpp"

#include "qlbm/field_io.hpp"
#include "qlbm/lbm.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace qlbm {

namespace {

using nlohmann::json;

bool is_pow2(Eigen::Index n) { return n >= 2 && std::has_single_bit(static_cast<unsigned long long>(n)); }

Field<double> velocity_magnitude(Field<double> const &u, Field<double> const &v) { return (u.square() + v.square()).sqrt(); }

void apply_json(RunConfig &cfg, json const &j)
{
  for (auto const &[key, value] : j.items()) {
    if (key == "nx") {
      cfg.sim.nx = value.get<Eigen::Index>();
    } else if (key == "ny") {
      cfg.sim.ny = value.get<Eigen::Index>();
    } else if (key == "steps") {
      cfg.sim.steps = value.get<int>();
    } else if (key == "lid_velocity") {
      cfg.sim.lid_velocity = value.get<double>();
    } else if (key == "source_coefficient") {
      cfg.sim.source_coefficient = value.get<double>();
    } else if (key == "mode") {
      cfg.mode = parse_mode(value.get<std::string>());
    } else if (key == "out") {
      cfg.out_dir = value.get<std::string>();
    } else if (key == "dump_every") {
      cfg.dump_every = value.get<int>();
    } else if (key == "compare") {
      cfg.compare = value.get<bool>();
    } else if (key == "threshold") {
      cfg.threshold = value.get<double>();
    } else {
      throw ConfigError("unknown config key: " + key);
    }
  }
}

json errors_json(FieldError const &e) { return {{"linf", e.linf}, {"l2", e.l2}}; }

json gates_json(GateCounts const &g)
{
  json j = json::object();
  for (std::size_t k = 0; k < kGateKindCount; ++k) {
    if (g[k] != 0) { j[std::string(to_string(static_cast<GateKind>(k)))] = g[k]; }
  }
  return j;
}

} // namespace

std::string to_string(Mode m)
{
  switch (m) {
  case Mode::Quantum: return "quantum";
  case Mode::Classical: return "classical";
  case Mode::Both: return "both";
  }
  return "?";
}

Mode parse_mode(std::string const &s)
{
  if (s == "quantum") { return Mode::Quantum; }
  if (s == "classical") { return Mode::Classical; }
  if (s == "both") { return Mode::Both; }
  throw ConfigError("unknown mode '" + s + "' (quantum, classical or both)");
}

void validate(RunConfig const &cfg)
{
  auto const &s = cfg.sim;
  if (s.steps < 1) { throw ConfigError("steps must be >= 1"); }
  if (s.nx < 3 || s.ny < 3) { throw ConfigError("grid must be at least 3x3"); }
  if (cfg.mode != Mode::Classical && (!is_pow2(s.nx) || !is_pow2(s.ny))) {
    throw ConfigError("quantum mode needs power-of-two grid sizes, got " + std::to_string(s.nx) + "x" + std::to_string(s.ny));
  }
  if (cfg.dump_every < 0) { throw ConfigError("dump-every must be >= 0"); }
  if (cfg.compare && cfg.mode != Mode::Both) { throw ConfigError("--compare needs --mode both"); }
  if (!std::isfinite(s.lid_velocity) || !std::isfinite(s.source_coefficient)) { throw ConfigError("non-finite parameter"); }
}

RunConfig load_config(std::vector<std::string> const &args)
{
  RunConfig   cfg;
  std::string mode = to_string(cfg.mode);
  std::string out = cfg.out_dir.string();
  std::string file;

  CLI::App app{"qlbm run"};
  app.allow_windows_style_options(false);
  auto *o_nx = app.add_option("--nx", cfg.sim.nx, "grid nodes along x");
  auto *o_ny = app.add_option("--ny", cfg.sim.ny, "grid nodes along y");
  auto *o_steps = app.add_option("--steps", cfg.sim.steps, "time steps");
  auto *o_lid = app.add_option("--lid-velocity", cfg.sim.lid_velocity, "lid velocity U");
  auto *o_src = app.add_option("--source-coefficient", cfg.sim.source_coefficient, "S = k * omega");
  auto *o_mode = app.add_option("--mode", mode, "quantum, classical or both");
  auto *o_out = app.add_option("--out", out, "output directory");
  auto *o_dump = app.add_option("--dump-every", cfg.dump_every, "dump cadence in steps (0: final only)");
  auto *o_cmp = app.add_flag("--compare", cfg.compare, "exit 2 if quantum and classical disagree");
  auto *o_thr = app.add_option("--threshold", cfg.threshold, "L-inf relative tolerance for --compare");
  app.add_option("--config", file, "JSON file with the same keys (underscored)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (CLI::ParseError const &e) {
    throw ConfigError(e.what());
  }

  if (!file.empty()) {
    RunConfig     from_file;
    std::ifstream is(file);
    if (!is) { throw ConfigError("cannot read config file " + file); }
    json j;
    try {
      j = json::parse(is);
    } catch (json::exception const &e) {
      throw ConfigError(std::string("bad config file: ") + e.what());
    }
    apply_json(from_file, j);
    // Flags given on the command line win.
    if (!o_nx->count()) { cfg.sim.nx = from_file.sim.nx; }
    if (!o_ny->count()) { cfg.sim.ny = from_file.sim.ny; }
    if (!o_steps->count()) { cfg.sim.steps = from_file.sim.steps; }
    if (!o_lid->count()) { cfg.sim.lid_velocity = from_file.sim.lid_velocity; }
    if (!o_src->count()) { cfg.sim.source_coefficient = from_file.sim.source_coefficient; }
    if (!o_mode->count()) { mode = to_string(from_file.mode); }
    if (!o_out->count()) { out = from_file.out_dir.string(); }
    if (!o_dump->count()) { cfg.dump_every = from_file.dump_every; }
    if (!o_cmp->count()) { cfg.compare = from_file.compare; }
    if (!o_thr->count()) { cfg.threshold = from_file.threshold; }
  }
  cfg.mode = parse_mode(mode);
  cfg.out_dir = out;
  validate(cfg);
  return cfg;
}

FieldError compare_fields(Field<double> const &a, Field<double> const &b)
{
  if (a.rows() != b.rows() || a.cols() != b.cols()) { throw std::invalid_argument("compare_fields: shape mismatch"); }
  constexpr double floor = 1e-300;
  if (a.size() == 0) { return {}; }
  auto const d = (a - b).eval();
  FieldError e;
  e.linf = d.abs().maxCoeff() / std::max(b.abs().maxCoeff(), floor);
  e.l2 = std::sqrt(d.square().sum()) / std::max(std::sqrt(b.square().sum()), floor);
  return e;
}

double StepComparison::worst() const { return std::max({omega.linf, psi.linf, u.linf, v.linf}); }

ComparisonReport run_simulation(RunConfig const &cfg)
{
  validate(cfg);
  auto const      &sim = cfg.sim;
  ComparisonReport report;
  report.config = cfg;

  bool const run_q = cfg.mode != Mode::Classical;
  bool const run_c = cfg.mode != Mode::Quantum;

  auto c = lbm::initial_state<double>(sim);
  auto q = c;
  Snapshot prev;

  auto dump_due = [&](int n) { return n == sim.steps || (cfg.dump_every > 0 && n % cfg.dump_every == 0); };
  StepOptions const opts{cfg.check_stages};

  for (int n = 1; n <= sim.steps; ++n) {
    Field<double> const last_omega = run_q ? q.omega : c.omega;
    Field<double> const last_psi = run_q ? q.psi : c.psi;

    if (run_q) {
      auto r = run_timestep(q.omega, q.psi, q.u, q.v, sim, opts);
      q.omega = std::move(r.omega);
      q.psi = std::move(r.psi);
      std::tie(q.u, q.v) = lbm::velocity_from_stream(q.psi, sim);
      report.probabilities.push_back(r.success_probability);
      for (auto const &s : r.stages) { report.max_stage_deviation = std::max(report.max_stage_deviation, s.max_deviation); }
      if (!r.stages.empty()) { report.last_stages = std::move(r.stages); }
    }
    if (run_c) { c = lbm::step(c, sim); }

    if (run_q && run_c) {
      StepComparison e;
      e.step = n;
      e.omega = compare_fields(q.omega, c.omega);
      e.psi = compare_fields(q.psi, c.psi);
      e.u = compare_fields(q.u, c.u);
      e.v = compare_fields(q.v, c.v);
      report.max_linf = std::max(report.max_linf, e.worst());
      report.errors.push_back(e);
    }

    if (n == sim.steps) {
      auto const &now = run_q ? q : c;
      report.residual_omega = (now.omega - last_omega).abs().maxCoeff();
      report.residual_psi = (now.psi - last_psi).abs().maxCoeff();
    }
    if (dump_due(n)) {
      if (run_q) { report.quantum.push_back({n, q.omega, q.psi, q.u, q.v}); }
      if (run_c) { report.classical.push_back({n, c.omega, c.psi, c.u, c.v}); }
    }
  }
  report.within_threshold = !(report.max_linf > cfg.threshold);
  return report;
}

std::string report_json(ComparisonReport const &report)
{
  auto const &cfg = report.config;
  json        j;
  j["config"] = {{"nx", cfg.sim.nx},
                 {"ny", cfg.sim.ny},
                 {"steps", cfg.sim.steps},
                 {"dt", cfg.sim.dt},
                 {"dx", cfg.sim.dx},
                 {"dy", cfg.sim.dy},
                 {"epsilon", cfg.sim.epsilon},
                 {"lid_velocity", cfg.sim.lid_velocity},
                 {"source_coefficient", cfg.sim.source_coefficient},
                 {"mode", to_string(cfg.mode)},
                 {"dump_every", cfg.dump_every},
                 {"compare", cfg.compare},
                 {"threshold", cfg.threshold}};
  j["steady_residual"] = {{"omega", report.residual_omega}, {"psi", report.residual_psi}};

  if (cfg.mode == Mode::Both) {
    json per_step = json::array();
    for (auto const &e : report.errors) {
      per_step.push_back({{"step", e.step},
                          {"omega", errors_json(e.omega)},
                          {"psi", errors_json(e.psi)},
                          {"u", errors_json(e.u)},
                          {"v", errors_json(e.v)}});
    }
    j["errors"] = {{"per_step", per_step}, {"max_linf", report.max_linf}, {"within_threshold", report.within_threshold}};
    if (!report.errors.empty()) { j["errors"]["final"] = per_step.back(); }
  }
  if (cfg.mode != Mode::Classical) {
    j["success_probability"] = report.probabilities;
    j["max_stage_deviation"] = report.max_stage_deviation;
    json stages = json::array();
    for (auto const &s : report.last_stages) {
      stages.push_back({{"name", s.name},
                        {"constant", s.constant},
                        {"branch_probability", s.branch_probability},
                        {"max_deviation", s.max_deviation},
                        {"gates", gates_json(s.gates)}});
    }
    j["last_step_stages"] = stages;
  }
  return j.dump(2) + "\n";
}

void emit_outputs(ComparisonReport const &report)
{
  namespace fs = std::filesystem;
  auto const &cfg = report.config;
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) { throw std::runtime_error("cannot create output directory " + cfg.out_dir.string() + ": " + ec.message()); }

  auto write_set = [](fs::path const &dir, std::vector<Snapshot> const &snaps) {
    for (auto const &s : snaps) {
      char tag[16];
      std::snprintf(tag, sizeof tag, "_%04d.csv", s.step);
      write_csv(dir / ("omega" + std::string(tag)), s.omega);
      write_csv(dir / ("psi" + std::string(tag)), s.psi);
      write_csv(dir / ("u" + std::string(tag)), s.u);
      write_csv(dir / ("v" + std::string(tag)), s.v);
      write_csv(dir / ("velocity_magnitude" + std::string(tag)), velocity_magnitude(s.u, s.v));
    }
  };
  write_set(cfg.out_dir, cfg.mode == Mode::Classical ? report.classical : report.quantum);
  if (cfg.mode == Mode::Both) {
    fs::create_directories(cfg.out_dir / "classical", ec);
    if (ec) { throw std::runtime_error("cannot create " + (cfg.out_dir / "classical").string()); }
    write_set(cfg.out_dir / "classical", report.classical);
  }

  std::ofstream os(cfg.out_dir / "report.json", std::ios::binary);
  if (!os) { throw std::runtime_error("cannot write report.json in " + cfg.out_dir.string()); }
  os << report_json(report);
}

} // namespace qlbm
