#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qlbm/driver.hpp"
#include "qlbm/field_io.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace qlbm;
namespace fs = std::filesystem;

namespace {

fs::path scratch(std::string const &name)
{
  auto p = fs::temp_directory_path() / ("qlbm_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(fs::path const &p)
{
  std::ifstream     is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

} // namespace

TEST_CASE("config defaults and flags")
{
  auto const d = load_config({});
  CHECK(d.sim.nx == 16);
  CHECK(d.sim.ny == 16);
  CHECK(d.sim.steps == 500);
  CHECK(d.sim.lid_velocity == 1.0);
  CHECK(d.sim.dt == 1.0);
  CHECK(d.sim.epsilon == 1.0);

  auto const c = load_config({"--nx", "8", "--ny", "8", "--steps", "10", "--mode", "classical"});
  CHECK(c.sim.nx == 8);
  CHECK(c.sim.steps == 10);
  CHECK(c.mode == Mode::Classical);

  CHECK_THROWS_AS(load_config({"--nx", "12", "--mode", "quantum"}), ConfigError);
  CHECK_NOTHROW(load_config({"--nx", "12", "--mode", "classical"}));
  CHECK_THROWS_AS(load_config({"--bogus"}), ConfigError);
  CHECK_THROWS_AS(load_config({"--steps", "0"}), ConfigError);
  CHECK_THROWS_AS(load_config({"--compare", "--mode", "quantum"}), ConfigError);
}

TEST_CASE("config file with flag override")
{
  auto const dir = scratch("cfg");
  fs::create_directories(dir);
  {
    std::ofstream os(dir / "run.json");
    os << R"({"nx": 4, "ny": 8, "steps": 7, "mode": "quantum", "lid_velocity": 0.5})";
  }
  auto const c = load_config({"--config", (dir / "run.json").string(), "--steps", "3"});
  CHECK(c.sim.nx == 4);
  CHECK(c.sim.ny == 8);
  CHECK(c.sim.steps == 3);
  CHECK(c.mode == Mode::Quantum);
  CHECK(c.sim.lid_velocity == 0.5);
  {
    std::ofstream os(dir / "bad.json");
    os << R"({"nz": 4})";
  }
  CHECK_THROWS_AS(load_config({"--config", (dir / "bad.json").string()}), ConfigError);
}

TEST_CASE("compare_fields")
{
  Field<double> b = Field<double>::Random(4, 4);
  b(0, 0) = 1.0;
  b = b.max(-1.0).min(1.0);
  auto const same = compare_fields(b, b);
  CHECK(same.linf == 0.0);
  CHECK(same.l2 == 0.0);

  Field<double> z = Field<double>::Zero(3, 3);
  CHECK(compare_fields(z, z).linf == 0.0);

  Field<double> a = b + 1e-9;
  CHECK(compare_fields(a, b).linf == doctest::Approx(1e-9).epsilon(1e-6));
  CHECK_THROWS_AS(compare_fields(z, b), std::invalid_argument);
}

TEST_CASE("csv roundtrip is exact")
{
  auto const    dir = scratch("csv");
  Field<double> f = Field<double>::Random(3, 5);
  f(1, 2) = 1.0 / 3.0;
  fs::create_directories(dir);
  write_csv(dir / "f.csv", f);
  auto const g = read_csv(dir / "f.csv");
  CHECK(g.rows() == 3);
  CHECK(g.cols() == 5);
  CHECK((f == g).all());
  auto const text = to_csv(f);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
}

TEST_CASE("both mode run, outputs and report")
{
  RunConfig cfg;
  cfg.sim.nx = cfg.sim.ny = 8;
  cfg.sim.steps = 10;
  cfg.dump_every = 5;
  cfg.out_dir = scratch("both");
  auto const report = run_simulation(cfg);
  emit_outputs(report);

  CHECK(report.errors.size() == 10);
  CHECK(report.max_linf <= 1e-8);
  CHECK(report.within_threshold);
  CHECK(report.probabilities.size() == 10);

  for (char const *name : {"omega", "psi", "u", "v", "velocity_magnitude"}) {
    CHECK(fs::exists(cfg.out_dir / (std::string(name) + "_0005.csv")));
    CHECK(fs::exists(cfg.out_dir / (std::string(name) + "_0010.csv")));
    CHECK(fs::exists(cfg.out_dir / "classical" / (std::string(name) + "_0010.csv")));
  }

  auto const psi = read_csv(cfg.out_dir / "psi_0010.csv");
  auto const u = read_csv(cfg.out_dir / "u_0010.csv");
  auto const v = read_csv(cfg.out_dir / "v_0010.csv");
  auto const mag = read_csv(cfg.out_dir / "velocity_magnitude_0010.csv");
  CHECK((psi.row(0) == 0.0).all());
  CHECK((psi.row(7) == 0.0).all());
  CHECK((psi.col(0) == 0.0).all());
  CHECK((psi.col(7) == 0.0).all());
  CHECK((u.row(7) == 1.0).all());
  CHECK(((u.square() + v.square()).sqrt() - mag).abs().maxCoeff() == 0.0);

  auto const j = nlohmann::json::parse(slurp(cfg.out_dir / "report.json"));
  CHECK(j["errors"]["max_linf"].get<double>() >= 0.0);
  for (auto const &e : j["errors"]["per_step"]) {
    for (char const *f : {"omega", "psi", "u", "v"}) {
      CHECK(e[f]["linf"].get<double>() >= 0.0);
      CHECK(e[f]["l2"].get<double>() >= 0.0);
    }
  }
  CHECK(j["last_step_stages"].size() == 5);
  CHECK(j["config"]["nx"] == 8);
}

TEST_CASE("runs are byte-identical")
{
  RunConfig cfg;
  cfg.sim.nx = cfg.sim.ny = 8;
  cfg.sim.steps = 6;
  cfg.dump_every = 3;
  cfg.out_dir = scratch("det_a");
  emit_outputs(run_simulation(cfg));
  auto second = cfg;
  second.out_dir = scratch("det_b");
  emit_outputs(run_simulation(second));
  std::size_t files = 0;
  for (auto const &entry : fs::recursive_directory_iterator(cfg.out_dir)) {
    if (!entry.is_regular_file()) { continue; }
    auto const rel = fs::relative(entry.path(), cfg.out_dir);
    if (rel == "report.json") { continue; }
    CHECK(slurp(entry.path()) == slurp(second.out_dir / rel));
    ++files;
  }
  CHECK(files == 20);
  CHECK(slurp(cfg.out_dir / "report.json") == slurp(second.out_dir / "report.json"));
}

TEST_CASE("quiet lid gives zero output")
{
  RunConfig cfg;
  cfg.sim.nx = cfg.sim.ny = 4;
  cfg.sim.steps = 5;
  cfg.sim.lid_velocity = 0.0;
  cfg.out_dir = scratch("quiet");
  auto const r = run_simulation(cfg);
  REQUIRE(r.quantum.size() == 1);
  CHECK((r.quantum[0].omega == 0.0).all());
  CHECK((r.quantum[0].psi == 0.0).all());
  CHECK((r.quantum[0].u == 0.0).all());
  CHECK((r.quantum[0].v == 0.0).all());
  CHECK(r.max_linf == 0.0);
}

TEST_CASE("unwritable output directory")
{
  RunConfig cfg;
  cfg.sim.nx = cfg.sim.ny = 4;
  cfg.sim.steps = 1;
  cfg.mode = Mode::Classical;
  auto const blocker = scratch("blocker");
  std::ofstream(blocker) << "file";
  cfg.out_dir = blocker / "sub";
  CHECK_THROWS(emit_outputs(run_simulation(cfg)));
  fs::remove(blocker);
}
