#include "qlbm/driver.hpp"
#include "qlbm/gate_count.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

namespace {

int usage(std::FILE *to)
{
  std::fputs("usage: qlbm run [--nx N --ny M --steps K --lid-velocity U --mode quantum|classical|both\n"
             "                 --out DIR --dump-every K --compare --threshold T --source-coefficient C --config FILE]\n"
             "       qlbm gates --qubits N\n",
             to);
  return to == stdout ? 0 : 1;
}

int run(std::vector<std::string> const &args)
{
  for (auto const &a : args) {
    if (a == "-h" || a == "--help") { return usage(stdout); }
  }
  qlbm::RunConfig cfg;
  try {
    cfg = qlbm::load_config(args);
  } catch (qlbm::ConfigError const &e) {
    std::fprintf(stderr, "qlbm run: %s\n", e.what());
    return 1;
  }
  auto const report = qlbm::run_simulation(cfg);
  qlbm::emit_outputs(report);

  std::printf("mode=%s grid=%lldx%lld steps=%d\n", qlbm::to_string(cfg.mode).c_str(), static_cast<long long>(cfg.sim.nx),
              static_cast<long long>(cfg.sim.ny), cfg.sim.steps);
  std::printf("steady residual: omega %.3e  psi %.3e\n", report.residual_omega, report.residual_psi);
  if (cfg.mode == qlbm::Mode::Both) { std::printf("max L-inf relative error: %.3e\n", report.max_linf); }
  if (!report.probabilities.empty()) {
    std::printf("last success probability: %.6f\n", report.probabilities.back());
    std::printf("max stage deviation: %.3e\n", report.max_stage_deviation);
  }
  std::printf("wrote %s\n", cfg.out_dir.string().c_str());
  if (cfg.compare && !report.within_threshold) {
    std::fprintf(stderr, "comparison failed: %.3e > %.3e\n", report.max_linf, cfg.threshold);
    return 2;
  }
  return 0;
}

int gates(std::vector<std::string> const &args)
{
  int      n = 13;
  CLI::App app{"qlbm gates"};
  app.add_option("--qubits", n, "main-register qubits (>= 7)")->required();
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (CLI::ParseError const &e) {
    return app.exit(e);
  }
  qlbm::GateAccounting r;
  try {
    r = qlbm::gate_count_report(n);
  } catch (std::invalid_argument const &e) {
    std::fprintf(stderr, "qlbm gates: %s\n", e.what());
    return 1;
  }
  std::printf("main qubits                    %d (x %d, y %d, block 5)\n", r.main_qubits, r.x_qubits, r.y_qubits);
  std::printf("state preparation CNOT bound   %lld\n", static_cast<long long>(r.prep_cnot_bound));
  std::printf("diagonal operator CNOTs        %lld\n", static_cast<long long>(r.diagonal_cnot));
  std::printf("propagation MCX                %lld\n", static_cast<long long>(r.propagation_mcx));
  std::printf("  per added register qubit     %lld\n", static_cast<long long>(r.propagation_mcx_per_register_qubit));
  std::printf("collision gates (excl. diag)   %lld\n", static_cast<long long>(r.collision_gates - 1));
  std::printf("macros gates                   %lld\n", static_cast<long long>(r.macros_gates));
  std::printf("boundary gates (excl. diag)    %lld\n", static_cast<long long>(r.boundary_gates - 1));
  return 0;
}

} // namespace

int main(int argc, char **argv)
{
  if (argc < 2) { return usage(stderr); }
  std::string const        cmd = argv[1];
  std::vector<std::string> rest(argv + 2, argv + argc);
  try {
    if (cmd == "run") { return run(rest); }
    if (cmd == "gates") { return gates(rest); }
    if (cmd == "-h" || cmd == "--help") { return usage(stdout); }
  } catch (std::exception const &e) {
    std::fprintf(stderr, "qlbm: %s\n", e.what());
    return 1;
  }
  std::fprintf(stderr, "qlbm: unknown command '%s'\n", cmd.c_str());
  return usage(stderr);
}
