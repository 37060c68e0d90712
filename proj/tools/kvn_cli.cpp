// Copyright 2026 The kvnemu Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// kvnemu: command line front end for the case drivers and self checks.
// Exit codes: 0 success, 2 validation failure, 3 numerical divergence.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "kvn/block_encoding.hpp"
#include "kvn/errors.hpp"
#include "kvn/experiment_config.hpp"
#include "kvn/experiments.hpp"
#include "kvn/fock_basis.hpp"
#include "kvn/kvn_hamiltonian.hpp"
#include "kvn/kvn_state.hpp"
#include "kvn/qsvt_engine.hpp"
#include "kvn/reference_solvers.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 2;
constexpr int kDivergence = 3;

struct Flags {
  std::string config;
  std::string out;
  std::string engines;
  bool deterministic = false;
  bool dump_operator = false;
};

void add_flags(CLI::App *cmd, Flags &f) {
  cmd->add_option("--config", f.config, "configuration file (defaults to the checked-in case file)");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--engines", f.engines, "comma separated subset of kvn-qsvt,kvn-expm,classical-rk4");
  cmd->add_flag("--deterministic", f.deterministic, "single-threaded assembly");
  cmd->add_flag("--dump-operator", f.dump_operator, "write H_m in Matrix Market format");
}

int run_case(char id, const Flags &f) {
  kvn::ExperimentConfig cfg = kvn::load_config(f.config.empty() ? kvn::default_config_path(id) : f.config);
  if (cfg.case_id != id)
    throw kvn::ConfigurationError(std::string("configuration is for case ") + cfg.case_id + ", not case " + id);
  if (!f.engines.empty()) cfg.engines = kvn::parse_engine_list(f.engines);
  if (f.dump_operator) cfg.dump_operator = true;
  const std::string out = f.out.empty() ? std::string("out/case_") + id : f.out;
  kvn::RunOptions opts;
  opts.log = &std::cerr;
  opts.deterministic = f.deterministic;
  opts.dump_dir = out;
  const auto res = kvn::run_case(cfg, opts);
  kvn::emit(res, out);
  std::ifstream report(out + "/report.txt");
  std::cout << report.rdbuf();
  return res.diverged() ? kDivergence : kOk;
}

int verify_be() {
  const auto suite = kvn::verify_random_blocks(20260101, 50);
  std::printf("random instances: %zu, worst deviation %.3e, worst unitarity defect %.3e\n", suite.instances,
              suite.worst_deviation, suite.worst_unitarity_defect);
  const auto h = kvn::assemble(kvn::tiny_test_system(), 1, 1.0);
  const Eigen::MatrixXcd dense(h.matrix());
  const auto orc = kvn::build_oracles(h);
  const auto rep = kvn::verify_block(orc, dense);
  std::printf("assembled H_1 (D = %zu, s = %zu, %u qubits): deviation %.3e, normalization s^2 A_max = %.6g\n",
              h.dimension(), orc.sparsity, orc.total_qubits(), rep.max_deviation, rep.normalization);
  const bool ok = suite.worst_deviation < 1e-12 && rep.max_deviation < 1e-12;
  std::printf("%s\n", ok ? "verify-be: PASS" : "verify-be: FAIL");
  return ok ? kOk : kDivergence;
}

int selftest() {
  bool ok = true;
  auto check = [&](const char *name, bool pass) {
    std::printf("%-44s %s\n", name, pass ? "PASS" : "FAIL");
    ok = ok && pass;
  };

  kvn::TruncatedFockBasis basis(4, 3);
  bool bijective = basis.dimension() == kvn::fock_dimension(4, 3);
  for (std::uint64_t r = 0; r < basis.dimension() && bijective; ++r) bijective = basis.rank(basis.unrank(r)) == r;
  check("fock rank/unrank bijection (N = 4, m = 3)", bijective);

  auto cfg = kvn::load_config(kvn::default_config_path('a'));
  const auto grid = kvn::case_grid(cfg, 0);
  const auto sys = kvn::build_system(grid, kvn::case_params(cfg, grid));
  check("case a system validates", kvn::validate_system(sys).ok());
  const auto h = kvn::assemble(sys, 1, cfg.lambda);
  check("case a hermiticity", kvn::hermiticity_defect(h.matrix()) <= 1e-12 * h.max_entry());

  const auto psi0 = kvn::encode(kvn::case_initial_state(cfg, grid), cfg.lambda, h.basis());
  auto plan = kvn::jacobi_anger_coefficients(cfg.tau, cfg.truncation);
  plan.alpha = h.frobenius_norm();
  const auto q = kvn::evolve_qsvt(h, psi0, 8, plan);
  const auto e = kvn::evolve_expm(h, psi0, 8 * plan.time_step());
  check("qsvt matches expm over 8 steps", (q.amplitudes - e.amplitudes).norm() < 1e-8);

  const auto suite = kvn::verify_random_blocks(7, 5);
  check("block encoding on 5 random instances", suite.worst_deviation < 1e-12);

  std::printf("%s\n", ok ? "selftest: PASS" : "selftest: FAIL");
  return ok ? kOk : kDivergence;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"kvnemu: classical emulator of KvN linearization with QSVT time stepping"};
  app.require_subcommand(1);
  Flags flags;
  CLI::App *cmds[] = {
      app.add_subcommand("run-a", "case a: 1D linear plasma oscillation"),
      app.add_subcommand("run-b", "case b: 1D nonlinear advection, sweep over m"),
      app.add_subcommand("run-c", "case c: 1D nonlinear advection, sweep over N_x"),
      app.add_subcommand("run-d", "case d: 2D Kelvin-Helmholtz instability"),
      app.add_subcommand("verify-be", "dense check of the sparse-access block encoding"),
      app.add_subcommand("selftest", "quick consistency checks"),
  };
  for (auto *c : cmds) add_flags(c, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &err) {
    const int code = app.exit(err);
    return code == 0 ? kOk : kValidation;
  }

  try {
    for (char id : {'a', 'b', 'c', 'd'})
      if (cmds[id - 'a']->parsed()) return run_case(id, flags);
    if (cmds[4]->parsed()) return verify_be();
    return selftest();
  } catch (const kvn::ConfigurationError &err) {
    std::cerr << "error: " << err.what() << "\n";
    return kValidation;
  } catch (const kvn::ParameterError &err) {
    std::cerr << "error: " << err.what() << "\n";
    return kValidation;
  } catch (const kvn::CapacityError &err) {
    std::cerr << "error: " << err.what() << "\n";
    return kValidation;
  } catch (const kvn::IoError &err) {
    std::cerr << "error: " << err.what() << "\n";
    return kValidation;
  } catch (const kvn::ContractError &err) {
    std::cerr << "error: " << err.what() << "\n";
    return kValidation;
  } catch (const kvn::Error &err) {
    std::cerr << "numerical failure: " << err.what() << "\n";
    return kDivergence;
  }
}
