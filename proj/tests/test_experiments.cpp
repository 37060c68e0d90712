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

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include "kvn/errors.hpp"
#include "kvn/experiment_config.hpp"
#include "kvn/experiments.hpp"

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path &p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string &name) {
  const auto dir = fs::temp_directory_path() / ("kvnemu_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

kvn::ExperimentConfig parse(const std::string &text) {
  std::istringstream is(text);
  return kvn::parse_config(is);
}

const char *kSmallCaseA = "case = a\n"
                          "nx = 5\n"
                          "order = 1\n"
                          "lambda = 10000\n"
                          "steps = 40\n"
                          "engines = kvn-qsvt,kvn-expm,classical-rk4\n";

TEST(ExperimentConfig, CheckedInConfigsLoadAndValidate) {
  for (const char *name : {"a", "b", "c", "d", "d_reduced"}) {
    const auto path = std::string(KVN_CONFIG_DIR) + "/case_" + name + ".cfg";
    const auto cfg = kvn::load_config(path);
    EXPECT_EQ(cfg.case_id, name[0]);
    EXPECT_TRUE(kvn::validate_config(cfg).empty()) << path;
  }
  const auto b = kvn::load_config(kvn::default_config_path('b'));
  EXPECT_EQ(b.sweep_size(), 3u);
  EXPECT_EQ(b.order_at(2), 4u);
  EXPECT_EQ(b.steps_at(1), 710u);
  EXPECT_EQ(b.nx_at(2), 8u);
}

TEST(ExperimentConfig, WriteParseRoundTrip) {
  for (char id : {'a', 'b', 'c', 'd'}) {
    const auto cfg = kvn::load_config(kvn::default_config_path(id));
    std::stringstream ss;
    kvn::write_config(ss, cfg);
    EXPECT_TRUE(kvn::parse_config(ss) == cfg) << id;
  }
  auto cfg = parse(kSmallCaseA);
  cfg.lambda = 0.1 + 0.2; // not exactly representable in short decimal
  std::stringstream ss;
  kvn::write_config(ss, cfg);
  EXPECT_EQ(kvn::parse_config(ss).lambda, cfg.lambda);
}

TEST(ExperimentConfig, ReportsEveryProblem) {
  try {
    parse("case = a\nbogus = 1\nlambda = abc\nlambda = 2\nsteps = 10,x\n");
    FAIL() << "expected ConfigurationError";
  } catch (const kvn::ConfigurationError &e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("bogus"), std::string::npos);
    EXPECT_NE(msg.find("lambda"), std::string::npos);
    EXPECT_NE(msg.find("steps"), std::string::npos);
  }
  EXPECT_THROW(parse("case = e\n"), kvn::ConfigurationError);
  EXPECT_THROW(parse("case = a\nlambda = -1\n"), kvn::ConfigurationError);
  EXPECT_THROW(parse("case = a\nnx = 3\n"), kvn::ConfigurationError);
  EXPECT_THROW(parse("case = b\norder = 2,3\nsteps = 10,20,30\n"), kvn::ConfigurationError);
  EXPECT_THROW(kvn::load_config("/nonexistent/case.cfg"), kvn::IoError);
}

TEST(ExperimentConfig, EngineNames) {
  EXPECT_EQ(kvn::parse_engine("kvn-qsvt"), kvn::Engine::kvn_qsvt);
  EXPECT_EQ(kvn::to_string(kvn::Engine::classical_rk4), "classical-rk4");
  const auto list = kvn::parse_engine_list("kvn-expm,classical-rk4");
  ASSERT_EQ(list.size(), 2u);
  EXPECT_THROW(kvn::parse_engine_list("kvn-expm,kvn-expm"), kvn::ParameterError);
  EXPECT_THROW(kvn::parse_engine("euler"), kvn::ParameterError);
}

TEST(Experiments, PlasmaOscillationAllEngines) {
  const auto res = kvn::run_case(parse(kSmallCaseA));
  ASSERT_EQ(res.runs.size(), 1u);
  const auto &run = res.runs[0];
  EXPECT_EQ(run.dimension, 11u);
  // two entries of modulus 1 per point
  EXPECT_NEAR(run.alpha, std::sqrt(10.0), 1e-12);
  EXPECT_EQ(run.series.size(), 3u);
  for (const auto &m : run.metrics) {
    EXPECT_TRUE(m.note.empty() || m.note.find("diverged") == std::string::npos);
    EXPECT_LT(m.max_error, 1e-6) << kvn::to_string(m.engine);
  }
  EXPECT_FALSE(res.diverged());
}

TEST(Experiments, ZeroAmplitudeStaysAtRest) {
  auto cfg = parse(kSmallCaseA);
  cfg.amplitude = 0.0;
  const auto res = kvn::run_case(cfg);
  for (const auto &s : res.runs[0].series)
    for (const auto &x : s.states)
      for (double v : x) EXPECT_NEAR(v, 0.0, 1e-14);
}

TEST(Experiments, EmittedFilesAreDeterministic) {
  const auto a = scratch_dir("det_a"), b = scratch_dir("det_b");
  kvn::RunOptions opts;
  opts.deterministic = true;
  auto cfg = parse("case = b\nnx = 5\norder = 2,3\nlambda = 1\nomega_p = -0.1\ninitial = sine\n"
                   "steps = 12,12\nengines = kvn-qsvt,kvn-expm,classical-rk4\n");
  kvn::emit(kvn::run_case(cfg, opts), a.string());
  kvn::emit(kvn::run_case(cfg, opts), b.string());
  for (const char *f : {"summary.csv", "delta.csv"}) {
    EXPECT_FALSE(slurp(a / f).empty()) << f;
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
  // the manifest parses back to the configuration that produced it
  EXPECT_TRUE(kvn::load_config((a / "manifest.cfg").string()) == cfg);
  EXPECT_TRUE(fs::exists(a / "report.txt"));
}

TEST(Experiments, QsvtAgreesWithExpmOnNonlinearAdvection) {
  auto cfg = parse("case = b\nnx = 5\norder = 2\nlambda = 1\nomega_p = -0.1\ninitial = sine\n"
                   "steps = 30\nengines = kvn-qsvt,kvn-expm\n");
  const auto res = kvn::run_case(cfg);
  const auto &run = res.runs[0];
  const auto *q = run.find(kvn::Engine::kvn_qsvt);
  const auto *e = run.find(kvn::Engine::kvn_expm);
  ASSERT_TRUE(q && e);
  ASSERT_EQ(q->times.size(), e->times.size());
  for (std::size_t k = 0; k < q->times.size(); ++k)
    for (std::size_t i = 0; i < q->states[k].size(); ++i) EXPECT_NEAR(q->states[k][i], e->states[k][i], 1e-8);
  EXPECT_NEAR(run.metric(kvn::Engine::kvn_qsvt)->delta_target, run.metric(kvn::Engine::kvn_expm)->delta_target, 1e-8);
}

TEST(Experiments, KelvinHelmholtzInitialState) {
  auto cfg = kvn::load_config(std::string(KVN_CONFIG_DIR) + "/case_d_reduced.cfg");
  const auto grid = kvn::case_grid(cfg, 0);
  const auto layout = kvn::VariableLayout(grid);
  const auto base = layout.unpack(kvn::case_initial_state(cfg, grid, false));
  const auto pert = layout.unpack(kvn::case_initial_state(cfg, grid, true));
  for (std::size_t p = 0; p < grid.point_count(); ++p) {
    const auto c = grid.coords(p);
    const double y = (static_cast<double>(c[1]) - static_cast<double>(grid.points[1]) / 2.0) * grid.spacing[1];
    const bool inside = std::abs(y) <= cfg.shear_halfwidth * grid.spacing[1];
    EXPECT_NEAR(base[kvn::FieldComponent::u1][p], inside ? cfg.u0 : -cfg.u0, 1e-14);
    EXPECT_NEAR(base[kvn::FieldComponent::u2][p], 0.0, 1e-14);
    EXPECT_NEAR(base[kvn::FieldComponent::B3][p], cfg.b0, 1e-14);
    const double x = (static_cast<double>(c[0]) - static_cast<double>(grid.points[0]) / 2.0) * grid.spacing[0];
    const double bump = inside ? cfg.epsilon * std::sin(cfg.kx * x + cfg.ky * y) : 0.0;
    EXPECT_NEAR(pert[kvn::FieldComponent::u1][p] - base[kvn::FieldComponent::u1][p], bump, 1e-14);
  }
}

// CLI exit codes: 0 ok, 2 validation failure, 3 numerical divergence.
int run_cli(const std::string &args) {
  const std::string cmd = std::string(KVNEMU_BINARY) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch_dir("cli");
  {
    std::ofstream(dir / "a.cfg") << kSmallCaseA;
    std::ofstream(dir / "bad.cfg") << "case = a\nlambda = nope\n";
    std::ofstream(dir / "diverge.cfg") << "case = b\nnx = 5\norder = 2\nlambda = 1\ninitial = sine\n"
                                          "tau = 25\ntruncation = 5\nsteps = 400\nengines = kvn-qsvt\n";
  }
  EXPECT_EQ(run_cli("run-a --config " + (dir / "a.cfg").string() + " --out " + (dir / "out_a").string() +
                    " --deterministic"),
            0);
  EXPECT_TRUE(fs::exists(dir / "out_a" / "trajectory.csv"));
  EXPECT_EQ(run_cli("run-a --config " + (dir / "a.cfg").string() + " --out " + (dir / "out_dump").string() +
                    " --engines kvn-expm --dump-operator"),
            0);
  EXPECT_TRUE(fs::exists(dir / "out_dump" / "operator_nx5_m1.mtx"));
  EXPECT_EQ(run_cli("run-a --config " + (dir / "bad.cfg").string()), 2);
  EXPECT_EQ(run_cli("run-a --config " + (dir / "missing.cfg").string()), 2);
  EXPECT_EQ(run_cli("run-b --config " + (dir / "a.cfg").string()), 2);
  EXPECT_EQ(run_cli("run-a --config " + (dir / "a.cfg").string() + " --engines warp-drive"), 2);
  EXPECT_EQ(run_cli("no-such-command"), 2);
  EXPECT_EQ(run_cli("run-b --config " + (dir / "diverge.cfg").string() + " --out " + (dir / "out_d").string()), 3);
  EXPECT_EQ(run_cli("selftest"), 0);
  EXPECT_EQ(run_cli("verify-be"), 0);
}

} // namespace
