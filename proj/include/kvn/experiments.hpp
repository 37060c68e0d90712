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

#pragma once

// End-to-end case drivers. Each sweep entry builds the discretized system,
// assembles H_m, and runs the requested engines on the QSVT time grid
// t_k = k tau / alpha. Expm and RK4 are sampled every `sample_stride` steps
// and at the final step; every engine is also evaluated exactly at t_target.
//
// Output files (all floats with 17 significant digits):
//   manifest.cfg   configuration, parseable by load_config; '#' lines hold
//                  the code version, operator statistics and timings
//   report.txt     human readable summary
//   summary.csv    run,nx,order,dimension,nonzeros,alpha,spectral_norm,
//                  steps,dt,achieved_time,t_target,engine,delta_target,
//                  period,max_error,gamma_fit
//   trajectory.csv (case a) run,engine,t,u_probe,e_probe,u_exact,e_exact
//   delta.csv      (cases b, c) run,engine,t,delta
//   growth.csv     (case d) engine,t,max_u2_perturbation
//   snapshots.csv  (case d) engine,t,x,y,u1,u2
//   operator_<run>.mtx  H_m when dump_operator is set

#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "kvn/emhd_model.hpp"
#include "kvn/experiment_config.hpp"

namespace kvn {

inline constexpr const char *kCodeVersion = "1.0.0";

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct RunOptions {
  std::ostream *log = nullptr; ///< progress messages
  bool deterministic = false;  ///< single-threaded assembly
  std::string dump_dir;        ///< where operator dumps go when dump_operator is set
};

struct EngineSeries {
  Engine engine;
  std::vector<double> times;
  std::vector<std::vector<double>> states; ///< decoded x at each time
  std::vector<double> target_state;        ///< decoded x at t_target, empty if the engine failed
  double seconds = 0.0;
  std::string failure; ///< divergence message; the series holds the samples before it
};

struct EngineMetrics {
  Engine engine;
  double delta_target = kNaN; ///< | ||x(t_target)|| - ||x(0)|| |
  double period = kNaN;       ///< case a
  double max_error = kNaN;    ///< case a, max deviation from the harmonic solution over amplitude
  double gamma_fit = kNaN;    ///< case d
  double fit_residual = kNaN;
  std::string note;
};

struct RunRecord {
  std::string label;
  std::size_t nx = 0;
  unsigned order = 0;
  std::size_t dimension = 0; ///< D, 0 when no KvN engine ran
  std::size_t nonzeros = 0;
  double frobenius = kNaN;
  double spectral = kNaN;
  double alpha = kNaN;
  std::size_t steps = 0;
  double dt = kNaN;
  double achieved_time = kNaN; ///< steps dt
  double t_target = kNaN;
  double assembly_seconds = 0.0;
  std::vector<double> x0;
  std::vector<EngineSeries> series;
  std::vector<EngineMetrics> metrics;

  const EngineSeries *find(Engine e) const;
  const EngineMetrics *metric(Engine e) const;
};

struct Snapshot {
  Engine engine;
  double t = 0.0;
  std::vector<double> u1, u2;  ///< per grid point
  double peak_row_y = kNaN;    ///< y of the row with the largest perturbation enstrophy
  double band_fraction = kNaN; ///< enstrophy share within one dy of the shear interfaces
};

struct CaseResult {
  ExperimentConfig config;
  std::vector<RunRecord> runs;
  // case a
  std::size_t probe_point = 0;
  // case d
  double gamma_eigen = kNaN;
  double eigen_frequency = kNaN;
  double eigen_time = kNaN;
  double fit_t0 = kNaN, fit_t1 = kNaN;
  std::vector<Snapshot> snapshots;
  std::vector<std::string> notes;

  /// True when any engine stopped with a numerical divergence.
  bool diverged() const;
};

GridSpec case_grid(const ExperimentConfig &cfg, std::size_t entry);
PhysicalParams case_params(const ExperimentConfig &cfg, const GridSpec &grid);
/// Initial layout vector; `perturbed = false` drops the shear perturbation.
std::vector<double> case_initial_state(const ExperimentConfig &cfg, const GridSpec &grid, bool perturbed = true);

CaseResult run_case(const ExperimentConfig &cfg, const RunOptions &opts = {});
CaseResult run_case_a(const ExperimentConfig &cfg, const RunOptions &opts = {});
CaseResult run_case_b(const ExperimentConfig &cfg, const RunOptions &opts = {});
CaseResult run_case_c(const ExperimentConfig &cfg, const RunOptions &opts = {});
CaseResult run_case_d(const ExperimentConfig &cfg, const RunOptions &opts = {});

/// Writes the files listed above into `dir`, creating it if needed.
void emit(const CaseResult &result, const std::string &dir);

/// Path of a checked-in default config, e.g. default_config_path('b').
std::string default_config_path(char case_id);

} // namespace kvn
