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

// Flat `key = value` experiment configuration. Lines starting with '#' are
// comments; lists are comma separated. Every key is typed and documented in
// config_schema(); unknown keys and malformed values are errors, reported
// together before any computation starts.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace kvn {

enum class Engine { kvn_qsvt, kvn_expm, classical_rk4 };

std::string to_string(Engine e);
Engine parse_engine(const std::string &name);
/// Comma separated engine names, e.g. "kvn-qsvt,kvn-expm".
std::vector<Engine> parse_engine_list(const std::string &list);

enum class InitialProfile { uniform, sine, kelvin_helmholtz };

enum class AlphaNorm { frobenius, spectral };

struct ExperimentConfig {
  char case_id = 'a'; ///< 'a'..'d'

  // grid
  int dimension = 1;
  std::vector<std::size_t> nx{8}; ///< sweep over N_x when more than one entry
  std::size_t ny = 1;
  double dr = 1.0;

  // physics, nondimensional units (eps0 = mu0 = m = 1)
  double omega_p = -1.0;
  double density = 1.0;
  InitialProfile initial = InitialProfile::uniform;
  double amplitude = 1.0;     ///< uniform value or sine amplitude of u_1
  double wave_cycles = -1.0;  ///< sine wave number k = wave_cycles 2 pi / (N_x dx)
  double u0 = 1.0;
  double b0 = 2.0;
  double epsilon = 0.1;
  double kx = 0.99;
  double ky = 0.2;
  double shear_halfwidth = 3.0; ///< shear layer |y| <= shear_halfwidth dy

  // KvN
  std::vector<unsigned> order{1}; ///< sweep over m when more than one entry
  double lambda = 1e4;

  // QSVT
  double tau = 1.0;
  unsigned truncation = 5;
  std::vector<std::size_t> steps{200}; ///< N_t, one per sweep entry
  bool renormalize = true;
  AlphaNorm alpha_norm = AlphaNorm::frobenius;

  // run control
  double t_target = 0.0;       ///< real time where Delta is reported; 0 means the end of the run
  std::vector<Engine> engines{Engine::kvn_qsvt, Engine::kvn_expm};
  double rk4_dt = 1e-3;
  std::size_t sample_stride = 1; ///< expm and RK4 evaluated every stride-th QSVT step
  double fit_lo = 0.05;          ///< growth fit window in units of T_eigen
  double fit_hi = 0.5;
  double memory_cap_gib = 3.0;
  unsigned threads = 0;
  bool dump_operator = false;

  /// Number of sweep entries (max of the nx, order and steps list lengths).
  std::size_t sweep_size() const;
  std::size_t nx_at(std::size_t k) const;
  unsigned order_at(std::size_t k) const;
  std::size_t steps_at(std::size_t k) const;
};

struct SchemaEntry {
  std::string key;
  std::string type;
  std::string doc; ///< meaning and units
};

const std::vector<SchemaEntry> &config_schema();

/// Parses and validates; throws ConfigurationError listing every problem.
ExperimentConfig parse_config(std::istream &is, const std::string &origin = "<stream>");
ExperimentConfig load_config(const std::string &path);

/// Case-specific consistency checks; returns the list of problems.
std::vector<std::string> validate_config(const ExperimentConfig &cfg);

/// Writes every key, so the output parses back to an equal configuration.
void write_config(std::ostream &os, const ExperimentConfig &cfg);

bool operator==(const ExperimentConfig &a, const ExperimentConfig &b);

} // namespace kvn
