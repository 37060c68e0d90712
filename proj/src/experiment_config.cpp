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

#include "kvn/experiment_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "kvn/errors.hpp"

namespace kvn {

namespace {

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string &s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

double to_double(const std::string &s) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size() || !std::isfinite(v))
    throw ParameterError("expected a finite number, got '" + s + "'");
  return v;
}

std::uint64_t to_uint(const std::string &s) {
  std::uint64_t v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw ParameterError("expected a non-negative integer, got '" + s + "'");
  return v;
}

bool to_bool(const std::string &s) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw ParameterError("expected true or false, got '" + s + "'");
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T> std::string join(const std::vector<T> &v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + std::to_string(v[k]);
  return s;
}

template <class T> std::vector<T> uint_list(const std::string &s) {
  std::vector<T> out;
  for (const auto &item : split(s, ',')) out.push_back(static_cast<T>(to_uint(item)));
  if (out.empty()) throw ParameterError("empty list");
  return out;
}

struct Field {
  SchemaEntry entry;
  std::function<void(ExperimentConfig &, const std::string &)> set;
  std::function<std::string(const ExperimentConfig &)> get;
};

#define KVN_DOUBLE(name, member, doc)                                                                  \
  Field {                                                                                              \
    {name, "real", doc}, [](ExperimentConfig &c, const std::string &v) { c.member = to_double(v); },   \
        [](const ExperimentConfig &c) { return fmt(c.member); }                                        \
  }
#define KVN_UINT(name, member, type, doc)                                                                      \
  Field {                                                                                                      \
    {name, "integer", doc}, [](ExperimentConfig &c, const std::string &v) { c.member = static_cast<type>(to_uint(v)); }, \
        [](const ExperimentConfig &c) { return std::to_string(c.member); }                                     \
  }

const std::vector<Field> &fields() {
  static const std::vector<Field> f = {
      {{"case", "a|b|c|d", "experiment case"},
       [](ExperimentConfig &c, const std::string &v) {
         if (v.size() != 1 || v[0] < 'a' || v[0] > 'd') throw ParameterError("expected one of a, b, c, d");
         c.case_id = v[0];
       },
       [](const ExperimentConfig &c) { return std::string(1, c.case_id); }},
      KVN_UINT("dimension", dimension, int, "spatial dimension, 1 or 2"),
      {{"nx", "integer list", "grid points along x, one per sweep entry"},
       [](ExperimentConfig &c, const std::string &v) { c.nx = uint_list<std::size_t>(v); },
       [](const ExperimentConfig &c) { return join(c.nx); }},
      KVN_UINT("ny", ny, std::size_t, "grid points along y (1 in 1D)"),
      KVN_DOUBLE("dr", dr, "grid spacing, Debye-free nondimensional length"),
      KVN_DOUBLE("omega_p", omega_p, "signed plasma frequency sqrt(n/(eps0 m)) q"),
      KVN_DOUBLE("density", density, "uniform number density n"),
      {{"initial", "uniform|sine|kelvin_helmholtz", "initial profile of u_1"},
       [](ExperimentConfig &c, const std::string &v) {
         if (v == "uniform") c.initial = InitialProfile::uniform;
         else if (v == "sine") c.initial = InitialProfile::sine;
         else if (v == "kelvin_helmholtz") c.initial = InitialProfile::kelvin_helmholtz;
         else throw ParameterError("expected uniform, sine or kelvin_helmholtz");
       },
       [](const ExperimentConfig &c) {
         switch (c.initial) {
         case InitialProfile::uniform: return std::string("uniform");
         case InitialProfile::sine: return std::string("sine");
         default: return std::string("kelvin_helmholtz");
         }
       }},
      KVN_DOUBLE("amplitude", amplitude, "uniform value or sine amplitude of u_1"),
      KVN_DOUBLE("wave_cycles", wave_cycles, "sine wave number in units of 2 pi / (N_x dr)"),
      KVN_DOUBLE("u0", u0, "shear flow speed"),
      KVN_DOUBLE("b0", b0, "uniform B_3"),
      KVN_DOUBLE("epsilon", epsilon, "shear perturbation amplitude"),
      KVN_DOUBLE("kx", kx, "perturbation wave number along x, 1/length"),
      KVN_DOUBLE("ky", ky, "perturbation wave number along y, 1/length"),
      KVN_DOUBLE("shear_halfwidth", shear_halfwidth, "shear layer half width in units of dr"),
      {{"order", "integer list", "KvN truncation order m, one per sweep entry"},
       [](ExperimentConfig &c, const std::string &v) { c.order = uint_list<unsigned>(v); },
       [](const ExperimentConfig &c) { return join(c.order); }},
      KVN_DOUBLE("lambda", lambda, "KvN rescale parameter"),
      KVN_DOUBLE("tau", tau, "QSVT step parameter, real step tau / alpha"),
      KVN_UINT("truncation", truncation, unsigned, "Jacobi-Anger truncation index R"),
      {{"steps", "integer list", "QSVT steps N_t, one per sweep entry"},
       [](ExperimentConfig &c, const std::string &v) { c.steps = uint_list<std::size_t>(v); },
       [](const ExperimentConfig &c) { return join(c.steps); }},
      {{"renormalize", "bool", "renormalize the state after each QSVT step"},
       [](ExperimentConfig &c, const std::string &v) { c.renormalize = to_bool(v); },
       [](const ExperimentConfig &c) { return std::string(c.renormalize ? "true" : "false"); }},
      {{"alpha_norm", "frobenius|spectral", "operator norm used as the QSVT normalization alpha"},
       [](ExperimentConfig &c, const std::string &v) {
         if (v == "frobenius") c.alpha_norm = AlphaNorm::frobenius;
         else if (v == "spectral") c.alpha_norm = AlphaNorm::spectral;
         else throw ParameterError("expected frobenius or spectral");
       },
       [](const ExperimentConfig &c) {
         return std::string(c.alpha_norm == AlphaNorm::frobenius ? "frobenius" : "spectral");
       }},
      KVN_DOUBLE("t_target", t_target, "real time at which Delta is reported, 0 for end of run"),
      {{"engines", "engine list", "subset of kvn-qsvt, kvn-expm, classical-rk4"},
       [](ExperimentConfig &c, const std::string &v) { c.engines = parse_engine_list(v); },
       [](const ExperimentConfig &c) {
         std::string s;
         for (std::size_t k = 0; k < c.engines.size(); ++k) s += (k ? "," : "") + to_string(c.engines[k]);
         return s;
       }},
      KVN_DOUBLE("rk4_dt", rk4_dt, "largest RK4 step"),
      KVN_UINT("sample_stride", sample_stride, std::size_t, "expm and RK4 sampled every stride-th QSVT step"),
      KVN_DOUBLE("fit_lo", fit_lo, "growth fit window start, units of T_eigen"),
      KVN_DOUBLE("fit_hi", fit_hi, "growth fit window end, units of T_eigen"),
      KVN_DOUBLE("memory_cap_gib", memory_cap_gib, "operator storage cap, GiB"),
      KVN_UINT("threads", threads, unsigned, "assembly threads, 0 for hardware concurrency"),
      {{"dump_operator", "bool", "write H_m as Matrix Market"},
       [](ExperimentConfig &c, const std::string &v) { c.dump_operator = to_bool(v); },
       [](const ExperimentConfig &c) { return std::string(c.dump_operator ? "true" : "false"); }},
  };
  return f;
}

#undef KVN_DOUBLE
#undef KVN_UINT

} // namespace

std::string to_string(Engine e) {
  switch (e) {
  case Engine::kvn_qsvt: return "kvn-qsvt";
  case Engine::kvn_expm: return "kvn-expm";
  default: return "classical-rk4";
  }
}

Engine parse_engine(const std::string &name) {
  if (name == "kvn-qsvt") return Engine::kvn_qsvt;
  if (name == "kvn-expm") return Engine::kvn_expm;
  if (name == "classical-rk4") return Engine::classical_rk4;
  throw ParameterError("unknown engine '" + name + "' (expected kvn-qsvt, kvn-expm or classical-rk4)");
}

std::vector<Engine> parse_engine_list(const std::string &list) {
  std::vector<Engine> out;
  for (const auto &item : split(list, ',')) {
    const Engine e = parse_engine(item);
    if (std::find(out.begin(), out.end(), e) != out.end())
      throw ParameterError("engine '" + item + "' listed twice");
    out.push_back(e);
  }
  if (out.empty()) throw ParameterError("empty engine list");
  return out;
}

std::size_t ExperimentConfig::sweep_size() const { return std::max({nx.size(), order.size(), steps.size()}); }

std::size_t ExperimentConfig::nx_at(std::size_t k) const { return nx.size() == 1 ? nx[0] : nx.at(k); }
unsigned ExperimentConfig::order_at(std::size_t k) const { return order.size() == 1 ? order[0] : order.at(k); }
std::size_t ExperimentConfig::steps_at(std::size_t k) const { return steps.size() == 1 ? steps[0] : steps.at(k); }

const std::vector<SchemaEntry> &config_schema() {
  static const std::vector<SchemaEntry> s = [] {
    std::vector<SchemaEntry> out;
    for (const auto &f : fields()) out.push_back(f.entry);
    return out;
  }();
  return s;
}

std::vector<std::string> validate_config(const ExperimentConfig &c) {
  std::vector<std::string> p;
  const std::size_t n = c.sweep_size();
  for (auto [name, len] : {std::pair{"nx", c.nx.size()}, {"order", c.order.size()}, {"steps", c.steps.size()}})
    if (len != 1 && len != n) p.push_back(std::string(name) + ": list length differs from the sweep size");
  if (c.dimension != 1 && c.dimension != 2) p.push_back("dimension: must be 1 or 2");
  if (c.dimension == 1 && c.ny != 1) p.push_back("ny: must be 1 in one dimension");
  if (c.dimension == 2 && c.ny < 5) p.push_back("ny: need at least 5 points");
  for (auto v : c.nx)
    if (v < 5) p.push_back("nx: need at least 5 points");
  if (!(c.dr > 0.0)) p.push_back("dr: must be positive");
  if (!(c.density > 0.0)) p.push_back("density: must be positive");
  if (c.omega_p == 0.0) p.push_back("omega_p: must be nonzero");
  for (auto m : c.order)
    if (m < 1) p.push_back("order: must be at least 1");
  for (auto s : c.steps)
    if (s < 1) p.push_back("steps: must be at least 1");
  if (!(c.lambda > 0.0)) p.push_back("lambda: must be positive");
  if (!(c.tau > 0.0)) p.push_back("tau: must be positive");
  if (c.truncation < 1) p.push_back("truncation: must be at least 1");
  if (c.t_target < 0.0) p.push_back("t_target: must be non-negative");
  if (!(c.rk4_dt > 0.0)) p.push_back("rk4_dt: must be positive");
  if (c.sample_stride < 1) p.push_back("sample_stride: must be at least 1");
  if (!(c.fit_lo >= 0.0 && c.fit_hi > c.fit_lo)) p.push_back("fit window: need 0 <= fit_lo < fit_hi");
  if (!(c.memory_cap_gib > 0.0)) p.push_back("memory_cap_gib: must be positive");
  switch (c.case_id) {
  case 'a':
  case 'b':
  case 'c':
    if (c.dimension != 1) p.push_back("case " + std::string(1, c.case_id) + ": requires dimension = 1");
    if (c.initial == InitialProfile::kelvin_helmholtz)
      p.push_back("initial: kelvin_helmholtz requires case d");
    break;
  case 'd':
    if (c.dimension != 2) p.push_back("case d: requires dimension = 2");
    if (c.initial != InitialProfile::kelvin_helmholtz) p.push_back("case d: requires initial = kelvin_helmholtz");
    if (n != 1) p.push_back("case d: sweeps are not supported");
    if (c.nx.size() == 1 && c.nx[0] != c.ny) p.push_back("case d: requires nx = ny");
    break;
  default: p.push_back("case: must be one of a, b, c, d");
  }
  return p;
}

ExperimentConfig parse_config(std::istream &is, const std::string &origin) {
  std::map<std::string, const Field *> by_key;
  for (const auto &f : fields()) by_key[f.entry.key] = &f;
  ExperimentConfig cfg;
  std::vector<std::string> problems;
  std::set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::string where = origin + ":" + std::to_string(lineno) + ": ";
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      problems.push_back(where + "expected 'key = value'");
      continue;
    }
    const std::string key = trim(t.substr(0, eq)), value = trim(t.substr(eq + 1));
    const auto it = by_key.find(key);
    if (it == by_key.end()) {
      problems.push_back(where + "unknown key '" + key + "'");
      continue;
    }
    if (!seen.insert(key).second) {
      problems.push_back(where + "duplicate key '" + key + "'");
      continue;
    }
    try {
      it->second->set(cfg, value);
    } catch (const Error &e) {
      problems.push_back(where + key + ": " + e.what());
    }
  }
  if (problems.empty())
    for (const auto &p : validate_config(cfg)) problems.push_back(origin + ": " + p);
  if (!problems.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto &p : problems) msg += "\n  " + p;
    throw ConfigurationError(msg);
  }
  return cfg;
}

ExperimentConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  return parse_config(in, path);
}

void write_config(std::ostream &os, const ExperimentConfig &cfg) {
  for (const auto &f : fields()) os << f.entry.key << " = " << f.get(cfg) << "\n";
}

bool operator==(const ExperimentConfig &a, const ExperimentConfig &b) {
  for (const auto &f : fields())
    if (f.get(a) != f.get(b)) return false;
  return true;
}

} // namespace kvn
