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

#include "kvn/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "kvn/analysis.hpp"
#include "kvn/errors.hpp"
#include "kvn/kvn_hamiltonian.hpp"
#include "kvn/kvn_state.hpp"
#include "kvn/qsvt_engine.hpp"
#include "kvn/reference_solvers.hpp"

#ifndef KVN_CONFIG_DIR
#define KVN_CONFIG_DIR "configs"
#endif

namespace kvn {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void say(const RunOptions &o, const std::string &msg) {
  if (o.log) *o.log << msg << std::endl;
}

double norm2(const std::vector<double> &x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

/// Sample steps for expm and RK4: multiples of the stride plus the last step.
std::vector<std::size_t> sample_steps(std::size_t steps, std::size_t stride) {
  std::vector<std::size_t> k;
  for (std::size_t s = 0; s <= steps; s += stride) k.push_back(s);
  if (k.back() != steps) k.push_back(steps);
  return k;
}

/// RK4 from x over a span of real time, with substeps no longer than dt_max.
std::vector<double> rk4_advance(const OdeSystem &sys, const std::vector<double> &x, double span, double dt_max) {
  if (span <= 0.0) return x;
  const auto n = static_cast<std::size_t>(std::ceil(span / dt_max - 1e-9));
  const auto r = rk4_integrate(sys, x, span / static_cast<double>(n), n, n);
  return r.states.back();
}

struct Entry {
  GridSpec grid;
  OdeSystem sys;
  RunRecord rec;
};

Entry run_entry(const ExperimentConfig &cfg, std::size_t k, const RunOptions &opts) {
  Entry e{case_grid(cfg, k), {}, {}};
  auto &rec = e.rec;
  const PhysicalParams params = case_params(cfg, e.grid);
  e.sys = build_system(e.grid, params);
  const auto report = validate_system(e.sys);
  if (!report.ok())
    throw ConfigurationError("generated system violates " + report.violations.front().detail);
  rec.nx = cfg.nx_at(k);
  rec.order = cfg.order_at(k);
  rec.steps = cfg.steps_at(k);
  rec.label = "nx" + std::to_string(rec.nx) + "_m" + std::to_string(rec.order);
  rec.x0 = case_initial_state(cfg, e.grid);

  const bool want_qsvt = std::find(cfg.engines.begin(), cfg.engines.end(), Engine::kvn_qsvt) != cfg.engines.end();
  const bool want_expm = std::find(cfg.engines.begin(), cfg.engines.end(), Engine::kvn_expm) != cfg.engines.end();

  std::optional<SparseHamiltonian> h;
  if (want_qsvt || want_expm) {
    const auto t0 = Clock::now();
    AssemblyOptions ao;
    ao.memory_cap_bytes = static_cast<std::size_t>(cfg.memory_cap_gib * double(std::size_t{1} << 30));
    ao.threads = opts.deterministic ? 1 : cfg.threads;
    try {
      h.emplace(assemble(e.sys, rec.order, cfg.lambda, ao));
    } catch (const CapacityError &err) {
      throw CapacityError(std::string(err.what()) + "; use a reduced grid (for example nx = ny = 12) or raise memory_cap_gib");
    }
    rec.assembly_seconds = seconds_since(t0);
    rec.dimension = h->dimension();
    rec.nonzeros = h->nonzeros();
    rec.frobenius = h->frobenius_norm();
    rec.spectral = h->spectral().value;
    rec.alpha = cfg.alpha_norm == AlphaNorm::frobenius ? rec.frobenius : rec.spectral;
    say(opts, "  " + rec.label + ": D = " + std::to_string(rec.dimension) + ", nnz = " +
                  std::to_string(rec.nonzeros) + ", alpha = " + fmt(rec.alpha) + ", ||H|| = " + fmt(rec.spectral));
    if (cfg.dump_operator && !opts.dump_dir.empty()) {
      std::filesystem::create_directories(opts.dump_dir);
      const std::string path = opts.dump_dir + "/operator_" + rec.label + ".mtx";
      std::ofstream out(path);
      if (!out) throw IoError("cannot write '" + path + "'");
      write_matrix_market(out, h->matrix());
    }
  } else {
    // classical-only runs keep the time grid of the KvN runs
    rec.frobenius = streamed_frobenius_norm(e.sys, rec.order, cfg.lambda);
    rec.alpha = rec.frobenius;
  }
  rec.dt = cfg.tau / rec.alpha;
  rec.achieved_time = static_cast<double>(rec.steps) * rec.dt;
  rec.t_target = cfg.t_target > 0.0 ? cfg.t_target : rec.achieved_time;

  const auto samples = sample_steps(rec.steps, cfg.sample_stride);
  std::vector<double> sample_times;
  for (auto s : samples) sample_times.push_back(static_cast<double>(s) * rec.dt);

  std::optional<KvnState> psi0;
  if (h) psi0 = encode(rec.x0, cfg.lambda, h->basis());

  for (Engine eng : cfg.engines) {
    EngineSeries es{eng, {}, {}, {}, 0.0, {}};
    const auto t0 = Clock::now();
    try {
      switch (eng) {
      case Engine::kvn_qsvt: {
        QsvtPlan plan = jacobi_anger_coefficients(cfg.tau, cfg.truncation);
        plan.alpha = rec.alpha;
        const auto whole = static_cast<std::size_t>(std::floor(rec.t_target / rec.dt + 1e-12));
        std::optional<KvnState> at_whole;
        QsvtOptions qo;
        qo.renormalize = cfg.renormalize;
        qo.observer = [&](std::size_t step, double t, const KvnState &s, double) {
          auto x = decode(s);
          es.times.push_back(t);
          es.states.push_back(std::move(x));
          if (step == whole) at_whole = s;
        };
        KvnState last = evolve_qsvt(*h, *psi0, rec.steps, plan, qo);
        if (!at_whole) at_whole = evolve_qsvt(*h, last, whole - rec.steps, plan, QsvtOptions{cfg.renormalize, {}});
        const double rest = rec.t_target - static_cast<double>(whole) * rec.dt;
        if (rest > 1e-14 * std::max(1.0, rec.t_target)) {
          QsvtPlan partial = jacobi_anger_coefficients(cfg.tau * rest / rec.dt, cfg.truncation);
          partial.alpha = rec.alpha;
          at_whole = evolve_qsvt(*h, *at_whole, 1, partial, QsvtOptions{cfg.renormalize, {}});
        }
        es.target_state = decode(*at_whole);
        break;
      }
      case Engine::kvn_expm: {
        // t_target is merged into the sample grid so the series is computed once
        std::vector<double> times = sample_times;
        const auto pos = std::lower_bound(times.begin(), times.end(), rec.t_target);
        const auto at = static_cast<std::size_t>(pos - times.begin());
        const bool extra = pos == times.end() || std::abs(*pos - rec.t_target) > 1e-12 * std::max(1.0, rec.t_target);
        if (extra) times.insert(pos, rec.t_target);
        const auto states = evolve_expm_series(*h, *psi0, times);
        for (std::size_t i = 0; i < times.size(); ++i) {
          if (extra && i == at) continue;
          es.times.push_back(times[i]);
          es.states.push_back(decode(states[i]));
        }
        es.target_state = decode(states[at]);
        break;
      }
      case Engine::classical_rk4: {
        std::vector<double> x = rec.x0;
        double t = 0.0;
        std::optional<std::vector<double>> target;
        for (double ts : sample_times) {
          if (!target && rec.t_target <= ts) target = rk4_advance(e.sys, x, rec.t_target - t, cfg.rk4_dt);
          x = rk4_advance(e.sys, x, ts - t, cfg.rk4_dt);
          t = ts;
          for (double v : x)
            if (!std::isfinite(v)) throw DivergenceError("classical RK4 diverged at t = " + fmt(t));
          es.times.push_back(t);
          es.states.push_back(x);
        }
        es.target_state = target ? *target : rk4_advance(e.sys, x, rec.t_target - t, cfg.rk4_dt);
        break;
      }
      }
    } catch (const DecodeError &err) {
      es.failure = err.what();
    } catch (const DivergenceError &err) {
      es.failure = err.what();
    }
    es.seconds = seconds_since(t0);
    if (!es.failure.empty()) say(opts, "    " + to_string(eng) + " diverged: " + es.failure);
    say(opts, "    " + to_string(eng) + ": " + std::to_string(es.times.size()) + " samples in " + fmt(es.seconds) + " s");
    rec.series.push_back(std::move(es));
  }

  const double n0 = norm2(rec.x0);
  for (const auto &es : rec.series) {
    EngineMetrics m;
    m.engine = es.engine;
    if (es.failure.empty()) m.delta_target = std::abs(norm2(es.target_state) - n0);
    else m.note = "diverged after " + std::to_string(es.times.size()) + " samples: " + es.failure;
    rec.metrics.push_back(m);
  }
  return e;
}

std::size_t probe_point(const GridSpec &g) {
  // grid point at x = 0
  return g.points[0] / 2;
}

void case_a_metrics(const ExperimentConfig &cfg, const Entry &e, RunRecord &rec) {
  const VariableLayout layout(e.grid);
  const std::size_t p = probe_point(e.grid);
  const std::size_t iu = layout.index(FieldComponent::u1, p), ie = layout.index(FieldComponent::E1, p);
  const double amp = std::abs(rec.x0[iu]) > 0.0 ? std::abs(rec.x0[iu]) : 1.0;
  for (std::size_t k = 0; k < rec.series.size(); ++k) {
    const auto &es = rec.series[k];
    auto &m = rec.metrics[k];
    std::vector<double> u;
    double err = 0.0;
    for (std::size_t i = 0; i < es.times.size(); ++i) {
      const double t = es.times[i];
      const double ue = rec.x0[iu] * std::cos(cfg.omega_p * t), ee = -rec.x0[iu] * std::sin(cfg.omega_p * t);
      err = std::max({err, std::abs(es.states[i][iu] - ue), std::abs(es.states[i][ie] - ee)});
      u.push_back(es.states[i][iu]);
    }
    m.max_error = err / amp;
    if (es.times.size() > 2) {
      try {
        m.period = extract_period(u, es.times[1] - es.times[0]);
      } catch (const MeasurementError &err2) {
        m.note = err2.what();
      }
    }
  }
}

/// Row profile of the perturbation enstrophy, with the vorticity
/// d(du2)/dx - d(du1)/dy from periodic central differences. Returns the
/// share within one dy of the interfaces y = +-(shear_halfwidth + 1/2) dy.
double band_fraction_and_peak(const ExperimentConfig &cfg, const GridSpec &g, const std::vector<double> &du1,
                              const std::vector<double> &du2, double &peak_y) {
  const std::size_t ny = g.points[1];
  const double dx = g.spacing[0], dy = g.spacing[1];
  std::vector<double> row(ny, 0.0);
  for (std::size_t p = 0; p < g.point_count(); ++p) {
    const double w = (du2[g.shifted(p, 0, 1)] - du2[g.shifted(p, 0, -1)]) / (2.0 * dx) -
                     (du1[g.shifted(p, 1, 1)] - du1[g.shifted(p, 1, -1)]) / (2.0 * dy);
    row[g.coords(p)[1]] += w * w;
  }
  double total = 0.0, band = 0.0, best = -1.0;
  const double edge = (cfg.shear_halfwidth + 0.5) * dy;
  for (std::size_t j = 0; j < ny; ++j) {
    const double y = (static_cast<double>(j) - static_cast<double>(ny) / 2.0) * dy;
    total += row[j];
    if (std::abs(std::abs(y) - edge) <= dy * (1.0 + 1e-12)) band += row[j];
    if (row[j] > best) {
      best = row[j];
      peak_y = y;
    }
  }
  return total > 0.0 ? band / total : kNaN;
}

void case_d_metrics(const ExperimentConfig &cfg, const Entry &e, CaseResult &res) {
  auto &rec = res.runs.back();
  const VariableLayout layout(e.grid);
  const std::size_t np = e.grid.point_count();
  const auto bg = case_initial_state(cfg, e.grid, false);
  const auto mode = linear_stability_growth_rate(e.sys, bg);
  res.gamma_eigen = mode.gamma_max;
  res.eigen_frequency = mode.frequency;
  res.eigen_time = mode.eigen_time;
  res.fit_t0 = cfg.fit_lo * mode.eigen_time;
  res.fit_t1 = cfg.fit_hi * mode.eigen_time;
  for (std::size_t k = 0; k < rec.series.size(); ++k) {
    const auto &es = rec.series[k];
    auto &m = rec.metrics[k];
    std::vector<double> obs;
    for (const auto &x : es.states) {
      double v = 0.0;
      for (std::size_t p = 0; p < np; ++p) {
        const std::size_t i = layout.index(FieldComponent::u2, p);
        v = std::max(v, std::abs(x[i] - rec.x0[i]));
      }
      obs.push_back(v);
    }
    if (es.times.size() < 2) continue;
    // the fit assumes uniform sampling; the last sample may be off-stride
    std::vector<double> uniform(obs.begin(), obs.end());
    const double h = es.times[1] - es.times[0];
    if (es.times.size() > 2 && std::abs((es.times.back() - es.times[es.times.size() - 2]) - h) > 1e-9 * h)
      uniform.pop_back();
    try {
      const auto fit = growth_rate_fit(uniform, h, res.fit_t0, res.fit_t1);
      m.gamma_fit = fit.gamma;
      m.fit_residual = fit.residual;
    } catch (const Error &err) {
      m.note = err.what();
    }
    if (!es.failure.empty()) continue;
    for (double frac : {0.0, 0.5, 1.0}) {
      const double want = frac * mode.eigen_time;
      std::size_t best = 0;
      for (std::size_t i = 1; i < es.times.size(); ++i)
        if (std::abs(es.times[i] - want) < std::abs(es.times[best] - want)) best = i;
      Snapshot s;
      s.engine = es.engine;
      s.t = es.times[best];
      std::vector<double> d1(np), d2(np);
      for (std::size_t p = 0; p < np; ++p) {
        const std::size_t i1 = layout.index(FieldComponent::u1, p), i2 = layout.index(FieldComponent::u2, p);
        s.u1.push_back(es.states[best][i1]);
        s.u2.push_back(es.states[best][i2]);
        d1[p] = es.states[best][i1] - rec.x0[i1];
        d2[p] = es.states[best][i2] - rec.x0[i2];
      }
      s.band_fraction = band_fraction_and_peak(cfg, e.grid, d1, d2, s.peak_row_y);
      res.snapshots.push_back(std::move(s));
    }
  }
}

CaseResult run_expecting(char id, const ExperimentConfig &cfg, const RunOptions &opts) {
  if (cfg.case_id != id)
    throw ConfigurationError(std::string("configuration is for case ") + cfg.case_id + ", expected case " + id);
  return run_case(cfg, opts);
}

void write_file(const std::string &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << content;
  if (!out) throw IoError("write failed for '" + path + "'");
}

} // namespace

bool CaseResult::diverged() const {
  for (const auto &r : runs)
    for (const auto &s : r.series)
      if (!s.failure.empty()) return true;
  return false;
}

const EngineSeries *RunRecord::find(Engine e) const {
  for (const auto &s : series)
    if (s.engine == e) return &s;
  return nullptr;
}

const EngineMetrics *RunRecord::metric(Engine e) const {
  for (const auto &m : metrics)
    if (m.engine == e) return &m;
  return nullptr;
}

GridSpec case_grid(const ExperimentConfig &cfg, std::size_t entry) {
  GridSpec g;
  if (cfg.dimension == 1) {
    g = GridSpec::line(cfg.nx_at(entry), cfg.dr);
  } else {
    g = GridSpec::square(cfg.nx_at(entry), cfg.dr);
    g.points[1] = cfg.ny;
  }
  g.validate();
  return g;
}

PhysicalParams case_params(const ExperimentConfig &cfg, const GridSpec &grid) {
  PhysicalParams p = PhysicalParams::nondimensional(cfg.omega_p / std::sqrt(cfg.density));
  if (cfg.density != 1.0) p.density.assign(grid.point_count(), cfg.density);
  p.validate(grid);
  return p;
}

std::vector<double> case_initial_state(const ExperimentConfig &cfg, const GridSpec &grid, bool perturbed) {
  RawFields raw = zero_fields(grid);
  const double nx = static_cast<double>(grid.points[0]), ny = static_cast<double>(grid.points[1]);
  for (std::size_t p = 0; p < grid.point_count(); ++p) {
    const auto c = grid.coords(p);
    const double x = (static_cast<double>(c[0]) - nx / 2.0) * grid.spacing[0];
    const double y = (static_cast<double>(c[1]) - ny / 2.0) * grid.spacing[1];
    double u = 0.0;
    switch (cfg.initial) {
    case InitialProfile::uniform: u = cfg.amplitude; break;
    case InitialProfile::sine:
      u = cfg.amplitude * std::sin(cfg.wave_cycles * 2.0 * std::numbers::pi / (nx * grid.spacing[0]) * x);
      break;
    case InitialProfile::kelvin_helmholtz:
      if (std::abs(y) <= cfg.shear_halfwidth * grid.spacing[1] * (1.0 + 1e-12))
        u = cfg.u0 + (perturbed ? cfg.epsilon * std::sin(cfg.kx * x + cfg.ky * y) : 0.0);
      else
        u = -cfg.u0;
      raw[FieldComponent::B3][p] = cfg.b0;
      break;
    }
    raw[FieldComponent::u1][p] = u;
  }
  const PhysicalParams params = case_params(cfg, grid);
  return VariableLayout(grid).pack(transform_fields(raw, grid, params));
}

CaseResult run_case(const ExperimentConfig &cfg, const RunOptions &opts) {
  const auto problems = validate_config(cfg);
  if (!problems.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto &p : problems) msg += "\n  " + p;
    throw ConfigurationError(msg);
  }
  CaseResult res;
  res.config = cfg;
  say(opts, std::string("case ") + cfg.case_id + ": " + std::to_string(cfg.sweep_size()) + " run(s)");
  for (std::size_t k = 0; k < cfg.sweep_size(); ++k) {
    Entry e = run_entry(cfg, k, opts);
    if (cfg.case_id == 'a') {
      res.probe_point = probe_point(e.grid);
      case_a_metrics(cfg, e, e.rec);
    }
    res.runs.push_back(std::move(e.rec));
    if (cfg.case_id == 'd') case_d_metrics(cfg, e, res);
    const auto &rec = res.runs.back();
    if (cfg.t_target > 0.0 && std::abs(rec.achieved_time - cfg.t_target) > 0.01 * cfg.t_target)
      res.notes.push_back(rec.label + ": N_t tau / alpha = " + fmt(rec.achieved_time) + " differs from t_target = " +
                          fmt(cfg.t_target) + " by more than 1%");
  }
  return res;
}

CaseResult run_case_a(const ExperimentConfig &cfg, const RunOptions &opts) { return run_expecting('a', cfg, opts); }
CaseResult run_case_b(const ExperimentConfig &cfg, const RunOptions &opts) { return run_expecting('b', cfg, opts); }
CaseResult run_case_c(const ExperimentConfig &cfg, const RunOptions &opts) { return run_expecting('c', cfg, opts); }
CaseResult run_case_d(const ExperimentConfig &cfg, const RunOptions &opts) { return run_expecting('d', cfg, opts); }

void emit(const CaseResult &res, const std::string &dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
  const auto &cfg = res.config;

  {
    std::ostringstream m;
    m << "# kvnemu " << kCodeVersion << " run manifest\n";
    for (const auto &r : res.runs) {
      m << "# run " << r.label << ": D = " << r.dimension << ", nonzeros = " << r.nonzeros
        << ", frobenius = " << fmt(r.frobenius) << ", spectral = " << fmt(r.spectral) << ", alpha = " << fmt(r.alpha)
        << ", steps = " << r.steps << ", dt = " << fmt(r.dt) << ", achieved_time = " << fmt(r.achieved_time)
        << "\n# run " << r.label << " timing: assembly " << fmt(r.assembly_seconds) << " s";
      for (const auto &s : r.series) m << ", " << to_string(s.engine) << " " << fmt(s.seconds) << " s";
      m << "\n";
    }
    write_config(m, cfg);
    write_file(dir + "/manifest.cfg", m.str());
  }

  {
    std::ostringstream s;
    s << "run,nx,order,dimension,nonzeros,alpha,spectral_norm,steps,dt,achieved_time,t_target,engine,delta_target,"
         "period,max_error,gamma_fit\n";
    for (const auto &r : res.runs)
      for (const auto &m : r.metrics)
        s << r.label << "," << r.nx << "," << r.order << "," << r.dimension << "," << r.nonzeros << "," << fmt(r.alpha)
          << "," << fmt(r.spectral) << "," << r.steps << "," << fmt(r.dt) << "," << fmt(r.achieved_time) << ","
          << fmt(r.t_target) << "," << to_string(m.engine) << "," << fmt(m.delta_target) << "," << fmt(m.period)
          << "," << fmt(m.max_error) << "," << fmt(m.gamma_fit) << "\n";
    write_file(dir + "/summary.csv", s.str());
  }

  if (cfg.case_id == 'a') {
    std::ostringstream s;
    s << "run,engine,t,u_probe,e_probe,u_exact,e_exact\n";
    for (const auto &r : res.runs) {
      const GridSpec g = GridSpec::line(r.nx, cfg.dr);
      const VariableLayout layout(g);
      const std::size_t iu = layout.index(FieldComponent::u1, res.probe_point);
      const std::size_t ie = layout.index(FieldComponent::E1, res.probe_point);
      for (const auto &es : r.series)
        for (std::size_t i = 0; i < es.times.size(); ++i) {
          const double t = es.times[i];
          s << r.label << "," << to_string(es.engine) << "," << fmt(t) << "," << fmt(es.states[i][iu]) << ","
            << fmt(es.states[i][ie]) << "," << fmt(r.x0[iu] * std::cos(cfg.omega_p * t)) << ","
            << fmt(-r.x0[iu] * std::sin(cfg.omega_p * t)) << "\n";
        }
    }
    write_file(dir + "/trajectory.csv", s.str());
  }

  if (cfg.case_id == 'b' || cfg.case_id == 'c') {
    std::ostringstream s;
    s << "run,engine,t,delta\n";
    for (const auto &r : res.runs) {
      const double n0 = norm2(r.x0);
      for (const auto &es : r.series)
        for (std::size_t i = 0; i < es.times.size(); ++i)
          s << r.label << "," << to_string(es.engine) << "," << fmt(es.times[i]) << ","
            << fmt(std::abs(norm2(es.states[i]) - n0)) << "\n";
    }
    write_file(dir + "/delta.csv", s.str());
  }

  if (cfg.case_id == 'd' && !res.runs.empty()) {
    const auto &r = res.runs.front();
    const GridSpec g = case_grid(cfg, 0);
    const VariableLayout layout(g);
    std::ostringstream s;
    s << "engine,t,max_u2_perturbation\n";
    for (const auto &es : r.series)
      for (std::size_t i = 0; i < es.times.size(); ++i) {
        double v = 0.0;
        for (std::size_t p = 0; p < g.point_count(); ++p) {
          const std::size_t k = layout.index(FieldComponent::u2, p);
          v = std::max(v, std::abs(es.states[i][k] - r.x0[k]));
        }
        s << to_string(es.engine) << "," << fmt(es.times[i]) << "," << fmt(v) << "\n";
      }
    write_file(dir + "/growth.csv", s.str());
    std::ostringstream q;
    q << "engine,t,x,y,u1,u2\n";
    for (const auto &snap : res.snapshots)
      for (std::size_t p = 0; p < g.point_count(); ++p) {
        const auto c = g.coords(p);
        q << to_string(snap.engine) << "," << fmt(snap.t) << ","
          << fmt((static_cast<double>(c[0]) - static_cast<double>(g.points[0]) / 2.0) * g.spacing[0]) << ","
          << fmt((static_cast<double>(c[1]) - static_cast<double>(g.points[1]) / 2.0) * g.spacing[1]) << ","
          << fmt(snap.u1[p]) << "," << fmt(snap.u2[p]) << "\n";
      }
    write_file(dir + "/snapshots.csv", q.str());
  }

  {
    std::ostringstream t;
    t << "kvnemu " << kCodeVersion << " case " << cfg.case_id << "\n\n";
    for (const auto &r : res.runs) {
      t << r.label << ": N_x = " << r.nx << ", m = " << r.order << ", D = " << r.dimension << "\n"
        << "  alpha = " << fmt(r.alpha) << " (Frobenius " << fmt(r.frobenius) << ", spectral " << fmt(r.spectral)
        << ")\n"
        << "  N_t = " << r.steps << ", dt = tau / alpha = " << fmt(r.dt) << ", N_t dt = " << fmt(r.achieved_time)
        << ", t_target = " << fmt(r.t_target) << "\n";
      for (const auto &m : r.metrics) {
        t << "  " << to_string(m.engine) << ": Delta(t_target) = " << fmt(m.delta_target);
        if (!std::isnan(m.period))
          t << ", period = " << fmt(m.period) << " (exact " << fmt(2.0 * std::numbers::pi / std::abs(cfg.omega_p))
            << ")";
        if (!std::isnan(m.max_error)) t << ", max relative error = " << fmt(m.max_error);
        if (!std::isnan(m.gamma_fit)) t << ", fitted gamma = " << fmt(m.gamma_fit);
        if (!m.note.empty()) t << " [" << m.note << "]";
        t << "\n";
      }
    }
    if (cfg.case_id == 'd') {
      t << "\neigen analysis: gamma = " << fmt(res.gamma_eigen) << ", frequency = " << fmt(res.eigen_frequency)
        << ", T_eigen = " << fmt(res.eigen_time) << "\nfit window [" << fmt(res.fit_t0) << ", " << fmt(res.fit_t1)
        << "]\n";
      for (const auto &s : res.snapshots)
        t << "snapshot " << to_string(s.engine) << " t = " << fmt(s.t) << ": peak enstrophy row y = "
          << fmt(s.peak_row_y) << ", interface band share = " << fmt(s.band_fraction) << "\n";
    }
    for (const auto &n : res.notes) t << "note: " << n << "\n";
    write_file(dir + "/report.txt", t.str());
  }
}

std::string default_config_path(char case_id) {
  return std::string(KVN_CONFIG_DIR) + "/case_" + case_id + ".cfg";
}

} // namespace kvn
