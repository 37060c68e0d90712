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

#include "kvn/emhd_model.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "kvn/errors.hpp"

namespace kvn {

namespace {

constexpr std::size_t kMinPointsPerAxis = 5;

constexpr FieldComponent velocity(int i) { return static_cast<FieldComponent>(i - 1); }
constexpr FieldComponent electric(int i) { return static_cast<FieldComponent>(2 + i); }
constexpr FieldComponent magnetic(int i) { return static_cast<FieldComponent>(5 + i); }

} // namespace

std::string to_string(FieldComponent c) {
  static const char *names[] = {"u1", "u2", "u3", "E1", "E2", "E3", "B1", "B2", "B3"};
  return names[static_cast<std::size_t>(c)];
}

// --- GridSpec ----------------------------------------------------------------

GridSpec GridSpec::line(std::size_t nx, double dx) {
  GridSpec g;
  g.dimension = 1;
  g.points = {nx, 1, 1};
  g.spacing = {dx, 1.0, 1.0};
  return g;
}

GridSpec GridSpec::square(std::size_t n, double d) {
  GridSpec g;
  g.dimension = 2;
  g.points = {n, n, 1};
  g.spacing = {d, d, 1.0};
  return g;
}

GridSpec GridSpec::cube(std::size_t n, double d) {
  GridSpec g;
  g.dimension = 3;
  g.points = {n, n, n};
  g.spacing = {d, d, d};
  return g;
}

std::size_t GridSpec::point_count() const noexcept { return points[0] * points[1] * points[2]; }

double GridSpec::cell_volume() const noexcept {
  double v = 1.0;
  for (int k = 0; k < dimension; ++k) v *= spacing[k];
  return v;
}

std::size_t GridSpec::flat(std::array<std::ptrdiff_t, 3> j) const noexcept {
  std::size_t idx = 0;
  for (int k = 0; k < 3; ++k) {
    const auto n = static_cast<std::ptrdiff_t>(points[k]);
    const auto w = ((j[k] % n) + n) % n;
    idx = idx * points[k] + static_cast<std::size_t>(w);
  }
  return idx;
}

std::array<std::size_t, 3> GridSpec::coords(std::size_t point) const noexcept {
  std::array<std::size_t, 3> j{};
  for (int k = 2; k >= 0; --k) {
    j[k] = point % points[k];
    point /= points[k];
  }
  return j;
}

std::size_t GridSpec::shifted(std::size_t point, int axis, std::ptrdiff_t offset) const noexcept {
  const auto c = coords(point);
  std::array<std::ptrdiff_t, 3> j{static_cast<std::ptrdiff_t>(c[0]), static_cast<std::ptrdiff_t>(c[1]),
                                  static_cast<std::ptrdiff_t>(c[2])};
  j[axis] += offset;
  return flat(j);
}

void GridSpec::validate() const {
  if (dimension < 1 || dimension > 3)
    throw ConfigurationError("grid: spatial dimension must be 1, 2 or 3");
  for (int k = 0; k < 3; ++k) {
    if (k < dimension) {
      if (points[k] < kMinPointsPerAxis)
        throw ConfigurationError("grid: axis " + std::to_string(k + 1) + " has " +
                                 std::to_string(points[k]) + " points; at least " +
                                 std::to_string(kMinPointsPerAxis) +
                                 " are needed so that stencil index sets stay distinct");
      if (!(spacing[k] > 0.0) || !std::isfinite(spacing[k]))
        throw ConfigurationError("grid: spacing must be positive and finite");
    } else if (points[k] != 1) {
      throw ConfigurationError("grid: unused axis must have exactly one point");
    }
  }
}

// --- PhysicalParams ----------------------------------------------------------

PhysicalParams PhysicalParams::nondimensional(double plasma_frequency) {
  PhysicalParams p;
  p.charge = plasma_frequency;
  return p;
}

double PhysicalParams::density_at(std::size_t point) const {
  return density.empty() ? 1.0 : density.at(point);
}

double PhysicalParams::plasma_frequency(std::size_t point) const {
  return std::sqrt(density_at(point) / (eps0 * mass)) * charge;
}

double PhysicalParams::lorentz_coupling() const { return std::sqrt(mu0 / mass) * charge; }

double PhysicalParams::wave_coupling() const { return 1.0 / std::sqrt(eps0 * mu0); }

void PhysicalParams::validate(const GridSpec &grid) const {
  if (!(mass > 0.0) || !(eps0 > 0.0) || !(mu0 > 0.0))
    throw DomainError("physical constants m_q, eps0, mu0 must be positive");
  if (!density.empty()) {
    if (density.size() != grid.point_count())
      throw ConfigurationError("density array size differs from grid point count");
    for (double n : density)
      if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("density must be strictly positive");
  }
}

// --- fields ------------------------------------------------------------------

std::vector<FieldComponent> model_components(int dimension) {
  using F = FieldComponent;
  switch (dimension) {
  case 1: return {F::u1, F::E1};
  case 2: return {F::u1, F::u2, F::E1, F::E2, F::B3};
  case 3: return {F::u1, F::u2, F::u3, F::E1, F::E2, F::E3, F::B1, F::B2, F::B3};
  default: throw ConfigurationError("model_components: dimension must be 1, 2 or 3");
  }
}

RawFields zero_fields(const GridSpec &grid) {
  RawFields raw;
  for (auto c : model_components(grid.dimension)) raw[c].assign(grid.point_count(), 0.0);
  return raw;
}

namespace {

enum class Family { velocity, electric, magnetic };

Family family_of(FieldComponent c) {
  const auto i = static_cast<int>(c);
  return i < 3 ? Family::velocity : (i < 6 ? Family::electric : Family::magnetic);
}

void check_shapes(const FieldArrays &f, const GridSpec &grid) {
  for (auto c : model_components(grid.dimension)) {
    if (f[c].size() != grid.point_count())
      throw ConfigurationError("field component " + to_string(c) + " has wrong size");
  }
}

} // namespace

FieldGrid transform_fields(const RawFields &raw, const GridSpec &grid, const PhysicalParams &params) {
  grid.validate();
  params.validate(grid);
  check_shapes(raw, grid);
  const double e_scale = std::sqrt(params.eps0 / params.mass);
  const double b_scale = std::sqrt(1.0 / (params.mu0 * params.mass));
  FieldGrid fg;
  for (auto c : model_components(grid.dimension)) {
    auto &out = fg[c];
    out = raw[c];
    for (std::size_t p = 0; p < out.size(); ++p) {
      switch (family_of(c)) {
      case Family::velocity: out[p] *= std::sqrt(params.density_at(p)); break;
      case Family::electric: out[p] *= e_scale; break;
      case Family::magnetic: out[p] *= b_scale; break;
      }
    }
  }
  return fg;
}

RawFields inverse_transform(const FieldGrid &fg, const GridSpec &grid, const PhysicalParams &params) {
  grid.validate();
  params.validate(grid);
  check_shapes(fg, grid);
  const double e_scale = std::sqrt(params.eps0 / params.mass);
  const double b_scale = std::sqrt(1.0 / (params.mu0 * params.mass));
  RawFields raw;
  for (auto c : model_components(grid.dimension)) {
    auto &out = raw[c];
    out = fg[c];
    for (std::size_t p = 0; p < out.size(); ++p) {
      switch (family_of(c)) {
      case Family::velocity: out[p] /= std::sqrt(params.density_at(p)); break;
      case Family::electric: out[p] /= e_scale; break;
      case Family::magnetic: out[p] /= b_scale; break;
      }
    }
  }
  return raw;
}

// --- VariableLayout ----------------------------------------------------------

VariableLayout::VariableLayout(const GridSpec &grid)
    : grid_(grid), components_(model_components(grid.dimension)), points_(grid.point_count()) {
  slot_.fill(-1);
  for (std::size_t s = 0; s < components_.size(); ++s)
    slot_[static_cast<std::size_t>(components_[s])] = static_cast<int>(s);
}

bool VariableLayout::has(FieldComponent c) const noexcept {
  return slot_[static_cast<std::size_t>(c)] >= 0;
}

std::size_t VariableLayout::index(FieldComponent c, std::size_t point) const {
  const int s = slot_[static_cast<std::size_t>(c)];
  if (s < 0) throw ContractError("layout: component " + to_string(c) + " not in this model");
  if (point >= points_) throw ContractError("layout: point index out of range");
  return static_cast<std::size_t>(s) * points_ + point;
}

std::vector<double> VariableLayout::pack(const FieldGrid &fg) const {
  check_shapes(fg, grid_);
  std::vector<double> x(variable_count());
  for (std::size_t s = 0; s < components_.size(); ++s)
    std::copy(fg[components_[s]].begin(), fg[components_[s]].end(), x.begin() + s * points_);
  return x;
}

FieldGrid VariableLayout::unpack(std::span<const double> x) const {
  if (x.size() != variable_count()) throw ContractError("layout: state length mismatch");
  FieldGrid fg;
  for (std::size_t s = 0; s < components_.size(); ++s)
    fg[components_[s]].assign(x.begin() + s * points_, x.begin() + (s + 1) * points_);
  return fg;
}

// --- stencil -----------------------------------------------------------------

double discrete_nonlinear_term(const FieldGrid &fg, const GridSpec &grid, const PhysicalParams &params,
                               int component, std::size_t point) {
  if (component < 1 || component > grid.dimension)
    throw ContractError("discrete_nonlinear_term: component outside 1..dimension");
  check_shapes(fg, grid);
  const auto &ui = fg[velocity(component)];
  double acc = 0.0;
  for (int k = 1; k <= grid.dimension; ++k) {
    const int axis = k - 1;
    const auto &uk = fg[velocity(k)];
    const auto p1 = grid.shifted(point, axis, +1);
    const auto p2 = grid.shifted(point, axis, +2);
    const auto m1 = grid.shifted(point, axis, -1);
    const auto m2 = grid.shifted(point, axis, -2);
    const double fwd = uk[p1] * ui[p2] / std::sqrt(params.density_at(p1));
    const double bwd = uk[m1] * ui[m2] / std::sqrt(params.density_at(m1));
    acc += (fwd - bwd) / (4.0 * grid.spacing[axis]);
  }
  return -acc;
}

// --- builders ----------------------------------------------------------------

namespace {

void add_interaction(OdeSystem &sys, std::vector<std::size_t> vars, std::vector<double> alpha) {
  std::vector<std::size_t> order(vars.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return vars[a] < vars[b]; });
  Interaction it;
  for (auto o : order) {
    it.vars.push_back(vars[o]);
    it.alpha.push_back(alpha[o]);
  }
  if (std::adjacent_find(it.vars.begin(), it.vars.end()) != it.vars.end())
    throw ConfigurationError("builder: interaction index set has a repeated variable; grid too small");
  sys.interactions.push_back(std::move(it));
}

OdeSystem build_any(const GridSpec &grid, const PhysicalParams &params) {
  grid.validate();
  params.validate(grid);
  const VariableLayout layout(grid);
  const int s = grid.dimension;
  const std::size_t points = grid.point_count();

  OdeSystem sys;
  sys.variable_count = layout.variable_count();
  sys.degree_bound = 3;
  sys.incidence_bound = s == 1 ? 4u : (s == 2 ? 8u : 14u);

  for (std::size_t j = 0; j < points; ++j) {
    // advection: {u_{i,j}, u_{k,j+e_k}, u_{i,j+2e_k}} with couplings (-a, 0, a)
    for (int i = 1; i <= s; ++i) {
      for (int k = 1; k <= s; ++k) {
        const int axis = k - 1;
        const auto p1 = grid.shifted(j, axis, +1);
        const auto p2 = grid.shifted(j, axis, +2);
        const double a = 1.0 / (4.0 * grid.spacing[axis] * std::sqrt(params.density_at(p1)));
        add_interaction(sys,
                        {layout.index(velocity(i), j), layout.index(velocity(k), p1),
                         layout.index(velocity(i), p2)},
                        {-a, 0.0, a});
      }
    }
    // plasma oscillation: {u_{i,j}, E_{i,j}}
    const double wp = params.plasma_frequency(j);
    for (int i = 1; i <= s; ++i) {
      if (!layout.has(electric(i))) continue;
      add_interaction(sys, {layout.index(velocity(i), j), layout.index(electric(i), j)}, {wp, -wp});
    }
    // Lorentz force: {u_a, u_b, B_c} with couplings (g, -g, 0)
    const double g = params.lorentz_coupling();
    const struct {
      int a, b, c;
      double sign;
    } lorentz[] = {{1, 2, 3, 1.0}, {1, 3, 2, -1.0}, {2, 3, 1, 1.0}};
    for (const auto &l : lorentz) {
      if (l.a > s || l.b > s || !layout.has(magnetic(l.c))) continue;
      add_interaction(sys,
                      {layout.index(velocity(l.a), j), layout.index(velocity(l.b), j),
                       layout.index(magnetic(l.c), j)},
                      {l.sign * g, -l.sign * g, 0.0});
    }
    // curl coupling: {E_{k1,j}, B_{k3,j +- e_{k2}}}
    for (int k1 = 1; k1 <= 3; ++k1) {
      if (!layout.has(electric(k1))) continue;
      for (int k2 = 1; k2 <= s; ++k2) {
        for (int k3 = 1; k3 <= 3; ++k3) {
          const int eps = levi_civita(k1, k2, k3);
          if (eps == 0 || !layout.has(magnetic(k3))) continue;
          const int axis = k2 - 1;
          const double c = params.wave_coupling() * eps / (2.0 * grid.spacing[axis]);
          const auto e = layout.index(electric(k1), j);
          add_interaction(sys, {e, layout.index(magnetic(k3), grid.shifted(j, axis, +1))}, {c, -c});
          add_interaction(sys, {e, layout.index(magnetic(k3), grid.shifted(j, axis, -1))}, {-c, c});
        }
      }
    }
  }
  sys.layout = layout;
  return sys;
}

} // namespace

OdeSystem build_system_1d(const GridSpec &grid, const PhysicalParams &params) {
  if (grid.dimension != 1) throw ConfigurationError("build_system_1d: grid is not one-dimensional");
  return build_any(grid, params);
}

OdeSystem build_system_2d(const GridSpec &grid, const PhysicalParams &params) {
  if (grid.dimension != 2) throw ConfigurationError("build_system_2d: grid is not two-dimensional");
  return build_any(grid, params);
}

OdeSystem build_system_3d(const GridSpec &grid, const PhysicalParams &params) {
  if (grid.dimension != 3) throw ConfigurationError("build_system_3d: grid is not three-dimensional");
  return build_any(grid, params);
}

OdeSystem build_system(const GridSpec &grid, const PhysicalParams &params) {
  switch (grid.dimension) {
  case 1: return build_system_1d(grid, params);
  case 2: return build_system_2d(grid, params);
  case 3: return build_system_3d(grid, params);
  default: throw ConfigurationError("build_system: dimension must be 1, 2 or 3");
  }
}

// --- validation --------------------------------------------------------------

ValidationReport validate_system(const OdeSystem &sys) {
  ValidationReport report;
  std::vector<unsigned> incidence(sys.variable_count, 0);
  for (std::size_t idx = 0; idx < sys.interactions.size(); ++idx) {
    const auto &it = sys.interactions[idx];
    const auto size = it.vars.size();
    if (size < 2 || size > sys.degree_bound) {
      report.violations.push_back({Violation::Condition::arity, idx,
                                   "|p| = " + std::to_string(size) + " outside [2, " +
                                       std::to_string(sys.degree_bound) + "]"});
    }
    if (it.alpha.size() != size) {
      report.violations.push_back({Violation::Condition::malformed, idx, "coupling count differs from |p|"});
      continue;
    }
    bool distinct = true;
    for (std::size_t a = 0; a < size; ++a) {
      if (it.vars[a] >= sys.variable_count) {
        report.violations.push_back({Violation::Condition::malformed, idx, "variable index out of range"});
        distinct = false;
        break;
      }
      for (std::size_t b = a + 1; b < size; ++b)
        if (it.vars[a] == it.vars[b]) distinct = false;
    }
    if (!distinct) {
      report.violations.push_back({Violation::Condition::malformed, idx, "index set is not a set"});
      continue;
    }
    for (auto v : it.vars) ++incidence[v];
    double sum = 0.0, scale = 0.0;
    for (double a : it.alpha) {
      sum += a;
      scale = std::max(scale, std::abs(a));
    }
    if (std::abs(sum) > 1e-12 * scale) {
      std::ostringstream os;
      os << std::setprecision(17) << "sum of couplings = " << sum;
      report.violations.push_back({Violation::Condition::zero_sum, idx, os.str()});
    }
  }
  for (std::size_t v = 0; v < sys.variable_count; ++v) {
    if (incidence[v] < 1 || incidence[v] > sys.incidence_bound) {
      report.violations.push_back({Violation::Condition::incidence, v,
                                   "variable appears in " + std::to_string(incidence[v]) +
                                       " interactions, allowed [1, " +
                                       std::to_string(sys.incidence_bound) + "]"});
    }
  }
  return report;
}

// --- right-hand side ---------------------------------------------------------

void classical_rhs(const OdeSystem &sys, std::span<const double> x, std::span<double> out) {
  if (x.size() != sys.variable_count || out.size() != sys.variable_count)
    throw ContractError("classical_rhs: state length differs from variable count");
  std::fill(out.begin(), out.end(), 0.0);
  for (const auto &it : sys.interactions) {
    const auto size = it.vars.size();
    for (std::size_t a = 0; a < size; ++a) {
      if (it.alpha[a] == 0.0) continue;
      double prod = it.alpha[a];
      for (std::size_t b = 0; b < size; ++b)
        if (b != a) prod *= x[it.vars[b]];
      out[it.vars[a]] += prod;
    }
  }
}

std::vector<double> classical_rhs(const OdeSystem &sys, std::span<const double> x) {
  std::vector<double> out(sys.variable_count);
  classical_rhs(sys, x, out);
  return out;
}

int levi_civita(int k1, int k2, int k3) {
  for (int k : {k1, k2, k3})
    if (k < 1 || k > 3) throw ContractError("levi_civita: index outside {1,2,3}");
  if (k1 == k2 || k2 == k3 || k1 == k3) return 0;
  // even permutations of (1,2,3) are its cyclic shifts
  return ((k2 - k1 + 3) % 3 == 1) ? 1 : -1;
}

double energy(std::span<const double> x, const GridSpec &grid, double mass) {
  double sq = 0.0;
  for (double v : x) sq += v * v;
  return 0.5 * mass * sq * grid.cell_volume();
}

// --- serialization -----------------------------------------------------------

void write_system(std::ostream &os, const OdeSystem &sys) {
  os << "# kvn-ode-system v1\n";
  os << "variables " << sys.variable_count << "\n";
  os << "incidence_bound " << sys.incidence_bound << "\n";
  os << "degree_bound " << sys.degree_bound << "\n";
  os << "interactions " << sys.interactions.size() << "\n";
  os << std::setprecision(17);
  for (const auto &it : sys.interactions) {
    for (auto v : it.vars) os << v << ' ';
    os << ':';
    for (double a : it.alpha) os << ' ' << a;
    os << '\n';
  }
}

OdeSystem read_system(std::istream &is) {
  OdeSystem sys;
  std::string line;
  std::size_t expected = 0;
  bool have_count = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    if (!have_count) {
      std::string key;
      ls >> key;
      if (key == "variables") ls >> sys.variable_count;
      else if (key == "incidence_bound") ls >> sys.incidence_bound;
      else if (key == "degree_bound") ls >> sys.degree_bound;
      else if (key == "interactions") {
        ls >> expected;
        have_count = true;
      } else {
        throw IoError("read_system: unknown header key '" + key + "'");
      }
      if (!ls) throw IoError("read_system: malformed header line '" + line + "'");
      continue;
    }
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw IoError("read_system: missing ':' in '" + line + "'");
    Interaction it;
    std::istringstream lhs(line.substr(0, colon)), rhs(line.substr(colon + 1));
    std::size_t v;
    while (lhs >> v) it.vars.push_back(v);
    std::string tok;
    while (rhs >> tok) it.alpha.push_back(std::stod(tok));
    if (it.vars.size() != it.alpha.size())
      throw IoError("read_system: index and coupling counts differ in '" + line + "'");
    sys.interactions.push_back(std::move(it));
  }
  if (!have_count || sys.interactions.size() != expected)
    throw IoError("read_system: interaction count mismatch");
  return sys;
}

} // namespace kvn
