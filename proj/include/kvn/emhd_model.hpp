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

// Discretized electromagnetic two-fluid model on a periodic grid, expressed
// as a divergence-free polynomial ODE system
//
//     dx_j/dt = sum_{p in S, j in p} alpha_{p->j} prod_{l in p\{j}} x_l
//
// with sum_{j in p} alpha_{p->j} = 0 for every interaction p.

#include <array>
#include <cstddef>
#include <iosfwd>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace kvn {

enum class FieldComponent : std::uint8_t { u1, u2, u3, E1, E2, E3, B1, B2, B3 };

inline constexpr std::size_t kFieldComponentCount = 9;

std::string to_string(FieldComponent c);

struct GridSpec {
  int dimension = 1;                       ///< spatial dimension s in {1,2,3}
  std::array<std::size_t, 3> points{1, 1, 1}; ///< N_x, N_y, N_z (unused axes = 1)
  std::array<double, 3> spacing{1.0, 1.0, 1.0};

  static GridSpec line(std::size_t nx, double dx = 1.0);
  static GridSpec square(std::size_t n, double d = 1.0);
  static GridSpec cube(std::size_t n, double d = 1.0);

  std::size_t point_count() const noexcept;
  double cell_volume() const noexcept;
  /// Flat point index, row-major with axis 1 slowest (j1*N2*N3 + j2*N3 + j3).
  std::size_t flat(std::array<std::ptrdiff_t, 3> j) const noexcept;
  std::array<std::size_t, 3> coords(std::size_t point) const noexcept;
  /// Periodic neighbour `offset` steps along `axis` (0-based).
  std::size_t shifted(std::size_t point, int axis, std::ptrdiff_t offset) const noexcept;

  void validate() const;
};

/// Physical constants and the time-stationary density field.
struct PhysicalParams {
  double charge = -1.0;
  double mass = 1.0;
  double eps0 = 1.0;
  double mu0 = 1.0;
  std::vector<double> density; ///< per grid point; empty means n = 1 everywhere

  /// Nondimensional parameters with unit constants and uniform n = 1, where
  /// the plasma frequency equals the charge.
  static PhysicalParams nondimensional(double plasma_frequency);

  double density_at(std::size_t point) const;
  double plasma_frequency(std::size_t point) const; ///< sqrt(n/(eps0 m)) q
  double lorentz_coupling() const;                  ///< sqrt(mu0/m) q
  double wave_coupling() const;                     ///< 1/sqrt(eps0 mu0)
  void validate(const GridSpec &grid) const;
};

/// Per-component arrays over grid points; an empty array means the component
/// is not part of the model.
struct FieldArrays {
  std::array<std::vector<double>, kFieldComponentCount> data;

  std::vector<double> &operator[](FieldComponent c) { return data[static_cast<std::size_t>(c)]; }
  const std::vector<double> &operator[](FieldComponent c) const {
    return data[static_cast<std::size_t>(c)];
  }
  bool has(FieldComponent c) const { return !(*this)[c].empty(); }
};

/// Physical fields u, E, B.
struct RawFields : FieldArrays {};
/// Energy-normalized fields u~ = sqrt(n) u, E~ = sqrt(eps0/m) E, B~ = B/sqrt(mu0 m).
struct FieldGrid : FieldArrays {};

/// Components carried by an s-dimensional model, in variable-layout order.
std::vector<FieldComponent> model_components(int dimension);

RawFields zero_fields(const GridSpec &grid);

FieldGrid transform_fields(const RawFields &raw, const GridSpec &grid, const PhysicalParams &params);
RawFields inverse_transform(const FieldGrid &fg, const GridSpec &grid, const PhysicalParams &params);

/// Mapping (component, point) <-> flat variable index: components are laid
/// out in blocks of `point_count` in the order of model_components().
class VariableLayout {
public:
  explicit VariableLayout(const GridSpec &grid);

  const GridSpec &grid() const noexcept { return grid_; }
  const std::vector<FieldComponent> &components() const noexcept { return components_; }
  std::size_t variable_count() const noexcept { return components_.size() * points_; }
  bool has(FieldComponent c) const noexcept;
  std::size_t index(FieldComponent c, std::size_t point) const;

  std::vector<double> pack(const FieldGrid &fg) const;
  FieldGrid unpack(std::span<const double> x) const;

private:
  GridSpec grid_;
  std::vector<FieldComponent> components_;
  std::array<int, kFieldComponentCount> slot_{};
  std::size_t points_;
};

/// One monomial interaction: sorted variable set p and its couplings.
struct Interaction {
  std::vector<std::size_t> vars;
  std::vector<double> alpha;
};

struct OdeSystem {
  std::size_t variable_count = 0;
  std::vector<Interaction> interactions;
  unsigned incidence_bound = 0; ///< c
  unsigned degree_bound = 3;    ///< d
  std::optional<VariableLayout> layout;
};

/// Four-point stencil of the advective terms of the u~ equation,
///   -sum_k 1/(4 dr_k) [u~_{k,j+e_k} u~_{i,j+2e_k}/sqrt(n_{j+e_k})
///                      - u~_{k,j-e_k} u~_{i,j-2e_k}/sqrt(n_{j-e_k})],
/// for velocity component i = `component` (1-based) at `point`.
double discrete_nonlinear_term(const FieldGrid &fg, const GridSpec &grid, const PhysicalParams &params,
                               int component, std::size_t point);

OdeSystem build_system_1d(const GridSpec &grid, const PhysicalParams &params);
OdeSystem build_system_2d(const GridSpec &grid, const PhysicalParams &params);
OdeSystem build_system_3d(const GridSpec &grid, const PhysicalParams &params);
/// Dispatches on grid.dimension.
OdeSystem build_system(const GridSpec &grid, const PhysicalParams &params);

struct Violation {
  enum class Condition { arity = 1, incidence = 2, zero_sum = 3, malformed = 4 };
  Condition condition;
  std::size_t subject; ///< interaction index, or variable index for incidence
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

ValidationReport validate_system(const OdeSystem &sys);

std::vector<double> classical_rhs(const OdeSystem &sys, std::span<const double> x);
void classical_rhs(const OdeSystem &sys, std::span<const double> x, std::span<double> out);

int levi_civita(int k1, int k2, int k3);

/// sum over the grid of m/2 (|u~|^2 + |E~|^2 + |B~|^2) dV.
double energy(std::span<const double> x, const GridSpec &grid, double mass = 1.0);

/// Text form: a header followed by one "i j [k] : a_i a_j [a_k]" line per
/// interaction, 17 significant digits.
void write_system(std::ostream &os, const OdeSystem &sys);
OdeSystem read_system(std::istream &is);

} // namespace kvn
