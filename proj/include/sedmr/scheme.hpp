#pragma once

// Second-order semi-discrete scheme on a uniform grid of point values:
// theta-limited slopes, Engquist-Osher interface fluxes, a conservative
// second difference of the integrated diffusion, half-cell wall rows, and a
// two-stage (Heun) time step under a combined convective/diffusive CFL bound.

#include <cstdint>
#include <functional>
#include <vector>

#include "sedmr/kernels.hpp"
#include "sedmr/model.hpp"

namespace sedmr {

using kernels::minmod3;

struct SchemeConfig {
  double theta = 1.0;  // limiter weight in [0, 2]
  double cfl = 0.5;
  double dx = 0.0;
  double dt = 0.0;
};

// Point values on the grid. Closed/fed columns carry n0+1 points including
// both walls; the periodic harness carries n points with wrap indexing.
struct StateVector {
  std::vector<double> values;
  double dx = 0.0;
  double t = 0.0;
};

// dt = cfl * dx / (max|f'| + 2 * max a / dx). Throws std::invalid_argument
// when both stiffness terms vanish.
double compute_dt(const ProblemSpec& spec, double dx, double cfl);

// Scratch arrays for one operator evaluation, plus the running count of
// Engquist-Osher interface evaluations (the unit the adaptive speedup is
// measured in).
struct RhsWorkspace {
  std::vector<double> slopes, plus, minus, a_int, flux, lo, hi;
  std::vector<double> stage_values, rhs1, rhs2;  // time-step scratch
  // Scatter/gather buffers for the adaptive operator's exact-flux positions.
  std::vector<std::size_t> pack_idx;
  std::vector<double> pack_a, pack_b, pack_lo, pack_hi, pack_f;
  std::vector<unsigned char> face_exact;
  std::uint64_t flux_evals = 0;

  void resize(std::size_t points, bool periodic);
};

// Limited slopes, face values plus/minus, and A(u) for the whole grid.
// Shared by the dense operator and the adaptive one (which replaces only the
// interface-flux stage).
void prepare_faces(const ProblemSpec& spec, const SchemeConfig& config,
                   const StateVector& state, RhsWorkspace& ws);

// Dense Engquist-Osher fluxes at every interface (after prepare_faces).
void dense_fluxes(const ProblemSpec& spec, const StateVector& state,
                  RhsWorkspace& ws);

// Interior rows via the kernels lane; wall rows in half-cell flux form with
// the wall flux exactly as the boundary condition prescribes (batch bottom:
// q*u; fed top: the feed flux). The batch top row is Dirichlet clear fluid.
void assemble_rows(const ProblemSpec& spec, const SchemeConfig& config,
                   const StateVector& state, RhsWorkspace& ws,
                   std::vector<double>& rhs);

// prepare_faces + dense_fluxes + assemble_rows.
void spatial_operator(const ProblemSpec& spec, const SchemeConfig& config,
                      const StateVector& state, RhsWorkspace& ws,
                      std::vector<double>& rhs);

// Dirichlet rows only (batch top point). No-op for fed/periodic problems.
void apply_boundary(const ProblemSpec& spec, StateVector& state);

using RhsFn = std::function<void(const StateVector& state, RhsWorkspace& ws,
                                 std::vector<double>& rhs)>;

// Heun step: u* = u + dt L(u); u_new = (u + u* + dt L(u*)) / 2, boundary
// after each stage, clip to [0, u_max] after the full step.
void rk2_step(const ProblemSpec& spec, StateVector& state, double dt,
              const RhsFn& rhs_fn, RhsWorkspace& ws);

// Trapezoid-weight solids inventory (the conserved quantity for a closed
// column): dx * (u_0/2 + u_1 + ... + u_{n-2} + u_{n-1}/2); plain dx * sum
// for periodic grids.
double total_mass(const StateVector& state, bool periodic = false);

}  // namespace sedmr
