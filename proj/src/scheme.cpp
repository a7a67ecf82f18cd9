#include "sedmr/scheme.hpp"

#include <stdexcept>

namespace sedmr {

double compute_dt(const ProblemSpec& spec, double dx, double cfl) {
  if (!(dx > 0.0)) throw std::invalid_argument("dx: must be positive");
  if (!(cfl > 0.0) || cfl > 1.0)
    throw std::invalid_argument("cfl: must lie in (0, 1]");
  const double convective = spec.flux->max_abs_deriv();
  const double diffusive = 2.0 * spec.diffusion->max_coefficient() / dx;
  const double denom = convective + diffusive;
  if (!(denom > 0.0))
    throw std::invalid_argument(
        "dt: flux and diffusion are both degenerate, time step unbounded");
  return cfl * dx / denom;
}

void RhsWorkspace::resize(std::size_t points, bool periodic) {
  const std::size_t interfaces = periodic ? points : points - 1;
  slopes.assign(points, 0.0);
  plus.assign(points, 0.0);
  minus.assign(points, 0.0);
  a_int.assign(points, 0.0);
  flux.assign(interfaces, 0.0);
  lo.assign(interfaces, 0.0);
  hi.assign(interfaces, 0.0);
  face_exact.assign(interfaces, 0);
  stage_values.assign(points, 0.0);
  rhs1.assign(points, 0.0);
  rhs2.assign(points, 0.0);
}

void prepare_faces(const ProblemSpec& spec, const SchemeConfig& config,
                   const StateVector& state, RhsWorkspace& ws) {
  const std::size_t n = state.values.size();
  const double* u = state.values.data();
  const double inv_dx = 1.0 / config.dx;
  const double half_inv_dx = 0.5 * inv_dx;
  const auto& k = kernels::ops();

  k.limited_slopes(u, n, config.theta, inv_dx, ws.slopes.data());
  if (spec.kind == ProblemKind::periodic) {
    ws.slopes[0] = kernels::limited_slope_at(u[n - 1], u[0], u[1],
                                             config.theta, inv_dx,
                                             half_inv_dx);
    ws.slopes[n - 1] = kernels::limited_slope_at(u[n - 2], u[n - 1], u[0],
                                                 config.theta, inv_dx,
                                                 half_inv_dx);
  } else {
    // First-order wall rows: no one-sided extrapolation past the domain.
    ws.slopes[0] = 0.0;
    ws.slopes[n - 1] = 0.0;
  }
  k.face_values(u, ws.slopes.data(), n, 0.5 * config.dx, ws.plus.data(),
                ws.minus.data());
  spec.diffusion->A_many(u, n, ws.a_int.data());
}

void dense_fluxes(const ProblemSpec& spec, const StateVector& state,
                  RhsWorkspace& ws) {
  const std::size_t n = state.values.size();
  const Flux& f = *spec.flux;
  if (spec.kind == ProblemKind::periodic) {
    f.eo_many(ws.plus.data(), ws.minus.data() + 1, n - 1, ws.lo.data(),
              ws.hi.data(), ws.flux.data());
    ws.flux[n - 1] = f.eo(ws.plus[n - 1], ws.minus[0]);
    ws.flux_evals += n;
  } else {
    f.eo_many(ws.plus.data(), ws.minus.data() + 1, n - 1, ws.lo.data(),
              ws.hi.data(), ws.flux.data());
    ws.flux_evals += n - 1;
  }
}

void assemble_rows(const ProblemSpec& spec, const SchemeConfig& config,
                   const StateVector& state, RhsWorkspace& ws,
                   std::vector<double>& rhs) {
  const std::size_t n = state.values.size();
  rhs.resize(n);
  const double inv_dx = 1.0 / config.dx;
  const double inv_dx2 = inv_dx * inv_dx;
  const double q = spec.q.at(state.t);
  const double q_inv_dx = q * inv_dx;
  const double* a = ws.a_int.data();

  kernels::ops().conv_diff_rhs(ws.plus.data(), ws.minus.data(),
                               ws.flux.data(), a, n, q, inv_dx, inv_dx2,
                               rhs.data());

  if (spec.kind == ProblemKind::periodic) {
    rhs[0] = kernels::rhs_point(q_inv_dx, ws.minus[1], ws.plus[n - 1],
                                ws.flux[0], ws.flux[n - 1], a[n - 1], a[0],
                                a[1], inv_dx, inv_dx2);
    rhs[n - 1] = kernels::rhs_point(q_inv_dx, ws.minus[0], ws.plus[n - 2],
                                    ws.flux[n - 1], ws.flux[n - 2], a[n - 2],
                                    a[n - 1], a[0], inv_dx, inv_dx2);
    return;
  }

  // Bottom wall, half cell: the total flux through the wall is exactly the
  // discharge q*u (settling and consolidation fluxes vanish there), so the
  // trapezoid-weight inventory telescopes to the wall fluxes alone.
  const double phi_bottom_in =
      q * ws.minus[1] + ws.flux[0] - (a[1] - a[0]) * inv_dx;
  const double phi_wall = q * state.values[0];
  rhs[0] = -(phi_bottom_in - phi_wall) * (2.0 * inv_dx);

  if (spec.kind == ProblemKind::batch_column) {
    rhs[n - 1] = 0.0;  // Dirichlet clear fluid at the top
  } else {
    const double phi_top_in = q * ws.minus[n - 1] + ws.flux[n - 2] -
                              (a[n - 1] - a[n - 2]) * inv_dx;
    const double feed = spec.feed->at(state.t);
    rhs[n - 1] = -(feed - phi_top_in) * (2.0 * inv_dx);
  }
}

void spatial_operator(const ProblemSpec& spec, const SchemeConfig& config,
                      const StateVector& state, RhsWorkspace& ws,
                      std::vector<double>& rhs) {
  prepare_faces(spec, config, state, ws);
  dense_fluxes(spec, state, ws);
  assemble_rows(spec, config, state, ws, rhs);
}

void apply_boundary(const ProblemSpec& spec, StateVector& state) {
  if (spec.kind == ProblemKind::batch_column) state.values.back() = 0.0;
}

void rk2_step(const ProblemSpec& spec, StateVector& state, double dt,
              const RhsFn& rhs_fn, RhsWorkspace& ws) {
  const std::size_t n = state.values.size();

  rhs_fn(state, ws, ws.rhs1);
  StateVector stage;
  stage.dx = state.dx;
  stage.t = state.t + dt;
  ws.stage_values.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    ws.stage_values[i] = state.values[i] + dt * ws.rhs1[i];
  stage.values.swap(ws.stage_values);
  apply_boundary(spec, stage);

  rhs_fn(stage, ws, ws.rhs2);
  kernels::ops().heun_combine(state.values.data(), stage.values.data(),
                              ws.rhs2.data(), n, 0.5 * dt,
                              state.values.data());
  state.t += dt;
  apply_boundary(spec, state);
  kernels::ops().clamp_range(0.0, spec.u_max(), state.values.data(), n);

  stage.values.swap(ws.stage_values);  // hand the buffer back
}

double total_mass(const StateVector& state, bool periodic) {
  const auto& k = kernels::ops();
  const double s = k.sum(state.values.data(), state.values.size());
  if (periodic) return state.dx * s;
  return state.dx *
         (s - 0.5 * state.values.front() - 0.5 * state.values.back());
}

}  // namespace sedmr
