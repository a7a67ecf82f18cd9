#include "sedmr/driver.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace sedmr {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_targets(const std::vector<double>& targets) {
  double prev = 0.0;
  for (double t : targets) {
    if (!(t >= prev))
      throw std::invalid_argument(
          "snapshots: must be non-negative and non-decreasing");
    prev = t;
  }
}

// Advance to `target` in CFL steps, shortening the last one. Both solver
// paths share this loop, so their time grids are identical and adaptive
// errors are measured against the reference at exactly the same instants.
template <typename StepFn>
void advance_to(double target, double dt, StateVector& state, StepFn&& step) {
  const double slack = 1e-9 * (1.0 + std::fabs(target));
  while (target - state.t > slack) {
    const double dt_step = kernels::vmin(dt, target - state.t);
    step(dt_step);
  }
  state.t = target;
}

}  // namespace

StateVector initial_state(const ProblemSpec& spec, std::size_t n0) {
  if (n0 < 2) throw std::invalid_argument("n0: must be at least 2");
  StateVector state;
  state.dx = spec.height / static_cast<double>(n0);
  state.t = 0.0;
  state.values.resize(n0 + 1);
  for (std::size_t i = 0; i <= n0; ++i)
    state.values[i] = spec.u0(state.dx * static_cast<double>(i));
  apply_boundary(spec, state);
  return state;
}

RunResult run_reference(const ProblemSpec& spec, const SchemeConfig& base,
                        std::size_t n0,
                        const std::vector<double>& snapshot_times) {
  check_targets(snapshot_times);
  SchemeConfig config = base;
  config.dx = spec.height / static_cast<double>(n0);
  config.dt = compute_dt(spec, config.dx, config.cfl);

  StateVector state = initial_state(spec, n0);
  RhsWorkspace ws;
  ws.resize(n0 + 1, false);
  const RhsFn dense = [&](const StateVector& st, RhsWorkspace& w,
                          std::vector<double>& r) {
    spatial_operator(spec, config, st, w, r);
  };

  RunResult result;
  const auto start = Clock::now();
  for (double target : snapshot_times) {
    advance_to(target, config.dt, state, [&](double dt_step) {
      rk2_step(spec, state, dt_step, dense, ws);
    });
    result.snapshots.push_back(state);
    result.flux_evals_at.push_back(ws.flux_evals);
  }
  result.wall_seconds = seconds_since(start);
  result.flux_evals = ws.flux_evals;
  return result;
}

MrRunResult run_mr(const ProblemSpec& spec, const SchemeConfig& base,
                   const GridHierarchy& grid, const ThresholdPolicy& policy,
                   const std::vector<double>& snapshot_times) {
  check_targets(snapshot_times);
  const std::size_t n0 = grid.n0;
  SchemeConfig config = base;
  config.dx = spec.height / static_cast<double>(n0);
  config.dt = compute_dt(spec, config.dx, config.cfl);

  StateVector state = initial_state(spec, n0);
  RhsWorkspace ws;
  ws.resize(n0 + 1, false);

  DetailMask step_mask = DetailMask::none(grid);
  const RhsFn adaptive = [&](const StateVector& st, RhsWorkspace& w,
                             std::vector<double>& r) {
    adaptive_rhs(spec, config, grid, step_mask, st, w, r);
  };

  MrRunResult result;
  const double coarse_points = static_cast<double>(grid.points(grid.levels));
  const auto start = Clock::now();
  for (double target : snapshot_times) {
    advance_to(target, config.dt, state, [&](double dt_step) {
      // One mask per step, built from the pre-step state and shared by both
      // stages.
      step_mask = build_mask(grid, policy, state.values);
      rk2_step(spec, state, dt_step, adaptive, ws);
    });

    std::size_t strict = 0;
    DetailMask snap_mask = build_mask(grid, policy, state.values, &strict);
    result.v_with_safety.push_back(compression_rate(snap_mask));
    result.v_strict.push_back(static_cast<double>(grid.points(0)) /
                              (coarse_points + static_cast<double>(strict)));
    result.masks.push_back(std::move(snap_mask));
    result.trees.push_back(encode(grid, state.values));
    result.snapshots.push_back(state);
    result.flux_evals_at.push_back(ws.flux_evals);
  }
  result.wall_seconds = seconds_since(start);
  result.flux_evals = ws.flux_evals;
  return result;
}

double RunMetrics::flux_ratio() const {
  if (mr_flux_evals == 0) return ref_flux_evals == 0 ? 1.0 : 0.0;
  return static_cast<double>(ref_flux_evals) /
         static_cast<double>(mr_flux_evals);
}

double RunMetrics::wall_ratio() const {
  if (!(mr_wall_seconds > 0.0)) return 0.0;
  return ref_wall_seconds / mr_wall_seconds;
}

RunMetrics compare_runs(const RunResult& ref, const MrRunResult& mr,
                        const std::vector<double>& snapshot_times, double h0) {
  if (ref.snapshots.size() != mr.snapshots.size() ||
      ref.snapshots.size() != snapshot_times.size())
    throw std::invalid_argument("compare_runs: snapshot schedules differ");

  RunMetrics metrics;
  metrics.times = snapshot_times;
  metrics.v_with_safety = mr.v_with_safety;
  metrics.v_strict = mr.v_strict;
  const auto& k = kernels::ops();
  for (std::size_t i = 0; i < snapshot_times.size(); ++i) {
    const auto& a = ref.snapshots[i].values;
    const auto& b = mr.snapshots[i].values;
    if (a.size() != b.size())
      throw std::invalid_argument("compare_runs: grid sizes differ");
    metrics.e1.push_back(h0 * k.sum_abs_diff(a.data(), b.data(), a.size()));
    metrics.einf.push_back(k.max_abs_diff(a.data(), b.data(), a.size()));
    metrics.mass.push_back(total_mass(mr.snapshots[i]));
    const std::uint64_t rc = ref.flux_evals_at[i];
    const std::uint64_t mc = mr.flux_evals_at[i];
    metrics.mu_flux.push_back(
        mc == 0 ? (rc == 0 ? 1.0 : 0.0)
                : static_cast<double>(rc) / static_cast<double>(mc));
  }
  metrics.ref_flux_evals = ref.flux_evals;
  metrics.mr_flux_evals = mr.flux_evals;
  metrics.ref_wall_seconds = ref.wall_seconds;
  metrics.mr_wall_seconds = mr.wall_seconds;
  return metrics;
}

ScenarioResult run_scenario(const ProblemSpec& spec, const SchemeConfig& base,
                            const GridHierarchy& grid,
                            const ThresholdPolicy& policy,
                            const std::vector<double>& snapshot_times) {
  validate_problem(spec);
  ScenarioResult result;
  result.reference = run_reference(spec, base, grid.n0, snapshot_times);
  result.adaptive = run_mr(spec, base, grid, policy, snapshot_times);
  result.metrics = compare_runs(result.reference, result.adaptive,
                                snapshot_times, grid.h0);
  return result;
}

}  // namespace sedmr
