#pragma once

// Runs the reference (dense) and adaptive solvers over a shared snapshot
// schedule with identical time-step sequences, and reduces the pair to the
// comparison metrics: discrete errors, compression rate, and the speedup
// proxies (flux-evaluation counts deterministically, wall clock informally).

#include <cstdint>
#include <vector>

#include "sedmr/mr.hpp"

namespace sedmr {

// Sampled initial profile on n0+1 points with wall rows applied.
StateVector initial_state(const ProblemSpec& spec, std::size_t n0);

struct RunResult {
  std::vector<StateVector> snapshots;
  std::vector<std::uint64_t> flux_evals_at;  // cumulative at each snapshot
  std::uint64_t flux_evals = 0;
  double wall_seconds = 0.0;
};

RunResult run_reference(const ProblemSpec& spec, const SchemeConfig& base,
                        std::size_t n0,
                        const std::vector<double>& snapshot_times);

struct MrRunResult {
  std::vector<StateVector> snapshots;
  std::vector<DetailMask> masks;  // adapted to each snapshot state
  std::vector<MRState> trees;     // encode of each snapshot (detail dumps)
  std::vector<double> v_with_safety, v_strict;
  std::vector<std::uint64_t> flux_evals_at;
  std::uint64_t flux_evals = 0;
  double wall_seconds = 0.0;
};

MrRunResult run_mr(const ProblemSpec& spec, const SchemeConfig& base,
                   const GridHierarchy& grid, const ThresholdPolicy& policy,
                   const std::vector<double>& snapshot_times);

struct RunMetrics {
  std::vector<double> times;
  std::vector<double> v_with_safety, v_strict;  // compression rates
  std::vector<double> mu_flux;                  // cumulative count ratio
  std::vector<double> e1, einf;                 // adaptive vs reference
  std::vector<double> mass;                     // adaptive-run inventory
  std::uint64_t ref_flux_evals = 0, mr_flux_evals = 0;
  double ref_wall_seconds = 0.0, mr_wall_seconds = 0.0;

  double flux_ratio() const;
  double wall_ratio() const;
};

RunMetrics compare_runs(const RunResult& ref, const MrRunResult& mr,
                        const std::vector<double>& snapshot_times, double h0);

struct ScenarioResult {
  RunResult reference;
  MrRunResult adaptive;
  RunMetrics metrics;
};

ScenarioResult run_scenario(const ProblemSpec& spec, const SchemeConfig& base,
                            const GridHierarchy& grid,
                            const ThresholdPolicy& policy,
                            const std::vector<double>& snapshot_times);

}  // namespace sedmr
