#pragma once

// Point-value multiresolution on nested dyadic grids: encode a fine-grid
// profile into coarsest-level values plus prediction details, threshold the
// details with level-scaled tolerances, grow a safety margin so tomorrow's
// features stay resolved, and evaluate the expensive interface fluxes only
// where the co-located detail is retained (midpoint interpolation from the
// coarser flux lattice elsewhere). The evolved state itself stays dense on
// the finest grid, so conservation is untouched and a zero threshold
// reproduces the reference scheme exactly.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sedmr/scheme.hpp"

namespace sedmr {

// Level 0 is the finest grid (n0 intervals, n0+1 points); level k keeps
// every 2^k-th point. Details d^k_j live at the odd points of level k-1,
// j = 0..n0/2^k - 1, for k = 1..levels.
struct GridHierarchy {
  std::size_t n0 = 0;
  int levels = 0;
  int order = 3;   // prediction order r (odd); stencil uses r+1 points
  double h0 = 0.0;

  static GridHierarchy create(std::size_t n0, int levels, int order,
                              double height);

  std::size_t intervals(int k) const { return n0 >> k; }
  std::size_t points(int k) const { return (n0 >> k) + 1; }
  std::size_t details(int k) const { return n0 >> k; }
  // Position of detail (k, j) on the fine grid / x axis.
  std::size_t fine_index(int k, std::size_t j) const {
    return (2 * j + 1) << (k - 1);
  }
  double detail_x(int k, std::size_t j) const {
    return h0 * static_cast<double>(fine_index(k, j));
  }
};

// Midpoint Lagrange prediction weights for a 2s-point stencil whose start was
// shifted by `shift` off the centered position (shift > 0 near the left wall,
// < 0 near the right wall).
const std::vector<double>& midpoint_weights(int s, int shift);

struct MRState {
  GridHierarchy grid;
  std::vector<double> coarse;                // points(levels) values
  std::vector<std::vector<double>> details;  // [k-1][j], k = 1..levels
};

MRState encode(const GridHierarchy& grid, const std::vector<double>& fine);
std::vector<double> decode(const MRState& state);

// eps_k = 2^(k-levels) * epsilon: loosest (= epsilon) on the coarsest detail
// level, halved on each finer one.
struct ThresholdPolicy {
  double epsilon = 0.0;
  int levels = 0;

  double at(int k) const;
};

struct DetailMask {
  GridHierarchy grid;
  std::vector<std::vector<std::uint8_t>> flags;  // same shape as details

  static DetailMask none(const GridHierarchy& grid);
  std::size_t count() const;
};

// flags (k,j) where |d^k_j| >= eps_k.
DetailMask significant_details(const MRState& state,
                               const ThresholdPolicy& policy);

// Same-level neighbors and finer-level children of every significant detail,
// then parents fine -> coarse so the retained set is graded.
void add_safety_margin(DetailMask& mask);

// Zero all details not kept (analysis helper; the evolution path never
// truncates the state).
void truncate(MRState& state, const DetailMask& keep);

// (n0 + 1) / (coarsest points + retained details).
double compression_rate(const DetailMask& mask);

// encode -> threshold -> safety margin; optionally reports the strict
// (pre-safety) retained count.
DetailMask build_mask(const GridHierarchy& grid, const ThresholdPolicy& policy,
                      const std::vector<double>& fine,
                      std::size_t* strict_count = nullptr);

// Adaptive operator: prepare_faces as usual, then exact Engquist-Osher fluxes
// on the coarsest interface lattice, at every interface whose co-located
// detail is flagged, and at the wall-adjacent interface; midpoint
// interpolation from the next coarser flux lattice everywhere else. With a
// full mask this reproduces spatial_operator exactly.
void adaptive_rhs(const ProblemSpec& spec, const SchemeConfig& config,
                  const GridHierarchy& grid, const DetailMask& mask,
                  const StateVector& state, RhsWorkspace& ws,
                  std::vector<double>& rhs);

}  // namespace sedmr
