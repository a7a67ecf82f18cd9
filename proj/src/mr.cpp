#include "sedmr/mr.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

namespace sedmr {
namespace {

// Interpolate to the midpoint between lattice nodes j and j+1 using the
// cached stencil weights; `pts` nodes are available.
double predict_midpoint(const double* v, std::size_t pts, std::size_t j,
                        int s) {
  const long unclamped = static_cast<long>(j) - s + 1;
  const long max_base = static_cast<long>(pts) - 2 * s;
  long base = unclamped;
  if (base < 0) base = 0;
  if (base > max_base) base = max_base;
  const int shift = static_cast<int>(base - unclamped);
  const std::vector<double>& w = midpoint_weights(s, shift);
  double acc = 0.0;
  for (int i = 0; i < 2 * s; ++i)
    acc += w[static_cast<std::size_t>(i)] * v[base + i];
  return acc;
}

}  // namespace

GridHierarchy GridHierarchy::create(std::size_t n0, int levels, int order,
                                    double height) {
  if (levels < 1) throw std::invalid_argument("levels: must be at least 1");
  if (order < 1 || order % 2 == 0 || order > 7)
    throw std::invalid_argument("order: must be odd and in {1, 3, 5, 7}");
  if (n0 == 0 || (n0 % (std::size_t{1} << levels)) != 0)
    throw std::invalid_argument(
        "n0: must be a positive multiple of 2^levels");
  if ((n0 >> levels) < static_cast<std::size_t>(order) + 1)
    throw std::invalid_argument(
        "n0: coarsest level too small for the prediction stencil "
        "(need n0/2^levels >= order+1)");
  if (!(height > 0.0))
    throw std::invalid_argument("height: must be positive");
  GridHierarchy g;
  g.n0 = n0;
  g.levels = levels;
  g.order = order;
  g.h0 = height / static_cast<double>(n0);
  return g;
}

const std::vector<double>& midpoint_weights(int s, int shift) {
  // Single-threaded solver; lazily filled cache keyed by (s, shift).
  static std::map<std::pair<int, int>, std::vector<double>> cache;
  const auto key = std::make_pair(s, shift);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  // Stencil nodes sit at 0..2s-1; the midpoint sits at s - 1/2 - shift.
  const double p = static_cast<double>(s) - 0.5 - static_cast<double>(shift);
  std::vector<double> w(static_cast<std::size_t>(2 * s));
  for (int i = 0; i < 2 * s; ++i) {
    double num = 1.0, den = 1.0;
    for (int m = 0; m < 2 * s; ++m) {
      if (m == i) continue;
      num *= p - static_cast<double>(m);
      den *= static_cast<double>(i - m);
    }
    w[static_cast<std::size_t>(i)] = num / den;
  }
  return cache.emplace(key, std::move(w)).first->second;
}

MRState encode(const GridHierarchy& grid, const std::vector<double>& fine) {
  if (fine.size() != grid.points(0))
    throw std::invalid_argument("fine: size must be n0+1");
  const int s = (grid.order + 1) / 2;
  MRState state;
  state.grid = grid;
  state.details.resize(static_cast<std::size_t>(grid.levels));
  std::vector<double> cur = fine;
  for (int k = 1; k <= grid.levels; ++k) {
    const std::size_t npts = grid.points(k);
    std::vector<double> coarse(npts);
    for (std::size_t i = 0; i < npts; ++i) coarse[i] = cur[2 * i];
    auto& det = state.details[static_cast<std::size_t>(k - 1)];
    det.resize(grid.details(k));
    for (std::size_t j = 0; j < det.size(); ++j)
      det[j] = cur[2 * j + 1] - predict_midpoint(coarse.data(), npts, j, s);
    cur = std::move(coarse);
  }
  state.coarse = std::move(cur);
  return state;
}

std::vector<double> decode(const MRState& state) {
  const GridHierarchy& grid = state.grid;
  const int s = (grid.order + 1) / 2;
  std::vector<double> cur = state.coarse;
  for (int k = grid.levels; k >= 1; --k) {
    const std::size_t npts = grid.points(k);
    if (cur.size() != npts)
      throw std::invalid_argument("state: coarse/detail shapes inconsistent");
    std::vector<double> fine(grid.points(k - 1));
    for (std::size_t i = 0; i < npts; ++i) fine[2 * i] = cur[i];
    const auto& det = state.details[static_cast<std::size_t>(k - 1)];
    for (std::size_t j = 0; j < det.size(); ++j)
      fine[2 * j + 1] = predict_midpoint(cur.data(), npts, j, s) + det[j];
    cur = std::move(fine);
  }
  return cur;
}

double ThresholdPolicy::at(int k) const {
  return std::ldexp(epsilon, k - levels);
}

DetailMask DetailMask::none(const GridHierarchy& grid) {
  DetailMask mask;
  mask.grid = grid;
  mask.flags.resize(static_cast<std::size_t>(grid.levels));
  for (int k = 1; k <= grid.levels; ++k)
    mask.flags[static_cast<std::size_t>(k - 1)].assign(grid.details(k), 0);
  return mask;
}

std::size_t DetailMask::count() const {
  std::size_t c = 0;
  for (const auto& level : flags)
    for (std::uint8_t f : level) c += f ? 1 : 0;
  return c;
}

DetailMask significant_details(const MRState& state,
                               const ThresholdPolicy& policy) {
  DetailMask mask = DetailMask::none(state.grid);
  for (int k = 1; k <= state.grid.levels; ++k) {
    const double eps_k = policy.at(k);
    const auto& det = state.details[static_cast<std::size_t>(k - 1)];
    auto& flags = mask.flags[static_cast<std::size_t>(k - 1)];
    for (std::size_t j = 0; j < det.size(); ++j)
      flags[j] = std::fabs(det[j]) >= eps_k ? 1 : 0;
  }
  return mask;
}

void add_safety_margin(DetailMask& mask) {
  const GridHierarchy& grid = mask.grid;
  const int L = grid.levels;
  auto grown = mask.flags;
  const auto mark = [&](int k, long j) {
    if (k < 1 || k > L) return;
    if (j < 0 || j >= static_cast<long>(grid.details(k))) return;
    grown[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(j)] = 1;
  };
  for (int k = 1; k <= L; ++k) {
    const auto& sig = mask.flags[static_cast<std::size_t>(k - 1)];
    for (long j = 0; j < static_cast<long>(sig.size()); ++j) {
      if (!sig[static_cast<std::size_t>(j)]) continue;
      mark(k, j - 1);
      mark(k, j + 1);
      if (k > 1) {
        mark(k - 1, 2 * j);
        mark(k - 1, 2 * j + 1);
      }
    }
  }
  // Gradedness: every retained detail needs its coarser parent retained so
  // prediction stencils stay anchored; propagate fine -> coarse.
  for (int k = 1; k < L; ++k) {
    const auto& fine = grown[static_cast<std::size_t>(k - 1)];
    auto& parent = grown[static_cast<std::size_t>(k)];
    for (std::size_t j = 0; j < fine.size(); ++j)
      if (fine[j]) parent[j / 2] = 1;
  }
  mask.flags = std::move(grown);
}

void truncate(MRState& state, const DetailMask& keep) {
  for (std::size_t k = 0; k < state.details.size(); ++k) {
    auto& det = state.details[k];
    const auto& flags = keep.flags[k];
    for (std::size_t j = 0; j < det.size(); ++j)
      if (!flags[j]) det[j] = 0.0;
  }
}

double compression_rate(const DetailMask& mask) {
  const GridHierarchy& grid = mask.grid;
  const std::size_t kept = grid.points(grid.levels) + mask.count();
  return static_cast<double>(grid.points(0)) / static_cast<double>(kept);
}

DetailMask build_mask(const GridHierarchy& grid, const ThresholdPolicy& policy,
                      const std::vector<double>& fine,
                      std::size_t* strict_count) {
  const MRState state = encode(grid, fine);
  DetailMask mask = significant_details(state, policy);
  if (strict_count) *strict_count = mask.count();
  add_safety_margin(mask);
  // Wall columns stay significant at every level: boundary rows can develop
  // a layer within one step that pre-step details cannot anticipate.
  for (auto& level : mask.flags) {
    if (level.empty()) continue;
    level.front() = true;
    level.back() = true;
  }
  return mask;
}

namespace {

// Exact Engquist-Osher evaluation of the packed interface list, scattered
// back into the full flux array.
void eval_packed(const Flux& flux, RhsWorkspace& ws) {
  const std::size_t cnt = ws.pack_idx.size();
  if (cnt == 0) return;
  ws.pack_a.resize(cnt);
  ws.pack_b.resize(cnt);
  ws.pack_lo.resize(cnt);
  ws.pack_hi.resize(cnt);
  ws.pack_f.resize(cnt);
  for (std::size_t m = 0; m < cnt; ++m) {
    const std::size_t i = ws.pack_idx[m];
    ws.pack_a[m] = ws.plus[i];
    ws.pack_b[m] = ws.minus[i + 1];
  }
  flux.eo_many(ws.pack_a.data(), ws.pack_b.data(), cnt, ws.pack_lo.data(),
               ws.pack_hi.data(), ws.pack_f.data());
  for (std::size_t m = 0; m < cnt; ++m) ws.flux[ws.pack_idx[m]] = ws.pack_f[m];
  ws.flux_evals += cnt;
}

}  // namespace

void adaptive_rhs(const ProblemSpec& spec, const SchemeConfig& config,
                  const GridHierarchy& grid, const DetailMask& mask,
                  const StateVector& state, RhsWorkspace& ws,
                  std::vector<double>& rhs) {
  if (spec.kind == ProblemKind::periodic)
    throw std::logic_error(
        "adaptive operator supports wall-bounded problems only");
  if (state.values.size() != grid.points(0))
    throw std::invalid_argument("state: size must match the grid hierarchy");

  prepare_faces(spec, config, state, ws);

  const std::size_t n0 = grid.n0;
  const int L = grid.levels;
  const int s = (grid.order + 1) / 2;
  const Flux& flux = *spec.flux;

  // The interface co-located with a retained detail gets an exact flux;
  // everywhere else the flux is interpolated. Walls are always exact
  // (interface 0 sits on the coarse lattice; the last one is forced).
  std::vector<unsigned char>& exact = ws.face_exact;
  std::fill(exact.begin(), exact.end(), static_cast<unsigned char>(0));
  const std::size_t stride_l = std::size_t{1} << L;
  for (std::size_t i = 0; i < n0; i += stride_l) exact[i] = 1;
  exact[n0 - 1] = 1;
  for (int k = 1; k <= L; ++k) {
    const std::size_t stride = std::size_t{1} << (k - 1);
    const auto& flags = mask.flags[static_cast<std::size_t>(k - 1)];
    const std::size_t dets = grid.details(k);
    for (std::size_t m = 0; m < dets; ++m) {
      if (!flags[m]) continue;
      const std::size_t p = (2 * m + 1) * stride;
      if (p < n0) exact[p] = 1;
    }
  }

  // Coarsest interface lattice: always exact.
  ws.pack_idx.clear();
  for (std::size_t i = 0; i < n0; i += stride_l) ws.pack_idx.push_back(i);
  eval_packed(flux, ws);

  // Refine level by level: fill interfaces (2m+1)*2^(k-1) either exactly or
  // by midpoint interpolation from the completed stride-2^k lattice. A
  // stencil mixing exactly-zero and nonzero samples straddles the edge of
  // the solution's support, where interpolation is meaningless; those
  // interfaces fall back to exact evaluation so that quiescent clear fluid
  // receives an exactly zero divergence.
  for (int k = L; k >= 1; --k) {
    const std::size_t stride = std::size_t{1} << (k - 1);
    const std::size_t lat = std::size_t{1} << k;
    const std::size_t lat_count = n0 >> k;
    const std::size_t dets = grid.details(k);

    ws.pack_idx.clear();
    for (std::size_t m = 0; m < dets; ++m) {
      const std::size_t i = (2 * m + 1) * stride;
      if (exact[i]) {
        ws.pack_idx.push_back(i);
        continue;
      }
      const long unclamped = static_cast<long>(m) - s + 1;
      const long max_base = static_cast<long>(lat_count) - 2 * s;
      long base = unclamped;
      if (base < 0) base = 0;
      if (base > max_base) base = max_base;
      bool any_zero = false, any_nonzero = false;
      for (int t = 0; t < 2 * s; ++t) {
        const double v = ws.flux[(static_cast<std::size_t>(base) +
                                  static_cast<std::size_t>(t)) *
                                 lat];
        if (v == 0.0)
          any_zero = true;
        else
          any_nonzero = true;
      }
      if (any_zero && any_nonzero) {
        ws.pack_idx.push_back(i);
        continue;
      }
      const std::vector<double>& w =
          midpoint_weights(s, static_cast<int>(base - unclamped));
      double acc = 0.0;
      for (int t = 0; t < 2 * s; ++t)
        acc += w[static_cast<std::size_t>(t)] *
               ws.flux[(static_cast<std::size_t>(base) +
                        static_cast<std::size_t>(t)) *
                       lat];
      ws.flux[i] = acc;
    }
    eval_packed(flux, ws);
  }

  assemble_rows(spec, config, state, ws, rhs);
}

}  // namespace sedmr
