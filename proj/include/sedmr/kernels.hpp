#pragma once

// Batch array kernels for the finite-difference sweeps: a scalar reference
// lane and an AVX2 lane selected at runtime. Both lanes implement the exact
// per-element expressions below (same operation order, no FMA contraction),
// so results agree exactly and the adaptive/reference solver paths cannot
// drift depending on the host CPU.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace sedmr::kernels {

// min/max with vminpd/vmaxpd semantics (second operand wins on ties/zeros).
// All scalar fallbacks and the AVX2 lane share these, so signed zeros behave
// identically everywhere.
inline double vmin(double a, double b) { return a < b ? a : b; }
inline double vmax(double a, double b) { return a > b ? a : b; }

// Three-argument minmod: smallest in magnitude when all signs agree, else 0.
// Branchless so both lanes evaluate it with the same min/max sequence.
inline double minmod3(double a, double b, double c) {
  return vmax(0.0, vmin(vmin(a, b), c)) + vmin(0.0, vmax(vmax(a, b), c));
}

// One point of the limited-slope sweep (theta-weighted one-sided differences
// against the central difference).
inline double limited_slope_at(double um, double u0, double up, double theta,
                               double inv_dx, double half_inv_dx) {
  const double left = theta * ((u0 - um) * inv_dx);
  const double mid = (up - um) * half_inv_dx;
  const double right = theta * ((up - u0) * inv_dx);
  return minmod3(left, mid, right);
}

// Clamped linear table lookup on a uniform grid: ys[m] samples on
// [x0, x_end], spacing 1/inv_dx.
inline double table_lookup_at(double x, const double* ys, std::size_t m,
                              double x0, double inv_dx, double x_end) {
  const double xc = vmin(vmax(x, x0), x_end);
  const double d = (xc - x0) * inv_dx;
  int idx = static_cast<int>(d);  // d >= 0, truncation == floor
  const int last = static_cast<int>(m) - 2;
  if (idx > last) idx = last;
  const double frac = d - static_cast<double>(idx);
  return ys[idx] + (ys[idx + 1] - ys[idx]) * frac;
}

// One interior row of the semi-discrete operator: bulk transport (q), the
// upwind flux difference, and the second difference of the integrated
// diffusion. `flux[j-1]`/`flux[j]` sit on the interfaces around point j.
inline double rhs_point(double q_times_inv_dx, double minus_jp1,
                        double plus_jm1, double flux_j, double flux_jm1,
                        double a_jm1, double a_j, double a_jp1, double inv_dx,
                        double inv_dx2) {
  const double bulk = q_times_inv_dx * (minus_jp1 - plus_jm1);
  const double conv = (flux_j - flux_jm1) * inv_dx;
  const double diff = ((a_jm1 - 2.0 * a_j) + a_jp1) * inv_dx2;
  return -bulk - conv + diff;
}

inline double heun_point(double u0, double u1, double l1, double half_dt) {
  return (0.5 * u0 + 0.5 * u1) + half_dt * l1;
}

// Function-pointer table for one lane. `n` is always the element count of the
// output range; callers pass raw pointers into preallocated state arrays.
struct Ops {
  const char* name;

  // s[j] for j in [1, n-2]; the caller owns the two boundary entries.
  void (*limited_slopes)(const double* u, std::size_t n, double theta,
                         double inv_dx, double* s);
  // plus[i] = u[i] + half_dx*s[i], minus[i] = u[i] - half_dx*s[i].
  void (*face_values)(const double* u, const double* s, std::size_t n,
                      double half_dx, double* plus, double* minus);
  // lo[i] = max(a[i], u_star), hi[i] = min(b[i], u_star)  (Engquist-Osher
  // argument clamps; f gets applied to lo/hi by the flux object).
  void (*eo_clamp)(const double* a, const double* b, std::size_t n,
                   double u_star, double* lo, double* hi);
  // flux[i] = (f_lo[i] + f_hi[i]) - f_star.
  void (*eo_combine)(const double* f_lo, const double* f_hi, std::size_t n,
                     double f_star, double* flux);
  // y[i] = table_lookup_at(x[i], ...).
  void (*table_lookup)(const double* x, std::size_t n, const double* ys,
                       std::size_t m, double x0, double inv_dx, double x_end,
                       double* y);
  // rhs[j] = rhs_point(...) for j in [1, n-2].
  void (*conv_diff_rhs)(const double* plus, const double* minus,
                        const double* flux, const double* a, std::size_t n,
                        double q, double inv_dx, double inv_dx2, double* rhs);
  // out[i] = heun_point(u0[i], u1[i], l1[i], half_dt).
  void (*heun_combine)(const double* u0, const double* u1, const double* l1,
                       std::size_t n, double half_dt, double* out);
  // x[i] = min(max(x[i], lo), hi).
  void (*clamp_range)(double lo, double hi, double* x, std::size_t n);

  // Reductions use a pinned 4-accumulator blocking (lane l takes i % 4 == l,
  // final combine (acc0+acc2)+(acc1+acc3)) so both lanes round identically.
  double (*sum)(const double* x, std::size_t n);
  double (*sum_abs_diff)(const double* a, const double* b, std::size_t n);
  double (*max_abs_diff)(const double* a, const double* b, std::size_t n);
  // sum of |x[i+1] - x[i]|.
  double (*total_variation)(const double* x, std::size_t n);
};

const Ops& scalar_ops();
// nullptr when the binary lacks AVX2 code or the CPU lacks the feature.
const Ops* avx2_ops();

// Active lane. Defaults to the best available ("auto").
const Ops& ops();
// "auto" | "scalar" | "avx2"; throws std::invalid_argument on unknown names
// and std::runtime_error if the requested lane is unavailable.
void select(std::string_view name);

}  // namespace sedmr::kernels
