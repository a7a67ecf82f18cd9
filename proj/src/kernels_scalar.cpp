// Scalar reference lane. Every expression matches the inline helpers in
// kernels.hpp; the AVX2 lane mirrors these loops four elements at a time.

#include <cmath>
#include <cstddef>

#include "sedmr/kernels.hpp"

namespace sedmr::kernels {
namespace {

void limited_slopes_scalar(const double* u, std::size_t n, double theta,
                           double inv_dx, double* s) {
  const double half_inv_dx = 0.5 * inv_dx;
  for (std::size_t j = 1; j + 1 < n; ++j)
    s[j] = limited_slope_at(u[j - 1], u[j], u[j + 1], theta, inv_dx,
                            half_inv_dx);
}

void face_values_scalar(const double* u, const double* s, std::size_t n,
                        double half_dx, double* plus, double* minus) {
  for (std::size_t i = 0; i < n; ++i) {
    const double d = half_dx * s[i];
    plus[i] = u[i] + d;
    minus[i] = u[i] - d;
  }
}

void eo_clamp_scalar(const double* a, const double* b, std::size_t n,
                     double u_star, double* lo, double* hi) {
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = vmax(a[i], u_star);
    hi[i] = vmin(b[i], u_star);
  }
}

void eo_combine_scalar(const double* f_lo, const double* f_hi, std::size_t n,
                       double f_star, double* flux) {
  for (std::size_t i = 0; i < n; ++i) flux[i] = (f_lo[i] + f_hi[i]) - f_star;
}

void table_lookup_scalar(const double* x, std::size_t n, const double* ys,
                         std::size_t m, double x0, double inv_dx, double x_end,
                         double* y) {
  for (std::size_t i = 0; i < n; ++i)
    y[i] = table_lookup_at(x[i], ys, m, x0, inv_dx, x_end);
}

void conv_diff_rhs_scalar(const double* plus, const double* minus,
                          const double* flux, const double* a, std::size_t n,
                          double q, double inv_dx, double inv_dx2,
                          double* rhs) {
  const double q_inv_dx = q * inv_dx;
  for (std::size_t j = 1; j + 1 < n; ++j)
    rhs[j] = rhs_point(q_inv_dx, minus[j + 1], plus[j - 1], flux[j],
                       flux[j - 1], a[j - 1], a[j], a[j + 1], inv_dx, inv_dx2);
}

void heun_combine_scalar(const double* u0, const double* u1, const double* l1,
                         std::size_t n, double half_dt, double* out) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = heun_point(u0[i], u1[i], l1[i], half_dt);
}

void clamp_range_scalar(double lo, double hi, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] = vmin(vmax(x[i], lo), hi);
}

double sum_scalar(const double* x, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc[0] += x[i];
    acc[1] += x[i + 1];
    acc[2] += x[i + 2];
    acc[3] += x[i + 3];
  }
  for (std::size_t l = 0; i + l < n; ++l) acc[l] += x[i + l];
  return (acc[0] + acc[2]) + (acc[1] + acc[3]);
}

double sum_abs_diff_scalar(const double* a, const double* b, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc[0] += std::fabs(a[i] - b[i]);
    acc[1] += std::fabs(a[i + 1] - b[i + 1]);
    acc[2] += std::fabs(a[i + 2] - b[i + 2]);
    acc[3] += std::fabs(a[i + 3] - b[i + 3]);
  }
  for (std::size_t l = 0; i + l < n; ++l) acc[l] += std::fabs(a[i + l] - b[i + l]);
  return (acc[0] + acc[2]) + (acc[1] + acc[3]);
}

double max_abs_diff_scalar(const double* a, const double* b, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc[0] = vmax(acc[0], std::fabs(a[i] - b[i]));
    acc[1] = vmax(acc[1], std::fabs(a[i + 1] - b[i + 1]));
    acc[2] = vmax(acc[2], std::fabs(a[i + 2] - b[i + 2]));
    acc[3] = vmax(acc[3], std::fabs(a[i + 3] - b[i + 3]));
  }
  for (std::size_t l = 0; i + l < n; ++l)
    acc[l] = vmax(acc[l], std::fabs(a[i + l] - b[i + l]));
  return vmax(vmax(acc[0], acc[2]), vmax(acc[1], acc[3]));
}

double total_variation_scalar(const double* x, std::size_t n) {
  if (n < 2) return 0.0;
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  const std::size_t nd = n - 1;
  for (; i + 4 <= nd; i += 4) {
    acc[0] += std::fabs(x[i + 1] - x[i]);
    acc[1] += std::fabs(x[i + 2] - x[i + 1]);
    acc[2] += std::fabs(x[i + 3] - x[i + 2]);
    acc[3] += std::fabs(x[i + 4] - x[i + 3]);
  }
  for (std::size_t l = 0; i + l < nd; ++l)
    acc[l] += std::fabs(x[i + l + 1] - x[i + l]);
  return (acc[0] + acc[2]) + (acc[1] + acc[3]);
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops table = {
      "scalar",
      limited_slopes_scalar,
      face_values_scalar,
      eo_clamp_scalar,
      eo_combine_scalar,
      table_lookup_scalar,
      conv_diff_rhs_scalar,
      heun_combine_scalar,
      clamp_range_scalar,
      sum_scalar,
      sum_abs_diff_scalar,
      max_abs_diff_scalar,
      total_variation_scalar,
  };
  return table;
}

}  // namespace sedmr::kernels
