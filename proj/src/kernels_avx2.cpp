// AVX2 lane. Compiled with -mavx2 (this translation unit only). Each loop is
// the four-wide transcription of the scalar lane with identical operation
// order; tails reuse the per-element helpers so remainders round the same way.

#if defined(__AVX2__)

#include <immintrin.h>

#include <cmath>
#include <cstddef>

#include "sedmr/kernels.hpp"

namespace sedmr::kernels {
namespace {

const __m256d kSignMask = _mm256_set1_pd(-0.0);

inline __m256d abs_pd(__m256d v) { return _mm256_andnot_pd(kSignMask, v); }

inline __m256d minmod3_pd(__m256d a, __m256d b, __m256d c) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d lo = _mm256_min_pd(_mm256_min_pd(a, b), c);
  const __m256d hi = _mm256_max_pd(_mm256_max_pd(a, b), c);
  return _mm256_add_pd(_mm256_max_pd(zero, lo), _mm256_min_pd(zero, hi));
}

void limited_slopes_avx2(const double* u, std::size_t n, double theta,
                         double inv_dx, double* s) {
  const double half_inv_dx = 0.5 * inv_dx;
  if (n < 3) return;
  const std::size_t last = n - 1;  // exclusive upper bound for j
  const __m256d vtheta = _mm256_set1_pd(theta);
  const __m256d vinv = _mm256_set1_pd(inv_dx);
  const __m256d vhalf = _mm256_set1_pd(half_inv_dx);
  std::size_t j = 1;
  for (; j + 4 <= last; j += 4) {
    const __m256d um = _mm256_loadu_pd(u + j - 1);
    const __m256d u0 = _mm256_loadu_pd(u + j);
    const __m256d up = _mm256_loadu_pd(u + j + 1);
    const __m256d left =
        _mm256_mul_pd(vtheta, _mm256_mul_pd(_mm256_sub_pd(u0, um), vinv));
    const __m256d mid = _mm256_mul_pd(_mm256_sub_pd(up, um), vhalf);
    const __m256d right =
        _mm256_mul_pd(vtheta, _mm256_mul_pd(_mm256_sub_pd(up, u0), vinv));
    _mm256_storeu_pd(s + j, minmod3_pd(left, mid, right));
  }
  for (; j < last; ++j)
    s[j] = limited_slope_at(u[j - 1], u[j], u[j + 1], theta, inv_dx,
                            half_inv_dx);
}

void face_values_avx2(const double* u, const double* s, std::size_t n,
                      double half_dx, double* plus, double* minus) {
  const __m256d vh = _mm256_set1_pd(half_dx);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vu = _mm256_loadu_pd(u + i);
    const __m256d vd = _mm256_mul_pd(vh, _mm256_loadu_pd(s + i));
    _mm256_storeu_pd(plus + i, _mm256_add_pd(vu, vd));
    _mm256_storeu_pd(minus + i, _mm256_sub_pd(vu, vd));
  }
  for (; i < n; ++i) {
    const double d = half_dx * s[i];
    plus[i] = u[i] + d;
    minus[i] = u[i] - d;
  }
}

void eo_clamp_avx2(const double* a, const double* b, std::size_t n,
                   double u_star, double* lo, double* hi) {
  const __m256d vs = _mm256_set1_pd(u_star);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(lo + i, _mm256_max_pd(_mm256_loadu_pd(a + i), vs));
    _mm256_storeu_pd(hi + i, _mm256_min_pd(_mm256_loadu_pd(b + i), vs));
  }
  for (; i < n; ++i) {
    lo[i] = vmax(a[i], u_star);
    hi[i] = vmin(b[i], u_star);
  }
}

void eo_combine_avx2(const double* f_lo, const double* f_hi, std::size_t n,
                     double f_star, double* flux) {
  const __m256d vf = _mm256_set1_pd(f_star);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d sum =
        _mm256_add_pd(_mm256_loadu_pd(f_lo + i), _mm256_loadu_pd(f_hi + i));
    _mm256_storeu_pd(flux + i, _mm256_sub_pd(sum, vf));
  }
  for (; i < n; ++i) flux[i] = (f_lo[i] + f_hi[i]) - f_star;
}

void table_lookup_avx2(const double* x, std::size_t n, const double* ys,
                       std::size_t m, double x0, double inv_dx, double x_end,
                       double* y) {
  const __m256d vx0 = _mm256_set1_pd(x0);
  const __m256d vxe = _mm256_set1_pd(x_end);
  const __m256d vinv = _mm256_set1_pd(inv_dx);
  const __m128i vlast = _mm_set1_epi32(static_cast<int>(m) - 2);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xc =
        _mm256_min_pd(_mm256_max_pd(_mm256_loadu_pd(x + i), vx0), vxe);
    const __m256d d = _mm256_mul_pd(_mm256_sub_pd(xc, vx0), vinv);
    __m128i idx = _mm256_cvttpd_epi32(d);  // d >= 0, truncation == floor
    idx = _mm_min_epi32(idx, vlast);
    const __m256d frac = _mm256_sub_pd(d, _mm256_cvtepi32_pd(idx));
    const __m256d y0 = _mm256_i32gather_pd(ys, idx, 8);
    const __m256d y1 = _mm256_i32gather_pd(ys + 1, idx, 8);
    const __m256d res =
        _mm256_add_pd(y0, _mm256_mul_pd(_mm256_sub_pd(y1, y0), frac));
    _mm256_storeu_pd(y + i, res);
  }
  for (; i < n; ++i) y[i] = table_lookup_at(x[i], ys, m, x0, inv_dx, x_end);
}

void conv_diff_rhs_avx2(const double* plus, const double* minus,
                        const double* flux, const double* a, std::size_t n,
                        double q, double inv_dx, double inv_dx2, double* rhs) {
  const double q_inv_dx = q * inv_dx;
  if (n < 3) return;
  const std::size_t last = n - 1;
  const __m256d vq = _mm256_set1_pd(q_inv_dx);
  const __m256d vinv = _mm256_set1_pd(inv_dx);
  const __m256d vinv2 = _mm256_set1_pd(inv_dx2);
  const __m256d two = _mm256_set1_pd(2.0);
  std::size_t j = 1;
  for (; j + 4 <= last; j += 4) {
    const __m256d bulk = _mm256_mul_pd(
        vq, _mm256_sub_pd(_mm256_loadu_pd(minus + j + 1),
                          _mm256_loadu_pd(plus + j - 1)));
    const __m256d conv = _mm256_mul_pd(
        _mm256_sub_pd(_mm256_loadu_pd(flux + j), _mm256_loadu_pd(flux + j - 1)),
        vinv);
    const __m256d am = _mm256_loadu_pd(a + j - 1);
    const __m256d a0 = _mm256_loadu_pd(a + j);
    const __m256d ap = _mm256_loadu_pd(a + j + 1);
    const __m256d diff = _mm256_mul_pd(
        _mm256_add_pd(_mm256_sub_pd(am, _mm256_mul_pd(two, a0)), ap), vinv2);
    const __m256d res = _mm256_add_pd(
        _mm256_sub_pd(_mm256_xor_pd(bulk, kSignMask), conv), diff);
    _mm256_storeu_pd(rhs + j, res);
  }
  for (; j < last; ++j)
    rhs[j] = rhs_point(q_inv_dx, minus[j + 1], plus[j - 1], flux[j],
                       flux[j - 1], a[j - 1], a[j], a[j + 1], inv_dx, inv_dx2);
}

void heun_combine_avx2(const double* u0, const double* u1, const double* l1,
                       std::size_t n, double half_dt, double* out) {
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d vdt = _mm256_set1_pd(half_dt);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d base =
        _mm256_add_pd(_mm256_mul_pd(half, _mm256_loadu_pd(u0 + i)),
                      _mm256_mul_pd(half, _mm256_loadu_pd(u1 + i)));
    const __m256d res =
        _mm256_add_pd(base, _mm256_mul_pd(vdt, _mm256_loadu_pd(l1 + i)));
    _mm256_storeu_pd(out + i, res);
  }
  for (; i < n; ++i) out[i] = heun_point(u0[i], u1[i], l1[i], half_dt);
}

void clamp_range_avx2(double lo, double hi, double* x, std::size_t n) {
  const __m256d vlo = _mm256_set1_pd(lo);
  const __m256d vhi = _mm256_set1_pd(hi);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v =
        _mm256_min_pd(_mm256_max_pd(_mm256_loadu_pd(x + i), vlo), vhi);
    _mm256_storeu_pd(x + i, v);
  }
  for (; i < n; ++i) x[i] = vmin(vmax(x[i], lo), hi);
}

// Reductions: vector accumulator lane l holds indices i % 4 == l, exactly the
// scalar lane's blocking; tails fold into the extracted lanes.

double sum_avx2(const double* x, std::size_t n) {
  __m256d vacc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) vacc = _mm256_add_pd(vacc, _mm256_loadu_pd(x + i));
  double acc[4];
  _mm256_storeu_pd(acc, vacc);
  for (std::size_t l = 0; i + l < n; ++l) acc[l] += x[i + l];
  return (acc[0] + acc[2]) + (acc[1] + acc[3]);
}

double sum_abs_diff_avx2(const double* a, const double* b, std::size_t n) {
  __m256d vacc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d =
        _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    vacc = _mm256_add_pd(vacc, abs_pd(d));
  }
  double acc[4];
  _mm256_storeu_pd(acc, vacc);
  for (std::size_t l = 0; i + l < n; ++l) acc[l] += std::fabs(a[i + l] - b[i + l]);
  return (acc[0] + acc[2]) + (acc[1] + acc[3]);
}

double max_abs_diff_avx2(const double* a, const double* b, std::size_t n) {
  __m256d vacc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d =
        _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    vacc = _mm256_max_pd(vacc, abs_pd(d));
  }
  double acc[4];
  _mm256_storeu_pd(acc, vacc);
  for (std::size_t l = 0; i + l < n; ++l)
    acc[l] = vmax(acc[l], std::fabs(a[i + l] - b[i + l]));
  return vmax(vmax(acc[0], acc[2]), vmax(acc[1], acc[3]));
}

double total_variation_avx2(const double* x, std::size_t n) {
  if (n < 2) return 0.0;
  __m256d vacc = _mm256_setzero_pd();
  std::size_t i = 0;
  const std::size_t nd = n - 1;
  for (; i + 4 <= nd; i += 4) {
    const __m256d d =
        _mm256_sub_pd(_mm256_loadu_pd(x + i + 1), _mm256_loadu_pd(x + i));
    vacc = _mm256_add_pd(vacc, abs_pd(d));
  }
  double acc[4];
  _mm256_storeu_pd(acc, vacc);
  for (std::size_t l = 0; i + l < nd; ++l)
    acc[l] += std::fabs(x[i + l + 1] - x[i + l]);
  return (acc[0] + acc[2]) + (acc[1] + acc[3]);
}

}  // namespace

const Ops& avx2_ops_impl() {
  static const Ops table = {
      "avx2",
      limited_slopes_avx2,
      face_values_avx2,
      eo_clamp_avx2,
      eo_combine_avx2,
      table_lookup_avx2,
      conv_diff_rhs_avx2,
      heun_combine_avx2,
      clamp_range_avx2,
      sum_avx2,
      sum_abs_diff_avx2,
      max_abs_diff_avx2,
      total_variation_avx2,
  };
  return table;
}

}  // namespace sedmr::kernels

#endif  // __AVX2__
