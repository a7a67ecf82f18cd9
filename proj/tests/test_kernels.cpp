#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstddef>
#include <vector>

#include "sedmr/kernels.hpp"
#include "support/test_fluxes.hpp"

using namespace sedmr;
using kernels::Ops;

namespace {

const std::size_t kSizes[] = {1, 2, 3, 4, 5, 7, 8, 9, 31, 32, 33, 64, 127, 1000};

}  // namespace

TEST_CASE("minmod3 selects the least-steep consistent slope") {
  CHECK(kernels::minmod3(1.0, 2.0, 3.0) == 1.0);
  CHECK(kernels::minmod3(-1.0, -2.0, -3.0) == -1.0);
  CHECK(kernels::minmod3(1.0, -1.0, 2.0) == 0.0);
  CHECK(kernels::minmod3(0.0, 1.0, 2.0) == 0.0);
  CHECK(kernels::minmod3(-3.0, -1.0, -2.0) == -1.0);
  CHECK(kernels::minmod3(0.0, 0.0, 0.0) == 0.0);
}

TEST_CASE("vmin/vmax let the second operand win ties") {
  CHECK(std::signbit(kernels::vmin(0.0, -0.0)));
  CHECK_FALSE(std::signbit(kernels::vmin(-0.0, 0.0)));
  CHECK(kernels::vmax(1.0, 2.0) == 2.0);
  CHECK(kernels::vmin(1.0, 2.0) == 1.0);
}

TEST_CASE("limited_slope_at reproduces the theta-limiter cases") {
  // Linear data: all three arguments agree.
  CHECK(kernels::limited_slope_at(0.0, 1.0, 2.0, 1.0, 1.0, 0.5) == 1.0);
  // Extremum: mixed signs give a flat reconstruction.
  CHECK(kernels::limited_slope_at(0.0, 1.0, 0.0, 2.0, 1.0, 0.5) == 0.0);
  // One-sided steepening capped by the central difference.
  CHECK(kernels::limited_slope_at(0.0, 1.0, 3.0, 2.0, 1.0, 0.5) == 1.5);
}

TEST_CASE("table_lookup_at interpolates linearly and clamps") {
  const double ys[] = {0.0, 1.0, 4.0, 9.0};
  const double inv_dx = 3.0;  // nodes at 0, 1/3, 2/3, 1
  CHECK(kernels::table_lookup_at(0.0, ys, 4, 0.0, inv_dx, 1.0) == 0.0);
  CHECK(kernels::table_lookup_at(1.0, ys, 4, 0.0, inv_dx, 1.0) == 9.0);
  CHECK(kernels::table_lookup_at(0.5, ys, 4, 0.0, inv_dx, 1.0) ==
        doctest::Approx(2.5).epsilon(1e-15));
  CHECK(kernels::table_lookup_at(-2.0, ys, 4, 0.0, inv_dx, 1.0) == 0.0);
  CHECK(kernels::table_lookup_at(7.0, ys, 4, 0.0, inv_dx, 1.0) == 9.0);
}

TEST_CASE("rhs_point assembles transport, flux difference and diffusion") {
  const double q = -2.0, inv_dx = 4.0, inv_dx2 = 16.0;
  const double got = kernels::rhs_point(q * inv_dx, 0.3, 0.1, -0.5, -0.2, 1.0,
                                        2.0, 4.0, inv_dx, inv_dx2);
  const double bulk = q * inv_dx * (0.3 - 0.1);
  const double conv = (-0.5 - -0.2) * inv_dx;
  const double diff = ((1.0 - 2.0 * 2.0) + 4.0) * inv_dx2;
  CHECK(got == -bulk - conv + diff);
}

TEST_CASE("heun_point averages the stage and adds the correction") {
  CHECK(kernels::heun_point(0.5, 0.51, 0.1, 0.05) ==
        doctest::Approx(0.51).epsilon(1e-15));
  CHECK(kernels::heun_point(1.0, 1.0, 0.0, 0.25) == 1.0);
}

TEST_CASE("scalar and avx2 lanes agree exactly") {
  const Ops& s = kernels::scalar_ops();
  const Ops* vp = kernels::avx2_ops();
  if (!vp) {
    MESSAGE("avx2 lane unavailable on this host; lane equivalence skipped");
    return;
  }
  const Ops& v = *vp;

  for (std::size_t n : kSizes) {
    CAPTURE(n);
    const std::vector<double> a = testing::random_vector(n, 11u, -1.0, 1.0);
    const std::vector<double> b = testing::random_vector(n, 23u, -1.0, 1.0);
    const std::vector<double> c = testing::random_vector(n, 37u, 0.0, 1.0);
    std::vector<double> out1(n, 0.0), out2(n, 0.0), tmp1(n, 0.0), tmp2(n, 0.0);

    s.limited_slopes(a.data(), n, 1.3, 8.0, out1.data());
    v.limited_slopes(a.data(), n, 1.3, 8.0, out2.data());
    for (std::size_t j = 1; j + 1 < n; ++j) CHECK(out1[j] == out2[j]);

    s.face_values(a.data(), b.data(), n, 0.0625, out1.data(), tmp1.data());
    v.face_values(a.data(), b.data(), n, 0.0625, out2.data(), tmp2.data());
    CHECK(out1 == out2);
    CHECK(tmp1 == tmp2);

    s.eo_clamp(a.data(), b.data(), n, 0.25, out1.data(), tmp1.data());
    v.eo_clamp(a.data(), b.data(), n, 0.25, out2.data(), tmp2.data());
    CHECK(out1 == out2);
    CHECK(tmp1 == tmp2);

    s.eo_combine(a.data(), b.data(), n, -0.125, out1.data());
    v.eo_combine(a.data(), b.data(), n, -0.125, out2.data());
    CHECK(out1 == out2);

    const std::vector<double> ys = testing::random_vector(64, 51u, -2.0, 2.0);
    s.table_lookup(c.data(), n, ys.data(), ys.size(), 0.0, 63.0, 1.0,
                   out1.data());
    v.table_lookup(c.data(), n, ys.data(), ys.size(), 0.0, 63.0, 1.0,
                   out2.data());
    CHECK(out1 == out2);

    if (n >= 2) {
      const std::vector<double> flux =
          testing::random_vector(n - 1, 71u, -1.0, 0.0);
      s.conv_diff_rhs(a.data(), b.data(), flux.data(), c.data(), n, -0.5, 8.0,
                      64.0, out1.data());
      v.conv_diff_rhs(a.data(), b.data(), flux.data(), c.data(), n, -0.5, 8.0,
                      64.0, out2.data());
      for (std::size_t j = 1; j + 1 < n; ++j) CHECK(out1[j] == out2[j]);
    }

    s.heun_combine(a.data(), b.data(), c.data(), n, 0.125, out1.data());
    v.heun_combine(a.data(), b.data(), c.data(), n, 0.125, out2.data());
    CHECK(out1 == out2);

    out1 = a;
    out2 = a;
    s.clamp_range(-0.5, 0.5, out1.data(), n);
    v.clamp_range(-0.5, 0.5, out2.data(), n);
    CHECK(out1 == out2);

    CHECK(s.sum(a.data(), n) == v.sum(a.data(), n));
    CHECK(s.sum_abs_diff(a.data(), b.data(), n) ==
          v.sum_abs_diff(a.data(), b.data(), n));
    CHECK(s.max_abs_diff(a.data(), b.data(), n) ==
          v.max_abs_diff(a.data(), b.data(), n));
    CHECK(s.total_variation(a.data(), n) == v.total_variation(a.data(), n));
  }
}

TEST_CASE("reductions match plain-loop oracles") {
  const Ops& s = kernels::scalar_ops();
  const std::vector<double> a = testing::random_vector(257, 5u, -1.0, 1.0);
  const std::vector<double> b = testing::random_vector(257, 7u, -1.0, 1.0);

  double sum = 0.0, sad = 0.0, mad = 0.0, tv = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sum += a[i];
    sad += std::fabs(a[i] - b[i]);
    mad = std::max(mad, std::fabs(a[i] - b[i]));
    if (i + 1 < a.size()) tv += std::fabs(a[i + 1] - a[i]);
  }
  CHECK(s.sum(a.data(), a.size()) == doctest::Approx(sum).epsilon(1e-13));
  CHECK(s.sum_abs_diff(a.data(), b.data(), a.size()) ==
        doctest::Approx(sad).epsilon(1e-13));
  CHECK(s.max_abs_diff(a.data(), b.data(), a.size()) == mad);
  CHECK(s.total_variation(a.data(), a.size()) ==
        doctest::Approx(tv).epsilon(1e-13));
}

TEST_CASE("lane selection validates names and availability") {
  CHECK_THROWS_AS(kernels::select("neon"), std::invalid_argument);
  kernels::select("scalar");
  CHECK(std::string(kernels::ops().name) == "scalar");
  kernels::select("auto");
  if (kernels::avx2_ops()) {
    kernels::select("avx2");
    CHECK(std::string(kernels::ops().name) == "avx2");
    kernels::select("auto");
  }
}
