#include "sedmr/model.hpp"

#include <cmath>
#include <stdexcept>

#include "sedmr/kernels.hpp"

namespace sedmr {
namespace {

// 5-point Gauss-Legendre on [-1, 1].
constexpr double kGlNodes[5] = {-0.90617984593866399, -0.53846931010568309,
                                0.0, 0.53846931010568309,
                                0.90617984593866399};
constexpr double kGlWeights[5] = {0.23692688505618909, 0.47862867049936647,
                                  0.56888888888888889, 0.47862867049936647,
                                  0.23692688505618909};

template <typename F>
double gauss5(const F& f, double lo, double hi) {
  const double mid = 0.5 * (lo + hi);
  const double halfw = 0.5 * (hi - lo);
  double acc = 0.0;
  for (int i = 0; i < 5; ++i)
    acc += kGlWeights[i] * f(mid + halfw * kGlNodes[i]);
  return acc * halfw;
}

// Deterministic max of g over [lo, hi]: coarse sample, then shrink around the
// best sample a few rounds. Plenty for the smooth/piecewise-smooth
// coefficients used here.
template <typename G>
double scan_max(const G& g, double lo, double hi) {
  const int coarse = 10000;
  double best_x = lo, best = g(lo);
  double a = lo, b = hi;
  int n = coarse;
  for (int round = 0; round < 4; ++round) {
    const double h = (b - a) / n;
    for (int i = 0; i <= n; ++i) {
      const double x = a + h * i;
      const double v = g(x);
      if (v > best) {
        best = v;
        best_x = x;
      }
    }
    const double na = std::max(lo, best_x - h);
    const double nb = std::min(hi, best_x + h);
    a = na;
    b = nb;
    n = 1000;
  }
  return best;
}

void validate_schedule(const Schedule& s, const char* field) {
  if (s.times.empty() || s.times.size() != s.values.size())
    throw std::invalid_argument(std::string(field) +
                                ": times/values must be non-empty and equal "
                                "length");
  if (s.times.front() != 0.0)
    throw std::invalid_argument(std::string(field) + ": times must start at 0");
  for (std::size_t i = 1; i < s.times.size(); ++i)
    if (!(s.times[i] > s.times[i - 1]))
      throw std::invalid_argument(std::string(field) +
                                  ": times must be strictly increasing");
}

}  // namespace

// ---------------------------------------------------------------------------
// Flux base

void Flux::eval_many(const double* u, std::size_t n, double* f) const {
  for (std::size_t i = 0; i < n; ++i) f[i] = eval(u[i]);
}

double Flux::eo(double a, double b) const {
  const double u_star = minimizer_.u_star;
  return eval(kernels::vmax(a, u_star)) + eval(kernels::vmin(b, u_star)) -
         minimizer_val_;
}

void Flux::eo_many(const double* a, const double* b, std::size_t n, double* lo,
                   double* hi, double* flux) const {
  const auto& k = kernels::ops();
  k.eo_clamp(a, b, n, minimizer_.u_star, lo, hi);
  eval_many(lo, n, lo);
  eval_many(hi, n, hi);
  k.eo_combine(lo, hi, n, minimizer_val_, flux);
}

void Flux::finalize_extrema() {
  minimizer_ = find_flux_minimizer(*this);
  minimizer_val_ = eval(minimizer_.u_star);
  max_abs_deriv_ =
      scan_max([this](double u) { return std::fabs(deriv(u)); }, 0.0, u_max());
}

FluxMinimizer find_flux_minimizer(const Flux& flux) {
  const double um = flux.u_max();
  const int n = 10000;
  const double h = um / n;

  // Count strict sign changes of f' and remember the minimum-type bracket.
  int changes = 0;
  double lo = 0.0, hi = 0.0;
  bool have_min_bracket = false;
  double prev = flux.deriv(0.0);
  double prev_x = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double x = h * i;
    const double d = flux.deriv(x);
    if (prev * d < 0.0) {
      ++changes;
      if (prev < 0.0) {
        lo = prev_x;
        hi = x;
        have_min_bracket = true;
      }
    }
    if (d != 0.0) {
      prev = d;
      prev_x = x;
    }
  }

  if (changes > 1 || (changes == 1 && !have_min_bracket))
    throw std::domain_error(
        "flux derivative changes sign more than once (or has an interior "
        "maximum); closed-form interface flux is invalid");

  FluxMinimizer result;
  if (changes == 0) {
    // Monotone flux: argmin at an endpoint, closed form degenerates to pure
    // upwinding.
    result.interior = false;
    result.u_star = flux.eval(0.0) <= flux.eval(um) ? 0.0 : um;
    return result;
  }

  for (int it = 0; it < 128 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (flux.deriv(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  result.interior = true;
  result.u_star = 0.5 * (lo + hi);
  return result;
}

// ---------------------------------------------------------------------------
// Richardson-Zaki flux

RichardsonZakiFlux::RichardsonZakiFlux(double v_inf, double exponent,
                                       double u_max)
    : v_inf_(v_inf), exponent_(exponent), u_max_(u_max) {
  if (!(v_inf > 0.0))
    throw std::invalid_argument("v_inf: must be positive");
  if (!(exponent > 0.0))
    throw std::invalid_argument("exponent: must be positive");
  if (!(u_max > 0.0) || u_max > 1.0)
    throw std::invalid_argument("u_max: must lie in (0, 1]");
  // f(u_max) = 0 requires the (1-u)^c factor to vanish at u_max.
  if (u_max != 1.0)
    throw std::invalid_argument(
        "u_max: Richardson-Zaki form -v_inf*u*(1-u)^c only vanishes at "
        "u_max = 1; use a tabulated flux for other packing limits");
  finalize_extrema();
}

double RichardsonZakiFlux::eval(double u) const {
  if (u <= 0.0 || u >= u_max_) return 0.0;
  return -v_inf_ * u * std::pow(1.0 - u, exponent_);
}

double RichardsonZakiFlux::deriv(double u) const {
  if (u < 0.0 || u > u_max_) return 0.0;
  return -v_inf_ * std::pow(1.0 - u, exponent_ - 1.0) *
         (1.0 - (1.0 + exponent_) * u);
}

// ---------------------------------------------------------------------------
// Tabulated flux

TabulatedFlux::TabulatedFlux(std::vector<double> values, double u_max)
    : values_(std::move(values)), u_max_(u_max) {
  if (values_.size() < 2)
    throw std::invalid_argument("values: need at least 2 samples");
  if (!(u_max > 0.0)) throw std::invalid_argument("u_max: must be positive");
  if (values_.front() != 0.0 || values_.back() != 0.0)
    throw std::invalid_argument("values: flux must vanish at 0 and u_max");
  const std::size_t m = values_.size();
  du_ = u_max_ / static_cast<double>(m - 1);
  inv_du_ = static_cast<double>(m - 1) / u_max_;

  pos_prefix_.assign(m, 0.0);
  neg_prefix_.assign(m, 0.0);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double df = values_[i + 1] - values_[i];
    pos_prefix_[i + 1] = pos_prefix_[i] + kernels::vmax(df, 0.0);
    neg_prefix_[i + 1] = neg_prefix_[i] + kernels::vmin(df, 0.0);
  }

  // Exact extrema for a piecewise-linear function: nodes and segment slopes.
  std::size_t argmin = 0;
  double max_slope = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (values_[i] < values_[argmin]) argmin = i;
    if (i + 1 < m)
      max_slope = kernels::vmax(
          max_slope, std::fabs((values_[i + 1] - values_[i]) * inv_du_));
  }
  minimizer_.u_star = du_ * static_cast<double>(argmin);
  minimizer_.interior = argmin != 0 && argmin != m - 1;
  minimizer_val_ = values_[argmin];
  max_abs_deriv_ = max_slope;
}

double TabulatedFlux::eval(double u) const {
  return kernels::table_lookup_at(u, values_.data(), values_.size(), 0.0,
                                  inv_du_, u_max_);
}

double TabulatedFlux::deriv(double u) const {
  if (u < 0.0 || u > u_max_) return 0.0;
  const std::size_t m = values_.size();
  std::size_t i = static_cast<std::size_t>(u * inv_du_);
  if (i > m - 2) i = m - 2;
  return (values_[i + 1] - values_[i]) * inv_du_;
}

double TabulatedFlux::pos_part(double u) const {
  return kernels::table_lookup_at(u, pos_prefix_.data(), pos_prefix_.size(),
                                  0.0, inv_du_, u_max_);
}

double TabulatedFlux::neg_part(double u) const {
  return kernels::table_lookup_at(u, neg_prefix_.data(), neg_prefix_.size(),
                                  0.0, inv_du_, u_max_);
}

double TabulatedFlux::eo(double a, double b) const {
  // F(a,b) = f(0) + ∫_0^a max(f',0) + ∫_0^b min(f',0); exact per segment.
  return pos_part(a) + neg_part(b);
}

void TabulatedFlux::eo_many(const double* a, const double* b, std::size_t n,
                            double*, double*, double* flux) const {
  for (std::size_t i = 0; i < n; ++i) flux[i] = eo(a[i], b[i]);
}

// ---------------------------------------------------------------------------
// Diffusion

void Diffusion::A_many(const double* u, std::size_t n, double* out) const {
  for (std::size_t i = 0; i < n; ++i) out[i] = A(u[i]);
}

void NoDiffusion::A_many(const double*, std::size_t n, double* out) const {
  for (std::size_t i = 0; i < n; ++i) out[i] = 0.0;
}

double CompressionLaw::sigma_e_prime(double u) const {
  if (u <= u_c) return 0.0;
  return (sigma0 * exponent / u_c) * std::pow(u / u_c, exponent - 1.0);
}

ConsolidationDiffusion::ConsolidationDiffusion(
    std::shared_ptr<const Flux> flux, CompressionLaw law, double delta_rho_g,
    std::size_t table_nodes)
    : flux_(std::move(flux)), law_(law), delta_rho_g_(delta_rho_g) {
  if (!flux_) throw std::invalid_argument("flux: must not be null");
  if (!(delta_rho_g > 0.0))
    throw std::invalid_argument("delta_rho_g: must be positive");
  if (!(law_.sigma0 > 0.0))
    throw std::invalid_argument("sigma0: must be positive");
  if (!(law_.exponent > 1.0))
    throw std::invalid_argument("sigma_exponent: must exceed 1");
  u_max_ = flux_->u_max();
  if (!(law_.u_c > 0.0) || !(law_.u_c < u_max_))
    throw std::invalid_argument("u_c: must lie in (0, u_max)");
  if (table_nodes < 16)
    throw std::invalid_argument("table_nodes: must be at least 16");

  const std::size_t m = table_nodes;
  du_ = u_max_ / static_cast<double>(m - 1);
  inv_du_ = static_cast<double>(m - 1) / u_max_;
  table_.assign(m, 0.0);
  const auto coeff = [this](double u) { return a(u); };
  for (std::size_t i = 1; i < m; ++i) {
    const double left = du_ * static_cast<double>(i - 1);
    const double right = du_ * static_cast<double>(i);
    double cell = 0.0;
    if (right > law_.u_c)
      cell = gauss5(coeff, kernels::vmax(left, law_.u_c), right);
    table_[i] = table_[i - 1] + cell;
  }

  max_a_ = scan_max(coeff, 0.0, u_max_);
}

double ConsolidationDiffusion::a(double u) const {
  if (u <= law_.u_c || u >= u_max_) return 0.0;
  return std::fabs(flux_->eval(u)) * law_.sigma_e_prime(u) /
         (delta_rho_g_ * u);
}

double ConsolidationDiffusion::A(double u) const {
  // The interpolation cell straddling u_c would otherwise leak O(du^2) into
  // the degenerate range, where A vanishes identically.
  if (u <= law_.u_c) return 0.0;
  return kernels::table_lookup_at(u, table_.data(), table_.size(), 0.0,
                                  inv_du_, u_max_);
}

void ConsolidationDiffusion::A_many(const double* u, std::size_t n,
                                    double* out) const {
  kernels::ops().table_lookup(u, n, table_.data(), table_.size(), 0.0, inv_du_,
                              u_max_, out);
  for (std::size_t i = 0; i < n; ++i)
    if (u[i] <= law_.u_c) out[i] = 0.0;
}

// ---------------------------------------------------------------------------
// Schedules and problem validation

double Schedule::at(double t) const {
  std::size_t i = times.size();
  while (i > 1 && times[i - 1] > t) --i;
  return values[i - 1];
}

double Schedule::max_abs() const {
  double m = 0.0;
  for (double v : values) m = kernels::vmax(m, std::fabs(v));
  return m;
}

void validate_problem(const ProblemSpec& spec) {
  if (!spec.flux) throw std::invalid_argument("flux: must not be null");
  if (!spec.diffusion)
    throw std::invalid_argument("diffusion: must not be null");
  if (!(spec.height > 0.0))
    throw std::invalid_argument("height: must be positive");
  if (!(spec.t_end >= 0.0))
    throw std::invalid_argument("t_end: must be non-negative");
  validate_schedule(spec.q, "q");
  for (double v : spec.q.values)
    if (v > 0.0)
      throw std::invalid_argument("q: bulk velocity must be <= 0 (downward "
                                  "discharge)");
  if (spec.kind == ProblemKind::fed_column) {
    if (!spec.feed)
      throw std::invalid_argument("feed: required for a fed column");
    validate_schedule(*spec.feed, "feed");
  } else if (spec.feed) {
    throw std::invalid_argument("feed: only valid for a fed column");
  }
  if (spec.kind != ProblemKind::periodic) {
    if (!spec.u0) throw std::invalid_argument("u0: must be provided");
    const double um = spec.u_max();
    const int samples = 2048;
    for (int i = 0; i <= samples; ++i) {
      const double x = spec.height * static_cast<double>(i) / samples;
      const double v = spec.u0(x);
      if (!(v >= 0.0) || !(v <= um))
        throw std::invalid_argument("u0: values must lie in [0, u_max]");
    }
  }
}

}  // namespace sedmr
