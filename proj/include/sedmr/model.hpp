#pragma once

// Physical model for sedimentation-consolidation in a closed or fed column:
// hindered-settling flux f(u), degenerate diffusion A(u) = ∫ a with a ≡ 0
// below the critical concentration, bulk velocity q(t) and feed flux Ψ(t)
// schedules, and the assembled problem description the solver consumes.

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace sedmr {

// ---------------------------------------------------------------------------
// Hindered-settling flux

struct FluxMinimizer {
  double u_star = 0.0;
  bool interior = false;  // false: argmin sits on an endpoint of [0, u_max]
};

class Flux {
 public:
  virtual ~Flux() = default;

  virtual double eval(double u) const = 0;   // f(u), 0 outside [0, u_max]
  virtual double deriv(double u) const = 0;  // f'(u), 0 outside [0, u_max]
  virtual double u_max() const = 0;

  virtual void eval_many(const double* u, std::size_t n, double* f) const;

  // Engquist-Osher interface flux. The default is the closed form
  //   F(a,b) = f(max(a,u*)) + f(min(b,u*)) - f(u*)
  // with u* the cached global minimizer; exact for fluxes whose derivative
  // changes sign at most once (monotone fluxes get an endpoint minimizer and
  // degenerate to pure upwinding).
  virtual double eo(double a, double b) const;
  // Batched variant; lo/hi are caller scratch of length n.
  virtual void eo_many(const double* a, const double* b, std::size_t n,
                       double* lo, double* hi, double* flux) const;

  double minimizer_arg() const { return minimizer_.u_star; }
  double minimizer_val() const { return minimizer_val_; }
  const FluxMinimizer& minimizer() const { return minimizer_; }

  // max |f'| over [0, u_max]; drives the convective CFL term.
  double max_abs_deriv() const { return max_abs_deriv_; }

 protected:
  // Derived constructors call this once the virtuals are usable.
  void finalize_extrema();

  FluxMinimizer minimizer_;
  double minimizer_val_ = 0.0;
  double max_abs_deriv_ = 0.0;
};

// Locates the global minimizer of f on [0, u_max] by derivative sign scan +
// bisection. Throws std::domain_error when f' changes sign more than once
// (the closed-form interface flux would be invalid).
FluxMinimizer find_flux_minimizer(const Flux& flux);

// Richardson-Zaki hindered settling: f(u) = -v_inf * u * (1-u)^c on [0,1].
class RichardsonZakiFlux final : public Flux {
 public:
  RichardsonZakiFlux(double v_inf, double exponent, double u_max);

  double eval(double u) const override;
  double deriv(double u) const override;
  double u_max() const override { return u_max_; }

  double v_inf() const { return v_inf_; }
  double exponent() const { return exponent_; }

 private:
  double v_inf_;
  double exponent_;
  double u_max_;
};

// Piecewise-linear flux from uniform samples on [0, u_max]. The interface
// flux integrates |f'| exactly per segment (positive/negative-variation
// prefix sums), so no unimodality is assumed.
class TabulatedFlux final : public Flux {
 public:
  TabulatedFlux(std::vector<double> values, double u_max);

  double eval(double u) const override;
  double deriv(double u) const override;
  double u_max() const override { return u_max_; }

  double eo(double a, double b) const override;
  void eo_many(const double* a, const double* b, std::size_t n, double* lo,
               double* hi, double* flux) const override;

 private:
  double pos_part(double u) const;  // ∫_0^u max(f',0)
  double neg_part(double u) const;  // ∫_0^u min(f',0)

  std::vector<double> values_;
  std::vector<double> pos_prefix_;
  std::vector<double> neg_prefix_;
  double u_max_;
  double du_;
  double inv_du_;
};

// ---------------------------------------------------------------------------
// Degenerate diffusion

class Diffusion {
 public:
  virtual ~Diffusion() = default;

  virtual double a(double u) const = 0;  // diffusion coefficient
  virtual double A(double u) const = 0;  // ∫_0^u a(s) ds
  virtual void A_many(const double* u, std::size_t n, double* out) const;

  // max a over [0, u_max]; drives the diffusive CFL term.
  virtual double max_coefficient() const = 0;
};

class NoDiffusion final : public Diffusion {
 public:
  double a(double) const override { return 0.0; }
  double A(double) const override { return 0.0; }
  void A_many(const double*, std::size_t n, double* out) const override;
  double max_coefficient() const override { return 0.0; }
};

// Effective solid stress derivative: power law above the critical
// concentration u_c, zero below (suspension carries no stress until networks
// form).
struct CompressionLaw {
  double sigma0 = 100.0;
  double exponent = 8.0;
  double u_c = 0.23;

  double sigma_e_prime(double u) const;
};

// a(u) = |f(u)| * sigma_e'(u) / (delta_rho_g * u); degenerate for u <= u_c.
// A(u) is served from a cumulative Gauss-Legendre table with clamped linear
// interpolation (monotone by construction since a >= 0).
class ConsolidationDiffusion final : public Diffusion {
 public:
  ConsolidationDiffusion(std::shared_ptr<const Flux> flux, CompressionLaw law,
                         double delta_rho_g, std::size_t table_nodes = 1u << 17);

  double a(double u) const override;
  double A(double u) const override;
  void A_many(const double* u, std::size_t n, double* out) const override;
  double max_coefficient() const override { return max_a_; }

  const CompressionLaw& law() const { return law_; }

 private:
  std::shared_ptr<const Flux> flux_;
  CompressionLaw law_;
  double delta_rho_g_;
  std::vector<double> table_;
  double u_max_;
  double du_;
  double inv_du_;
  double max_a_ = 0.0;
};

// ---------------------------------------------------------------------------
// Time schedules and problem assembly

// Piecewise-constant schedule: value(t) = values[i] for t in [times[i],
// times[i+1]). times[0] must be 0 and times strictly increasing.
struct Schedule {
  std::vector<double> times{0.0};
  std::vector<double> values{0.0};

  static Schedule constant(double v) { return Schedule{{0.0}, {v}}; }
  double at(double t) const;
  double max_abs() const;
};

enum class ProblemKind {
  batch_column,  // closed column: zero-flux bottom, clear-fluid top
  fed_column,    // discharge q(t)u at the bottom, prescribed feed Ψ(t) on top
  periodic,      // wrap-around domain for scheme analysis harnesses
};

struct ProblemSpec {
  ProblemKind kind = ProblemKind::batch_column;
  double height = 1.0;
  double t_end = 3600.0;
  std::shared_ptr<const Flux> flux;
  std::shared_ptr<const Diffusion> diffusion;
  Schedule q = Schedule::constant(0.0);
  std::optional<Schedule> feed;  // Ψ(t), fed_column only
  std::function<double(double)> u0;

  double u_max() const { return flux->u_max(); }
};

// Throws std::invalid_argument naming the offending field.
void validate_problem(const ProblemSpec& spec);

}  // namespace sedmr
