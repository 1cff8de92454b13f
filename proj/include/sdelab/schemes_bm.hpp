#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "sdelab/core/coefficient.hpp"
#include "sdelab/core/path.hpp"
#include "sdelab/core/rng.hpp"
#include "sdelab/core/time_grid.hpp"

namespace sdelab {

enum class Taming { none, drift_only, drift_and_diffusion };

struct EMConfig {
  Coefficient1D drift;
  Coefficient1D diffusion;
  double x0 = 0.0;
  TimeGrid grid;
  Taming taming = Taming::none;
  double ell = 0.0;  // taming exponent
};

/// Checks the structural requirements of a configuration: untamed runs need
/// declared linear growth (or a sup bound) on both coefficients; taming the
/// diffusion needs the growth exponent of the drift (or ell > 0 explicitly).
void validate(const EMConfig& cfg);

/// N(0, T/n) increments for every step of `grid`.
std::vector<double> brownian_increments(const TimeGrid& grid, CounterEngine& engine);

/// X_{k+1} = X_k + b(t_k, X_k) T/n + sigma(t_k, X_k) dB_k.
Path em_path(const EMConfig& cfg, std::span<const double> increments);

/// b_n = b / (1 + n^{-1/2}|x|^ell); in drift_and_diffusion mode also
/// sigma_n = sigma / (1 + n^{-1/4}|x|^{ell/2}). Mode none or ell = 0 returns (b, sigma).
std::pair<Coefficient1D, Coefficient1D> tamed_coefficients(const Coefficient1D& drift,
                                                           const Coefficient1D& diffusion,
                                                           std::size_t n, double ell, Taming mode);

/// Euler-Maruyama driven by the tamed coefficients for n = grid.steps().
Path tamed_em_path(const EMConfig& cfg, std::span<const double> increments);

/// min(r(p), 1/4) with r(p) = gamma(ell+1)/(2 p0 + ell + 2) * p0/(p(2 ell+1)).
/// Requires p in [2, p0/(2 ell + 1)] and p < p1.
double theoretical_rate_main4(double p, double p0, double p1, double ell, double gamma);

/// min{gamma(1-rho)/2, p(2 alpha - 1)/2}; alpha = 1/2 yields 0 (log regime).
double theoretical_rate_main42(double alpha, double gamma, double rho, double p);

/// Scale function phi(x) = int_0^x exp(-2 int_0^y b/sigma^2 dz) dy of a
/// time-independent diffusion, by adaptive Gauss-Kronrod quadrature.
class ScaleFunction {
 public:
  ScaleFunction(Coefficient1D drift, Coefficient1D diffusion, double tolerance = 1e-12);

  double operator()(double x) const;
  /// phi'(x) = exp(-2 int_0^x b/sigma^2).
  double derivative(double x) const;
  /// Monotone inverse, bracketed bisection polished by Newton steps.
  double inverse(double y, double tolerance = 1e-12) const;

 private:
  Coefficient1D drift_;
  Coefficient1D diffusion_;
  double tolerance_;
  double exponent_integral(double x) const;
};

inline double scale_function(const ScaleFunction& phi, double x) { return phi(x); }

/// Drift-removal variant: simulate Y = phi(X), dY = (phi' sigma)(phi^{-1}(Y)) dB,
/// by driftless Euler-Maruyama and map back with phi^{-1}. Needs
/// time-independent coefficients.
Path scale_transformed_em_path(const EMConfig& cfg, const ScaleFunction& phi,
                               std::span<const double> increments);

/// Signed measure with finitely many atoms, each of weight in (-1, 1).
class SignedAtomMeasure {
 public:
  struct Atom {
    double location;
    double weight;
  };

  SignedAtomMeasure() = default;
  explicit SignedAtomMeasure(std::vector<Atom> atoms);

  std::span<const Atom> atoms() const noexcept { return atoms_; }
  double total_variation() const;

 private:
  std::vector<Atom> atoms_;  // sorted, distinct locations
};

/// f_nu(x) = prod_{a_i <= x} (1 - nu_i)/(1 + nu_i) and its primitive
/// F_nu(x) = int_0^x f_nu, both exact for atom measures.
class AtomTransform {
 public:
  explicit AtomTransform(SignedAtomMeasure nu);

  double f(double x) const;
  double F(double x) const;
  double F_inverse(double y) const;

  /// inf f_nu (the K_nu of the two-sided bound when nu >= 0).
  double lower_bound() const noexcept { return lower_; }
  /// sup f_nu (1 when nu >= 0).
  double upper_bound() const noexcept { return upper_; }

  const SignedAtomMeasure& measure() const noexcept { return nu_; }

 private:
  SignedAtomMeasure nu_;
  std::vector<double> locations_;
  std::vector<double> slope_;    // slope_[i]: f on [a_i, a_{i+1}); slope_[0] = 1 left of a_0
  std::vector<double> F_at_;     // F(a_i)
  double lower_ = 1.0;
  double upper_ = 1.0;
  std::size_t segment(double x) const;  // 0: left of all atoms; i+1: on [a_i, a_{i+1})
};

double f_nu(const SignedAtomMeasure& nu, double x);
double F_nu(const SignedAtomMeasure& nu, double x);
double F_nu_inverse(const SignedAtomMeasure& nu, double y);

struct SingularPath {
  Path x;                    // F_nu^{-1}(Y_k)
  std::vector<double> y;     // driftless Euler iterates Y_k
};

/// X approximated by F_nu^{-1}(Y^{(n)}) where Y^{(n)} is the driftless Euler
/// scheme with coefficient (f_nu sigma) o F_nu^{-1}, Y_0 = F_nu(x0).
SingularPath singular_sde_scheme(const Coefficient1D& diffusion, const AtomTransform& transform,
                                 double x0, const TimeGrid& grid,
                                 std::span<const double> increments);

/// Maximum over grid nodes.
double discrete_max(std::span<const double> path);

using Coefficient3 = std::function<double(double t, double x, double y)>;

struct CoupledSystem {
  Coefficient1D drift;       // b(t, x)
  Coefficient1D diffusion;   // sigma(t, x)
  Coefficient3 mu;           // drift of Y
  Coefficient3 rho1;         // dB loading of Y
  Coefficient3 rho2;         // dW loading of Y
  double x0 = 0.0;
  double y0 = 0.0;
};

struct CoupledSystemPath {
  Path x;
  Path y;
};

/// Joint Euler step for (X, Y) driven by independent increments (dB, dW).
CoupledSystemPath coupled_system_em(const CoupledSystem& sys, const TimeGrid& grid,
                                    std::span<const double> db, std::span<const double> dw);

/// Fine and coarse Euler paths driven by one Brownian path; the coarse
/// increments are sums of `factor` consecutive fine increments.
struct CoupledPaths {
  Path fine;
  Path coarse;
  std::vector<double> fine_increments;
  std::vector<double> coarse_increments;
  std::size_t factor = 1;
};

CoupledPaths coupled_em_paths(const EMConfig& fine_cfg, std::size_t factor,
                              std::span<const double> fine_increments);

}  // namespace sdelab
