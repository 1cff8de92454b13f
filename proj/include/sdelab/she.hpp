#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sdelab/core/rng.hpp"

namespace sdelab {

using FieldCoefficient = std::function<double(double t, double x, double u)>;

struct SheConfig {
  double horizon = 1.0;
  std::size_t time_steps = 1;       // m
  std::size_t space_intervals = 2;  // n
  FieldCoefficient drift = [](double, double, double) { return 0.0; };
  FieldCoefficient diffusion = [](double, double, double) { return 0.0; };
  std::function<double(double)> initial = [](double) { return 0.0; };
  bool override_cfl = false;
};

/// Explicit-scheme stability: |1 + lambda_j^n T/m| <= 1 for all modes, which
/// holds when m >= 2 T n^2.
bool cfl_satisfied(double horizon, std::size_t m, std::size_t n);
/// |1 + lambda_{n-1}^n T/m|, the amplification of the highest lattice mode.
double highest_mode_amplification(double horizon, std::size_t m, std::size_t n);

/// Throws ValidationError for m, n out of range, u0 not vanishing at 0 and 1,
/// or m < 2 T n^2 without override_cfl.
void validate(const SheConfig& cfg);

/// Values u[i][j] at t_i = iT/m, x_j = j/n, with zero boundary columns.
class LatticeField {
 public:
  LatticeField(double horizon, std::size_t m, std::size_t n);

  double horizon() const noexcept { return horizon_; }
  std::size_t time_steps() const noexcept { return m_; }
  std::size_t space_intervals() const noexcept { return n_; }

  double& at(std::size_t i, std::size_t j) { return values_[i * (n_ + 1) + j]; }
  double at(std::size_t i, std::size_t j) const { return values_[i * (n_ + 1) + j]; }
  std::span<double> row(std::size_t i) { return {values_.data() + i * (n_ + 1), n_ + 1}; }
  std::span<const double> row(std::size_t i) const { return {values_.data() + i * (n_ + 1), n_ + 1}; }
  std::span<const double> data() const noexcept { return values_; }

  /// Polygonal (bilinear) interpolation at an off-lattice (t, x).
  double interpolate(double t, double x) const;

  /// CSV with header "i,j,t,x,value", one row per lattice node.
  void write_csv(std::ostream& out) const;
  /// Little-endian binary: magic "SHEF", u32 version, u64 m, u64 n, f64 T,
  /// u64 seed, then (m+1)(n+1) f64 values row-major.
  void write_binary(std::ostream& out, std::uint64_t seed) const;
  static LatticeField read_binary(std::istream& in, std::uint64_t* seed = nullptr);

 private:
  double horizon_;
  std::size_t m_;
  std::size_t n_;
  std::vector<double> values_;
};

/// n^2 (right - 2 center + left).
double discrete_laplacian(double left, double center, double right, std::size_t n);

/// lambda_j^n = -4 n^2 sin^2(j pi / 2n), 1 <= j <= n-1.
double lattice_eigen(std::size_t j, std::size_t n);

/// phi_j(x) = sqrt(2) sin(j pi x).
double sine_mode(std::size_t j, double x);
/// Polygonal interpolation of phi_j between the nodes x_k = k/n.
double lattice_mode(std::size_t j, std::size_t n, double x);

/// One time row of i.i.d. N(0, T/(mn)) cell increments of the Brownian
/// sheet, cell j covering [x_j, x_{j+1}].
std::vector<double> brownian_sheet_row(std::size_t m, std::size_t n, double horizon,
                                       CounterEngine& engine);
/// All m rows, row-major.
std::vector<double> brownian_sheet_cells(std::size_t m, std::size_t n, double horizon,
                                         CounterEngine& engine);

/// One explicit step from row i to row i+1:
/// u + (T/m) Delta_n u + (T/m) b + (T/m) sigma * (nm/T) dW. Returns the first
/// interior index whose value became non-finite, if any.
std::optional<std::size_t> gyongy_step(std::span<const double> current, std::span<double> next,
                                       const SheConfig& cfg, std::size_t i,
                                       std::span<const double> noise_row);

/// G_m^n(t, x, y) = sum_j (1 + lambda_j T/m)^{[mt/T]} phi_j^n(x) phi_j^n(kappa_n(y)).
double spectral_kernel_G(std::size_t m, std::size_t n, double horizon, double t, double x, double y);

/// Dirichlet heat kernel of d/dt - d^2/dx^2 on [0, 1] by the image sum,
/// truncated to |k| <= image_terms.
double heat_kernel_G(double t, double x, double y, int image_terms = 8);

/// Spectral form sum_j 2 e^{-j^2 pi^2 t} sin(j pi x) sin(j pi y), truncated
/// once terms drop below 1e-16 relative.
double heat_kernel_spectral(double t, double x, double y);

struct SheRun {
  LatticeField field;
  std::optional<std::pair<std::size_t, std::size_t>> diverged_at;  // (i, j)
};

/// Full rollout of the lattice scheme from u0.
SheRun she_simulate(const SheConfig& cfg, CounterEngine& engine);

/// Var u(t, x) for b = 0, sigma = 1, u0 = 0 in the continuum:
/// x(1-x)/2 - sum_j sin^2(j pi x) e^{-2 j^2 pi^2 t} / (j pi)^2.
double she_additive_variance(double t, double x);
/// Exact variance of the lattice scheme at (t_i, x_j) for the same problem.
double she_additive_variance_lattice(double horizon, std::size_t m, std::size_t n, std::size_t i,
                                     std::size_t j);

/// m^{-1/4} + n^{-1/2}.
double theoretical_rate_Gy(double m, double n);

/// (rate in m, rate in n) = (min(rho, c)/4, min(rho, c)/2) with
/// c = (1-eps) gamma / 4, or c = gamma for Hoelder drifts.
std::pair<double, double> theoretical_rate_main11(double rho, double gamma, double eps,
                                                  bool holder_drift = false);

}  // namespace sdelab
