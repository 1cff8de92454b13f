#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sdelab/core/coefficient.hpp"
#include "sdelab/core/path.hpp"
#include "sdelab/core/rng.hpp"
#include "sdelab/core/time_grid.hpp"

namespace sdelab {

struct FbmConfig {
  double hurst;
  TimeGrid grid;
  Coefficient1D drift;
  double x0 = 0.0;
};

/// Rejects H outside (0, 1). Returns false when H >= 1/2, i.e. outside the
/// range the rate theorems cover; callers flag that in reports.
bool validate(const FbmConfig& cfg);

/// R_H(t, s) = (|t|^{2H} + |s|^{2H} - |t - s|^{2H}) / 2.
double fbm_covariance(double hurst, double t, double s);

/// Gauss hypergeometric 2F1(a, b; c; z) for real z < 1. Negative arguments
/// are mapped into (0, 1) by the Pfaff transformation; arguments above 1/2
/// use the connection formula around z = 1.
double hyp2f1(double a, double b, double c, double z);

/// Normalising constant V_H with int_0^t K^2(t,s) ds = V_H t^{2H} for the
/// unnormalised kernel.
double fbm_kernel_variance(double hurst);

/// (t-s)^{H-1/2}/Gamma(H+1/2) * 2F1(H-1/2, 1/2-H; H+1/2; 1-t/s).
double kernel_K_H_unnormalised(double hurst, double t, double s);

/// Volterra kernel of standard fBm: int_0^t K_H(t,s)^2 ds = t^{2H}.
double kernel_K_H(double hurst, double t, double s);

struct FbmSample {
  std::vector<double> increments;  // B^H(t_{k+1}) - B^H(t_k)
  std::vector<double> path;        // B^H(t_k), k = 0..n, path[0] = 0
};

/// Exact fBm sampler on a fixed grid. The factorization is computed once and
/// shared read-only by every draw.
class FbmSampler {
 public:
  enum class Method { cholesky, circulant };

  FbmSampler(double hurst, TimeGrid grid, Method method = Method::cholesky);

  FbmSample sample(CounterEngine& engine) const;

  double hurst() const noexcept { return hurst_; }
  const TimeGrid& grid() const noexcept { return grid_; }
  Method method() const noexcept { return method_; }
  /// Diagonal jitter that was needed for the Cholesky factor (0 if none).
  double jitter() const noexcept { return jitter_; }
  /// True when circulant embedding was requested but had negative
  /// eigenvalues and the sampler fell back to Cholesky.
  bool fell_back() const noexcept { return fell_back_; }

 private:
  double hurst_;
  TimeGrid grid_;
  Method method_;
  double jitter_ = 0.0;
  bool fell_back_ = false;
  Eigen::MatrixXd cholesky_;          // lower factor of Cov(B^H(t_1..t_n))
  std::vector<double> sqrt_eigen_;    // circulant: sqrt(lambda_k / 2n)

  void factor_cholesky();
};

inline FbmSample fbm_sample(const FbmSampler& sampler, CounterEngine& engine) {
  return sampler.sample(engine);
}

/// X_{k+1} = X_k + b(t_k, X_k) T/n + dB^H_k.
Path fbm_em_path(const FbmConfig& cfg, std::span<const double> increments);

/// Strong rate exponent: p >= 2 gives (1-eps)H/(p(H+1)) when p gamma >= 1 and
/// (1-eps) gamma H/(H+1) otherwise; p = 1 gives the L^1 rate
/// (1-eps) gamma H/(H+1). Requires H < 1/2.
double theoretical_rate_main7(double hurst, double gamma, double p, double eps);

}  // namespace sdelab
