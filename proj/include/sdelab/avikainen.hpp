#pragma once

#include <functional>
#include <span>
#include <string>
#include <variant>

#include <json.hpp>

#include "sdelab/core/bv_function.hpp"
#include "sdelab/core/ecdf.hpp"
#include "sdelab/core/path.hpp"

namespace sdelab {

/// ||F||_alpha restricted to scales |x - y| in [h_min, h_max].
struct HolderEstimate {
  double exponent = 1.0;
  double constant = 0.0;
  double h_min = 0.0;
  double h_max = 0.0;
};

/// Hoelder constant known in closed form.
struct AnalyticHolder {
  double constant;
};

/// Hoelder constant estimated from an empirical CDF over a scale window.
struct EmpiricalHolder {
  EmpiricalCDF cdf;
  double h_min;
  double h_max;
};

using HolderSource = std::variant<AnalyticHolder, EmpiricalHolder>;

struct AvikainenReport {
  double lhs = 0.0;
  double lhs_stderr = 0.0;
  double rhs = 0.0;
  double rhs_stderr = 0.0;
  double tolerance = 0.0;
  bool satisfied = false;

  double p = 1.0;
  double q = 1.0;
  double alpha = 1.0;
  double holder_constant = 0.0;
  double total_mass = 1.0;
  double total_variation = 0.0;
  double lp_error = 0.0;
  std::string holder_source;   // "analytic" or "empirical[h_min,h_max]"
  std::size_t samples = 0;

  nlohmann::json to_json() const;
};

/// inf{x : F(x) >= s} for an empirical CDF.
double skorokhod_inverse(const EmpiricalCDF& F, double s);
/// inf{x : F(x) >= s} for a nondecreasing right-continuous F, searched by
/// bisection on [lo, hi] (F(lo) < s <= F(hi) is required).
double skorokhod_inverse(const std::function<double(double)>& F, double s, double lo, double hi,
                         double tolerance = 1e-14);

/// 3^{q+1} V(g)^q ||F||^{p/(p+a)} mu(S)^{p/(p+a)} (int |f - fhat|^p dmu)^{a/(p+a)}.
double avikainen_rhs(double holder_const, double alpha, double total_mass, double total_variation,
                     double p, double q, double lp_error);

/// 3 ||F_X||^{p/(p+a)} E[|X - Xhat|^p]^{a/(p+a)}: bound on
/// E|1{X <= K} - 1{Xhat <= K}|^q for any level K.
double key2_rhs(double holder_const, double alpha, double p, double lp_moment);

/// Mean of |1{x_i <= K} - 1{xhat_i <= K}|^q over paired samples.
double indicator_diff_moment(std::span<const double> x, std::span<const double> xhat, double level,
                             double q);

/// Mean of |g(x_i) - g(xhat_i)|^q over paired samples.
double bv_diff_moment(const BVFunction& g, std::span<const double> x, std::span<const double> xhat,
                      double q);

/// Scale floor below which an empirical CDF is a pure step function:
/// max(3/M, 2 * smallest inter-sample gap).
double default_holder_scale(const EmpiricalCDF& F);

/// Exact supremum of |F(x+h) - F(x)| / h^alpha over all offsets x, for a
/// dyadic ladder of h from h_min up to h_max. For a step CDF the supremum over
/// x is attained just below a sample point, so only those offsets are
/// scanned; grid_size must be >= 2 and is kept for interface symmetry with
/// the analytic overload.
HolderEstimate holder_estimate(const EmpiricalCDF& F, double alpha, double h_min, double h_max,
                               std::size_t grid_size);

/// Same ladder for an analytic CDF, scanned on grid_size offsets of [x_lo, x_hi].
HolderEstimate holder_estimate(const std::function<double(double)>& F, double alpha, double h_min,
                               double h_max, std::size_t grid_size, double x_lo, double x_hi);

/// Pooled empirical CDF of the ensemble values at nodes t_1, ..., t_n
/// (right Riemann sum of s -> P(Y(s) <= x) averaged over [0, T]).
EmpiricalCDF time_avg_cdf(const PathEnsemble& paths);

/// (1/2h) sum_k 1{|Y(t_k) - level| <= h} d<Y>_k, the occupation-time
/// estimator of the symmetric local time at `level`.
double discrete_local_time(std::span<const double> path, double level, double bandwidth,
                           std::span<const double> qv_increments);

/// Both sides of the generalised Avikainen estimate on paired samples drawn
/// from mu / mu(S). Sides are scaled by total_mass; the Hoelder source
/// describes the normalised distribution function. Satisfied when
/// lhs <= rhs + 3 pooled standard errors.
AvikainenReport avikainen_check(const BVFunction& g, std::span<const double> x,
                                std::span<const double> xhat, double p, double q, double alpha,
                                const HolderSource& holder, double total_mass = 1.0);

}  // namespace sdelab
