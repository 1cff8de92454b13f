#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sdelab/core/bv_function.hpp"
#include "sdelab/core/path.hpp"
#include "sdelab/core/rng.hpp"
#include "sdelab/core/time_grid.hpp"
#include "sdelab/she.hpp"

namespace sdelab {

enum class ErrorType { strong_sup, strong_terminal, weak, time_avg_bv, max_functional };

std::string to_string(ErrorType type);
ErrorType error_type_from_string(const std::string& name);

struct ErrorPoint {
  std::size_t n = 0;
  double error = 0.0;
  double std_error = 0.0;
  std::size_t paths = 0;     // paths that entered the estimate
  std::size_t diverged = 0;  // excluded paths
  double moment = 1.0;       // p (strong) or q (functional errors)
  std::size_t m = 0;         // time steps, lattice runs only
};

struct ErrorCurve {
  ErrorType type = ErrorType::strong_terminal;
  std::vector<ErrorPoint> points;
  std::uint64_t seed = 0;
  std::string scheme_id;
  std::string config_hash;

  std::vector<double> ns() const;
  std::vector<double> errors() const;
  std::vector<double> std_errors() const;

  /// Every consecutive pair satisfies e_{k+1} <= e_k + slack * hypot(se_k, se_{k+1}).
  bool nonincreasing(double slack = 2.0) const;
};

/// Throws DomainError unless errors and SEs are nonnegative and n strictly increases.
void check_invariants(const ErrorCurve& curve);

struct RunOptions {
  std::size_t paths = 1000;
  std::uint64_t seed = 0;
  std::size_t threads = 0;         // 0 = default_thread_count()
  double max_divergence = 0.01;    // fraction of paths; larger fails the run
  std::string scheme_id;
  std::string config_hash;
};

/// One coupled noise draw: a fine grid, the driving increments on it, the
/// reference solution at the fine nodes and, when known exactly, the running
/// maximum of the reference over [0, T].
struct ReferenceDraw {
  TimeGrid grid{1.0, 1};
  std::vector<double> increments;
  Path path;
  std::optional<double> running_max;
};

/// (finest requested n, engine) -> draw whose grid refines every requested n.
using ReferenceFactory = std::function<ReferenceDraw(std::size_t finest_n, CounterEngine&)>;
/// (n, shared draw) -> scheme path on the n-step grid driven by the draw's noise.
using SchemeFactory = std::function<Path(std::size_t n, const ReferenceDraw&)>;

/// Reference that is the scheme itself run on `refine` x the finest n.
ReferenceFactory self_reference(SchemeFactory scheme, double horizon, std::size_t refine,
                                std::function<std::vector<double>(const TimeGrid&, CounterEngine&)> noise);
/// Brownian motion x0 + B on the finest grid; running max via exact bridge maxima.
ReferenceFactory brownian_reference(double x0, double horizon, std::size_t refine = 1);
/// Scheme driven by the draw's increments summed to the n-step grid.
SchemeFactory coarsened_scheme(std::function<Path(const TimeGrid&, std::span<const double>)> scheme);

enum class StrongMode { sup, terminal };

/// E[err^p]^{1/p} per n, err the sup over shared nodes or the terminal gap.
ErrorCurve strong_error(const SchemeFactory& scheme, const ReferenceFactory& reference,
                        std::span<const std::size_t> ns, double p, StrongMode mode,
                        const RunOptions& options);

/// |E f(X^n(T)) - E f(X(T))| per n. With `exact` the reference mean is that
/// value; otherwise the coupled differences f(X^n) - f(X) are averaged.
ErrorCurve weak_error(const SchemeFactory& scheme, const ReferenceFactory& reference,
                      const std::function<double(double)>& payoff,
                      std::span<const std::size_t> ns, const RunOptions& options,
                      std::optional<double> exact = std::nullopt);

/// (n, s, engine) -> (Y(eta_n(s)), Y(s)).
using IntervalSampler = std::function<std::pair<double, double>(std::size_t n, double s, CounterEngine&)>;

/// Y = x0 + B sampled exactly at eta_n(s) and s.
IntervalSampler brownian_interval_sampler(double x0, double horizon);
/// Continuous-time Euler interpolant of dX = b dt + sigma dB at eta_n(s) and s.
IntervalSampler em_interval_sampler(std::function<double(double, double)> drift,
                                    std::function<double(double, double)> diffusion, double x0,
                                    double horizon);

/// T * E|g(Y(s)) - g(Y(eta_n(s)))|^q with s ~ U(0, T) per path.
ErrorCurve time_avg_bv_error(const IntervalSampler& sampler, const BVFunction& g, double horizon,
                             std::span<const std::size_t> ns, double q, const RunOptions& options);

struct BoundComparison {
  double exponent = 0.0;  // p alpha / (2 (p + alpha))
  double constant = 0.0;  // least squares in log space
  std::vector<double> shape;   // (log n / n)^exponent
  double max_ratio = 0.0;      // max_n error / (constant * shape)
};

/// E|g(max X) - g(max X^n)|^q with max X^n over the scheme's nodes and the
/// reference max from the draw (exact when provided, else its node max).
std::pair<ErrorCurve, BoundComparison> max_functional_error(
    const SchemeFactory& scheme, const ReferenceFactory& reference, const BVFunction& g,
    std::span<const std::size_t> ns, double p, double q, double alpha, const RunOptions& options);

struct MlmcLevel {
  std::size_t level = 0;
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;
  double std_error = 0.0;
  std::size_t paths = 0;
  std::size_t diverged = 0;
};

struct MlmcReport {
  std::vector<MlmcLevel> levels;
  double estimate = 0.0;
  double std_error = 0.0;
  double single_level_mean = 0.0;  // plain MC on the finest level
  double single_level_std_error = 0.0;
  bool telescoping_ok = false;     // within 3 combined SE
  std::uint64_t seed = 0;
  std::string scheme_id;
  std::string config_hash;
};

struct MlmcProblem {
  double horizon = 1.0;
  std::size_t base_steps = 1;  // n_0
  std::size_t levels = 1;
  std::function<Path(const TimeGrid&, std::span<const double>)> scheme;
  std::function<double(const Path&)> payoff;
  std::function<std::vector<double>(const TimeGrid&, CounterEngine&)> noise;
};

/// Telescoping estimator over n_l = n_0 2^l with per-level path counts.
MlmcReport mlmc_estimate(const MlmcProblem& problem, std::span<const std::size_t> paths_per_level,
                         const RunOptions& options);

enum class RateModel { power, log, automatic };

std::string to_string(RateModel model);

struct RateFit {
  RateModel model = RateModel::power;
  double constant = 0.0;
  double exponent = 0.0;  // r for power, s for log
  double rss = 0.0;
  double r_squared = 1.0;

  double predict(double n) const;
};

/// Least squares of log e on log n (power) or log log n (log model).
/// `automatic` fits both and keeps the larger R^2.
RateFit fit_rate(std::span<const double> ns, std::span<const double> errors, RateModel model);
RateFit fit_rate(const ErrorCurve& curve, RateModel model);

struct LatticeErrorRequest {
  std::size_t m = 1;
  std::size_t n = 2;
};

/// |E f(u(T, x)) - target| per (m, n) for the lattice scheme.
ErrorCurve she_weak_error(const std::function<SheConfig(std::size_t m, std::size_t n)>& config,
                          const std::function<double(double)>& payoff, double x, double target,
                          std::span<const LatticeErrorRequest> grid, const RunOptions& options);

nlohmann::json to_json(const ErrorCurve& curve);
nlohmann::json to_json(const RateFit& fit);
nlohmann::json to_json(const MlmcReport& report);
ErrorCurve error_curve_from_json(const nlohmann::json& j);

void write_csv(std::ostream& out, const ErrorCurve& curve);
void write_csv(std::ostream& out, const MlmcReport& report);

/// 64-bit FNV-1a of `text`, as 16 hex digits.
std::string config_hash(const std::string& text);

}  // namespace sdelab
