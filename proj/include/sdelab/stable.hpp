#pragma once

#include <span>
#include <string>
#include <vector>

#include "sdelab/core/coefficient.hpp"
#include "sdelab/core/path.hpp"
#include "sdelab/core/rng.hpp"
#include "sdelab/core/time_grid.hpp"

namespace sdelab {

struct StableConfig {
  double alpha;           // stability index in (1, 2]
  TimeGrid grid;
  Coefficient1D diffusion;
  double x0 = 0.0;
};

/// Rejects alpha outside (1, 2] and diffusions without a declared sup bound
/// and positivity floor.
void validate(const StableConfig& cfg);

/// Symmetric alpha-stable draw with characteristic function
/// exp(-dt |xi|^alpha), Chambers-Mallows-Stuck.
double sample_stable_increment(double alpha, double dt, CounterEngine& engine);

std::vector<double> stable_increments(double alpha, const TimeGrid& grid, CounterEngine& engine);

/// X_{k+1} = X_k + sigma(t_k, X_k) dZ_k.
Path stable_em_path(const StableConfig& cfg, std::span<const double> increments);

/// Strong error moments of order >= alpha are infinite; throws DomainError.
void require_stable_moment(double alpha, double moment_order);

struct RateDescriptor {
  std::string model;       // "log" or "power"
  double exponent;         // s in C/(log n)^s, or r in C n^{-r}
  double moment_order;     // order p of the error moment the rate refers to
};

/// Log-law rate C/(log n)^{alpha-1} measured in the moment of order alpha-1.
RateDescriptor theoretical_rate_main5(double alpha);

}  // namespace sdelab
