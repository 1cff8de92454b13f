#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sdelab/cli/config.hpp"
#include "sdelab/core/coefficient.hpp"
#include "sdelab/core/path.hpp"
#include "sdelab/core/rng.hpp"
#include "sdelab/harness/harness.hpp"
#include "sdelab/she.hpp"

namespace sdelab {

struct RunFlags {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::optional<std::string> out;
  std::optional<std::string> format;
  bool override_cfl = false;
};

/// Scheme, noise source and oracles assembled from a resolved model block.
struct BuiltModel {
  Driver driver = Driver::bm;
  double horizon = 1.0;
  double x0 = 0.0;
  std::string scheme_id;
  std::function<Path(const TimeGrid&, std::span<const double>)> scheme;
  std::function<std::vector<double>(const TimeGrid&, CounterEngine&)> noise;
  std::optional<Coefficient1D> drift;
  std::optional<Coefficient1D> diffusion;
  bool plain_bm = false;  // b = 0, sigma = 1, no transform
  std::function<SheConfig(std::size_t m, std::size_t n)> she;
  std::string theory = "n/a";
  std::optional<RateFit> theory_rate;  // model and exponent only
};

/// Resolves presets, parses expressions and checks every module
/// precondition. Throws ValidationError or DomainError.
BuiltModel build_model(const ExperimentConfig& config, bool override_cfl = false);

/// build_model plus the experiment-level parameter checks.
BuiltModel validate_config(const ExperimentConfig& config, bool override_cfl = false);

struct RunOutcome {
  int exit_code = 0;
  std::string summary;
  std::vector<std::string> files;
};

/// Validation errors give exit code 2, run failures 3.
RunOutcome run_experiment(const ExperimentConfig& config, const RunFlags& flags);

/// Reads, runs and reports; prints the summary to `out`, errors to `err`.
int run_config_file(const std::string& path, const RunFlags& flags, std::ostream& out,
                    std::ostream& err);

}  // namespace sdelab
