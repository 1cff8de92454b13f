#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace sdelab {

/// Value of the TOML subset read by the runner: booleans, integers, floats,
/// basic strings and single-line (possibly nested) arrays.
struct TomlValue {
  using Array = std::vector<TomlValue>;
  std::variant<bool, std::int64_t, double, std::string, Array> value;

  bool is_number() const noexcept;
  double as_double(const std::string& key) const;
  std::int64_t as_int(const std::string& key) const;
  bool as_bool(const std::string& key) const;
  const std::string& as_string(const std::string& key) const;
  const Array& as_array(const std::string& key) const;
};

/// Flat table keyed by "section.key" (top-level keys have no prefix).
using TomlTable = std::map<std::string, TomlValue>;

TomlTable parse_toml(const std::string& text);

enum class ExperimentKind { strong_rate, weak_rate, avikainen_verify, mlmc, she_rate, max_functional, time_avg_bv };
enum class Driver { bm, stable, fbm, she };

std::string to_string(ExperimentKind kind);
std::string to_string(Driver driver);

struct ModelBlock {
  std::optional<Driver> driver;
  std::optional<std::string> preset;
  std::optional<std::string> drift;
  std::optional<std::string> diffusion;
  std::optional<std::string> initial;  // she: u0(x)
  std::optional<std::string> mu;       // asian pair: drift of Y in (t, x, y)
  std::optional<double> x0;
  std::optional<double> horizon;
  std::optional<std::string> taming;   // none | drift | full
  std::optional<double> ell;
  std::optional<double> hurst;
  std::optional<double> stable_index;
  std::optional<std::vector<std::pair<double, double>>> atoms;  // (location, weight)
  std::optional<double> drift_bound;
  std::optional<double> diffusion_bound;
  std::optional<double> ellipticity;
  std::optional<double> growth_exponent;
  std::optional<double> linear_growth;

  friend bool operator==(const ModelBlock&, const ModelBlock&) = default;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::strong_rate;
  ModelBlock model;
  std::vector<std::size_t> n;
  std::vector<std::pair<std::size_t, std::size_t>> mn;  // she (m, n)
  std::size_t paths = 1000;
  std::uint64_t seed = 0;
  std::optional<std::size_t> threads;
  std::optional<double> p;
  std::optional<double> q;
  std::optional<double> alpha;
  std::optional<double> gamma;
  std::optional<double> eps;
  std::optional<std::string> mode;     // terminal | sup
  std::optional<std::string> payoff;   // expression in x
  std::optional<double> target;
  std::optional<double> point;         // she: x of the observed node
  std::optional<std::size_t> refine;
  std::optional<std::size_t> levels;
  std::optional<std::size_t> base_n;
  std::optional<std::vector<std::pair<double, double>>> bv;  // (location, jump)
  std::optional<double> bv_constant;
  std::optional<bool> override_cfl;
  std::string output = "sdelab-out";
  std::string format = "both";

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Throws ValidationError on syntax errors, unknown keys (listing the allowed
/// ones), wrong types and unknown enumerators.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Canonical TOML; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

}  // namespace sdelab
