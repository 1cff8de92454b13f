#include "sdelab/stable.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "sdelab/errors.hpp"

namespace sdelab {
namespace {

void require_alpha(double alpha) {
  if (!(alpha > 1.0 && alpha <= 2.0)) {
    std::ostringstream msg;
    msg << "stability index alpha=" << alpha << " outside (1, 2]";
    throw DomainError(msg.str());
  }
}

}  // namespace

void validate(const StableConfig& cfg) {
  require_alpha(cfg.alpha);
  const auto& b = cfg.diffusion.bounds();
  if (!b.sup_bound || !b.ellipticity_floor || !(*b.ellipticity_floor > 0.0)) {
    throw ValidationError("stable driver: diffusion must declare a sup bound and a positive floor");
  }
}

double sample_stable_increment(double alpha, double dt, CounterEngine& engine) {
  require_alpha(alpha);
  if (!(dt > 0.0)) throw DomainError("sample_stable_increment: dt must be positive");
  const double u = std::numbers::pi * (engine.uniform() - 0.5);
  const double w = engine.exponential();
  // Symmetric CMS: sin(a u)/cos(u)^{1/a} * (cos((1-a) u)/w)^{(1-a)/a}.
  const double z = std::sin(alpha * u) / std::pow(std::cos(u), 1.0 / alpha) *
                   std::pow(std::cos((1.0 - alpha) * u) / w, (1.0 - alpha) / alpha);
  return std::pow(dt, 1.0 / alpha) * z;
}

std::vector<double> stable_increments(double alpha, const TimeGrid& grid, CounterEngine& engine) {
  std::vector<double> dz(grid.steps());
  for (auto& v : dz) v = sample_stable_increment(alpha, grid.step_size(), engine);
  return dz;
}

Path stable_em_path(const StableConfig& cfg, std::span<const double> increments) {
  if (increments.size() != cfg.grid.steps()) throw DomainError("stable_em_path: one increment per step");
  Path path;
  path.values.reserve(cfg.grid.steps() + 1);
  double x = cfg.x0;
  path.values.push_back(x);
  for (std::size_t k = 0; k < cfg.grid.steps(); ++k) {
    x += cfg.diffusion(cfg.grid.node(k), x) * increments[k];
    if (!std::isfinite(x)) {
      path.diverged_at = k;
      return path;
    }
    path.values.push_back(x);
  }
  return path;
}

void require_stable_moment(double alpha, double moment_order) {
  if (!(moment_order > 0.0 && moment_order < alpha)) {
    std::ostringstream msg;
    msg << "moment order p=" << moment_order << " is not estimable for alpha=" << alpha
        << ": moments of order >= alpha are infinite";
    throw DomainError(msg.str());
  }
}

RateDescriptor theoretical_rate_main5(double alpha) {
  if (!(alpha > 1.0 && alpha < 2.0)) throw DomainError("theoretical_rate_main5: alpha in (1, 2)");
  return {"log", alpha - 1.0, alpha - 1.0};
}

}  // namespace sdelab
