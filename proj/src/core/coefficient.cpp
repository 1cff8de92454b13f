#include "sdelab/core/coefficient.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <sstream>

#include "sdelab/errors.hpp"

namespace sdelab {

Coefficient1D::Coefficient1D(Function fn, CoefficientBounds bounds, bool time_independent,
                             std::vector<double> breakpoints)
    : fn_(std::move(fn)),
      bounds_(bounds),
      time_independent_(time_independent),
      breakpoints_(std::move(breakpoints)) {
  if (!fn_) throw DomainError("Coefficient1D: empty function");
  std::sort(breakpoints_.begin(), breakpoints_.end());
  breakpoints_.erase(std::unique(breakpoints_.begin(), breakpoints_.end()), breakpoints_.end());
}

Coefficient1D Coefficient1D::constant(double value) {
  CoefficientBounds b;
  b.sup_bound = std::abs(value);
  b.linear_growth = std::abs(value);
  if (value != 0.0) b.ellipticity_floor = value * value;
  return Coefficient1D([value](double, double) { return value; }, b, true);
}

Coefficient1D Coefficient1D::of_x(std::function<double(double)> fn, CoefficientBounds bounds,
                                  std::vector<double> breakpoints) {
  return Coefficient1D([f = std::move(fn)](double, double x) { return f(x); }, bounds, true,
                       std::move(breakpoints));
}

double Coefficient1D::operator()(double t, double x) const {
  const double v = fn_(t, x);
#ifndef NDEBUG
  if (bounds_.sup_bound && std::isfinite(x)) {
    assert(std::abs(v) <= *bounds_.sup_bound * (1.0 + 1e-12) + 1e-300);
  }
#endif
  return v;
}

void Coefficient1D::check_declared_bounds(std::span<const std::pair<double, double>> samples,
                                          bool as_diffusion) const {
  for (const auto& [t, x] : samples) {
    const double v = fn_(t, x);
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "coefficient is not finite at (t=" << t << ", x=" << x << ")";
      throw DomainError(msg.str());
    }
    if (bounds_.sup_bound && std::abs(v) > *bounds_.sup_bound * (1.0 + 1e-12)) {
      std::ostringstream msg;
      msg << "coefficient value " << v << " at (t=" << t << ", x=" << x
          << ") exceeds declared sup bound " << *bounds_.sup_bound;
      throw DomainError(msg.str());
    }
    if (as_diffusion && bounds_.ellipticity_floor && v * v < *bounds_.ellipticity_floor * (1.0 - 1e-12)) {
      std::ostringstream msg;
      msg << "diffusion value " << v << " at (t=" << t << ", x=" << x
          << ") violates declared ellipticity floor " << *bounds_.ellipticity_floor;
      throw DomainError(msg.str());
    }
  }
}

}  // namespace sdelab
