#pragma once

#include <functional>
#include <span>

namespace sdelab {

struct QuadratureResult {
  double value;
  double error_estimate;
};

/// Adaptive 15-point Gauss-Kronrod on [a, b], split at the given interior
/// breakpoints (discontinuities of the integrand). `tolerance` is relative to
/// the L1 norm of each piece.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double tolerance = 1e-12, std::span<const double> breakpoints = {});

/// tanh-sinh quadrature; tolerates integrable endpoint singularities.
QuadratureResult integrate_singular(const std::function<double(double)>& f, double a, double b,
                                    double rel_tolerance = 1e-12);

}  // namespace sdelab
