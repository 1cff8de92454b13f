#include "sdelab/core/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <vector>

#include "sdelab/errors.hpp"

namespace sdelab {

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double tolerance, std::span<const double> breakpoints) {
  if (a == b) return {0.0, 0.0};
  const double sign = a < b ? 1.0 : -1.0;
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);

  std::vector<double> cuts{lo};
  for (double z : breakpoints) {
    if (z > lo && z < hi) cuts.push_back(z);
  }
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());

  double total = 0.0;
  double error = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] <= cuts[i]) continue;
    double piece_error = 0.0;
    // Boost stops once error <= tolerance * L1 norm of the piece.
    const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, cuts[i], cuts[i + 1], 10, tolerance, &piece_error);
    total += v;
    error += piece_error;
  }
  return {sign * total, error};
}

QuadratureResult integrate_singular(const std::function<double(double)>& f, double a, double b,
                                    double rel_tolerance) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  double error = 0.0;
  const double v = integrator.integrate(f, a, b, rel_tolerance, &error);
  return {v, error};
}

}  // namespace sdelab
