#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sdelab {

/// Structural metadata a coefficient declares about itself. Schemes and
/// config validation read these; nothing here is inferred.
struct CoefficientBounds {
  std::optional<double> sup_bound;          // |c(t,x)| <= sup_bound
  std::optional<double> ellipticity_floor;  // c(t,x)^2 >= floor (diffusions)
  std::optional<double> growth_exponent;    // ell in |c(x)| <= K(1+|x|^{ell+1})
  std::optional<double> one_sided_lipschitz;
  std::optional<double> linear_growth;      // |c(t,x)| <= K(1+|x|)
  std::optional<double> moment_p0;          // p0 of the Khasminskii-type condition
  std::optional<double> moment_p1;          // p1 of the one-sided Lipschitz condition
};

/// Evaluable drift or diffusion coefficient c(t, x).
class Coefficient1D {
 public:
  using Function = std::function<double(double t, double x)>;

  Coefficient1D(Function fn, CoefficientBounds bounds = {}, bool time_independent = false,
                std::vector<double> breakpoints = {});

  static Coefficient1D constant(double value);
  /// Time-independent coefficient c(x).
  static Coefficient1D of_x(std::function<double(double)> fn, CoefficientBounds bounds = {},
                            std::vector<double> breakpoints = {});

  double operator()(double t, double x) const;

  const CoefficientBounds& bounds() const noexcept { return bounds_; }
  CoefficientBounds& bounds() noexcept { return bounds_; }
  bool time_independent() const noexcept { return time_independent_; }
  /// Known discontinuity locations in x; quadrature splits there.
  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }

  /// Checks the declared sup bound (and, for diffusions, the ellipticity
  /// floor) on the given sample points. Throws DomainError on violation.
  void check_declared_bounds(std::span<const std::pair<double, double>> samples,
                             bool as_diffusion) const;

 private:
  Function fn_;
  CoefficientBounds bounds_;
  bool time_independent_;
  std::vector<double> breakpoints_;
};

}  // namespace sdelab
