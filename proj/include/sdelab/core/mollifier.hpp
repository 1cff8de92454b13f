#pragma once

namespace sdelab {

/// Yamada-Watanabe pair (psi, phi) for delta > 1, eps in (0, 1).
///
/// psi is continuous, supported on [eps/delta, eps], integrates to one and
/// obeys psi(z) <= 2 / (z log delta). It is a trapezoid in log z: zero at the
/// endpoints of [log(eps/delta), log eps], one on the middle half, divided by
/// z and normalised. phi(x) = int_0^{|x|} int_0^y psi(z) dz dy, so that
/// |x| <= eps + phi(x), |phi'| <= 1 and phi'' = psi(|x|).
class Mollifier {
 public:
  Mollifier(double delta, double eps);

  double delta() const noexcept { return delta_; }
  double eps() const noexcept { return eps_; }

  double psi(double z) const;
  /// int_0^y psi(z) dz for y >= 0.
  double psi_integral(double y) const;
  double phi(double x) const;
  double phi_prime(double x) const;
  double phi_second(double x) const { return psi(x < 0 ? -x : x); }

 private:
  double delta_;
  double eps_;
  double log_lo_;       // log(eps / delta)
  double log_hi_;       // log(eps)
  double ramp_;         // quarter of the log-support length
  double normaliser_;   // integral of the log-trapezoid

  double trapezoid(double u) const;
  double trapezoid_integral(double u) const;
  double phi_core(double y) const;  // int_{eps/delta}^{y} psi_integral, y in [eps/delta, eps]
};

inline Mollifier build_mollifier(double delta, double eps) { return Mollifier(delta, eps); }

}  // namespace sdelab
