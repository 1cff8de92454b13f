#include "sdelab/core/mollifier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sdelab/errors.hpp"

namespace sdelab {
namespace {

// Antiderivatives in y of (log y - c) and (log y - c)^2.
double lin_antideriv(double y, double c) { return y * (std::log(y) - c - 1.0); }
double sq_antideriv(double y, double c) {
  const double w = std::log(y) - c;
  return y * (w * w - 2.0 * w + 2.0);
}

}  // namespace

Mollifier::Mollifier(double delta, double eps) : delta_(delta), eps_(eps) {
  if (!(delta > 1.0) || !std::isfinite(delta)) throw DomainError("Mollifier: delta must exceed 1");
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("Mollifier: eps must lie in (0, 1)");
  log_hi_ = std::log(eps);
  log_lo_ = log_hi_ - std::log(delta);
  ramp_ = 0.25 * std::log(delta);
  normaliser_ = 3.0 * ramp_;

  // psi(z) z log(delta) = trapezoid * log(delta) / normaliser <= 2.
  const double peak = std::log(delta) / normaliser_;
  if (peak > 2.0) {
    std::ostringstream msg;
    msg << "Mollifier: psi bound violated, z*psi(z)*log(delta) reaches " << peak;
    throw DomainError(msg.str());
  }
}

double Mollifier::trapezoid(double u) const {
  if (u <= log_lo_ || u >= log_hi_) return 0.0;
  if (u < log_lo_ + ramp_) return (u - log_lo_) / ramp_;
  if (u > log_hi_ - ramp_) return (log_hi_ - u) / ramp_;
  return 1.0;
}

double Mollifier::trapezoid_integral(double u) const {
  if (u <= log_lo_) return 0.0;
  if (u >= log_hi_) return normaliser_;
  const double q = ramp_;
  const double length = 4.0 * q;
  if (u <= log_lo_ + q) return (u - log_lo_) * (u - log_lo_) / (2.0 * q);
  if (u <= log_hi_ - q) return u - log_lo_ - 0.5 * q;
  return length - q - (log_hi_ - u) * (log_hi_ - u) / (2.0 * q);
}

double Mollifier::psi(double z) const {
  if (z <= 0.0) return 0.0;
  return trapezoid(std::log(z)) / (z * normaliser_);
}

double Mollifier::psi_integral(double y) const {
  if (y <= 0.0) return 0.0;
  return trapezoid_integral(std::log(y)) / normaliser_;
}

double Mollifier::phi_core(double y) const {
  // Closed form of int_{a}^{y} trapezoid_integral(log s) ds, piece by piece.
  const double q = ramp_;
  const double length = 4.0 * q;
  const double b1 = std::exp(log_lo_ + q);
  const double b2 = std::exp(log_hi_ - q);
  const double a = std::exp(log_lo_);

  double total = 0.0;
  auto piece1 = [&](double lo, double hi) {
    return (sq_antideriv(hi, log_lo_) - sq_antideriv(lo, log_lo_)) / (2.0 * q);
  };
  auto piece2 = [&](double lo, double hi) {
    return lin_antideriv(hi, log_lo_ + 0.5 * q) - lin_antideriv(lo, log_lo_ + 0.5 * q);
  };
  auto piece3 = [&](double lo, double hi) {
    return (length - q) * (hi - lo) -
           (sq_antideriv(hi, log_hi_) - sq_antideriv(lo, log_hi_)) / (2.0 * q);
  };

  if (y <= a) return 0.0;
  total += piece1(a, std::min(y, b1));
  if (y > b1) total += piece2(b1, std::min(y, b2));
  if (y > b2) total += piece3(b2, std::min(y, eps_));
  return total / normaliser_;
}

double Mollifier::phi(double x) const {
  const double y = std::abs(x);
  if (y <= eps_) return phi_core(y);
  return phi_core(eps_) + (y - eps_);
}

double Mollifier::phi_prime(double x) const {
  const double v = psi_integral(std::abs(x));
  return x < 0.0 ? -v : v;
}

}  // namespace sdelab
