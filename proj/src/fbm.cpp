#include "sdelab/fbm.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include <unsupported/Eigen/FFT>

#include "sdelab/errors.hpp"

namespace sdelab {
namespace {

constexpr double kSeriesTolerance = 1e-14;

bool is_nonpositive_integer(double v) { return v <= 0.0 && v == std::floor(v); }

double series_2f1(double a, double b, double c, double z) {
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < 100000; ++k) {
    term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
    sum += term;
    if (term == 0.0 || std::abs(term) < kSeriesTolerance * std::abs(sum)) return sum;
  }
  throw DomainError("hyp2f1: series did not converge");
}

// 2F1 on [0, 1).
double hyp2f1_unit(double a, double b, double c, double z) {
  const double gap = c - a - b;
  const bool polynomial = is_nonpositive_integer(a) || is_nonpositive_integer(b);
  if (z <= 0.5 || polynomial || std::abs(gap - std::round(gap)) < 1e-9) {
    return series_2f1(a, b, c, z);
  }
  const double w = 1.0 - z;
  auto inv_gamma = [](double v) { return is_nonpositive_integer(v) ? 0.0 : 1.0 / std::tgamma(v); };
  const double first = std::tgamma(c) * std::tgamma(gap) * inv_gamma(c - a) * inv_gamma(c - b);
  const double second = std::tgamma(c) * std::tgamma(-gap) * inv_gamma(a) * inv_gamma(b);
  double value = 0.0;
  if (first != 0.0) value += first * series_2f1(a, b, 1.0 - gap, w);
  if (second != 0.0) value += second * std::pow(w, gap) * series_2f1(c - a, c - b, gap + 1.0, w);
  return value;
}

}  // namespace

bool validate(const FbmConfig& cfg) {
  if (!(cfg.hurst > 0.0 && cfg.hurst < 1.0)) throw ValidationError("Hurst index must lie in (0, 1)");
  return cfg.hurst < 0.5;
}

double fbm_covariance(double hurst, double t, double s) {
  const double h2 = 2.0 * hurst;
  return 0.5 * (std::pow(std::abs(t), h2) + std::pow(std::abs(s), h2) - std::pow(std::abs(t - s), h2));
}

double hyp2f1(double a, double b, double c, double z) {
  if (is_nonpositive_integer(c)) throw DomainError("hyp2f1: c must not be a nonpositive integer");
  if (!(z < 1.0)) throw DomainError("hyp2f1: z must be < 1");
  if (a == 0.0 || b == 0.0 || z == 0.0) return 1.0;
  if (z >= 0.0) return hyp2f1_unit(a, b, c, z);
  // Pfaff: F(a,b;c;z) = (1-z)^{-a} F(a, c-b; c; z/(z-1)).
  const double w = z / (z - 1.0);
  return std::pow(1.0 - z, -a) * hyp2f1_unit(a, c - b, c, w);
}

double fbm_kernel_variance(double hurst) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw DomainError("Hurst index must lie in (0, 1)");
  if (std::abs(hurst - 0.5) < 1e-10) return 1.0;
  return std::tgamma(2.0 - 2.0 * hurst) * std::cos(std::numbers::pi * hurst) /
         (std::numbers::pi * hurst * (1.0 - 2.0 * hurst));
}

double kernel_K_H_unnormalised(double hurst, double t, double s) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw DomainError("Hurst index must lie in (0, 1)");
  if (!(s > 0.0) || !(s < t)) throw DomainError("kernel_K_H: need 0 < s < t");
  return std::pow(t - s, hurst - 0.5) / std::tgamma(hurst + 0.5) *
         hyp2f1(hurst - 0.5, 0.5 - hurst, hurst + 0.5, 1.0 - t / s);
}

double kernel_K_H(double hurst, double t, double s) {
  return kernel_K_H_unnormalised(hurst, t, s) / std::sqrt(fbm_kernel_variance(hurst));
}

FbmSampler::FbmSampler(double hurst, TimeGrid grid, Method method)
    : hurst_(hurst), grid_(grid), method_(method) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw DomainError("Hurst index must lie in (0, 1)");
  const std::size_t n = grid_.steps();
  if (method_ == Method::cholesky) {
    if (n > 4096) throw DomainError("FbmSampler: Cholesky path limited to 4096 nodes");
    factor_cholesky();
    return;
  }

  // Davies-Harte: embed the fGn autocovariance in a circulant of size 2n.
  const double dt_h = std::pow(grid_.step_size(), 2.0 * hurst);
  auto gamma = [&](double k) {
    const double h2 = 2.0 * hurst;
    return 0.5 * dt_h * (std::pow(k + 1.0, h2) - 2.0 * std::pow(k, h2) + std::pow(std::abs(k - 1.0), h2));
  };
  const std::size_t m = 2 * n;
  std::vector<double> row(m, 0.0);
  for (std::size_t k = 0; k <= n; ++k) row[k] = gamma(static_cast<double>(k));
  for (std::size_t k = n + 1; k < m; ++k) row[k] = row[m - k];
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spectrum;
  fft.fwd(spectrum, row);
  double largest = 0.0;
  for (const auto& v : spectrum) largest = std::max(largest, v.real());
  sqrt_eigen_.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double lambda = spectrum[k].real();
    if (lambda < -1e-12 * largest) {
      fell_back_ = true;
      method_ = Method::cholesky;
      sqrt_eigen_.clear();
      factor_cholesky();
      return;
    }
    sqrt_eigen_[k] = std::sqrt(std::max(lambda, 0.0) / static_cast<double>(m));
  }
}

void FbmSampler::factor_cholesky() {
  const std::size_t n = grid_.steps();
  Eigen::MatrixXd cov(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double c = fbm_covariance(hurst_, grid_.node(i + 1), grid_.node(j + 1));
      cov(i, j) = c;
      cov(j, i) = c;
    }
  }
  const double scale = cov.diagonal().mean();
  for (double jitter = 0.0;; jitter = jitter == 0.0 ? 1e-14 * scale : jitter * 10.0) {
    Eigen::MatrixXd shifted = cov;
    shifted.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(shifted);
    if (llt.info() == Eigen::Success) {
      cholesky_ = llt.matrixL();
      jitter_ = jitter;
      return;
    }
    if (jitter > 1e-8 * scale) {
      std::ostringstream msg;
      msg << "fBm covariance not positive definite after jitter " << jitter;
      throw FactorizationError(msg.str(), jitter);
    }
  }
}

FbmSample FbmSampler::sample(CounterEngine& engine) const {
  const std::size_t n = grid_.steps();
  FbmSample out;
  out.path.assign(n + 1, 0.0);
  out.increments.assign(n, 0.0);
  if (method_ == Method::cholesky) {
    Eigen::VectorXd z(n);
    for (std::size_t i = 0; i < n; ++i) z(i) = engine.normal();
    const Eigen::VectorXd values = cholesky_.triangularView<Eigen::Lower>() * z;
    for (std::size_t i = 0; i < n; ++i) out.path[i + 1] = values(i);
    for (std::size_t i = 0; i < n; ++i) out.increments[i] = out.path[i + 1] - out.path[i];
    return out;
  }
  const std::size_t m = sqrt_eigen_.size();
  std::vector<std::complex<double>> weighted(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double re = engine.normal();
    const double im = engine.normal();
    weighted[k] = sqrt_eigen_[k] * std::complex<double>(re, im);
  }
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> transformed;
  fft.fwd(transformed, weighted);
  for (std::size_t i = 0; i < n; ++i) {
    out.increments[i] = transformed[i].real();
    out.path[i + 1] = out.path[i] + out.increments[i];
  }
  return out;
}

Path fbm_em_path(const FbmConfig& cfg, std::span<const double> increments) {
  if (increments.size() != cfg.grid.steps()) throw DomainError("fbm_em_path: one increment per step");
  const double dt = cfg.grid.step_size();
  Path path;
  path.values.reserve(cfg.grid.steps() + 1);
  double x = cfg.x0;
  path.values.push_back(x);
  for (std::size_t k = 0; k < cfg.grid.steps(); ++k) {
    x += cfg.drift(cfg.grid.node(k), x) * dt + increments[k];
    if (!std::isfinite(x)) {
      path.diverged_at = k;
      return path;
    }
    path.values.push_back(x);
  }
  return path;
}

double theoretical_rate_main7(double hurst, double gamma, double p, double eps) {
  if (!(hurst > 0.0 && hurst < 0.5)) throw DomainError("theoretical_rate_main7: needs H < 1/2");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw DomainError("theoretical_rate_main7: gamma in (0, 1]");
  if (!(eps >= 0.0 && eps <= 1.0)) throw DomainError("theoretical_rate_main7: eps in [0, 1]");
  const double l1_rate = (1.0 - eps) * gamma * hurst / (hurst + 1.0);
  if (p == 1.0) return l1_rate;
  if (!(p >= 2.0)) throw DomainError("theoretical_rate_main7: p must be 1 or >= 2");
  if (p * gamma >= 1.0) return (1.0 - eps) * hurst / (p * (hurst + 1.0));
  return l1_rate;
}

}  // namespace sdelab
