#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sdelab {

/// Empirical distribution function F(x) = #{samples <= x} / M.
class EmpiricalCDF {
 public:
  explicit EmpiricalCDF(std::vector<double> samples);

  double operator()(double x) const;
  /// Number of samples <= x.
  std::size_t count_le(double x) const;

  /// Generalised inverse inf{x : F(x) >= s}, s in (0, 1]. The rank is the
  /// smallest k with k/M >= s evaluated in the same floating-point arithmetic
  /// as operator(), so s <= F(x) <=> quantile(s) <= x holds exactly.
  double quantile(double s) const;

  std::size_t size() const noexcept { return samples_.size(); }
  std::span<const double> samples() const noexcept { return samples_; }
  double min() const noexcept { return samples_.front(); }
  double max() const noexcept { return samples_.back(); }
  /// Smallest strictly positive gap between consecutive order statistics
  /// (0 when all samples coincide).
  double min_positive_gap() const;

 private:
  std::vector<double> samples_;
};

inline double ecdf_eval(const EmpiricalCDF& F, double x) { return F(x); }

}  // namespace sdelab
