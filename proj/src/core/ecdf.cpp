#include "sdelab/core/ecdf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sdelab/errors.hpp"

namespace sdelab {

EmpiricalCDF::EmpiricalCDF(std::vector<double> samples) : samples_(std::move(samples)) {
  if (samples_.empty()) throw DomainError("EmpiricalCDF: needs at least one sample");
  for (double v : samples_) {
    if (std::isnan(v)) throw DomainError("EmpiricalCDF: NaN sample");
  }
  std::sort(samples_.begin(), samples_.end());
}

std::size_t EmpiricalCDF::count_le(double x) const {
  return static_cast<std::size_t>(std::upper_bound(samples_.begin(), samples_.end(), x) -
                                  samples_.begin());
}

double EmpiricalCDF::operator()(double x) const {
  return static_cast<double>(count_le(x)) / static_cast<double>(samples_.size());
}

double EmpiricalCDF::quantile(double s) const {
  if (!(s > 0.0 && s <= 1.0)) {
    throw DomainError("skorokhod_inverse: s=" + std::to_string(s) + " outside (0, 1]");
  }
  const std::size_t m = samples_.size();
  const double md = static_cast<double>(m);
  auto k = static_cast<std::size_t>(std::ceil(s * md));
  k = std::clamp<std::size_t>(k, 1, m);
  while (k > 1 && static_cast<double>(k - 1) / md >= s) --k;
  while (k < m && static_cast<double>(k) / md < s) ++k;
  return samples_[k - 1];
}

double EmpiricalCDF::min_positive_gap() const {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < samples_.size(); ++i) {
    const double d = samples_[i] - samples_[i - 1];
    if (d > 0.0) gap = std::min(gap, d);
  }
  return std::isfinite(gap) ? gap : 0.0;
}

}  // namespace sdelab
