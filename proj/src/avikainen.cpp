#include "sdelab/avikainen.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "sdelab/core/parallel.hpp"
#include "sdelab/errors.hpp"

namespace sdelab {
namespace {

void require_paired(std::span<const double> x, std::span<const double> xhat) {
  if (x.empty()) throw DomainError("paired samples must be nonempty");
  if (x.size() != xhat.size()) throw DomainError("paired samples must have equal length");
}

void require_bound_parameters(double holder_const, double alpha, double p) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("Hoelder exponent must lie in (0, 1]");
  if (!(p > 0.0)) throw DomainError("p must be positive");
  if (!(holder_const >= 0.0)) throw DomainError("Hoelder constant must be nonnegative");
}

std::vector<double> dyadic_ladder(double h_min, double h_max) {
  if (!(h_min > 0.0)) throw DomainError("holder_estimate: h_min must be positive");
  if (!(h_max > h_min)) throw DomainError("holder_estimate: need h_min < h_max");
  std::vector<double> scales;
  for (double h = h_min; h < h_max; h *= 2.0) scales.push_back(h);
  scales.push_back(h_max);
  return scales;
}

}  // namespace

nlohmann::json AvikainenReport::to_json() const {
  return {{"lhs", lhs},
          {"lhs_stderr", lhs_stderr},
          {"rhs", rhs},
          {"rhs_stderr", rhs_stderr},
          {"tolerance", tolerance},
          {"satisfied", satisfied},
          {"parameters",
           {{"p", p},
            {"q", q},
            {"alpha", alpha},
            {"holder_constant", holder_constant},
            {"total_mass", total_mass},
            {"total_variation", total_variation},
            {"lp_error", lp_error},
            {"holder_source", holder_source},
            {"samples", samples}}}};
}

double skorokhod_inverse(const EmpiricalCDF& F, double s) { return F.quantile(s); }

double skorokhod_inverse(const std::function<double(double)>& F, double s, double lo, double hi,
                         double tolerance) {
  if (!(s > 0.0 && s <= 1.0)) throw DomainError("skorokhod_inverse: s must lie in (0, 1]");
  if (!(F(hi) >= s)) throw DomainError("skorokhod_inverse: F(hi) < s, widen the bracket");
  if (F(lo) >= s) return lo;
  // Invariant: F(lo) < s <= F(hi).
  while (hi - lo > tolerance * std::max(1.0, std::abs(hi))) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (F(mid) >= s) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double avikainen_rhs(double holder_const, double alpha, double total_mass, double total_variation,
                     double p, double q, double lp_error) {
  require_bound_parameters(holder_const, alpha, p);
  if (!(q >= 1.0)) throw DomainError("q must be >= 1");
  if (!(total_mass >= 0.0) || !(total_variation >= 0.0) || !(lp_error >= 0.0)) {
    throw DomainError("avikainen_rhs: magnitudes must be nonnegative");
  }
  const double w = p / (p + alpha);
  return std::pow(3.0, q + 1.0) * std::pow(total_variation, q) * std::pow(holder_const, w) *
         std::pow(total_mass, w) * std::pow(lp_error, alpha / (p + alpha));
}

double key2_rhs(double holder_const, double alpha, double p, double lp_moment) {
  require_bound_parameters(holder_const, alpha, p);
  if (!(lp_moment >= 0.0)) throw DomainError("key2_rhs: moment must be nonnegative");
  return 3.0 * std::pow(holder_const, p / (p + alpha)) * std::pow(lp_moment, alpha / (p + alpha));
}

double indicator_diff_moment(std::span<const double> x, std::span<const double> xhat, double level,
                             double q) {
  require_paired(x, xhat);
  if (!(q >= 1.0)) throw DomainError("q must be >= 1");
  std::size_t flips = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if ((x[i] <= level) != (xhat[i] <= level)) ++flips;
  }
  return static_cast<double>(flips) / static_cast<double>(x.size());
}

double bv_diff_moment(const BVFunction& g, std::span<const double> x, std::span<const double> xhat,
                      double q) {
  require_paired(x, xhat);
  if (!(q >= 1.0)) throw DomainError("q must be >= 1");
  std::vector<double> terms(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) terms[i] = std::pow(std::abs(g(x[i]) - g(xhat[i])), q);
  return tree_sum(terms) / static_cast<double>(terms.size());
}

double default_holder_scale(const EmpiricalCDF& F) {
  return std::max(3.0 / static_cast<double>(F.size()), 2.0 * F.min_positive_gap());
}

HolderEstimate holder_estimate(const EmpiricalCDF& F, double alpha, double h_min, double h_max,
                               std::size_t grid_size) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("holder_estimate: alpha must lie in (0, 1]");
  if (grid_size < 2) throw DomainError("holder_estimate: grid_size must be >= 2");
  const auto scales = dyadic_ladder(h_min, h_max);
  const auto s = F.samples();
  const double m = static_cast<double>(s.size());

  double best = 0.0;
  for (double h : scales) {
    std::size_t j = 0;
    std::size_t most = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (i > 0 && s[i] == s[i - 1]) continue;
      if (j < i) j = i;
      while (j < s.size() && s[j] < s[i] + h) ++j;
      most = std::max(most, j - i);
    }
    best = std::max(best, static_cast<double>(most) / m / std::pow(h, alpha));
  }
  return {alpha, best, h_min, h_max};
}

HolderEstimate holder_estimate(const std::function<double(double)>& F, double alpha, double h_min,
                               double h_max, std::size_t grid_size, double x_lo, double x_hi) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("holder_estimate: alpha must lie in (0, 1]");
  if (grid_size < 2) throw DomainError("holder_estimate: grid_size must be >= 2");
  if (!(x_hi > x_lo)) throw DomainError("holder_estimate: need x_lo < x_hi");
  const auto scales = dyadic_ladder(h_min, h_max);
  double best = 0.0;
  for (double h : scales) {
    const double scale = std::pow(h, alpha);
    for (std::size_t i = 0; i < grid_size; ++i) {
      const double x = x_lo + (x_hi - x_lo) * static_cast<double>(i) / static_cast<double>(grid_size - 1);
      best = std::max(best, std::abs(F(x + h) - F(x)) / scale);
    }
  }
  return {alpha, best, h_min, h_max};
}

EmpiricalCDF time_avg_cdf(const PathEnsemble& paths) {
  std::vector<double> pooled;
  pooled.reserve(paths.size() * paths.grid().steps());
  for (std::size_t p = 0; p < paths.size(); ++p) {
    const auto v = paths.values(p);
    pooled.insert(pooled.end(), v.begin() + 1, v.end());
  }
  return EmpiricalCDF(std::move(pooled));
}

double discrete_local_time(std::span<const double> path, double level, double bandwidth,
                           std::span<const double> qv_increments) {
  if (!(bandwidth > 0.0)) throw DomainError("discrete_local_time: bandwidth must be positive");
  if (path.size() != qv_increments.size() + 1) {
    throw DomainError("discrete_local_time: need one quadratic-variation increment per step");
  }
  double occupation = 0.0;
  for (std::size_t k = 0; k < qv_increments.size(); ++k) {
    if (std::abs(path[k] - level) <= bandwidth) occupation += qv_increments[k];
  }
  return occupation / (2.0 * bandwidth);
}

AvikainenReport avikainen_check(const BVFunction& g, std::span<const double> x,
                                std::span<const double> xhat, double p, double q, double alpha,
                                const HolderSource& holder, double total_mass) {
  require_paired(x, xhat);
  if (!(q >= 1.0)) throw DomainError("q must be >= 1");
  if (!(total_mass > 0.0)) throw DomainError("total mass must be positive");

  AvikainenReport r;
  r.p = p;
  r.q = q;
  r.alpha = alpha;
  r.total_mass = total_mass;
  r.total_variation = g.total_variation();
  r.samples = x.size();

  if (const auto* a = std::get_if<AnalyticHolder>(&holder)) {
    r.holder_constant = a->constant;
    r.holder_source = "analytic";
  } else {
    const auto& e = std::get<EmpiricalHolder>(holder);
    r.holder_constant = holder_estimate(e.cdf, alpha, e.h_min, e.h_max, 2).constant;
    std::ostringstream src;
    src << "empirical[" << e.h_min << "," << e.h_max << "]";
    r.holder_source = src.str();
  }
  require_bound_parameters(r.holder_constant, alpha, p);

  std::vector<double> g_terms(x.size());
  std::vector<double> lp_terms(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    g_terms[i] = std::pow(std::abs(g(x[i]) - g(xhat[i])), q);
    lp_terms[i] = std::pow(std::abs(x[i] - xhat[i]), p);
  }
  const auto lhs = mean_and_error(g_terms);
  const auto lp = mean_and_error(lp_terms);

  // Sides are integrals against mu = total_mass * (sampling law).
  r.lhs = total_mass * lhs.mean;
  r.lhs_stderr = total_mass * lhs.std_error;
  r.lp_error = total_mass * lp.mean;
  const double holder_mu = total_mass * r.holder_constant;
  r.rhs = avikainen_rhs(holder_mu, alpha, total_mass, r.total_variation, p, q, r.lp_error);

  const double w = alpha / (p + alpha);
  if (r.lp_error > 0.0) r.rhs_stderr = r.rhs * w * (total_mass * lp.std_error) / r.lp_error;
  r.tolerance = 3.0 * std::hypot(r.lhs_stderr, r.rhs_stderr);
  r.satisfied = r.lhs <= r.rhs + r.tolerance;
  return r;
}

}  // namespace sdelab
