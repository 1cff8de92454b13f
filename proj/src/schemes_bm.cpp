#include "sdelab/schemes_bm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sdelab/core/quadrature.hpp"
#include "sdelab/errors.hpp"

namespace sdelab {
namespace {

void require_increments(const TimeGrid& grid, std::span<const double> increments) {
  if (increments.size() != grid.steps()) {
    std::ostringstream msg;
    msg << "expected " << grid.steps() << " increments, got " << increments.size();
    throw DomainError(msg.str());
  }
}

template <class Drift, class Diffusion>
Path euler(double x0, const TimeGrid& grid, std::span<const double> increments, const Drift& b,
           const Diffusion& sigma) {
  require_increments(grid, increments);
  const double dt = grid.step_size();
  Path path;
  path.values.reserve(grid.steps() + 1);
  path.values.push_back(x0);
  double x = x0;
  for (std::size_t k = 0; k < grid.steps(); ++k) {
    const double t = grid.node(k);
    x = x + b(t, x) * dt + sigma(t, x) * increments[k];
    if (!std::isfinite(x)) {
      path.diverged_at = k;
      return path;
    }
    path.values.push_back(x);
  }
  return path;
}

bool has_linear_growth(const Coefficient1D& c) {
  return c.bounds().linear_growth.has_value() || c.bounds().sup_bound.has_value();
}

}  // namespace

void validate(const EMConfig& cfg) {
  if (!std::isfinite(cfg.x0)) throw ValidationError("x0 must be finite");
  if (!(cfg.ell >= 0.0)) throw ValidationError("taming exponent ell must be >= 0");
  switch (cfg.taming) {
    case Taming::none:
      if (!has_linear_growth(cfg.drift) || !has_linear_growth(cfg.diffusion)) {
        throw ValidationError(
            "untamed Euler-Maruyama needs coefficients with declared linear growth or sup bound");
      }
      break;
    case Taming::drift_and_diffusion:
      if (!cfg.drift.bounds().growth_exponent && cfg.ell == 0.0) {
        throw ValidationError("taming the diffusion needs the drift growth exponent ell");
      }
      break;
    case Taming::drift_only:
      break;
  }
}

std::vector<double> brownian_increments(const TimeGrid& grid, CounterEngine& engine) {
  const double scale = std::sqrt(grid.step_size());
  std::vector<double> dB(grid.steps());
  for (auto& v : dB) v = scale * engine.normal();
  return dB;
}

Path em_path(const EMConfig& cfg, std::span<const double> increments) {
  return euler(cfg.x0, cfg.grid, increments, cfg.drift, cfg.diffusion);
}

std::pair<Coefficient1D, Coefficient1D> tamed_coefficients(const Coefficient1D& drift,
                                                           const Coefficient1D& diffusion,
                                                           std::size_t n, double ell, Taming mode) {
  if (n == 0) throw DomainError("tamed_coefficients: n must be >= 1");
  if (!(ell >= 0.0)) throw DomainError("tamed_coefficients: ell must be >= 0");
  if (mode == Taming::none || ell == 0.0) return {drift, diffusion};

  const double nd = static_cast<double>(n);
  const double drift_damp = 1.0 / std::sqrt(nd);
  CoefficientBounds drift_bounds = drift.bounds();
  drift_bounds.growth_exponent.reset();
  Coefficient1D tamed_drift(
      [drift, drift_damp, ell](double t, double x) {
        return drift(t, x) / (1.0 + drift_damp * std::pow(std::abs(x), ell));
      },
      drift_bounds, drift.time_independent(), drift.breakpoints());
  if (mode == Taming::drift_only) return {tamed_drift, diffusion};

  const double diffusion_damp = std::pow(nd, -0.25);
  CoefficientBounds diffusion_bounds = diffusion.bounds();
  diffusion_bounds.ellipticity_floor.reset();
  Coefficient1D tamed_diffusion(
      [diffusion, diffusion_damp, ell](double t, double x) {
        return diffusion(t, x) / (1.0 + diffusion_damp * std::pow(std::abs(x), 0.5 * ell));
      },
      diffusion_bounds, diffusion.time_independent(), diffusion.breakpoints());
  return {tamed_drift, tamed_diffusion};
}

Path tamed_em_path(const EMConfig& cfg, std::span<const double> increments) {
  const auto [b, sigma] =
      tamed_coefficients(cfg.drift, cfg.diffusion, cfg.grid.steps(), cfg.ell, cfg.taming);
  return euler(cfg.x0, cfg.grid, increments, b, sigma);
}

double theoretical_rate_main4(double p, double p0, double p1, double ell, double gamma) {
  if (!(ell >= 0.0)) throw DomainError("theoretical_rate_main4: ell must be >= 0");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw DomainError("theoretical_rate_main4: gamma in (0, 1]");
  const double p_max = p0 / (2.0 * ell + 1.0);
  if (!(p >= 2.0 && p <= p_max && p < p1)) {
    std::ostringstream msg;
    msg << "theoretical_rate_main4: p=" << p << " outside [2, " << p_max << "] cap [2, " << p1
        << ")";
    throw DomainError(msg.str());
  }
  const double r = gamma * (ell + 1.0) / (2.0 * p0 + ell + 2.0) * p0 / (p * (2.0 * ell + 1.0));
  return std::min(r, 0.25);
}

double theoretical_rate_main42(double alpha, double gamma, double rho, double p) {
  if (!(alpha >= 0.5 && alpha <= 1.0)) throw DomainError("theoretical_rate_main42: alpha in [1/2, 1]");
  if (!(gamma > 0.0 && gamma <= 1.0) || !(rho > 0.0 && rho <= 1.0)) {
    throw DomainError("theoretical_rate_main42: gamma, rho in (0, 1]");
  }
  if (!(p >= 1.0)) throw DomainError("theoretical_rate_main42: p >= 1");
  return std::min(gamma * (1.0 - rho) / 2.0, p * (2.0 * alpha - 1.0) / 2.0);
}

// ---------------------------------------------------------------------------
// Scale function

ScaleFunction::ScaleFunction(Coefficient1D drift, Coefficient1D diffusion, double tolerance)
    : drift_(std::move(drift)), diffusion_(std::move(diffusion)), tolerance_(tolerance) {
  if (!drift_.time_independent() || !diffusion_.time_independent()) {
    throw DomainError("ScaleFunction: coefficients must be time independent");
  }
}

double ScaleFunction::exponent_integral(double x) const {
  const double floor = diffusion_.bounds().ellipticity_floor.value_or(0.0);
  auto ratio = [&](double z) {
    const double s = diffusion_(0.0, z);
    const double s2 = s * s;
    if (!(s2 > 0.0) || s2 < floor * (1.0 - 1e-12)) {
      std::ostringstream msg;
      msg << "scale_function: sigma^2=" << s2 << " at z=" << z << " below ellipticity floor "
          << floor;
      throw DomainError(msg.str());
    }
    return drift_(0.0, z) / s2;
  };
  std::vector<double> cuts = drift_.breakpoints();
  cuts.insert(cuts.end(), diffusion_.breakpoints().begin(), diffusion_.breakpoints().end());
  return integrate(ratio, 0.0, x, tolerance_, cuts).value;
}

double ScaleFunction::derivative(double x) const { return std::exp(-2.0 * exponent_integral(x)); }

double ScaleFunction::operator()(double x) const {
  std::vector<double> cuts = drift_.breakpoints();
  cuts.insert(cuts.end(), diffusion_.breakpoints().begin(), diffusion_.breakpoints().end());
  return integrate([this](double y) { return derivative(y); }, 0.0, x, tolerance_, cuts).value;
}

double ScaleFunction::inverse(double y, double tolerance) const {
  if (!std::isfinite(y)) throw DomainError("ScaleFunction::inverse: non-finite argument");
  // phi(0) = 0 and phi is increasing; expand a bracket around the root.
  double lo = 0.0;
  double hi = 0.0;
  double step = 1.0;
  if (y > 0.0) {
    while ((*this)(hi) < y) {
      lo = hi;
      hi += step;
      step *= 2.0;
      if (hi > 1e12) throw DomainError("ScaleFunction::inverse: value outside the range of phi");
    }
  } else if (y < 0.0) {
    while ((*this)(lo) > y) {
      hi = lo;
      lo -= step;
      step *= 2.0;
      if (lo < -1e12) throw DomainError("ScaleFunction::inverse: value outside the range of phi");
    }
  } else {
    return 0.0;
  }
  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200 && hi - lo > tolerance * std::max(1.0, std::abs(x)); ++iter) {
    const double fx = (*this)(x) - y;
    if (fx == 0.0) return x;
    if (fx > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    // Newton proposal, kept only when it stays inside the bracket.
    const double newton = x - fx / derivative(x);
    x = (newton > lo && newton < hi) ? newton : 0.5 * (lo + hi);
    if (std::abs(fx) < tolerance * 1e-3) break;
  }
  return x;
}

Path scale_transformed_em_path(const EMConfig& cfg, const ScaleFunction& phi,
                               std::span<const double> increments) {
  require_increments(cfg.grid, increments);
  Path path;
  path.values.reserve(cfg.grid.steps() + 1);
  path.values.push_back(cfg.x0);
  double y = phi(cfg.x0);
  double x = cfg.x0;
  for (std::size_t k = 0; k < cfg.grid.steps(); ++k) {
    y += phi.derivative(x) * cfg.diffusion(0.0, x) * increments[k];
    if (!std::isfinite(y)) {
      path.diverged_at = k;
      return path;
    }
    x = phi.inverse(y);
    path.values.push_back(x);
  }
  return path;
}

// ---------------------------------------------------------------------------
// Atom measures and the F_nu transform

SignedAtomMeasure::SignedAtomMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  std::sort(atoms_.begin(), atoms_.end(),
            [](const Atom& a, const Atom& b) { return a.location < b.location; });
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const auto& a = atoms_[i];
    if (!std::isfinite(a.location)) throw DomainError("SignedAtomMeasure: non-finite location");
    if (!(std::abs(a.weight) < 1.0)) {
      std::ostringstream msg;
      msg << "SignedAtomMeasure: |nu({" << a.location << "})| = " << std::abs(a.weight)
          << " >= 1; no strong solution exists in this regime";
      throw DomainError(msg.str());
    }
    if (i > 0 && atoms_[i - 1].location == a.location) {
      throw DomainError("SignedAtomMeasure: atom locations must be distinct");
    }
  }
}

double SignedAtomMeasure::total_variation() const {
  double v = 0.0;
  for (const auto& a : atoms_) v += std::abs(a.weight);
  return v;
}

AtomTransform::AtomTransform(SignedAtomMeasure nu) : nu_(std::move(nu)) {
  const auto atoms = nu_.atoms();
  slope_.push_back(1.0);
  for (const auto& a : atoms) {
    locations_.push_back(a.location);
    slope_.push_back(slope_.back() * (1.0 - a.weight) / (1.0 + a.weight));
  }
  for (double s : slope_) {
    lower_ = std::min(lower_, s);
    upper_ = std::max(upper_, s);
  }
  // Primitive anchored at the first atom, then shifted so that F(0) = 0.
  F_at_.assign(locations_.size(), 0.0);
  for (std::size_t i = 1; i < locations_.size(); ++i) {
    F_at_[i] = F_at_[i - 1] + slope_[i] * (locations_[i] - locations_[i - 1]);
  }
  if (!locations_.empty()) {
    const std::size_t seg = segment(0.0);
    const double at_zero = seg == 0 ? F_at_[0] + (0.0 - locations_[0])
                                    : F_at_[seg - 1] + slope_[seg] * (0.0 - locations_[seg - 1]);
    for (double& v : F_at_) v -= at_zero;
  }
}

std::size_t AtomTransform::segment(double x) const {
  return static_cast<std::size_t>(std::upper_bound(locations_.begin(), locations_.end(), x) -
                                  locations_.begin());
}

double AtomTransform::f(double x) const { return slope_[segment(x)]; }

double AtomTransform::F(double x) const {
  if (locations_.empty()) return x;
  const std::size_t seg = segment(x);
  if (seg == 0) return F_at_[0] + (x - locations_[0]);
  return F_at_[seg - 1] + slope_[seg] * (x - locations_[seg - 1]);
}

double AtomTransform::F_inverse(double y) const {
  if (locations_.empty()) return y;
  // F_at_ is increasing because every slope is positive.
  const auto seg = static_cast<std::size_t>(std::upper_bound(F_at_.begin(), F_at_.end(), y) -
                                            F_at_.begin());
  if (seg == 0) return locations_[0] + (y - F_at_[0]);
  return locations_[seg - 1] + (y - F_at_[seg - 1]) / slope_[seg];
}

double f_nu(const SignedAtomMeasure& nu, double x) { return AtomTransform(nu).f(x); }
double F_nu(const SignedAtomMeasure& nu, double x) { return AtomTransform(nu).F(x); }
double F_nu_inverse(const SignedAtomMeasure& nu, double y) { return AtomTransform(nu).F_inverse(y); }

SingularPath singular_sde_scheme(const Coefficient1D& diffusion, const AtomTransform& transform,
                                 double x0, const TimeGrid& grid,
                                 std::span<const double> increments) {
  require_increments(grid, increments);
  SingularPath out;
  out.y.reserve(grid.steps() + 1);
  out.x.values.reserve(grid.steps() + 1);
  double y = transform.F(x0);
  double x = transform.F_inverse(y);
  out.y.push_back(y);
  out.x.values.push_back(x);
  for (std::size_t k = 0; k < grid.steps(); ++k) {
    const double t = grid.node(k);
    y += transform.f(x) * diffusion(t, x) * increments[k];
    if (!std::isfinite(y)) {
      out.x.diverged_at = k;
      return out;
    }
    x = transform.F_inverse(y);
    out.y.push_back(y);
    out.x.values.push_back(x);
  }
  return out;
}

double discrete_max(std::span<const double> path) {
  if (path.empty()) throw DomainError("discrete_max: empty path");
  return *std::max_element(path.begin(), path.end());
}

CoupledSystemPath coupled_system_em(const CoupledSystem& sys, const TimeGrid& grid,
                                    std::span<const double> db, std::span<const double> dw) {
  require_increments(grid, db);
  require_increments(grid, dw);
  const double dt = grid.step_size();
  CoupledSystemPath out;
  out.x.values.reserve(grid.steps() + 1);
  out.y.values.reserve(grid.steps() + 1);
  double x = sys.x0;
  double y = sys.y0;
  out.x.values.push_back(x);
  out.y.values.push_back(y);
  for (std::size_t k = 0; k < grid.steps(); ++k) {
    const double t = grid.node(k);
    const double x_next = x + sys.drift(t, x) * dt + sys.diffusion(t, x) * db[k];
    const double y_next = y + sys.mu(t, x, y) * dt + sys.rho1(t, x, y) * db[k] + sys.rho2(t, x, y) * dw[k];
    if (!std::isfinite(x_next) || !std::isfinite(y_next)) {
      out.x.diverged_at = k;
      out.y.diverged_at = k;
      return out;
    }
    x = x_next;
    y = y_next;
    out.x.values.push_back(x);
    out.y.values.push_back(y);
  }
  return out;
}

CoupledPaths coupled_em_paths(const EMConfig& fine_cfg, std::size_t factor,
                              std::span<const double> fine_increments) {
  if (factor == 0 || fine_cfg.grid.steps() % factor != 0) {
    throw DomainError("coupled_em_paths: factor must divide the fine step count");
  }
  CoupledPaths out;
  out.factor = factor;
  out.fine_increments.assign(fine_increments.begin(), fine_increments.end());
  out.coarse_increments = coarsen_increments(fine_increments, factor);
  EMConfig coarse_cfg = fine_cfg;
  coarse_cfg.grid = TimeGrid(fine_cfg.grid.horizon(), fine_cfg.grid.steps() / factor);
  if (fine_cfg.taming == Taming::none) {
    out.fine = em_path(fine_cfg, out.fine_increments);
    out.coarse = em_path(coarse_cfg, out.coarse_increments);
  } else {
    out.fine = tamed_em_path(fine_cfg, out.fine_increments);
    out.coarse = tamed_em_path(coarse_cfg, out.coarse_increments);
  }
  return out;
}

}  // namespace sdelab
