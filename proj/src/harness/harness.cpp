#include "sdelab/harness/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include "sdelab/core/parallel.hpp"
#include "sdelab/errors.hpp"
#include "sdelab/schemes_bm.hpp"

namespace sdelab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_ns(std::span<const std::size_t> ns) {
  if (ns.empty()) throw DomainError("harness: empty n list");
  for (std::size_t k = 0; k < ns.size(); ++k) {
    if (ns[k] == 0) throw DomainError("harness: n must be positive");
    if (k > 0 && ns[k] <= ns[k - 1]) throw DomainError("harness: n list must be strictly increasing");
  }
}

/// Runs body(path, engine, row) for every path; row holds one value per
/// column, NaN meaning "excluded". Returns column-major samples.
std::vector<std::vector<double>> run_paths(
    std::size_t columns, const RunOptions& options,
    const std::function<void(std::size_t, CounterEngine&, std::span<double>)>& body) {
  if (options.paths == 0) throw DomainError("harness: need at least one path");
  const std::size_t M = options.paths;
  std::vector<double> table(M * columns, kNaN);
  const RngStream root(options.seed);
  parallel_for(M, options.threads, [&](std::size_t path) {
    CounterEngine engine(root.split(path));
    body(path, engine, std::span<double>(table.data() + path * columns, columns));
  });
  std::vector<std::vector<double>> out(columns);
  for (std::size_t c = 0; c < columns; ++c) {
    out[c].reserve(M);
    for (std::size_t p = 0; p < M; ++p) out[c].push_back(table[p * columns + c]);
  }
  return out;
}

struct Filtered {
  std::vector<double> values;
  std::size_t diverged = 0;
};

Filtered filter(const std::vector<double>& column, const RunOptions& options, std::size_t n) {
  Filtered f;
  f.values.reserve(column.size());
  for (double v : column) {
    if (std::isfinite(v)) f.values.push_back(v);
    else ++f.diverged;
  }
  const double limit = options.max_divergence * static_cast<double>(column.size());
  if (static_cast<double>(f.diverged) > limit || f.values.empty()) {
    std::ostringstream msg;
    msg << "run failure: " << f.diverged << " of " << column.size() << " paths diverged at n = " << n
        << " (threshold " << options.max_divergence * 100.0 << "%)";
    throw RunFailure(msg.str());
  }
  return f;
}

ErrorCurve make_curve(ErrorType type, const RunOptions& options) {
  ErrorCurve c;
  c.type = type;
  c.seed = options.seed;
  c.scheme_id = options.scheme_id;
  c.config_hash = options.config_hash;
  return c;
}

std::size_t coarsening(const ReferenceDraw& draw, std::size_t n) {
  const std::size_t N = draw.grid.steps();
  if (N % n != 0) throw DomainError("harness: reference grid does not refine n");
  return N / n;
}

double bridge_max(double a, double b, double dt, double u) {
  const double d = b - a;
  return 0.5 * (a + b + std::sqrt(d * d - 2.0 * dt * std::log(u)));
}

}  // namespace

std::string to_string(ErrorType type) {
  switch (type) {
    case ErrorType::strong_sup: return "strong-sup";
    case ErrorType::strong_terminal: return "strong-terminal";
    case ErrorType::weak: return "weak";
    case ErrorType::time_avg_bv: return "time-averaged-BV";
    case ErrorType::max_functional: return "max-functional";
  }
  return "unknown";
}

ErrorType error_type_from_string(const std::string& name) {
  for (auto t : {ErrorType::strong_sup, ErrorType::strong_terminal, ErrorType::weak,
                 ErrorType::time_avg_bv, ErrorType::max_functional})
    if (to_string(t) == name) return t;
  throw ValidationError("unknown error type '" + name + "'");
}

std::vector<double> ErrorCurve::ns() const {
  std::vector<double> v;
  for (const auto& p : points) v.push_back(static_cast<double>(p.n));
  return v;
}

std::vector<double> ErrorCurve::errors() const {
  std::vector<double> v;
  for (const auto& p : points) v.push_back(p.error);
  return v;
}

std::vector<double> ErrorCurve::std_errors() const {
  std::vector<double> v;
  for (const auto& p : points) v.push_back(p.std_error);
  return v;
}

bool ErrorCurve::nonincreasing(double slack) const {
  for (std::size_t k = 1; k < points.size(); ++k) {
    const auto& a = points[k - 1];
    const auto& b = points[k];
    if (b.error > a.error + slack * std::hypot(a.std_error, b.std_error)) return false;
  }
  return true;
}

void check_invariants(const ErrorCurve& curve) {
  for (std::size_t k = 0; k < curve.points.size(); ++k) {
    const auto& p = curve.points[k];
    if (!(p.error >= 0.0) || !(p.std_error >= 0.0)) throw DomainError("error curve: negative entry");
    if (k > 0 && p.n <= curve.points[k - 1].n) throw DomainError("error curve: n not increasing");
  }
}

ReferenceFactory self_reference(SchemeFactory scheme, double horizon, std::size_t refine,
                                std::function<std::vector<double>(const TimeGrid&, CounterEngine&)> noise) {
  if (refine == 0) throw DomainError("self_reference: refine >= 1");
  return [scheme = std::move(scheme), horizon, refine, noise = std::move(noise)](
             std::size_t finest, CounterEngine& engine) {
    ReferenceDraw draw;
    draw.grid = TimeGrid(horizon, finest * refine);
    draw.increments = noise(draw.grid, engine);
    draw.path = scheme(draw.grid.steps(), draw);
    return draw;
  };
}

ReferenceFactory brownian_reference(double x0, double horizon, std::size_t refine) {
  if (refine == 0) throw DomainError("brownian_reference: refine >= 1");
  return [x0, horizon, refine](std::size_t finest, CounterEngine& engine) {
    ReferenceDraw draw;
    draw.grid = TimeGrid(horizon, finest * refine);
    draw.increments = brownian_increments(draw.grid, engine);
    draw.path.values = cumulate(x0, draw.increments);
    const double dt = draw.grid.step_size();
    double best = -std::numeric_limits<double>::infinity();
    const auto& v = draw.path.values;
    for (std::size_t k = 0; k + 1 < v.size(); ++k)
      best = std::max(best, bridge_max(v[k], v[k + 1], dt, engine.uniform()));
    draw.running_max = best;
    return draw;
  };
}

SchemeFactory coarsened_scheme(std::function<Path(const TimeGrid&, std::span<const double>)> scheme) {
  return [scheme = std::move(scheme)](std::size_t n, const ReferenceDraw& draw) {
    const std::size_t factor = coarsening(draw, n);
    const TimeGrid grid(draw.grid.horizon(), n);
    if (factor == 1) return scheme(grid, draw.increments);
    const auto inc = coarsen_increments(draw.increments, factor);
    return scheme(grid, inc);
  };
}

ErrorCurve strong_error(const SchemeFactory& scheme, const ReferenceFactory& reference,
                        std::span<const std::size_t> ns, double p, StrongMode mode,
                        const RunOptions& options) {
  check_ns(ns);
  if (!(p > 0.0)) throw DomainError("strong_error: p must be positive");
  const std::size_t finest = ns.back();
  auto columns = run_paths(ns.size(), options, [&](std::size_t, CounterEngine& engine, std::span<double> row) {
    const ReferenceDraw draw = reference(finest, engine);
    if (draw.path.diverged()) return;
    for (std::size_t k = 0; k < ns.size(); ++k) {
      const std::size_t factor = coarsening(draw, ns[k]);
      const Path x = scheme(ns[k], draw);
      if (x.diverged() || x.values.size() != ns[k] + 1) continue;
      double err = 0.0;
      if (mode == StrongMode::terminal) {
        err = std::abs(x.values.back() - draw.path.values.back());
      } else {
        for (std::size_t j = 0; j <= ns[k]; ++j)
          err = std::max(err, std::abs(x.values[j] - draw.path.values[j * factor]));
      }
      const double v = std::pow(err, p);
      if (std::isfinite(v)) row[k] = v;
    }
  });
  ErrorCurve curve = make_curve(mode == StrongMode::sup ? ErrorType::strong_sup : ErrorType::strong_terminal,
                                options);
  for (std::size_t k = 0; k < ns.size(); ++k) {
    const auto f = filter(columns[k], options, ns[k]);
    const auto s = mean_and_error(f.values);
    ErrorPoint pt;
    pt.n = ns[k];
    pt.moment = p;
    pt.paths = f.values.size();
    pt.diverged = f.diverged;
    pt.error = s.mean > 0.0 ? std::pow(s.mean, 1.0 / p) : 0.0;
    pt.std_error = s.mean > 0.0 ? pt.error / (p * s.mean) * s.std_error : 0.0;
    curve.points.push_back(pt);
  }
  return curve;
}

ErrorCurve weak_error(const SchemeFactory& scheme, const ReferenceFactory& reference,
                      const std::function<double(double)>& payoff,
                      std::span<const std::size_t> ns, const RunOptions& options,
                      std::optional<double> exact) {
  check_ns(ns);
  const std::size_t finest = ns.back();
  auto columns = run_paths(ns.size(), options, [&](std::size_t, CounterEngine& engine, std::span<double> row) {
    const ReferenceDraw draw = reference(finest, engine);
    if (!exact && draw.path.diverged()) return;
    const double target = exact ? *exact : payoff(draw.path.values.back());
    for (std::size_t k = 0; k < ns.size(); ++k) {
      const Path x = scheme(ns[k], draw);
      if (x.diverged()) continue;
      row[k] = payoff(x.values.back()) - target;
    }
  });
  ErrorCurve curve = make_curve(ErrorType::weak, options);
  for (std::size_t k = 0; k < ns.size(); ++k) {
    const auto f = filter(columns[k], options, ns[k]);
    const auto s = mean_and_error(f.values);
    ErrorPoint pt;
    pt.n = ns[k];
    pt.paths = f.values.size();
    pt.diverged = f.diverged;
    pt.error = std::abs(s.mean);
    pt.std_error = s.std_error;
    curve.points.push_back(pt);
  }
  return curve;
}

IntervalSampler brownian_interval_sampler(double x0, double horizon) {
  return [x0, horizon](std::size_t n, double s, CounterEngine& engine) {
    const TimeGrid grid(horizon, n);
    const double eta = grid.eta(s);
    const double y_eta = x0 + std::sqrt(eta) * engine.normal();
    const double y_s = y_eta + std::sqrt(s - eta) * engine.normal();
    return std::make_pair(y_eta, y_s);
  };
}

IntervalSampler em_interval_sampler(std::function<double(double, double)> drift,
                                    std::function<double(double, double)> diffusion, double x0,
                                    double horizon) {
  return [drift = std::move(drift), diffusion = std::move(diffusion), x0, horizon](
             std::size_t n, double s, CounterEngine& engine) {
    const TimeGrid grid(horizon, n);
    const std::size_t cell = grid.cell(s);
    const double dt = grid.step_size();
    double x = x0;
    for (std::size_t k = 0; k < cell; ++k) {
      const double t = grid.node(k);
      x += drift(t, x) * dt + diffusion(t, x) * std::sqrt(dt) * engine.normal();
    }
    const double t = grid.node(cell);
    const double h = s - t;
    const double xs = x + drift(t, x) * h + diffusion(t, x) * std::sqrt(h) * engine.normal();
    return std::make_pair(x, xs);
  };
}

ErrorCurve time_avg_bv_error(const IntervalSampler& sampler, const BVFunction& g, double horizon,
                             std::span<const std::size_t> ns, double q, const RunOptions& options) {
  check_ns(ns);
  if (!(q > 0.0)) throw DomainError("time_avg_bv_error: q must be positive");
  if (!(horizon > 0.0)) throw DomainError("time_avg_bv_error: horizon must be positive");
  auto columns = run_paths(ns.size(), options, [&](std::size_t, CounterEngine& engine, std::span<double> row) {
    const double s = horizon * engine.uniform();
    for (std::size_t k = 0; k < ns.size(); ++k) {
      const auto [y_eta, y_s] = sampler(ns[k], s, engine);
      const double v = horizon * std::pow(std::abs(g(y_s) - g(y_eta)), q);
      if (std::isfinite(v)) row[k] = v;
    }
  });
  ErrorCurve curve = make_curve(ErrorType::time_avg_bv, options);
  for (std::size_t k = 0; k < ns.size(); ++k) {
    const auto f = filter(columns[k], options, ns[k]);
    const auto s = mean_and_error(f.values);
    ErrorPoint pt;
    pt.n = ns[k];
    pt.moment = q;
    pt.paths = f.values.size();
    pt.diverged = f.diverged;
    pt.error = s.mean;
    pt.std_error = s.std_error;
    curve.points.push_back(pt);
  }
  return curve;
}

std::pair<ErrorCurve, BoundComparison> max_functional_error(
    const SchemeFactory& scheme, const ReferenceFactory& reference, const BVFunction& g,
    std::span<const std::size_t> ns, double p, double q, double alpha, const RunOptions& options) {
  check_ns(ns);
  if (!(p > 0.0) || !(q > 0.0) || !(alpha > 0.0 && alpha <= 1.0))
    throw DomainError("max_functional_error: need p, q > 0 and alpha in (0, 1]");
  const std::size_t finest = ns.back();
  auto columns = run_paths(ns.size(), options, [&](std::size_t, CounterEngine& engine, std::span<double> row) {
    const ReferenceDraw draw = reference(finest, engine);
    if (draw.path.diverged()) return;
    const double ref_max = draw.running_max ? *draw.running_max : discrete_max(draw.path.values);
    const double g_ref = g(ref_max);
    for (std::size_t k = 0; k < ns.size(); ++k) {
      const Path x = scheme(ns[k], draw);
      if (x.diverged()) continue;
      row[k] = std::pow(std::abs(g_ref - g(discrete_max(x.values))), q);
    }
  });
  ErrorCurve curve = make_curve(ErrorType::max_functional, options);
  for (std::size_t k = 0; k < ns.size(); ++k) {
    const auto f = filter(columns[k], options, ns[k]);
    const auto s = mean_and_error(f.values);
    ErrorPoint pt;
    pt.n = ns[k];
    pt.moment = q;
    pt.paths = f.values.size();
    pt.diverged = f.diverged;
    pt.error = s.mean;
    pt.std_error = s.std_error;
    curve.points.push_back(pt);
  }
  BoundComparison bound;
  bound.exponent = p * alpha / (2.0 * (p + alpha));
  double log_sum = 0.0;
  std::size_t used = 0;
  for (const auto& pt : curve.points) {
    const double n = static_cast<double>(pt.n);
    const double shape = n > 1.0 ? std::pow(std::log(n) / n, bound.exponent) : 1.0;
    bound.shape.push_back(shape);
    if (pt.error > 0.0) {
      log_sum += std::log(pt.error / shape);
      ++used;
    }
  }
  bound.constant = used ? std::exp(log_sum / static_cast<double>(used)) : 0.0;
  for (std::size_t k = 0; k < curve.points.size(); ++k) {
    if (bound.constant > 0.0)
      bound.max_ratio = std::max(bound.max_ratio, curve.points[k].error / (bound.constant * bound.shape[k]));
  }
  return {std::move(curve), std::move(bound)};
}

MlmcReport mlmc_estimate(const MlmcProblem& problem, std::span<const std::size_t> paths_per_level,
                         const RunOptions& options) {
  if (problem.levels == 0 || paths_per_level.size() != problem.levels)
    throw DomainError("mlmc_estimate: need one path count per level");
  if (problem.base_steps == 0) throw DomainError("mlmc_estimate: n_0 >= 1");
  if (!problem.scheme || !problem.payoff || !problem.noise)
    throw DomainError("mlmc_estimate: scheme, payoff and noise must be set");

  const RngStream root(options.seed);
  auto run_level = [&](std::size_t level, std::size_t M, const RngStream& stream, bool coupled) {
    const std::size_t n = problem.base_steps << level;
    const TimeGrid fine(problem.horizon, n);
    std::vector<double> samples(M, kNaN);
    parallel_for(M, options.threads, [&](std::size_t path) {
      CounterEngine engine(stream.split(path));
      const auto inc = problem.noise(fine, engine);
      const Path xf = problem.scheme(fine, inc);
      if (xf.diverged()) return;
      double y = problem.payoff(xf);
      if (coupled && level > 0) {
        const TimeGrid coarse(problem.horizon, n / 2);
        const auto cinc = coarsen_increments(inc, 2);
        const Path xc = problem.scheme(coarse, cinc);
        if (xc.diverged()) return;
        y -= problem.payoff(xc);
      }
      samples[path] = y;
    });
    MlmcLevel out;
    out.level = level;
    out.n = n;
    std::vector<double> kept;
    kept.reserve(M);
    for (double v : samples) {
      if (std::isfinite(v)) kept.push_back(v);
      else ++out.diverged;
    }
    if (kept.empty()) throw RunFailure("mlmc_estimate: every path diverged on level " + std::to_string(level));
    const auto s = mean_and_error(kept);
    out.mean = s.mean;
    out.variance = s.variance;
    out.std_error = s.std_error;
    out.paths = kept.size();
    return out;
  };

  MlmcReport report;
  report.seed = options.seed;
  report.scheme_id = options.scheme_id;
  report.config_hash = options.config_hash;
  double se2 = 0.0;
  std::vector<double> means;
  for (std::size_t l = 0; l < problem.levels; ++l) {
    if (paths_per_level[l] == 0) throw DomainError("mlmc_estimate: level path count must be positive");
    report.levels.push_back(run_level(l, paths_per_level[l], root.split(l), true));
    means.push_back(report.levels.back().mean);
    se2 += report.levels.back().std_error * report.levels.back().std_error;
  }
  report.estimate = tree_sum(means);
  report.std_error = std::sqrt(se2);
  if (problem.levels == 1) {
    report.single_level_mean = report.levels[0].mean;
    report.single_level_std_error = report.levels[0].std_error;
  } else {
    const auto plain = run_level(problem.levels - 1, paths_per_level.back(),
                                 root.split(0xFFFFFFFFull), false);
    report.single_level_mean = plain.mean;
    report.single_level_std_error = plain.std_error;
  }
  report.telescoping_ok = std::abs(report.estimate - report.single_level_mean) <=
                          3.0 * std::hypot(report.std_error, report.single_level_std_error);
  return report;
}

std::string to_string(RateModel model) {
  switch (model) {
    case RateModel::power: return "power";
    case RateModel::log: return "log";
    case RateModel::automatic: return "auto";
  }
  return "unknown";
}

double RateFit::predict(double n) const {
  if (model == RateModel::log) return constant * std::pow(std::log(n), -exponent);
  return constant * std::pow(n, -exponent);
}

RateFit fit_rate(std::span<const double> ns, std::span<const double> errors, RateModel model) {
  if (ns.size() != errors.size()) throw DomainError("fit_rate: size mismatch");
  if (ns.size() < 3) throw DomainError("fit_rate: need at least 3 points");
  for (double e : errors)
    if (!(e > 0.0) || !std::isfinite(e)) throw DomainError("fit_rate: errors must be positive");
  if (model == RateModel::automatic) {
    const RateFit a = fit_rate(ns, errors, RateModel::power);
    const RateFit b = fit_rate(ns, errors, RateModel::log);
    return b.r_squared > a.r_squared ? b : a;
  }
  const std::size_t k = ns.size();
  std::vector<double> x(k), y(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (!(ns[i] > (model == RateModel::log ? 1.0 : 0.0)))
      throw DomainError("fit_rate: n out of range for the model");
    x[i] = model == RateModel::log ? std::log(std::log(ns[i])) : std::log(ns[i]);
    y[i] = std::log(errors[i]);
  }
  const double xm = tree_sum(x) / double(k);
  const double ym = tree_sum(y) / double(k);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (x[i] - xm) * (x[i] - xm);
    sxy += (x[i] - xm) * (y[i] - ym);
    syy += (y[i] - ym) * (y[i] - ym);
  }
  if (!(sxx > 0.0)) throw DomainError("fit_rate: n values must not all coincide");
  const double slope = sxy / sxx;
  const double intercept = ym - slope * xm;
  RateFit fit;
  fit.model = model;
  fit.exponent = -slope;
  fit.constant = std::exp(intercept);
  for (std::size_t i = 0; i < k; ++i) {
    const double r = y[i] - (intercept + slope * x[i]);
    fit.rss += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - fit.rss / syy : 1.0;
  return fit;
}

RateFit fit_rate(const ErrorCurve& curve, RateModel model) {
  const auto n = curve.ns();
  const auto e = curve.errors();
  return fit_rate(n, e, model);
}

ErrorCurve she_weak_error(const std::function<SheConfig(std::size_t m, std::size_t n)>& config,
                          const std::function<double(double)>& payoff, double x, double target,
                          std::span<const LatticeErrorRequest> grid, const RunOptions& options) {
  if (grid.empty()) throw DomainError("she_weak_error: empty grid");
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (grid[k].n <= grid[k - 1].n) throw DomainError("she_weak_error: n must strictly increase");
  std::vector<SheConfig> configs;
  for (const auto& g : grid) {
    configs.push_back(config(g.m, g.n));
    validate(configs.back());
  }
  auto columns = run_paths(grid.size(), options, [&](std::size_t, CounterEngine& engine, std::span<double> row) {
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const auto run = she_simulate(configs[k], engine);
      if (run.diverged_at) continue;
      row[k] = payoff(run.field.interpolate(configs[k].horizon, x)) - target;
    }
  });
  ErrorCurve curve = make_curve(ErrorType::weak, options);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto f = filter(columns[k], options, grid[k].n);
    const auto s = mean_and_error(f.values);
    ErrorPoint pt;
    pt.n = grid[k].n;
    pt.m = grid[k].m;
    pt.paths = f.values.size();
    pt.diverged = f.diverged;
    pt.error = std::abs(s.mean);
    pt.std_error = s.std_error;
    curve.points.push_back(pt);
  }
  return curve;
}

nlohmann::json to_json(const ErrorCurve& curve) {
  nlohmann::json j;
  j["type"] = to_string(curve.type);
  j["seed"] = curve.seed;
  j["scheme_id"] = curve.scheme_id;
  j["config_hash"] = curve.config_hash;
  j["points"] = nlohmann::json::array();
  for (const auto& p : curve.points) {
    j["points"].push_back({{"n", p.n},
                           {"m", p.m},
                           {"error", p.error},
                           {"stderr", p.std_error},
                           {"paths", p.paths},
                           {"diverged", p.diverged},
                           {"moment", p.moment}});
  }
  return j;
}

ErrorCurve error_curve_from_json(const nlohmann::json& j) {
  ErrorCurve c;
  c.type = error_type_from_string(j.at("type").get<std::string>());
  c.seed = j.at("seed").get<std::uint64_t>();
  c.scheme_id = j.value("scheme_id", "");
  c.config_hash = j.value("config_hash", "");
  for (const auto& p : j.at("points")) {
    ErrorPoint pt;
    pt.n = p.at("n").get<std::size_t>();
    pt.m = p.value("m", std::size_t{0});
    pt.error = p.at("error").get<double>();
    pt.std_error = p.at("stderr").get<double>();
    pt.paths = p.at("paths").get<std::size_t>();
    pt.diverged = p.value("diverged", std::size_t{0});
    pt.moment = p.value("moment", 1.0);
    c.points.push_back(pt);
  }
  return c;
}

nlohmann::json to_json(const RateFit& fit) {
  return {{"model", to_string(fit.model)},
          {"constant", fit.constant},
          {"exponent", fit.exponent},
          {"rss", fit.rss},
          {"r_squared", fit.r_squared}};
}

nlohmann::json to_json(const MlmcReport& report) {
  nlohmann::json j;
  j["seed"] = report.seed;
  j["scheme_id"] = report.scheme_id;
  j["config_hash"] = report.config_hash;
  j["estimate"] = report.estimate;
  j["stderr"] = report.std_error;
  j["single_level_mean"] = report.single_level_mean;
  j["single_level_stderr"] = report.single_level_std_error;
  j["telescoping_ok"] = report.telescoping_ok;
  j["levels"] = nlohmann::json::array();
  for (const auto& l : report.levels) {
    j["levels"].push_back({{"level", l.level},
                           {"n", l.n},
                           {"mean", l.mean},
                           {"variance", l.variance},
                           {"stderr", l.std_error},
                           {"paths", l.paths},
                           {"diverged", l.diverged}});
  }
  return j;
}

void write_csv(std::ostream& out, const ErrorCurve& curve) {
  out << "n,m,error,stderr,paths,diverged,moment,type\n";
  out.precision(17);
  for (const auto& p : curve.points)
    out << p.n << ',' << p.m << ',' << p.error << ',' << p.std_error << ',' << p.paths << ','
        << p.diverged << ',' << p.moment << ',' << to_string(curve.type) << '\n';
}

void write_csv(std::ostream& out, const MlmcReport& report) {
  out << "level,n,mean,variance,stderr,paths,diverged\n";
  out.precision(17);
  for (const auto& l : report.levels)
    out << l.level << ',' << l.n << ',' << l.mean << ',' << l.variance << ',' << l.std_error << ','
        << l.paths << ',' << l.diverged << '\n';
}

std::string config_hash(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace sdelab
