#include "sdelab/cli/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>

#include "sdelab/avikainen.hpp"
#include "sdelab/cli/expression.hpp"
#include "sdelab/cli/presets.hpp"
#include "sdelab/core/ecdf.hpp"
#include "sdelab/core/parallel.hpp"
#include "sdelab/errors.hpp"
#include "sdelab/fbm.hpp"
#include "sdelab/schemes_bm.hpp"
#include "sdelab/stable.hpp"

namespace sdelab {

namespace {

Coefficient1D make_coefficient(const std::string& src, const ModelBlock& m, bool diffusion) {
  const Expression e = Expression::parse(src);
  if (e.uses('u') || e.uses('y'))
    throw ValidationError("coefficient '" + src + "' may only depend on x and t");
  CoefficientBounds b;
  double c = 0.0;
  if (e.is_constant(&c)) {
    b.sup_bound = std::abs(c);
    if (diffusion) b.ellipticity_floor = c * c;
  }
  if (diffusion) {
    if (m.diffusion_bound) b.sup_bound = *m.diffusion_bound;
    if (m.ellipticity) b.ellipticity_floor = *m.ellipticity;
  } else {
    if (m.drift_bound) b.sup_bound = *m.drift_bound;
    b.growth_exponent = m.growth_exponent;
    b.linear_growth = m.linear_growth;
  }
  return Coefficient1D([e](double t, double x) { return e(x, t); }, b, !e.uses('t'));
}

void check_bounds(const Coefficient1D& c, double horizon, bool diffusion) {
  std::vector<std::pair<double, double>> pts;
  for (double t : {0.0, 0.5 * horizon, horizon})
    for (int k = -200; k <= 200; ++k) pts.emplace_back(t, 0.05 * k);
  c.check_declared_bounds(pts, diffusion);
}

class FbmSamplers {
 public:
  explicit FbmSamplers(double hurst) : hurst_(hurst) {}

  std::shared_ptr<const FbmSampler> get(const TimeGrid& grid) {
    std::lock_guard<std::mutex> lock(mu_);
    auto& slot = by_steps_[grid.steps()];
    if (!slot) {
      const auto method = grid.steps() > 512 ? FbmSampler::Method::circulant : FbmSampler::Method::cholesky;
      slot = std::make_shared<const FbmSampler>(hurst_, grid, method);
    }
    return slot;
  }

 private:
  double hurst_;
  std::mutex mu_;
  std::map<std::size_t, std::shared_ptr<const FbmSampler>> by_steps_;
};

std::string fmt(double v) {
  std::ostringstream o;
  o.precision(4);
  o << v;
  return o.str();
}

struct Report {
  nlohmann::json json;
  std::string csv;
  std::string summary;
};

std::string curve_csv(const ErrorCurve& c) {
  std::ostringstream o;
  write_csv(o, c);
  return o.str();
}

std::string describe_fit(const RateFit& f) {
  return to_string(f.model) + " rate " + fmt(f.exponent) + " (C = " + fmt(f.constant) + ", R^2 = " + fmt(f.r_squared) + ")";
}

Report finish_curve(const ErrorCurve& curve, const BuiltModel& model, const std::string& label) {
  Report r;
  r.json["curve"] = to_json(curve);
  r.csv = curve_csv(curve);
  std::string fitted = "fit n/a";
  bool verdict = curve.nonincreasing(2.0);
  bool positive = curve.points.size() >= 3;
  for (const auto& p : curve.points) positive = positive && p.error > 0.0;
  if (positive && curve.points.front().n > 1) {
    const RateFit power = fit_rate(curve, RateModel::power);
    const RateFit log = fit_rate(curve, RateModel::log);
    const RateFit best = log.r_squared > power.r_squared ? log : power;
    r.json["fit"] = {{"power", to_json(power)}, {"log", to_json(log)}, {"selected", to_string(best.model)}};
    fitted = "fitted " + describe_fit(best);
    if (model.theory_rate) {
      const RateFit& same = model.theory_rate->model == RateModel::log ? log : power;
      verdict = verdict && same.exponent >= model.theory_rate->exponent - 0.1;
    }
  }
  r.json["theory"] = model.theory;
  r.json["verdict"] = verdict ? "consistent" : "inconsistent";
  r.summary = label + ": " + fitted + "; theoretical " + model.theory + "; verdict " +
              (verdict ? "consistent" : "inconsistent");
  return r;
}

BVFunction make_bv(const ExperimentConfig& c) {
  BVFunction g(c.bv_constant.value_or(0.0));
  const auto jumps = c.bv.value_or(std::vector<std::pair<double, double>>{{0.0, 1.0}});
  for (const auto& [loc, size] : jumps) g.add_jump(loc, size, Closure::right);
  return g;
}

}  // namespace

BuiltModel build_model(const ExperimentConfig& config, bool override_cfl) {
  const ModelBlock m = resolve_model(config.model);
  if (!m.driver) throw ValidationError("model.driver is required (allowed: bm, stable, fbm, she)");
  BuiltModel out;
  out.driver = *m.driver;
  out.horizon = m.horizon.value_or(1.0);
  out.x0 = m.x0.value_or(0.0);
  if (!(out.horizon > 0.0) || !std::isfinite(out.horizon)) throw ValidationError("model.horizon must be positive");
  out.scheme_id = to_string(out.driver) + (m.preset ? ":" + *m.preset : std::string());
  const TimeGrid probe(out.horizon, 8);

  switch (out.driver) {
    case Driver::bm: {
      const Coefficient1D drift = make_coefficient(m.drift.value_or("0"), m, false);
      const Coefficient1D diffusion = make_coefficient(m.diffusion.value_or("1"), m, true);
      check_bounds(drift, out.horizon, false);
      check_bounds(diffusion, out.horizon, true);
      out.drift = drift;
      out.diffusion = diffusion;
      out.noise = [](const TimeGrid& g, CounterEngine& e) { return brownian_increments(g, e); };
      const std::string taming = m.taming.value_or("none");
      if (m.atoms && !m.atoms->empty()) {
        if (m.drift && Expression::parse(*m.drift).is_constant() == false)
          throw ValidationError("model.atoms: the transformed scheme takes no drift");
        std::vector<SignedAtomMeasure::Atom> atoms;
        for (const auto& [loc, w] : *m.atoms) atoms.push_back({loc, w});
        try {
          const AtomTransform transform{SignedAtomMeasure(atoms)};
          const double x0 = out.x0;
          out.scheme = [diffusion, transform, x0](const TimeGrid& g, std::span<const double> inc) {
            return singular_sde_scheme(diffusion, transform, x0, g, inc).x;
          };
        } catch (const DomainError& e) {
          throw ValidationError(std::string("model.atoms: ") + e.what());
        }
        out.scheme_id += "/singular";
      } else if (m.mu) {
        const Expression mu = Expression::parse(*m.mu);
        if (mu.uses('u')) throw ValidationError("model.mu may use t, x and y only");
        CoupledSystem sys{drift, diffusion, [mu](double t, double x, double y) { return mu(x, t, 0.0, y); },
                          [](double, double, double) { return 0.0; }, [](double, double, double) { return 0.0; },
                          out.x0, 0.0};
        out.scheme = [sys](const TimeGrid& g, std::span<const double> inc) {
          const std::vector<double> zero(inc.size(), 0.0);
          auto r = coupled_system_em(sys, g, inc, zero);
          if (r.x.diverged_at && !r.y.diverged_at) r.y.diverged_at = r.x.diverged_at;
          return r.y;
        };
        out.scheme_id += "/pair";
      } else {
        EMConfig cfg{drift, diffusion, out.x0, probe, Taming::none, m.ell.value_or(0.0)};
        if (taming == "drift") cfg.taming = Taming::drift_only;
        if (taming == "full") cfg.taming = Taming::drift_and_diffusion;
        if (cfg.taming != Taming::none && cfg.ell == 0.0 && m.growth_exponent) cfg.ell = *m.growth_exponent;
        validate(cfg);
        const bool tamed = cfg.taming != Taming::none;
        out.scheme = [cfg, tamed](const TimeGrid& g, std::span<const double> inc) {
          EMConfig local = cfg;
          local.grid = g;
          return tamed ? tamed_em_path(local, inc) : em_path(local, inc);
        };
        out.scheme_id += tamed ? "/tamed-em" : "/em";
        double b = 1.0, s = 0.0;
        out.plain_bm = !tamed && Expression::parse(m.drift.value_or("0")).is_constant(&b) && b == 0.0 &&
                       Expression::parse(m.diffusion.value_or("1")).is_constant(&s) && s == 1.0;
      }
      if (m.preset && *m.preset == "le-gall-step" && config.p.value_or(1.0) == 1.0) {
        out.theory = "log rate 1 (C / log n)";
        out.theory_rate = RateFit{RateModel::log, 0.0, 1.0, 0.0, 1.0};
      }
      break;
    }
    case Driver::stable: {
      if (!m.stable_index) throw ValidationError("model.stable_index is required for the stable driver");
      if (m.drift && !Expression::parse(*m.drift).is_constant())
        throw ValidationError("model.drift: the stable driver takes no drift");
      const Coefficient1D diffusion = make_coefficient(m.diffusion.value_or("1"), m, true);
      check_bounds(diffusion, out.horizon, true);
      const StableConfig cfg{*m.stable_index, probe, diffusion, out.x0};
      try {
        validate(cfg);
      } catch (const DomainError& e) {
        throw ValidationError(e.what());
      }
      out.diffusion = diffusion;
      const double alpha = *m.stable_index;
      out.noise = [alpha](const TimeGrid& g, CounterEngine& e) { return stable_increments(alpha, g, e); };
      out.scheme = [cfg](const TimeGrid& g, std::span<const double> inc) {
        StableConfig local = cfg;
        local.grid = g;
        return stable_em_path(local, inc);
      };
      const auto rate = theoretical_rate_main5(alpha);
      out.theory = "log rate " + fmt(rate.exponent) + " in moment order " + fmt(rate.moment_order);
      out.theory_rate = RateFit{RateModel::log, 0.0, rate.exponent, 0.0, 1.0};
      out.scheme_id += "/em";
      break;
    }
    case Driver::fbm: {
      if (!m.hurst) throw ValidationError("model.hurst is required for the fbm driver");
      if (m.diffusion && *m.diffusion != "1")
        throw ValidationError("model.diffusion: the fbm driver is additive (diffusion = \"1\")");
      const Coefficient1D drift = make_coefficient(m.drift.value_or("0"), m, false);
      check_bounds(drift, out.horizon, false);
      const FbmConfig cfg{*m.hurst, probe, drift, out.x0};
      bool covered = false;
      try {
        covered = validate(cfg);
      } catch (const DomainError& e) {
        throw ValidationError(e.what());
      }
      out.drift = drift;
      auto samplers = std::make_shared<FbmSamplers>(*m.hurst);
      out.noise = [samplers](const TimeGrid& g, CounterEngine& e) { return samplers->get(g)->sample(e).increments; };
      out.scheme = [cfg](const TimeGrid& g, std::span<const double> inc) {
        FbmConfig local = cfg;
        local.grid = g;
        return fbm_em_path(local, inc);
      };
      if (covered) {
        const double p = config.p.value_or(1.0);
        const double r = theoretical_rate_main7(*m.hurst, config.gamma.value_or(1.0), p >= 2.0 ? p : 1.0,
                                                config.eps.value_or(0.1));
        out.theory = "power rate " + fmt(r);
        out.theory_rate = RateFit{RateModel::power, 0.0, r, 0.0, 1.0};
      } else {
        out.theory = "n/a (H >= 1/2)";
      }
      out.scheme_id += "/em";
      break;
    }
    case Driver::she: {
      const Expression b = Expression::parse(m.drift.value_or("0"));
      const Expression s = Expression::parse(m.diffusion.value_or("0"));
      const Expression u0 = Expression::parse(m.initial.value_or("0"));
      if (b.uses('y') || s.uses('y') || u0.uses('u') || u0.uses('t') || u0.uses('y'))
        throw ValidationError("she: drift/diffusion use t, x, u; initial uses x");
      const double horizon = out.horizon;
      const bool override = override_cfl || config.override_cfl.value_or(false);
      out.she = [b, s, u0, horizon, override](std::size_t mm, std::size_t nn) {
        SheConfig cfg;
        cfg.horizon = horizon;
        cfg.time_steps = mm;
        cfg.space_intervals = nn;
        cfg.drift = [b](double t, double x, double u) { return b(x, t, u); };
        cfg.diffusion = [s](double t, double x, double u) { return s(x, t, u); };
        cfg.initial = [u0](double x) { return u0(x); };
        cfg.override_cfl = override;
        return cfg;
      };
      const auto n = config.mn.empty() ? std::vector<std::pair<std::size_t, std::size_t>>{{std::size_t(std::ceil(2.0 * horizon * 16.0)), 4}}
                                       : config.mn;
      for (const auto& [mm, nn] : n) validate(out.she(mm, nn));
      if (config.gamma) {
        const auto [rm, rn] = theoretical_rate_main11(1.0, *config.gamma, config.eps.value_or(0.1));
        out.theory = "m^-" + fmt(rm) + " + n^-" + fmt(rn);
        out.theory_rate = RateFit{RateModel::power, 0.0, rn, 0.0, 1.0};
      } else {
        out.theory = "m^-1/4 + n^-1/2 (Lipschitz)";
      }
      out.scheme_id += "/lattice";
      break;
    }
  }
  return out;
}

BuiltModel validate_config(const ExperimentConfig& c, bool override_cfl) {
  BuiltModel model = build_model(c, override_cfl);
  const bool needs_n = c.kind != ExperimentKind::she_rate && c.kind != ExperimentKind::mlmc;
  if (c.paths == 0) throw ValidationError("paths must be positive");
  if (needs_n) {
    if (c.n.empty()) throw ValidationError("n must list at least one step count");
    for (std::size_t k = 0; k < c.n.size(); ++k) {
      if (c.n[k] == 0) throw ValidationError("n entries must be positive");
      if (k > 0 && c.n[k] <= c.n[k - 1]) throw ValidationError("n must be strictly increasing");
    }
    for (auto n : c.n)
      if (c.n.back() % n != 0) throw ValidationError("every n must divide the largest n (coupled noise)");
  }
  const bool path_driver = model.driver != Driver::she;
  if (c.kind == ExperimentKind::she_rate) {
    if (model.driver != Driver::she) throw ValidationError("she-rate needs model.driver = \"she\"");
    if (c.mn.empty()) throw ValidationError("she-rate needs mn = [[m, n], ...]");
    if (!c.target) throw ValidationError("she-rate needs target (the exact value of E f(u(T, point)))");
    const double x = c.point.value_or(0.5);
    if (!(x >= 0.0 && x <= 1.0)) throw ValidationError("point must lie in [0, 1]");
  } else if (!path_driver) {
    throw ValidationError("driver \"she\" supports experiment = \"she-rate\" only");
  }
  if (c.kind == ExperimentKind::strong_rate && model.driver == Driver::stable) {
    const double alpha = *resolve_model(c.model).stable_index;
    try {
      require_stable_moment(alpha, c.p.value_or(alpha - 1.0));
    } catch (const DomainError& e) {
      throw ValidationError(std::string(e.what()));
    }
  }
  if (c.p && !(*c.p > 0.0)) throw ValidationError("p must be positive");
  if (c.q && !(*c.q > 0.0)) throw ValidationError("q must be positive");
  if (c.alpha && !(*c.alpha > 0.0 && *c.alpha <= 1.0)) throw ValidationError("alpha must lie in (0, 1]");
  if (c.refine && *c.refine == 0) throw ValidationError("refine must be >= 1");
  const bool bm_only = c.kind == ExperimentKind::avikainen_verify || c.kind == ExperimentKind::time_avg_bv;
  if (bm_only && model.driver != Driver::bm) throw ValidationError(to_string(c.kind) + " needs model.driver = \"bm\"");
  if (c.kind == ExperimentKind::time_avg_bv && !model.plain_bm && !(model.drift && model.diffusion && model.scheme_id.ends_with("/em")))
    throw ValidationError("time-avg-bv needs an untamed Euler scheme");
  if (c.kind == ExperimentKind::mlmc) {
    if (c.levels && *c.levels == 0) throw ValidationError("levels must be >= 1");
    if (c.base_n && *c.base_n == 0) throw ValidationError("base_n must be >= 1");
  }
  if (c.payoff) (void)Expression::parse(*c.payoff);
  if (c.bv) (void)make_bv(c);
  return model;
}

RunOutcome run_experiment(const ExperimentConfig& config, const RunFlags& flags) {
  RunOutcome outcome;
  ExperimentConfig c = config;
  if (flags.seed) c.seed = *flags.seed;
  if (flags.threads) c.threads = *flags.threads;
  if (flags.out) c.output = *flags.out;
  if (flags.format) {
    if (*flags.format != "csv" && *flags.format != "json" && *flags.format != "both") {
      outcome.exit_code = 2;
      outcome.summary = "validation error: --format must be csv, json or both";
      return outcome;
    }
    c.format = *flags.format;
  }
  if (flags.override_cfl) c.override_cfl = true;

  BuiltModel model;
  try {
    model = validate_config(c, flags.override_cfl);
  } catch (const ValidationError& e) {
    outcome.exit_code = 2;
    outcome.summary = std::string("validation error: ") + e.what();
    return outcome;
  } catch (const DomainError& e) {
    outcome.exit_code = 2;
    outcome.summary = std::string("validation error: ") + e.what();
    return outcome;
  }

  const std::string text = serialize_config(c);
  RunOptions opt;
  opt.paths = c.paths;
  opt.seed = c.seed;
  opt.threads = c.threads.value_or(0);
  opt.scheme_id = model.scheme_id;
  opt.config_hash = config_hash(text);
  const std::size_t refine = c.refine.value_or(4);
  const std::string label = to_string(c.kind);

  Report report;
  try {
    const auto scheme = coarsened_scheme(model.scheme);
    const auto self_ref = [&] {
      return self_reference(scheme, model.horizon, refine, model.noise);
    };
    switch (c.kind) {
      case ExperimentKind::strong_rate: {
        double p = c.p.value_or(2.0);
        if (model.driver == Driver::stable) p = c.p.value_or(*resolve_model(c.model).stable_index - 1.0);
        const auto mode = c.mode.value_or("terminal") == "sup" ? StrongMode::sup : StrongMode::terminal;
        report = finish_curve(strong_error(scheme, self_ref(), c.n, p, mode, opt), model, label);
        break;
      }
      case ExperimentKind::weak_rate: {
        const Expression f = Expression::parse(c.payoff.value_or("indicator(0, inf)"));
        const auto payoff = [f](double x) { return f(x); };
        report = finish_curve(weak_error(scheme, self_ref(), payoff, c.n, opt, c.target), model, label);
        break;
      }
      case ExperimentKind::time_avg_bv: {
        const auto sampler =
            model.plain_bm ? brownian_interval_sampler(model.x0, model.horizon)
                           : em_interval_sampler([d = *model.drift](double t, double x) { return d(t, x); },
                                                 [s = *model.diffusion](double t, double x) { return s(t, x); },
                                                 model.x0, model.horizon);
        report = finish_curve(time_avg_bv_error(sampler, make_bv(c), model.horizon, c.n, c.q.value_or(1.0), opt),
                              model, label);
        break;
      }
      case ExperimentKind::max_functional: {
        const auto reference = model.plain_bm ? brownian_reference(model.x0, model.horizon, refine) : self_ref();
        auto [curve, bound] = max_functional_error(scheme, reference, make_bv(c), c.n, c.p.value_or(2.0),
                                                   c.q.value_or(1.0), c.alpha.value_or(1.0), opt);
        model.theory = "((log n)/n)^" + fmt(bound.exponent) + " up to a constant";
        report = finish_curve(curve, model, label);
        report.json["bound"] = {{"exponent", bound.exponent}, {"constant", bound.constant},
                                {"shape", bound.shape}, {"max_ratio", bound.max_ratio}};
        break;
      }
      case ExperimentKind::avikainen_verify: {
        const BVFunction g = c.bv ? make_bv(c) : BVFunction::sign(0.0);
        const double p = c.p.value_or(2.0), q = c.q.value_or(1.0), alpha = c.alpha.value_or(1.0);
        const auto reference = self_ref();
        const std::size_t finest = c.n.back();
        std::vector<double> x(c.paths);
        std::vector<double> xhat(c.paths * c.n.size());
        const RngStream root(c.seed);
        parallel_for(c.paths, opt.threads, [&](std::size_t path) {
          CounterEngine engine(root.split(path));
          const auto draw = reference(finest, engine);
          x[path] = draw.path.values.back();
          for (std::size_t k = 0; k < c.n.size(); ++k) {
            const Path xn = scheme(c.n[k], draw);
            xhat[k * c.paths + path] = xn.diverged() ? std::nan("") : xn.values.back();
          }
        });
        for (std::size_t k = 0; k < c.n.size(); ++k)
          for (std::size_t i = 0; i < c.paths; ++i)
            if (!std::isfinite(xhat[k * c.paths + i]) || !std::isfinite(x[i]))
              throw RunFailure("avikainen-verify: diverged path at n = " + std::to_string(c.n[k]));
        const EmpiricalCDF cdf(x);
        const double h_min = default_holder_scale(cdf);
        const double h_max = std::max(cdf.max() - cdf.min(), 2.0 * h_min);
        const EmpiricalHolder holder{cdf, h_min, h_max};
        report.json["reports"] = nlohmann::json::array();
        std::ostringstream csv;
        csv << "n,lhs,lhs_stderr,rhs,rhs_stderr,tolerance,satisfied\n";
        csv.precision(17);
        std::size_t ok = 0;
        for (std::size_t k = 0; k < c.n.size(); ++k) {
          const std::span<const double> xh(xhat.data() + k * c.paths, c.paths);
          const auto r = avikainen_check(g, x, xh, p, q, alpha, holder);
          auto j = r.to_json();
          j["n"] = c.n[k];
          report.json["reports"].push_back(j);
          csv << c.n[k] << ',' << r.lhs << ',' << r.lhs_stderr << ',' << r.rhs << ',' << r.rhs_stderr << ','
              << r.tolerance << ',' << (r.satisfied ? 1 : 0) << '\n';
          ok += r.satisfied;
        }
        report.csv = csv.str();
        const bool all = ok == c.n.size();
        report.json["verdict"] = all ? "satisfied" : "violated";
        report.summary = label + ": estimate satisfied at " + std::to_string(ok) + " of " +
                         std::to_string(c.n.size()) + " n values; verdict " + (all ? "satisfied" : "violated");
        break;
      }
      case ExperimentKind::mlmc: {
        const Expression f = Expression::parse(c.payoff.value_or("indicator(0, inf)"));
        MlmcProblem problem;
        problem.horizon = model.horizon;
        problem.base_steps = c.base_n.value_or(c.n.empty() ? 8 : c.n.front());
        problem.levels = c.levels.value_or(4);
        problem.scheme = model.scheme;
        problem.payoff = [f](const Path& path) { return f(path.terminal()); };
        problem.noise = model.noise;
        const std::vector<std::size_t> per_level(problem.levels, c.paths);
        const auto r = mlmc_estimate(problem, per_level, opt);
        report.json["mlmc"] = to_json(r);
        std::ostringstream csv;
        write_csv(csv, r);
        report.csv = csv.str();
        std::string slope = "n/a";
        if (r.levels.size() >= 4) {
          std::vector<double> ns, vs;
          for (std::size_t l = 1; l < r.levels.size(); ++l) {
            ns.push_back(double(r.levels[l].n));
            vs.push_back(r.levels[l].variance);
          }
          if (std::all_of(vs.begin(), vs.end(), [](double v) { return v > 0.0; })) {
            const auto fit = fit_rate(ns, vs, RateModel::power);
            report.json["variance_fit"] = to_json(fit);
            slope = fmt(fit.exponent);
          }
        }
        report.summary = label + ": estimate " + fmt(r.estimate) + " +- " + fmt(r.std_error) +
                         ", level-variance slope " + slope + "; verdict " +
                         (r.telescoping_ok ? "telescoping ok" : "telescoping violated");
        break;
      }
      case ExperimentKind::she_rate: {
        const Expression f = Expression::parse(c.payoff.value_or("x"));
        std::vector<LatticeErrorRequest> grid;
        for (const auto& [mm, nn] : c.mn) grid.push_back({mm, nn});
        const auto curve = she_weak_error(model.she, [f](double u) { return f(u); }, c.point.value_or(0.5),
                                          *c.target, grid, opt);
        report = finish_curve(curve, model, label);
        break;
      }
    }
  } catch (const RunFailure& e) {
    outcome.exit_code = 3;
    outcome.summary = std::string("run failure: ") + e.what();
    return outcome;
  } catch (const DomainError& e) {
    outcome.exit_code = 3;
    outcome.summary = std::string("run failure: ") + e.what();
    return outcome;
  }

  report.json["experiment"] = label;
  report.json["seed"] = c.seed;
  report.json["paths"] = c.paths;
  report.json["scheme_id"] = model.scheme_id;
  report.json["config_hash"] = opt.config_hash;
  report.json["config"] = text;
  report.json["summary"] = report.summary;

  const std::filesystem::path base(c.output);
  if (base.has_parent_path()) std::filesystem::create_directories(base.parent_path());
  if (c.format == "csv" || c.format == "both") {
    const std::string name = c.output + ".csv";
    std::ofstream(name) << report.csv;
    outcome.files.push_back(name);
  }
  if (c.format == "json" || c.format == "both") {
    const std::string name = c.output + ".json";
    std::ofstream(name) << report.json.dump(2) << '\n';
    outcome.files.push_back(name);
  }
  outcome.summary = report.summary;
  return outcome;
}

int run_config_file(const std::string& path, const RunFlags& flags, std::ostream& out, std::ostream& err) {
  ExperimentConfig config;
  try {
    config = load_config(path);
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return 2;
  }
  const RunOutcome r = run_experiment(config, flags);
  (r.exit_code == 0 ? out : err) << r.summary << '\n';
  return r.exit_code;
}

}  // namespace sdelab
