#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "sdelab/core/parallel.hpp"
#include "sdelab/errors.hpp"
#include "sdelab/harness/harness.hpp"
#include "sdelab/schemes_bm.hpp"

using namespace sdelab;

namespace {

SchemeFactory driftless_em() {
  return coarsened_scheme([](const TimeGrid& g, std::span<const double> inc) {
    return em_path({Coefficient1D::constant(0.0), Coefficient1D::constant(1.0), 0.0, g}, inc);
  });
}

SchemeFactory subsample_reference() {
  return [](std::size_t n, const ReferenceDraw& d) {
    const std::size_t f = d.grid.steps() / n;
    Path p;
    for (std::size_t k = 0; k <= n; ++k) p.values.push_back(d.path.values[k * f]);
    return p;
  };
}

SchemeFactory geometric_em() {
  return coarsened_scheme([](const TimeGrid& g, std::span<const double> inc) {
    auto x = Coefficient1D::of_x([](double v) { return v; });
    x.bounds().linear_growth = 1.0;
    return em_path({Coefficient1D::constant(0.0), x, 1.0, g}, inc);
  });
}

const std::vector<std::size_t> kNs = {8, 16, 32, 64};

}  // namespace

TEST(FitRate, SyntheticPower) {
  std::vector<double> ns, es;
  for (double n = 16; n <= 1024; n *= 2) {
    ns.push_back(n);
    es.push_back(5.0 * std::pow(n, -0.5));
  }
  const auto f = fit_rate(ns, es, RateModel::power);
  EXPECT_NEAR(f.constant, 5.0, 1e-9);
  EXPECT_NEAR(f.exponent, 0.5, 1e-9);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
  EXPECT_NEAR(f.predict(100), 0.5, 1e-9);
}

TEST(FitRate, ConstantCurve) {
  const std::vector<double> ns = {4, 8, 16, 32}, es(4, 0.3);
  const auto f = fit_rate(ns, es, RateModel::power);
  EXPECT_NEAR(f.exponent, 0.0, 1e-12);
  EXPECT_NEAR(f.constant, 0.3, 1e-12);
}

TEST(FitRate, SyntheticLogWinsAutomatic) {
  std::vector<double> ns, es;
  for (double n = 16; n <= 1 << 20; n *= 4) {
    ns.push_back(n);
    es.push_back(2.0 / std::log(n));
  }
  const auto l = fit_rate(ns, es, RateModel::log);
  EXPECT_NEAR(l.exponent, 1.0, 1e-9);
  EXPECT_NEAR(l.constant, 2.0, 1e-9);
  const auto a = fit_rate(ns, es, RateModel::automatic);
  EXPECT_EQ(a.model, RateModel::log);
  EXPECT_GT(a.r_squared, fit_rate(ns, es, RateModel::power).r_squared);
}

TEST(FitRate, Preconditions) {
  EXPECT_THROW(fit_rate(std::vector<double>{2, 4}, std::vector<double>{1, 0.5}, RateModel::power), DomainError);
  EXPECT_THROW(fit_rate(std::vector<double>{2, 4, 8}, std::vector<double>{1, 0, 0.5}, RateModel::power), DomainError);
  EXPECT_THROW(fit_rate(std::vector<double>{2, 4, 8}, std::vector<double>{1, -1, 0.5}, RateModel::log), DomainError);
}

TEST(StrongError, SchemeEqualToReferenceIsZero) {
  RunOptions o;
  o.paths = 200;
  o.seed = 5;
  const auto ref = brownian_reference(0.0, 1.0, 2);
  for (auto mode : {StrongMode::sup, StrongMode::terminal}) {
    const auto c = strong_error(subsample_reference(), ref, kNs, 2.0, mode, o);
    for (const auto& p : c.points) {
      EXPECT_EQ(p.error, 0.0);
      EXPECT_EQ(p.paths, 200u);
    }
    const auto e = strong_error(driftless_em(), ref, kNs, 2.0, mode, o);
    for (const auto& p : e.points) EXPECT_LT(p.error, 1e-13);
  }
}

TEST(StrongError, SelfReferenceOfSchemeIsZeroAtFinest) {
  RunOptions o;
  o.paths = 100;
  const auto scheme = geometric_em();
  const auto ref = self_reference(scheme, 1.0, 1, brownian_increments);
  const auto c = strong_error(scheme, ref, kNs, 2.0, StrongMode::sup, o);
  EXPECT_EQ(c.points.back().error, 0.0);
  EXPECT_GT(c.points.front().error, 0.0);
  check_invariants(c);
}

TEST(StrongError, GeometricHalfOrder) {
  RunOptions o;
  o.paths = 4000;
  o.seed = 1;
  const auto scheme = geometric_em();
  const std::vector<std::size_t> ns = {16, 32, 64, 128, 256};
  const auto c = strong_error(scheme, self_reference(scheme, 1.0, 4, brownian_increments), ns, 2.0,
                              StrongMode::terminal, o);
  EXPECT_NEAR(fit_rate(c, RateModel::power).exponent, 0.5, 0.15);
  EXPECT_TRUE(c.nonincreasing());
}

TEST(StrongError, DivergenceFailsRun) {
  RunOptions o;
  o.paths = 100;
  const SchemeFactory boom = [](std::size_t n, const ReferenceDraw&) {
    Path p;
    p.values.assign(n + 1, 0.0);
    p.diverged_at = 0;
    return p;
  };
  EXPECT_THROW(strong_error(boom, brownian_reference(0, 1), kNs, 2, StrongMode::sup, o), RunFailure);
}

TEST(StrongError, ThreadCountDoesNotChangeResult) {
  RunOptions o;
  o.paths = 300;
  o.seed = 9;
  const auto scheme = geometric_em();
  const auto ref = self_reference(scheme, 1.0, 2, brownian_increments);
  o.threads = 1;
  const auto a = strong_error(scheme, ref, kNs, 2.0, StrongMode::sup, o);
  o.threads = 3;
  const auto b = strong_error(scheme, ref, kNs, 2.0, StrongMode::sup, o);
  for (std::size_t i = 0; i < kNs.size(); ++i) {
    EXPECT_EQ(a.points[i].error, b.points[i].error);
    EXPECT_EQ(a.points[i].std_error, b.points[i].std_error);
  }
}

TEST(WeakError, ConstantPayoff) {
  RunOptions o;
  o.paths = 200;
  const auto c = weak_error(driftless_em(), brownian_reference(0, 1), [](double) { return 4.0; }, kNs, o);
  for (const auto& p : c.points) EXPECT_EQ(p.error, 0.0);
  const auto e = weak_error(driftless_em(), brownian_reference(0, 1), [](double) { return 4.0; }, kNs, o, 4.0);
  for (const auto& p : e.points) EXPECT_EQ(p.error, 0.0);
}

TEST(TimeAvgBv, ConstantAndIndicator) {
  RunOptions o;
  o.paths = 20000;
  const std::vector<std::size_t> ns = {16, 64, 256};
  const auto sampler = brownian_interval_sampler(0.0, 1.0);
  const auto c = time_avg_bv_error(sampler, BVFunction(1.0), 1.0, ns, 1.0, o);
  for (const auto& p : c.points) EXPECT_EQ(p.error, 0.0);
  const auto s = time_avg_bv_error(sampler, BVFunction::step_up(0.0), 1.0, ns, 1.0, o);
  EXPECT_GT(s.points[0].error, s.points[2].error);
  EXPECT_EQ(s.type, ErrorType::time_avg_bv);
}

TEST(MaxFunctional, ConstantPayoffAndShape) {
  RunOptions o;
  o.paths = 500;
  const auto [c, bound] =
      max_functional_error(driftless_em(), brownian_reference(0, 1, 4), BVFunction(2.0), kNs, 2, 1, 1, o);
  for (const auto& p : c.points) EXPECT_EQ(p.error, 0.0);
  EXPECT_NEAR(bound.exponent, 2.0 / 6.0, 1e-15);
  ASSERT_EQ(bound.shape.size(), kNs.size());
  EXPECT_NEAR(bound.shape[0], std::pow(std::log(8.0) / 8.0, 1.0 / 3.0), 1e-14);
}

TEST(Mlmc, SingleLevelIsPlainMonteCarlo) {
  MlmcProblem prob;
  prob.horizon = 1.0;
  prob.base_steps = 16;
  prob.levels = 1;
  prob.scheme = [](const TimeGrid& g, std::span<const double> inc) {
    return em_path({Coefficient1D::constant(0.1), Coefficient1D::constant(1.0), 0.0, g}, inc);
  };
  prob.payoff = [](const Path& p) { return p.terminal() > 0.2 ? 1.0 : 0.0; };
  prob.noise = brownian_increments;
  RunOptions o;
  o.seed = 42;
  const std::vector<std::size_t> M = {3000};
  const auto r = mlmc_estimate(prob, M, o);

  std::vector<double> plain(3000);
  for (std::size_t i = 0; i < plain.size(); ++i) {
    CounterEngine e(RngStream(42).split(0).split(i));
    const TimeGrid g(1.0, 16);
    plain[i] = prob.payoff(prob.scheme(g, brownian_increments(g, e)));
  }
  EXPECT_EQ(r.estimate, mean_and_error(plain).mean);
  EXPECT_EQ(r.single_level_mean, r.estimate);
  EXPECT_TRUE(r.telescoping_ok);
}

TEST(Mlmc, TelescopingAndDecay) {
  MlmcProblem prob;
  prob.base_steps = 4;
  prob.levels = 4;
  prob.scheme = [](const TimeGrid& g, std::span<const double> inc) {
    auto lin = Coefficient1D::of_x([](double x) { return -x; });
    lin.bounds().linear_growth = 1.0;
    return em_path({lin, Coefficient1D::constant(1.0), 1.0, g}, inc);
  };
  prob.payoff = [](const Path& p) { return p.terminal(); };
  prob.noise = brownian_increments;
  const std::vector<std::size_t> M(4, 4000);
  const auto r = mlmc_estimate(prob, M, RunOptions{});
  EXPECT_TRUE(r.telescoping_ok);
  for (std::size_t l = 2; l < 4; ++l) EXPECT_LT(r.levels[l].variance, r.levels[l - 1].variance);
  EXPECT_NEAR(r.estimate, std::exp(-1.0), 5 * r.std_error + 0.05);
}

TEST(Serialization, CurveJsonRoundTripAndCsv) {
  ErrorCurve c;
  c.type = ErrorType::strong_sup;
  c.seed = 77;
  c.scheme_id = "em";
  c.config_hash = config_hash("x");
  c.points = {{8, 0.5, 0.01, 100, 1, 2.0, 0}, {16, 0.25, 0.02, 99, 2, 2.0, 0}};
  const auto back = error_curve_from_json(to_json(c));
  EXPECT_EQ(back.type, c.type);
  EXPECT_EQ(back.seed, 77u);
  EXPECT_EQ(back.scheme_id, "em");
  EXPECT_EQ(back.config_hash, c.config_hash);
  ASSERT_EQ(back.points.size(), 2u);
  EXPECT_EQ(back.points[1].error, 0.25);
  EXPECT_EQ(back.points[1].diverged, 2u);
  EXPECT_EQ(to_json(back), to_json(c));

  std::ostringstream csv;
  write_csv(csv, c);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), "n,m,error,stderr,paths,diverged,moment,type");
  const std::string text = csv.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
  for (auto t : {ErrorType::strong_sup, ErrorType::strong_terminal, ErrorType::weak, ErrorType::time_avg_bv,
                 ErrorType::max_functional})
    EXPECT_EQ(error_type_from_string(to_string(t)), t);
}

TEST(Serialization, ConfigHash) {
  EXPECT_EQ(config_hash(""), "cbf29ce484222325");
  EXPECT_EQ(config_hash("a"), "af63dc4c8601ec8c");
}

TEST(Curve, Invariants) {
  ErrorCurve c;
  c.points = {{8, 0.5, 0.1}, {8, 0.4, 0.1}};
  EXPECT_THROW(check_invariants(c), DomainError);
  c.points = {{8, 0.5, 0.1}, {16, -0.4, 0.1}};
  EXPECT_THROW(check_invariants(c), DomainError);
  c.points = {{8, 0.5, 0.1}, {16, 0.7, 0.1}};
  EXPECT_NO_THROW(check_invariants(c));
  EXPECT_TRUE(c.nonincreasing(2.0));
  EXPECT_FALSE(c.nonincreasing(1.0));
}

TEST(SheWeak, DeterministicHeatErrorDecreases) {
  const double T = 0.1;
  const auto cfg = [T](std::size_t m, std::size_t n) {
    SheConfig c;
    c.horizon = T;
    c.time_steps = m;
    c.space_intervals = n;
    c.initial = [](double x) { return std::sin(std::numbers::pi * x); };
    return c;
  };
  std::vector<LatticeErrorRequest> grid;
  for (std::size_t n : {4, 8, 16, 32}) grid.push_back({std::size_t(4 * T * n * n) + 1, n});
  RunOptions o;
  o.paths = 2;
  const double target = std::exp(-std::numbers::pi * std::numbers::pi * T);
  const auto c = she_weak_error(cfg, [](double u) { return u; }, 0.5, target, grid, o);
  for (std::size_t i = 1; i < c.points.size(); ++i) EXPECT_LT(c.points[i].error, c.points[i - 1].error);
  EXPECT_EQ(c.points[0].m, grid[0].m);
}
