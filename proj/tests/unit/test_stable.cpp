#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "sdelab/core/parallel.hpp"
#include "sdelab/errors.hpp"
#include "sdelab/stable.hpp"

using namespace sdelab;

namespace {

struct CharFn {
  double value, std_error;
};

CharFn empirical_cf(const std::vector<double>& z, double xi) {
  std::vector<double> c(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) c[i] = std::cos(xi * z[i]);
  const auto s = mean_and_error(c);
  return {s.mean, s.std_error};
}

std::vector<double> draws(double alpha, double dt, std::size_t M, std::uint64_t seed) {
  std::vector<double> z(M);
  CounterEngine e{RngStream(seed)};
  for (auto& v : z) v = sample_stable_increment(alpha, dt, e);
  return z;
}

}  // namespace

TEST(Stable, GaussianCaseVariance) {
  const auto z = draws(2.0, 1.0, 400000, 1);
  std::vector<double> sq(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) sq[i] = z[i] * z[i];
  const auto s = mean_and_error(sq);
  EXPECT_NEAR(s.mean, 2.0, 0.02);
}

TEST(Stable, CharacteristicFunction) {
  for (double alpha : {1.3, 1.5, 1.8}) {
    const auto z = draws(alpha, 0.5, 200000, 2);
    EXPECT_EQ(empirical_cf(z, 0.0).value, 1.0);
    for (double xi : {0.5, 1.0, 2.0}) {
      const auto cf = empirical_cf(z, xi);
      EXPECT_NEAR(cf.value, std::exp(-0.5 * std::pow(xi, alpha)), 3.5 * cf.std_error) << alpha << ' ' << xi;
    }
  }
}

TEST(Stable, ConstantDiffusionScalesPath) {
  const TimeGrid g(2.0, 16);
  CounterEngine e(RngStream(5));
  const auto inc = stable_increments(1.5, g, e);
  const auto one = stable_em_path({1.5, g, Coefficient1D::constant(1.0), 0.5}, inc);
  const auto z = cumulate(0.5, inc);
  for (std::size_t k = 0; k < z.size(); ++k) EXPECT_EQ(one.values[k], z[k]);

  const std::size_t M = 100000;
  const double c = 0.7, alpha = 1.4;
  std::vector<double> x(M);
  parallel_for(M, 0, [&](std::size_t i) {
    CounterEngine en(RngStream(6).split(i));
    const auto d = stable_increments(alpha, g, en);
    x[i] = stable_em_path({alpha, g, Coefficient1D::constant(c), 0.0}, d).terminal();
  });
  const auto cf = empirical_cf(x, 1.0);
  EXPECT_NEAR(cf.value, std::exp(-2.0 * std::pow(c, alpha)), 3.5 * cf.std_error);
}

TEST(Stable, Domain) {
  CounterEngine e(RngStream(0));
  EXPECT_THROW(sample_stable_increment(1.0, 1.0, e), DomainError);
  EXPECT_THROW(sample_stable_increment(2.1, 1.0, e), DomainError);
  EXPECT_THROW(require_stable_moment(1.5, 1.5), DomainError);
  EXPECT_THROW(require_stable_moment(1.5, 2.0), DomainError);
  EXPECT_NO_THROW(require_stable_moment(1.5, 0.5));
  const TimeGrid g(1.0, 4);
  EXPECT_THROW(validate(StableConfig{1.5, g, Coefficient1D::of_x([](double x) { return x; })}), ValidationError);
  EXPECT_NO_THROW(validate(StableConfig{1.5, g, Coefficient1D::constant(2.0)}));
}

TEST(Stable, RateDescriptor) {
  EXPECT_NEAR(theoretical_rate_main5(1.5).exponent, 0.5, 1e-15);
  EXPECT_NEAR(theoretical_rate_main5(1.9).exponent, 0.9, 1e-15);
  EXPECT_LT(theoretical_rate_main5(1.0 + 1e-9).exponent, 1e-8);
  EXPECT_EQ(theoretical_rate_main5(1.5).model, "log");
  EXPECT_NEAR(theoretical_rate_main5(1.7).moment_order, 0.7, 1e-15);
}
