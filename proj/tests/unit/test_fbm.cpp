#include <gtest/gtest.h>

#include <cmath>
#include <tuple>
#include <vector>

#include "sdelab/core/parallel.hpp"
#include "sdelab/core/quadrature.hpp"
#include "sdelab/errors.hpp"
#include "sdelab/fbm.hpp"

using namespace sdelab;

TEST(Fbm, CovarianceExamples) {
  EXPECT_DOUBLE_EQ(fbm_covariance(0.5, 0.3, 0.8), 0.3);
  for (double H : {0.1, 0.3, 0.7}) EXPECT_DOUBLE_EQ(fbm_covariance(H, 1.0, 1.0), 1.0);
  EXPECT_NEAR(fbm_covariance(0.3, 2.0, 1.0), 0.5 * std::pow(2.0, 0.6), 1e-15);
  EXPECT_NEAR(fbm_covariance(0.3, 2.0, 1.0), 0.757858, 1e-6);
}

TEST(Fbm, Hypergeometric) {
  const std::tuple<double, double, double, double, double> cases[] = {
      {0.2, 0.3, 1.5, 0.5, 1.02420597450083001},  {-0.2, 0.7, 0.8, -3, 1.2873208140387991},
      {0.5, 0.5, 1.5, 0.9, 1.31660984752758605},  {0.3, -0.3, 1.2, -9, 1.3350062482537696},
      {0.5, 1.5, 2.5, -0.99, 0.800646295038699604}, {1, 1, 2, 0.3, 1.18891647979577459},
  };
  for (auto [a, b, c, z, v] : cases) EXPECT_NEAR(hyp2f1(a, b, c, z), v, 1e-12 * std::abs(v)) << a << b << c << z;
  EXPECT_EQ(hyp2f1(0.0, 0.4, 1.3, -2.0), 1.0);
  EXPECT_THROW(hyp2f1(0.1, 0.2, -1.0, 0.1), DomainError);
  EXPECT_THROW(hyp2f1(0.1, 0.2, 1.5, 1.0), DomainError);
}

TEST(Fbm, KernelBrownianCase) {
  for (auto [t, s] : {std::pair{1.0, 0.5}, {2.0, 0.1}, {0.3, 0.29}}) EXPECT_NEAR(kernel_K_H(0.5, t, s), 1.0, 1e-12);
  EXPECT_THROW(kernel_K_H(0.3, 1.0, 1.0), DomainError);
  EXPECT_THROW(kernel_K_H(0.3, 1.0, 0.0), DomainError);
}

TEST(Fbm, KernelSingularityNearDiagonal) {
  const double H = 0.3, t = 1.0;
  const double a = kernel_K_H(H, t, t - 1e-6), b = kernel_K_H(H, t, t - 1e-8);
  EXPECT_NEAR(std::log(b / a) / std::log(100.0), 0.5 - H, 1e-3);
}

TEST(Fbm, KernelIsometry) {
  for (double H : {0.2, 0.35, 0.45})
    for (double t : {0.5, 1.0, 2.0}) {
      const auto r = integrate_singular([&](double s) { return std::pow(kernel_K_H(H, t, s), 2); }, 0.0, t, 1e-10);
      EXPECT_NEAR(r.value, std::pow(t, 2 * H), 1e-6) << H << ' ' << t;
    }
}

TEST(Fbm, BrownianIncrements) {
  const TimeGrid g(1.0, 32);
  const FbmSampler s(0.5, g);
  const std::size_t M = 20000;
  std::vector<double> sq(M);
  parallel_for(M, 0, [&](std::size_t i) {
    CounterEngine e(RngStream(4).split(i));
    const auto x = s.sample(e);
    sq[i] = x.increments[7] * x.increments[7];
  });
  const auto r = mean_and_error(sq);
  EXPECT_NEAR(r.mean, 1.0 / 32, 3.5 * r.std_error);
}

TEST(Fbm, SampleCovarianceBothMethods) {
  const TimeGrid g(1.0, 8);
  for (auto method : {FbmSampler::Method::cholesky, FbmSampler::Method::circulant}) {
    const FbmSampler s(0.3, g, method);
    const std::size_t M = 40000;
    std::vector<std::vector<double>> paths(M);
    parallel_for(M, 0, [&](std::size_t i) {
      CounterEngine e(RngStream(12).split(i));
      paths[i] = s.sample(e).path;
    });
    EXPECT_EQ(paths[0][0], 0.0);
    for (std::size_t a = 1; a <= 8; a += 3)
      for (std::size_t b = a; b <= 8; b += 2) {
        std::vector<double> prod(M);
        for (std::size_t i = 0; i < M; ++i) prod[i] = paths[i][a] * paths[i][b];
        const auto r = mean_and_error(prod);
        EXPECT_NEAR(r.mean, fbm_covariance(0.3, g.node(a), g.node(b)), 5 * r.std_error) << a << ' ' << b;
      }
  }
}

TEST(Fbm, ZeroDriftIsFbm) {
  const TimeGrid g(1.0, 16);
  CounterEngine e(RngStream(2));
  const auto x = FbmSampler(0.35, g).sample(e);
  const auto p = fbm_em_path({0.35, g, Coefficient1D::constant(0.0), 1.0}, x.increments);
  for (std::size_t k = 0; k <= 16; ++k) EXPECT_NEAR(p.values[k], 1.0 + x.path[k], 1e-14);
}

TEST(Fbm, ValidateAndRates) {
  const TimeGrid g(1.0, 4);
  EXPECT_TRUE(validate(FbmConfig{0.3, g, Coefficient1D::constant(0.0)}));
  EXPECT_FALSE(validate(FbmConfig{0.7, g, Coefficient1D::constant(0.0)}));
  EXPECT_THROW(validate(FbmConfig{1.0, g, Coefficient1D::constant(0.0)}), ValidationError);
  EXPECT_NEAR(theoretical_rate_main7(0.25, 1, 2, 0.1), 0.09, 1e-15);
  EXPECT_NEAR(theoretical_rate_main7(0.4, 0.5, 1, 0.1), 0.9 * 0.5 * 0.4 / 1.4, 1e-15);
  EXPECT_EQ(theoretical_rate_main7(0.25, 1, 2, 1.0), 0.0);
  EXPECT_THROW(theoretical_rate_main7(0.5, 1, 2, 0.1), DomainError);
}
