#include "lobeq/dist.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace lobeq {
namespace {

const JumpLaw kPareto = JumpLaw::pareto(3.0, 0.005);
const VolumeLaw kNormal = VolumeLaw::normal(10.0);

std::vector<JumpLaw> continuous_jump_laws() {
  return {JumpLaw::pareto(3.0, 0.005), JumpLaw::pareto(1.5, 0.02), JumpLaw::pareto(6.0, 1.0),
          JumpLaw::exponential(200.0), JumpLaw::exponential(1.0)};
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return g;
}

double scale_of(const JumpLaw& law) {
  if (const auto* p = std::get_if<Pareto>(&law.kind())) return p->scale;
  if (const auto* e = std::get_if<Exponential>(&law.kind())) return 1.0 / e->rate;
  return std::get<PointMass>(law.kind()).value;
}

TEST(JumpLaw, RejectsInvalidParameters) {
  EXPECT_THROW(JumpLaw::pareto(1.0, 0.005), std::invalid_argument);
  EXPECT_THROW(JumpLaw::pareto(3.0, 0.0), std::invalid_argument);
  EXPECT_THROW(JumpLaw::exponential(-1.0), std::invalid_argument);
  EXPECT_THROW(JumpLaw::point_mass(0.0), std::invalid_argument);
  EXPECT_THROW(JumpLaw::point_mass(std::nan("")), std::invalid_argument);
}

TEST(VolumeLaw, RejectsNonzeroMedianAndBadScale) {
  EXPECT_THROW(VolumeLaw::normal(10.0, 1.0), std::invalid_argument);
  EXPECT_THROW(VolumeLaw::laplace(1.0, -0.5), std::invalid_argument);
  EXPECT_THROW(VolumeLaw::normal(0.0), std::invalid_argument);
}

TEST(JumpLaw, ParetoCdfExamples) {
  EXPECT_EQ(kPareto.cdf(0.005), 0.0);
  // 1 - (s/x)^a from the quadrature of the density.
  const double oracle = 1.0 - oracle::survival(kPareto, 0.01);
  EXPECT_NEAR(oracle, 0.875, 1e-12);
  EXPECT_NEAR(kPareto.cdf(0.01), oracle, 1e-12);
}

TEST(JumpLaw, ParetoTailExpectationExamples) {
  const double at0 = oracle::tail_expectation(kPareto, 0.0);
  EXPECT_NEAR(at0, 0.0075, 1e-13);
  EXPECT_NEAR(kPareto.tail_expectation(0.0), at0, 1e-13);
  const double at1 = oracle::tail_expectation(kPareto, 0.01);
  EXPECT_NEAR(at1, 1.875e-3, 1e-14);
  EXPECT_NEAR(kPareto.tail_expectation(0.01), at1, 1e-14);
  EXPECT_EQ(JumpLaw::point_mass(1.0).tail_expectation(2.0), 0.0);
  EXPECT_THROW(kPareto.tail_expectation(-1.0), std::domain_error);
}

TEST(JumpLaw, EmaxExcessMatchesRatio) {
  for (double x : {0.001, 0.005, 0.01, 0.5}) {
    EXPECT_NEAR(kPareto.emax_excess(x), kPareto.emax_ratio(x) - 1.0, 1e-15 * kPareto.emax_ratio(x));
    EXPECT_NEAR(kPareto.emax_excess(x), oracle::emax_ratio(kPareto, x) - 1.0, 1e-12);
  }
  EXPECT_NEAR(kPareto.emax_excess(1.0), std::pow(0.005, 3.0) / 2.0, 1e-25);
}

TEST(JumpLaw, EmaxRatioExamples) {
  const double oracle_value = oracle::emax_ratio(kPareto, 0.01);
  EXPECT_NEAR(oracle_value, 1.0625, 1e-12);
  EXPECT_NEAR(kPareto.emax_ratio(0.01), oracle_value, 1e-12);
  EXPECT_NEAR(kPareto.emax_ratio(1e6), 1.0, 1e-15);
  EXPECT_THROW(kPareto.emax_ratio(0.0), std::domain_error);
  // Below the support infimum B > x almost surely.
  EXPECT_DOUBLE_EQ(kPareto.emax_ratio(0.001), kPareto.mean() / 0.001);
  EXPECT_DOUBLE_EQ(JumpLaw::point_mass(0.02).emax_ratio(0.01), 2.0);
}

TEST(JumpLaw, EmaxIdentityOnLogGrid) {
  std::vector<JumpLaw> laws = continuous_jump_laws();
  laws.push_back(JumpLaw::point_mass(0.02));
  for (const auto& law : laws) {
    const double s = scale_of(law);
    for (double x : log_grid(s / 10.0, 100.0 * s, 200)) {
      EXPECT_NEAR(law.emax_ratio(x) - law.cdf(x) - law.tail_expectation(x) / x, 0.0, 1e-12)
          << law.name() << " x=" << x;
    }
  }
}

TEST(JumpLaw, ClosedFormsMatchQuadrature) {
  for (const auto& law : continuous_jump_laws()) {
    const double s = scale_of(law);
    for (double x : log_grid(s / 10.0, 100.0 * s, 40)) {
      const double te = oracle::tail_expectation(law, x);
      const double sv = oracle::survival(law, x);
      EXPECT_NEAR(law.tail_expectation(x), te, 1e-9 * std::max(te, 1e-300)) << law.name() << " x=" << x;
      EXPECT_NEAR(law.survival(x), sv, 1e-9 * std::max(sv, 1e-300)) << law.name() << " x=" << x;
    }
  }
}

TEST(JumpLaw, MonotoneOnDenseGrid) {
  for (const auto& law : continuous_jump_laws()) {
    const double s = scale_of(law);
    double prev_te = law.tail_expectation(0.0);
    double prev_em = std::numeric_limits<double>::infinity();
    for (double x : log_grid(s / 100.0, 1000.0 * s, 1000)) {
      const double te = law.tail_expectation(x);
      const double em = law.emax_ratio(x);
      EXPECT_LE(te, prev_te) << law.name() << " x=" << x;
      EXPECT_LE(em, prev_em) << law.name() << " x=" << x;
      EXPECT_GE(em, 1.0) << law.name() << " x=" << x;
      prev_te = te;
      prev_em = em;
    }
  }
}

TEST(VolumeLaw, CdfAndQuantileExamples) {
  EXPECT_EQ(kNormal.cdf(0.0), 0.5);
  EXPECT_EQ(kNormal.quantile(0.5), 0.0);
  const double q90 = oracle::volume_quantile(kNormal, 0.9);
  EXPECT_NEAR(q90, 12.8155, 1e-4);
  EXPECT_NEAR(kNormal.quantile(0.9), q90, 1e-12 * q90);
  const auto laplace = VolumeLaw::laplace(1.0);
  const double l75 = oracle::volume_quantile(laplace, 0.75);
  EXPECT_NEAR(l75, std::log(2.0), 1e-12);
  EXPECT_NEAR(laplace.quantile(0.75), l75, 1e-12);
  EXPECT_THROW(kNormal.quantile(0.0), std::domain_error);
  EXPECT_THROW(kNormal.quantile(1.0), std::domain_error);
}

TEST(VolumeLaw, QuantileInvertsCdf) {
  for (const auto& law : {VolumeLaw::normal(10.0), VolumeLaw::normal(0.3), VolumeLaw::laplace(1.0), VolumeLaw::laplace(7.0)}) {
    const double scale = std::holds_alternative<NormalZeroMedian>(law.kind())
                             ? std::get<NormalZeroMedian>(law.kind()).sigma
                             : std::get<LaplaceZeroMedian>(law.kind()).b;
    for (int i = -100; i <= 100; ++i) {
      const double x = 5.0 * scale * i / 100.0;
      const double back = law.quantile(law.cdf(x));
      EXPECT_NEAR(back, x, 1e-9 * std::max(std::abs(x), scale)) << law.name() << " x=" << x;
      EXPECT_NEAR(law.cdf(x), oracle::volume_cdf(law, x), 1e-14) << law.name() << " x=" << x;
    }
  }
}

TEST(VolumeLaw, UpperQuantileInvertsSurvivalInDeepTail) {
  for (const auto& law : {VolumeLaw::normal(10.0), VolumeLaw::laplace(2.0)}) {
    for (double tail : {0.49, 0.3, 1e-3, 1e-9, 1e-17, 1e-40, 1e-200}) {
      const double x = law.upper_quantile(tail);
      EXPECT_NEAR(law.survival(x), tail, 1e-12 * tail) << law.name() << " tail=" << tail;
    }
    EXPECT_NEAR(law.upper_quantile(0.1), law.quantile(0.9), 1e-12 * law.quantile(0.9));
    EXPECT_EQ(law.upper_quantile(0.5), 0.0);
    EXPECT_THROW(law.upper_quantile(0.0), std::domain_error);
    EXPECT_THROW(law.upper_quantile(1.0), std::domain_error);
  }
  // Laplace tail written from its parameters.
  EXPECT_NEAR(VolumeLaw::laplace(2.0).upper_quantile(1e-17), -2.0 * std::log(2e-17), 1e-12);
}

TEST(VolumeLaw, SurvivalAvoidsCancellation) {
  const double x = 80.0;  // 8 sigma
  const double expected = 0.5 * std::erfc(x / (10.0 * std::sqrt(2.0)));
  EXPECT_NEAR(kNormal.survival(x), expected, 1e-12 * expected);
}

double ks_distance(std::vector<double> draws, const auto& cdf) {
  std::sort(draws.begin(), draws.end());
  const auto n = static_cast<double>(draws.size());
  double d = 0.0;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    const double c = cdf(draws[i]);
    d = std::max({d, std::abs(c - i / n), std::abs((i + 1) / n - c)});
  }
  return d;
}

TEST(Sampling, DeterministicForFixedSeed) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(kPareto.sample(a), kPareto.sample(b));
    EXPECT_EQ(kNormal.sample(a), kNormal.sample(b));
  }
}

TEST(Sampling, PointMassIsDegenerate) {
  Rng rng(1);
  const auto law = JumpLaw::point_mass(0.02);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(law.sample(rng), 0.02);
}

TEST(Sampling, ParetoMatchesLawOverMillionDraws) {
  constexpr int n = 1'000'000;
  Rng rng(7);
  std::vector<double> draws(n);
  for (auto& d : draws) d = kPareto.sample(rng);
  const double mean = std::accumulate(draws.begin(), draws.end(), 0.0) / n;
  double ss = 0.0;
  for (double d : draws) ss += (d - mean) * (d - mean);
  const double se = std::sqrt(ss / (n - 1) / n);
  EXPECT_LE(std::abs(mean - 0.0075), 3.0 * se);
  EXPECT_LE(ks_distance(draws, [](double x) { return x < 0.005 ? 0.0 : 1.0 - std::pow(0.005 / x, 3.0); }), 0.005);
}

TEST(Sampling, NormalMatchesLawOverMillionDraws) {
  constexpr int n = 1'000'000;
  Rng rng(8);
  std::vector<double> draws(n);
  for (auto& d : draws) d = kNormal.sample(rng);
  std::vector<double> sorted = draws;
  std::nth_element(sorted.begin(), sorted.begin() + n / 2, sorted.end());
  EXPECT_NEAR(sorted[n / 2], 0.0, 0.05);
  EXPECT_LE(ks_distance(draws, [](double x) { return oracle::volume_cdf(kNormal, x); }), 0.005);
}

TEST(Sampling, ExponentialAndLaplaceMatchLaw) {
  constexpr int n = 200'000;
  Rng rng(9);
  const auto expo = JumpLaw::exponential(200.0);
  const auto laplace = VolumeLaw::laplace(2.0);
  std::vector<double> e(n), l(n);
  for (int i = 0; i < n; ++i) {
    e[i] = expo.sample(rng);
    l[i] = laplace.sample(rng);
  }
  EXPECT_LE(ks_distance(e, [](double x) { return 1.0 - std::exp(-200.0 * x); }), 0.005);
  EXPECT_LE(ks_distance(l, [&](double x) { return oracle::volume_cdf(laplace, x); }), 0.005);
}

TEST(Sampling, UniformOpenIntervalNeverHitsBounds) {
  Rng rng(3);
  for (int i = 0; i < 100000; ++i) {
    const double u = uniform_open01(rng);
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

}  // namespace
}  // namespace lobeq
