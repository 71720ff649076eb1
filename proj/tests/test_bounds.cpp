#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "stochelm/bounds.hpp"
#include "stochelm/errors.hpp"

using namespace stochelm;

namespace
{

SolveReport report(double grad, double l2, double k, double f)
{
  SolveReport r;
  r.k = k;
  r.grad_norm_sq = grad;
  r.l2_norm_sq = l2;
  r.weighted_norm_sq = grad + k * k * l2;
  r.f_norm_sq = f;
  return r;
}

}  // namespace

TEST_CASE("deterministic constant by hand")
{
  CHECK(c1_deterministic(1, 1, 1, 2, 1) == 13.0);
  CHECK(c1_deterministic(1, 1, 1, 3, 1) == 20.0);
  // 4 [4 / 2 + (1 / 0.5)(2 + 0.25)^2]
  CHECK(c1_deterministic(2, 0.5, 2, 2, 2) == doctest::Approx(4 * (2.0 + 2.0 * 2.25 * 2.25)));
  CHECK(c1_deterministic(2, 2, 1, 2, 1) == doctest::Approx(c1_deterministic(1, 1, 1, 2, 1) / 2));
}

TEST_CASE("stochastic constants by hand")
{
  CHECK(c1_stochastic(1, 1, 1, 2, 1, C1Formula::MaxInverse) == 5.5);
  CHECK(c1_stochastic(1, 1, 1, 2, 1, C1Formula::FourOverMin) == 13.0);
  // max{1/0.5, 1/2} (1 / 0.5 + (2 / 2) 2.25)
  CHECK(c1_stochastic(0.5, 2, 1, 2, 1, C1Formula::MaxInverse) == doctest::Approx(2.0 * (2.0 + 2.25)));
  for (double mu : {0.3, 1.0, 2.7})
  {
    CHECK(c1_stochastic(mu, mu, 1.3, 2, 0.8, C1Formula::FourOverMin) ==
          doctest::Approx(c1_deterministic(mu, mu, 1.3, 2, 0.8) / mu).epsilon(1e-14));
  }
}

TEST_CASE("the two stochastic expressions differ by a parameter-dependent factor")
{
  // four-over-min / max-inverse = 4 (a + b) / (a + 2 b), a = R^2 / mu1, b = (R + (d-1)/(2 k0))^2 / mu2,
  // which lies strictly between 2 and 4
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> mu(0.05, 5.0);
  std::uniform_real_distribution<double> R(0.2, 4.0);
  std::uniform_real_distribution<double> k0(0.1, 10.0);
  double lo = 4.0;
  double hi = 2.0;
  for (int i = 0; i < 1000; ++i)
  {
    const double m1 = mu(gen);
    const double m2 = mu(gen);
    const double r = R(gen);
    const int d = i % 2 == 0 ? 2 : 3;
    const double kk = k0(gen);
    const double ratio = c1_stochastic(m1, m2, r, d, kk, C1Formula::FourOverMin) /
                         c1_stochastic(m1, m2, r, d, kk, C1Formula::MaxInverse);
    const double a = r * r / m1;
    const double X = r + (d - 1) / (2 * kk);
    const double b = X * X / m2;
    REQUIRE(ratio == doctest::Approx(4 * (a + b) / (a + 2 * b)).epsilon(1e-12));
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  CHECK(lo > 2.0);
  CHECK(hi < 4.0);
  CHECK(hi - lo > 0.5);
}

TEST_CASE("constants decrease strictly in each nontrapping parameter")
{
  for (double base : {0.4, 1.0, 3.0})
  {
    CHECK(c1_deterministic(base * 1.1, base, 1, 2, 1) < c1_deterministic(base, base, 1, 2, 1));
    CHECK(c1_deterministic(base, base * 1.1, 1, 2, 1) < c1_deterministic(base, base, 1, 2, 1));
    for (auto f : {C1Formula::MaxInverse, C1Formula::FourOverMin})
    {
      // below and above the diagonal the min/max switch sides
      CHECK(c1_stochastic(base * 1.1, base * 1.5, 1, 2, 1, f) < c1_stochastic(base, base * 1.5, 1, 2, 1, f));
      CHECK(c1_stochastic(base * 1.5, base * 1.1, 1, 2, 1, f) < c1_stochastic(base * 1.5, base, 1, 2, 1, f));
    }
  }
}

TEST_CASE("constant contracts")
{
  CHECK_THROWS_AS(c1_deterministic(0, 1, 1, 2, 1), InputError);
  CHECK_THROWS_AS(c1_deterministic(1, 1, 1, 4, 1), InputError);
  CHECK_THROWS_AS(c1_stochastic(1, -1, 1, 2, 1, C1Formula::MaxInverse), InputError);
  CHECK_THROWS_AS(c1_stochastic(1, 1, 1, 2, 0, C1Formula::FourOverMin), InputError);
  CHECK(c1_formula_from_string("max-inverse") == C1Formula::MaxInverse);
  CHECK(c1_formula_from_string("four-over-min") == C1Formula::FourOverMin);
  CHECK_THROWS_AS(c1_formula_from_string("eq1"), InputError);
}

TEST_CASE("slack conventions")
{
  CHECK(slack_ratio(0.0, 0.0) == 0.0);
  CHECK(std::isinf(slack_ratio(1.0, 0.0)));
  CHECK(slack_ratio(1.0, 4.0) == 0.25);
}

TEST_CASE("deterministic check on fixed reports")
{
  const auto zero = check_bound_deterministic(report(0, 0, 3, 0), 1, 1, 1, 2, 1);
  CHECK(zero.lhs == 0.0);
  CHECK(zero.rhs == 0.0);
  CHECK(zero.slack == 0.0);
  CHECK(zero.holds());

  const auto r = report(2.0, 0.1, 3.0, 0.5);
  const auto b = check_bound_deterministic(r, 0.8, 0.6, 1, 2, 1);
  CHECK(b.lhs == doctest::Approx(0.8 * 2.0 + 0.6 * 9.0 * 0.1));
  CHECK(b.rhs == doctest::Approx(c1_deterministic(0.8, 0.6, 1, 2, 1) * 0.5));
  CHECK(b.constant == c1_deterministic(0.8, 0.6, 1, 2, 1));
  CHECK(b.variant == BoundVariant::Deterministic);
  CHECK(b.parameters.c1 == 0.8);
  CHECK(b.parameters.k == 3.0);

  CHECK_THROWS_WITH_AS(check_bound_deterministic(r, 1, 1, 1, 2, 4.0),
                       doctest::Contains("k >= k0"), InputError);

  const auto w = check_bound_weighted(r, 0.9, 0.9, 1, 2, 1, C1Formula::FourOverMin);
  CHECK(w.lhs == r.weighted_norm_sq);
  CHECK(w.constant == c1_stochastic(0.9, 0.9, 1, 2, 1, C1Formula::FourOverMin));
  CHECK(w.variant == BoundVariant::StochasticFourOverMin);
}

TEST_CASE("passing bounds keep passing with smaller constants")
{
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (int i = 0; i < 200; ++i)
  {
    const auto r = report(u(gen), u(gen) * 0.1, 1.0 + 9.0 * u(gen), u(gen));
    const double t1 = 0.5 + u(gen);
    const double t2 = 0.5 + u(gen);
    const auto b = check_bound_deterministic(r, t1, t2, 1, 2, 1);
    if (!b.holds())
    {
      continue;
    }
    for (double s : {0.9, 0.5, 0.1})
    {
      REQUIRE(check_bound_deterministic(r, s * t1, s * t2, 1, 2, 1).holds());
    }
  }
}

TEST_CASE("aggregate right-hand sides")
{
  const std::vector<double> c(7, 2.5);
  const std::vector<double> f(7, 0.4);
  CHECK(stochastic_rhs_independent(c, f) == doctest::Approx(1.0));
  CHECK(stochastic_rhs_dependent(c, f) == doctest::Approx(1.0));
  const std::vector<double> c1{3.0};
  const std::vector<double> f1{0.7};
  CHECK(stochastic_rhs_independent(c1, f1) == doctest::Approx(2.1));
  CHECK(stochastic_rhs_dependent(c1, f1) == doctest::Approx(2.1));

  // deterministic constant: reduces to C1 times the mean
  const std::vector<double> fv{0.1, 0.4, 0.2, 0.9};
  const std::vector<double> cc(4, 13.0);
  CHECK(stochastic_rhs_independent(cc, fv) == doctest::Approx(13.0 * 0.4));

  const std::vector<double> empty;
  CHECK_THROWS_AS(stochastic_rhs_independent(empty, empty), InputError);
  CHECK_THROWS_AS(stochastic_rhs_dependent(c, fv), InputError);
}

TEST_CASE("independent streams: product of means matches the mean of products")
{
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> a(1.0, 3.0);
  std::exponential_distribution<double> b(2.0);
  const int N = 10000;
  std::vector<double> c(N);
  std::vector<double> f(N);
  std::vector<double> prod(N);
  double mean = 0.0;
  for (int i = 0; i < N; ++i)
  {
    c[i] = a(gen);
    f[i] = b(gen);
    prod[i] = c[i] * f[i];
    mean += prod[i];
  }
  mean /= N;
  double var = 0.0;
  for (double p : prod)
  {
    var += (p - mean) * (p - mean);
  }
  const double se = std::sqrt(var / (N - 1) / N);
  CHECK(std::abs(stochastic_rhs_independent(c, f) - mean) < 3 * se);
}

TEST_CASE("dependent estimate dominates on positively correlated streams")
{
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial)
  {
    std::vector<double> c(500);
    std::vector<double> f(500);
    double mean_prod = 0.0;
    for (int i = 0; i < 500; ++i)
    {
      const double s = u(gen);
      c[i] = 1.0 + 2.0 * s + 0.1 * u(gen);
      f[i] = 0.2 + s * s;
      mean_prod += c[i] * f[i];
    }
    mean_prod /= 500;
    const double dep = stochastic_rhs_dependent(c, f);
    CHECK(dep >= stochastic_rhs_independent(c, f));
    CHECK(dep >= mean_prod * (1 - 1e-12));
  }
}
