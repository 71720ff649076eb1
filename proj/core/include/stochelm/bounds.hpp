#ifndef STOCHELM_BOUNDS_HPP
#define STOCHELM_BOUNDS_HPP

#include <span>
#include <string>

#include "stochelm/helmsolve.hpp"

namespace stochelm
{

enum class BoundVariant
{
  Deterministic,          // tau1 ||grad u||^2 + tau2 k^2 ||u||^2 <= C1 ||f||^2
  StochasticMaxInverse,   // weighted norm, constant max{1/mu1, 1/mu2}(...)
  StochasticFourOverMin,  // weighted norm, constant (4 / min mu)[...]
  StochasticDependent     // weighted norm, Cauchy-Schwarz aggregate for dependent f and mu
};

std::string to_string(BoundVariant variant);

// Two expressions for the stochastic constant; they are not proportional.
enum class C1Formula
{
  MaxInverse,
  FourOverMin
};

std::string to_string(C1Formula formula);
C1Formula c1_formula_from_string(const std::string &name);

struct BoundParameters
{
  double c1 = 0.0;  // tau1 or mu1
  double c2 = 0.0;  // tau2 or mu2
  double R = 1.0;
  int d = 2;
  double k0 = 1.0;
  double k = 1.0;
};

struct BoundReport
{
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;     // lhs / rhs, 0 when both vanish
  double constant = 0.0;  // the C1 used
  BoundVariant variant = BoundVariant::Deterministic;
  BoundParameters parameters;

  bool holds(double tolerance = 0.0) const { return slack <= 1.0 + tolerance; }
};

// 4 [R^2 / tau1 + (1 / tau2)(R + (d - 1) / (2 k0))^2]. Throws InputError on a nonpositive
// parameter or d not in {2, 3}.
double c1_deterministic(double tau1, double tau2, double R, int d, double k0);

// MaxInverse:  max{1/mu1, 1/mu2} (R^2 / mu1 + (2 / mu2)(R + (d - 1) / (2 k0))^2)
// FourOverMin: (4 / min{mu1, mu2}) [R^2 / mu1 + (1 / mu2)(R + (d - 1) / (2 k0))^2]
double c1_stochastic(double mu1, double mu2, double R, int d, double k0, C1Formula formula);

// lhs / rhs with the 0/0 convention.
double slack_ratio(double lhs, double rhs);

// Throws InputError when k < k0 (the bound is only asserted for k >= k0).
BoundReport check_bound_deterministic(const SolveReport &report, double tau1, double tau2,
                                      double R, int d, double k0);

// Weighted-norm check against a given stochastic constant: lhs = weighted_norm_sq.
BoundReport check_bound_weighted(const SolveReport &report, double mu1, double mu2, double R,
                                 int d, double k0, C1Formula formula);

// mean(c1) * mean(f_norm_sq). Throws InputError on empty or mismatched input.
double stochastic_rhs_independent(std::span<const double> c1_samples,
                                  std::span<const double> f_norm_sq_samples);

// sqrt(mean(c1^2)) * sqrt(mean(f_norm_sq^2)).
double stochastic_rhs_dependent(std::span<const double> c1_samples,
                                std::span<const double> f_norm_sq_samples);

}  // namespace stochelm

#endif  // STOCHELM_BOUNDS_HPP
