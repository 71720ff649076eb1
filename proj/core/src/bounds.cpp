#include "stochelm/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stochelm/errors.hpp"

namespace stochelm
{

std::string to_string(BoundVariant variant)
{
  switch (variant)
  {
    case BoundVariant::Deterministic:
      return "deterministic";
    case BoundVariant::StochasticMaxInverse:
      return "stochastic-max-inverse";
    case BoundVariant::StochasticFourOverMin:
      return "stochastic-four-over-min";
    case BoundVariant::StochasticDependent:
      return "stochastic-dependent";
  }
  return "unknown";
}

std::string to_string(C1Formula formula)
{
  return formula == C1Formula::MaxInverse ? "max-inverse" : "four-over-min";
}

C1Formula c1_formula_from_string(const std::string &name)
{
  if (name == "max-inverse")
  {
    return C1Formula::MaxInverse;
  }
  if (name == "four-over-min")
  {
    return C1Formula::FourOverMin;
  }
  throw InputError("unknown C1 formula '" + name + "' (expected max-inverse or four-over-min)");
}

namespace
{

void require_positive(double value, const char *name)
{
  if (!(value > 0.0) || !std::isfinite(value))
  {
    std::ostringstream msg;
    msg << name << " must be positive and finite, got " << value;
    throw InputError(msg.str());
  }
}

double exterior_term(double R, int d, double k0)
{
  if (d != 2 && d != 3)
  {
    throw InputError("dimension d must be 2 or 3");
  }
  const double t = R + (d - 1) / (2.0 * k0);
  return t * t;
}

}  // namespace

double c1_deterministic(double tau1, double tau2, double R, int d, double k0)
{
  require_positive(tau1, "tau1");
  require_positive(tau2, "tau2");
  require_positive(R, "R");
  require_positive(k0, "k0");
  return 4.0 * (R * R / tau1 + exterior_term(R, d, k0) / tau2);
}

double c1_stochastic(double mu1, double mu2, double R, int d, double k0, C1Formula formula)
{
  require_positive(mu1, "mu1");
  require_positive(mu2, "mu2");
  require_positive(R, "R");
  require_positive(k0, "k0");
  const double X2 = exterior_term(R, d, k0);
  if (formula == C1Formula::MaxInverse)
  {
    return std::max(1.0 / mu1, 1.0 / mu2) * (R * R / mu1 + 2.0 * X2 / mu2);
  }
  return 4.0 / std::min(mu1, mu2) * (R * R / mu1 + X2 / mu2);
}

double slack_ratio(double lhs, double rhs)
{
  if (rhs == 0.0)
  {
    return lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return lhs / rhs;
}

BoundReport check_bound_deterministic(const SolveReport &report, double tau1, double tau2,
                                      double R, int d, double k0)
{
  if (report.k < k0)
  {
    std::ostringstream msg;
    msg << "bound hypothesis k >= k0 violated (k = " << report.k << ", k0 = " << k0 << ")";
    throw InputError(msg.str());
  }
  BoundReport b;
  b.variant = BoundVariant::Deterministic;
  b.parameters = {tau1, tau2, R, d, k0, report.k};
  b.constant = c1_deterministic(tau1, tau2, R, d, k0);
  b.lhs = tau1 * report.grad_norm_sq + tau2 * report.k * report.k * report.l2_norm_sq;
  b.rhs = b.constant * report.f_norm_sq;
  b.slack = slack_ratio(b.lhs, b.rhs);
  return b;
}

BoundReport check_bound_weighted(const SolveReport &report, double mu1, double mu2, double R,
                                 int d, double k0, C1Formula formula)
{
  if (report.k < k0)
  {
    std::ostringstream msg;
    msg << "bound hypothesis k >= k0 violated (k = " << report.k << ", k0 = " << k0 << ")";
    throw InputError(msg.str());
  }
  BoundReport b;
  b.variant = formula == C1Formula::MaxInverse ? BoundVariant::StochasticMaxInverse
                                         : BoundVariant::StochasticFourOverMin;
  b.parameters = {mu1, mu2, R, d, k0, report.k};
  b.constant = c1_stochastic(mu1, mu2, R, d, k0, formula);
  b.lhs = report.weighted_norm_sq;
  b.rhs = b.constant * report.f_norm_sq;
  b.slack = slack_ratio(b.lhs, b.rhs);
  return b;
}

namespace
{

void check_samples(std::span<const double> c1, std::span<const double> f)
{
  if (c1.empty() || f.empty())
  {
    throw InputError("stochastic bound estimate needs at least one sample");
  }
  if (c1.size() != f.size())
  {
    throw InputError("stochastic bound estimate: sample sequences differ in length");
  }
}

double mean(std::span<const double> v)
{
  double s = 0.0;
  for (double x : v)
  {
    s += x;
  }
  return s / static_cast<double>(v.size());
}

double mean_square(std::span<const double> v)
{
  double s = 0.0;
  for (double x : v)
  {
    s += x * x;
  }
  return s / static_cast<double>(v.size());
}

}  // namespace

double stochastic_rhs_independent(std::span<const double> c1_samples,
                                  std::span<const double> f_norm_sq_samples)
{
  check_samples(c1_samples, f_norm_sq_samples);
  return mean(c1_samples) * mean(f_norm_sq_samples);
}

double stochastic_rhs_dependent(std::span<const double> c1_samples,
                                std::span<const double> f_norm_sq_samples)
{
  check_samples(c1_samples, f_norm_sq_samples);
  return std::sqrt(mean_square(c1_samples)) * std::sqrt(mean_square(f_norm_sq_samples));
}

}  // namespace stochelm
