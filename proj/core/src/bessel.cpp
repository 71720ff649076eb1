#include "stochelm/bessel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "stochelm/errors.hpp"

namespace stochelm::special
{

namespace
{

constexpr double kSeriesLimit = 12.0;
constexpr double kEulerGamma = 0.57721566490153286060651209;

// sum_k (-1)^k (x/2)^(2k+n) / (k! (k+n)!)
double j_series(int n, double x)
{
  const double half = 0.5 * x;
  double term = 1.0;
  for (int i = 1; i <= n; ++i)
  {
    term *= half / i;
  }
  const double q = -half * half;
  double sum = term;
  for (int k = 1; k < 200; ++k)
  {
    term *= q / (static_cast<double>(k) * (k + n));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum) && k > half)
    {
      break;
    }
  }
  return sum;
}

// Integer-order Y_n ascending series:
//   Y_n = -(x/2)^-n / pi sum_{k<n} (n-k-1)!/k! (x^2/4)^k + (2/pi) ln(x/2) J_n
//         - (x/2)^n / pi sum_k [psi(k+1) + psi(n+k+1)] (-x^2/4)^k / (k! (n+k)!)
double y_series(int n, double x)
{
  const double half = 0.5 * x;
  const double q = half * half;
  double finite = 0.0;
  if (n > 0)
  {
    double factorial = 1.0;  // (n-1)!
    for (int i = 2; i < n; ++i)
    {
      factorial *= i;
    }
    double term = factorial;  // k = 0
    for (int k = 0; k < n; ++k)
    {
      finite += term;
      if (k + 1 < n)
      {
        term *= q / ((k + 1.0) * (n - k - 1.0));
      }
    }
    finite *= std::pow(half, -n) / std::numbers::pi;
  }
  auto psi = [](int m)  // digamma at positive integer m
  {
    double s = -kEulerGamma;
    for (int i = 1; i < m; ++i)
    {
      s += 1.0 / i;
    }
    return s;
  };
  double term = 1.0;
  for (int i = 1; i <= n; ++i)
  {
    term /= i;  // 1 / n!
  }
  double psi_a = psi(1);
  double psi_b = psi(n + 1);
  double sum = term * (psi_a + psi_b);
  for (int k = 1; k < 200; ++k)
  {
    term *= -q / (static_cast<double>(k) * (k + n));
    psi_a += 1.0 / k;
    psi_b += 1.0 / (k + n);
    const double contrib = term * (psi_a + psi_b);
    sum += contrib;
    if (std::abs(contrib) < 1e-17 * std::abs(sum) && k > half)
    {
      break;
    }
  }
  return -finite + (2.0 / std::numbers::pi) * std::log(half) * j_series(n, x) -
         std::pow(half, n) / std::numbers::pi * sum;
}

// Hankel asymptotic expansion of H_nu^(1)(x) for large x.
std::complex<double> hankel_asymptotic(int nu, double x)
{
  const double mu = 4.0 * nu * nu;
  std::complex<double> sum = 1.0;
  std::complex<double> term = 1.0;
  const std::complex<double> i(0.0, 1.0);
  double last = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 60; ++k)
  {
    const double odd = 2.0 * k - 1.0;
    const std::complex<double> next = term * i * (mu - odd * odd) / (k * 8.0 * x);
    const double mag = std::abs(next);
    if (mag > last)
    {
      break;  // asymptotic series starts to diverge
    }
    term = next;
    last = mag;
    sum += term;
    if (mag < 1e-17 * std::abs(sum))
    {
      break;
    }
  }
  const double phase = x - (0.5 * nu + 0.25) * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * std::exp(i * phase) * sum;
}

// Miller's backward recurrence normalised by J0 + 2 sum J_2k = 1.
double j_miller(int n, double x)
{
  const int start =
      2 * ((std::max(n, static_cast<int>(x)) + 20 + static_cast<int>(std::sqrt(40.0 * n + 40.0 * x))) / 2);
  double next = 0.0;
  double curr = 1e-300;
  double result = 0.0;
  double norm = 0.0;
  for (int k = start; k >= 1; --k)
  {
    const double prev = (2.0 * k / x) * curr - next;
    next = curr;
    curr = prev;  // J_{k-1}
    if (k - 1 == n)
    {
      result = curr;
    }
    if ((k - 1) % 2 == 0)
    {
      norm += (k - 1 == 0 ? 1.0 : 2.0) * curr;
    }
    if (std::abs(curr) > 1e250)
    {
      curr *= 1e-250;
      next *= 1e-250;
      result *= 1e-250;
      norm *= 1e-250;
    }
  }
  return result / norm;
}

void check_argument(double x)
{
  if (!(x > 0.0) || !std::isfinite(x))
  {
    throw InputError("Bessel functions require a positive finite argument");
  }
}

}  // namespace

double bessel_j(int n, double x)
{
  check_argument(x);
  if (n < 0)
  {
    return (n % 2 == 0 ? 1.0 : -1.0) * bessel_j(-n, x);
  }
  if (n <= 1 && x <= kSeriesLimit)
  {
    return j_series(n, x);
  }
  return j_miller(n, x);
}

double bessel_y(int n, double x)
{
  check_argument(x);
  if (n < 0)
  {
    return (n % 2 == 0 ? 1.0 : -1.0) * bessel_y(-n, x);
  }
  double y0 = 0.0;
  double y1 = 0.0;
  if (x <= kSeriesLimit)
  {
    y0 = y_series(0, x);
    y1 = y_series(1, x);
  }
  else
  {
    y0 = hankel_asymptotic(0, x).imag();
    y1 = hankel_asymptotic(1, x).imag();
  }
  if (n == 0)
  {
    return y0;
  }
  // Forward recurrence is stable for Y.
  for (int k = 1; k < n; ++k)
  {
    const double y2 = (2.0 * k / x) * y1 - y0;
    y0 = y1;
    y1 = y2;
  }
  return y1;
}

std::complex<double> hankel1(int n, double x)
{
  return {bessel_j(n, x), bessel_y(n, x)};
}

}  // namespace stochelm::special
