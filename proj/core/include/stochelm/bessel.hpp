#ifndef STOCHELM_BESSEL_HPP
#define STOCHELM_BESSEL_HPP

#include <complex>

namespace stochelm::special
{

// Integer-order Bessel functions of real positive argument. J uses the ascending series
// for x <= 12 and Miller's backward recurrence otherwise (and for all n >= 2); Y0 and Y1
// use the ascending series for x <= 12 and the Hankel asymptotic expansion beyond, with
// forward recurrence for higher orders.
double bessel_j(int n, double x);
double bessel_y(int n, double x);

std::complex<double> hankel1(int n, double x);

}  // namespace stochelm::special

#endif  // STOCHELM_BESSEL_HPP
