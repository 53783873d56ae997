#pragma once

namespace ftdecay::specfun {

// J_nu(x) for order nu = nu2/2, nu2 >= 0 integer. Absolute error <= 1e-10 for
// x <= 1e4. Ascending series for x <= max(12, 2*nu); beyond that, Hankel
// asymptotics (integer orders) or closed spherical-Bessel forms (half-integer
// orders), extended upward by the stable forward recurrence.
double bessel_j(int nu2, double x);

// sin(x)/x with the removable singularity filled by its Taylor polynomial for
// |x| < 1e-4.
double sinc(double x);

}  // namespace ftdecay::specfun
