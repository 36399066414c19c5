#ifndef DEPHASELAB_SPECIAL_FUNCTIONS_HPP
#define DEPHASELAB_SPECIAL_FUNCTIONS_HPP

// Real and complex special-function kernels used by the dephasing closed
// forms: log-gamma on the positive axis, ln|Gamma(x+iy)|^2 along complex
// offsets, the gamma function on the negative axis, and the Hurwitz zeta
// function zeta(z,v) for z > 1, v > 0.
//
// All routines are stateless and reentrant.

namespace dephaselab {

/// ln Gamma(x) for x > 0.  Lanczos approximation (g = 7, 9 terms) with the
/// reflection formula below x = 0.5.  Relative error <= 1e-13 on
/// [1e-3, 1e3].  Throws std::domain_error for x <= 0.
double ln_gamma_real(double x);

/// Gamma(x) for x > 0 or negative non-integer x (via reflection).
/// Throws std::domain_error at poles x = 0, -1, -2, ...
double gamma_real(double x);

/// ln |Gamma(x+iy)|^2.  Recurrence shifts the real part above 10, then a
/// Stirling expansion.  Poles on the real axis (y = 0, x a nonpositive
/// integer) throw std::domain_error.
double ln_abs_gamma_sq(double x, double y);

/// Hurwitz zeta  zeta(z,v) = sum_{n>=0} (n+v)^{-z}  for z > 1, v > 0,
/// by Euler-Maclaurin summation.  Relative error well below 1e-10.
/// Throws std::domain_error outside the domain.
double hurwitz_zeta(double z, double v);

} // namespace dephaselab

#endif
