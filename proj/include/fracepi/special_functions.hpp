#pragma once

namespace fracepi {

// Lanczos approximation (g = 7, 9 terms), ~1e-15 relative on (0, 171).
// Negative non-integer arguments go through the reflection formula.
// Throws ValidationError at the poles x = 0, -1, -2, ...
double gamma(double x);

// ln|Gamma(x)|, finite for large x where gamma() overflows.
double log_gamma(double x);

// 1/Gamma(x), defined everywhere: zero at the poles of Gamma.
double reciprocal_gamma(double x);

}  // namespace fracepi
