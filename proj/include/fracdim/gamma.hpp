#pragma once

namespace fracdim {

/// Gamma function via a Lanczos approximation (g = 7, 9 coefficients).
/// Relative accuracy is better than 1e-14 on (0, 30); negative non-integer
/// arguments are handled through the reflection formula. Every formula in
/// the library routes through this one implementation so that ratios of
/// gamma values cancel consistently.
double gamma_fn(double x);

/// log |Gamma(x)| for x > 0; used where Gamma itself would overflow.
double log_gamma(double x);

} // namespace fracdim
