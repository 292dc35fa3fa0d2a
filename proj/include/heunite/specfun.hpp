#pragma once
#include "heunite/errors.hpp"

namespace heunite::specfun {

// Value with a bound on its absolute error. The bound is propagated from
// series-truncation and rounding estimates and is intended to be
// conservative; callers may rely on |value - true| <= abs_err_estimate.
struct EvalResult {
    double value;
    double abs_err_estimate;
};

struct LogGamma {
    double log_abs; // log |Gamma(x)|
    int sign;       // sign of Gamma(x), +1 or -1
};

// Throws pole_error at x = 0, -1, -2, ...
LogGamma log_gamma(double x);

// 1 / Gamma(x); exactly 0 at the poles x = 0, -1, -2, ...
double rgamma(double x);

// Kummer confluent hypergeometric M(a, b, x) by direct series.
// Supported argument range |x| <= 130; at most 5000 terms.
// Throws domain_error for b = 0, -1, -2, ... and for |x| > 130;
// precision_loss_error if neither double nor extended evaluation
// can certify the result.
EvalResult kummer_m(double a, double b, double x);

// Hermite function H_nu(w) of real (generally non-integer) order.
// Validated envelope nu in [-5, 60], w^2 <= 130; range_error outside.
// Exact polynomial recurrence for nu = 0, 1, 2, ...; otherwise the
// two-Kummer representation in double, then extended precision, then
// (for w > 0 with nu < 0 or w^2 > 2 nu + 4) a monotone-integrand
// integral representation. precision_loss_error if nothing certifies.
EvalResult hermite_fn(double nu, double w);

// dH_nu/dw = 2 nu H_{nu-1}(w)
EvalResult hermite_deriv(double nu, double w);

// H_{nu+1}(w) = 2 w H_nu(w) - 2 nu H_{nu-1}(w); pure arithmetic,
// no evaluation and no error conditions.
double hermite_raise(double nu, double w, double h_nu_minus_1, double h_nu);

} // namespace heunite::specfun
