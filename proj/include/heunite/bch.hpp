#pragma once

#include "heunite/errors.hpp"

#include <vector>

namespace heunite::bch {

// parameters of z u'' + (gamma + delta z + eps z^2) u' + (alpha z - q) u = 0
struct BchParams {
    double gamma;
    double delta;
    double eps;
    double alpha;
    double q;
};

// power-series solution u(z) = sum a_k z^k about the regular singular point,
// exponent-0 branch, normalized a_0 = 1
struct SeriesSolution {
    BchParams params;
    std::vector<double> coeffs;
    int trunc_order;
};

struct SeriesEval {
    double u;
    double du;
};

// coefficients from the three-term relation
//   (k+1)(k+gamma) a_{k+1} = (q - delta k) a_k - (alpha + eps (k-1)) a_{k-1}
// with a_{-1} = 0, a_0 = 1. Requires gamma not in {0,-1,-2,...} and
// trunc_order >= 2.
SeriesSolution frobenius_series(const BchParams& p, int trunc_order);

// Horner evaluation of u and u'; refuses when the last five retained terms
// do not certify the truncation tail below 1e-10 of the value scale
SeriesEval series_eval(const SeriesSolution& sol, double z);

// u'' + (gamma/z + delta + eps z) u' + ((alpha z - q)/z) u, as written
double bch_residual_raw(const BchParams& p, double u, double du, double ddu, double z);

// magnitude of the same, normalized by max(|each term|, 1)
double bch_residual(const BchParams& p, double u, double du, double ddu, double z);

} // namespace heunite::bch
