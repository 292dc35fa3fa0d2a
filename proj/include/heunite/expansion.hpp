#pragma once

#include "heunite/bch.hpp"
#include "heunite/errors.hpp"

#include <complex>
#include <vector>

namespace heunite::expansion {

// u(z) = sum_n c_n H_{alpha0+n}(s0 (z + z0)): a ladder of Hermite functions
// whose orders step by one, attached to a BCH parameter set
struct HermiteExpansion {
    bch::BchParams params;
    double alpha0;              // base order, gamma - alpha/eps
    double s0;                  // argument scale, sign * sqrt(-eps/2)
    double z0;                  // argument shift, delta/eps
    int sign;                   // branch selector for s0
    std::vector<double> coeffs; // c_0..c_{n_max}, normalized c_0 = 1
};

// monic polynomial in q whose roots make the ladder terminate after N+1 terms
struct QPolynomial {
    int n_terminate;            // N
    std::vector<double> coeffs; // ascending powers of q, degree N+1
};

struct QRoots {
    std::vector<double> real_roots;                  // ascending, with multiplicity
    std::vector<std::complex<double>> complex_roots; // reported, never dropped
};

struct TerminationCheck {
    bool is_terminating;
    int n_terminate; // N when terminating, -1 otherwise
    double c_tail;   // max(|c_{N+1}|,|c_{N+2}|)/max|c_0..N|; NaN when -gamma is
                     // not a nonnegative integer or the ladder breaks down
};

struct RecurrenceTriple {
    double R, Q, P;
};

// three-term relation R_n c_n + Q_{n-1} c_{n-1} + P_{n-2} c_{n-2} = 0;
// requires eps < 0 (real argument scale), sign picks the s0 branch
RecurrenceTriple recurrence_coeffs(const bch::BchParams& p, double alpha0, int n,
                                   int sign);

// runs the ladder from c_0 = 1; throws resonance_error when some R_n = 0 for
// n >= 1, and rejects alpha0 = 0 (the polynomial ladder is not provided)
HermiteExpansion expansion_coeffs(const bch::BchParams& p, int sign, int n_max);

// c_{N+1} as a monic polynomial in q, built by running the ladder in
// polynomial arithmetic with gamma = -N fixed
QPolynomial q_polynomial(int N, double delta, double eps, double alpha);

// all roots by simultaneous iteration; |Im| <= 1e-8 relative snaps to real,
// near-coincident roots are merged to their cluster mean with multiplicity
QRoots q_roots(const QPolynomial& poly);

// true iff gamma = -N (within 1e-10) and the generated c_{N+1} is below
// 1e-10 of the head's magnitude
TerminationCheck check_termination(const bch::BchParams& p, int sign);

// evaluate the (terminated or truncated) sum and its z-derivative
bch::SeriesEval finite_sum_eval(const HermiteExpansion& ex, double z);

// second z-derivative via the order-lowering identity, independent of the
// differential equation being tested
double finite_sum_ddu(const HermiteExpansion& ex, double z);

} // namespace heunite::expansion
