#pragma once

#include "heunite/bch.hpp"
#include "heunite/errors.hpp"

#include <array>

namespace heunite::schrod {

// one of the five power-law coordinate classes; m1 in {-1, -1/2, 0, 1/2, 1},
// sigma != 0. vp are the potential coefficients attached to the class's
// z-representation terms (see potential_value), in energy units.
struct PotentialClass {
    double m1 = 0.0;
    std::array<double, 5> vp{};
    double sigma = 1.0;
    double x0 = 0.0;
};

// r(z) = sigma^2 z^{2-2m1} and v(z) = V(z) sigma^2 z^{2-2m1}, both stored
// as ascending coefficients of polynomials of degree at most four
struct RvCoeffs {
    std::array<double, 5> r{};
    std::array<double, 5> v{};
};

// psi = z^{a0} exp(a1 z + a2 z^2) u(z) with u solving the associated
// equation; E, mass, hbar are carried for residual checks
struct Reduction {
    double a0 = 0.0;
    double a1 = 0.0;
    double a2 = 0.0;
    bch::BchParams bch{};
    double E = 0.0;
    double mass = 0.0;
    double hbar = 0.0;
};

struct PsiEval {
    double psi;
    double dpsi_dx;
};

enum class Solver { frobenius, finite_sum };

// the potential of the class at physical coordinate x
double potential_value(const PotentialClass& pc, double x);

// z(x) per the class's power map, with x -> (x - x0)/sigma applied first
double coordinate_map(const PotentialClass& pc, double x);

// x(z); z > 0
double coordinate_map_inverse(const PotentialClass& pc, double z);

// exactly one r index (2 - 2 m1) is sigma^2; v distributes the potential
// coefficients by power bookkeeping
RvCoeffs rv_coeffs(const PotentialClass& pc);

// solves the pre-factor constraints and assembles the equation parameters.
// branch_a0 = +1 takes the larger root of the indicial quadratic;
// branch_a2 = +1 takes the negative (decaying) square root for a2.
// Throws complex_branch_error when a selected root is not real and
// degenerate_error when a2 = 0 leaves the cubic balance unsatisfiable.
Reduction reduce(const PotentialClass& pc, double E, double mass, double hbar,
                 int branch_a0, int branch_a2);

// psi and dpsi/dx at z; solver picks the power series or the terminated
// Hermite sum (the latter requires a terminating parameter set), sign picks
// the Hermite argument branch
PsiEval psi_eval(const Reduction& red, const PotentialClass& pc, double z,
                 Solver solver, int sign);

} // namespace heunite::schrod
