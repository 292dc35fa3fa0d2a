#include "heunite/schrod.hpp"

#include "heunite/expansion.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace heunite::schrod {

namespace {

// class index 0..4 for m1 = -1, -1/2, 0, 1/2, 1
int class_index(double m1) {
    const double table[] = {-1.0, -0.5, 0.0, 0.5, 1.0};
    for (int i = 0; i < 5; ++i)
        if (m1 == table[i]) return i;
    throw domain_error("m1 must be one of -1, -1/2, 0, 1/2, 1");
}

// powers of z attached to vp[0..4] in each class's potential
constexpr int POWERS[5][5] = {
    {0, -1, -2, -3, -4}, // m1 = -1
    {0, 1, -1, -2, -3},  // m1 = -1/2
    {0, 1, 2, -1, -2},   // m1 = 0
    {0, 1, 2, 3, -1},    // m1 = 1/2
    {0, 1, 2, 3, 4},     // m1 = 1
};

void validate_class(const PotentialClass& pc) {
    class_index(pc.m1);
    if (!std::isfinite(pc.sigma) || pc.sigma == 0.0)
        throw domain_error("sigma must be finite and nonzero");
    if (!std::isfinite(pc.x0)) throw domain_error("x0 must be finite");
    for (double c : pc.vp)
        if (!std::isfinite(c)) throw domain_error("potential coefficients must be finite");
}

int require_branch(int b, const char* what) {
    if (b != 1 && b != -1)
        throw domain_error(std::string(what) + " must be +1 or -1");
    return b;
}

} // namespace

double potential_value(const PotentialClass& pc, double x) {
    double z = coordinate_map(pc, x);
    if (z == 0.0) throw domain_error("potential evaluation at the coordinate singularity");
    int ci = class_index(pc.m1);
    double v = 0.0;
    for (int i = 0; i < 5; ++i) {
        int p = POWERS[ci][i];
        v += pc.vp[i] * std::pow(z, p);
    }
    return v;
}

double coordinate_map(const PotentialClass& pc, double x) {
    validate_class(pc);
    if (!std::isfinite(x)) throw domain_error("x must be finite");
    double xs = (x - pc.x0) / pc.sigma;
    switch (class_index(pc.m1)) {
        case 0: // z = sqrt(2 x)
            if (xs <= 0.0) throw domain_error("square-root map needs (x - x0)/sigma > 0");
            return std::sqrt(2.0 * xs);
        case 1: // z = (3x/2)^{2/3}
            if (xs <= 0.0) throw domain_error("fractional-power map needs (x - x0)/sigma > 0");
            return std::cbrt(1.5 * xs) * std::cbrt(1.5 * xs);
        case 2: // z = x
            return xs;
        case 3: // z = x^2/4
            return xs * xs / 4.0;
        default: // z = e^x
            return std::exp(xs);
    }
}

double coordinate_map_inverse(const PotentialClass& pc, double z) {
    validate_class(pc);
    if (!std::isfinite(z) || z <= 0.0) throw domain_error("inverse map needs z > 0");
    double xs;
    switch (class_index(pc.m1)) {
        case 0: xs = z * z / 2.0; break;
        case 1: xs = (2.0 / 3.0) * z * std::sqrt(z); break;
        case 2: xs = z; break;
        case 3: xs = 2.0 * std::sqrt(z); break;
        default: xs = std::log(z); break;
    }
    return pc.x0 + pc.sigma * xs;
}

RvCoeffs rv_coeffs(const PotentialClass& pc) {
    validate_class(pc);
    int ci = class_index(pc.m1);
    int shift = static_cast<int>(std::lround(2.0 - 2.0 * pc.m1));
    double s2 = pc.sigma * pc.sigma;
    RvCoeffs rv;
    rv.r[shift] = s2;
    for (int i = 0; i < 5; ++i) rv.v[POWERS[ci][i] + shift] += s2 * pc.vp[i];
    return rv;
}

Reduction reduce(const PotentialClass& pc, double E, double mass, double hbar,
                 int branch_a0, int branch_a2) {
    validate_class(pc);
    require_branch(branch_a0, "branch_a0");
    require_branch(branch_a2, "branch_a2");
    if (!std::isfinite(E)) throw domain_error("E must be finite");
    if (!std::isfinite(mass) || mass <= 0.0) throw domain_error("mass must be positive");
    if (!std::isfinite(hbar) || hbar <= 0.0) throw domain_error("hbar must be positive");

    RvCoeffs rv = rv_coeffs(pc);
    double two_m_h2 = 2.0 * mass / (hbar * hbar);
    double g[5];
    for (int i = 0; i < 5; ++i) g[i] = two_m_h2 * (E * rv.r[i] - rv.v[i]);

    // a0 (a0 + m1 - 1) + g0 = 0
    double disc = (1.0 - pc.m1) * (1.0 - pc.m1) - 4.0 * g[0];
    if (disc < 0.0)
        throw complex_branch_error("the exponent quadratic has no real root");
    double a0 = 0.5 * ((1.0 - pc.m1) + branch_a0 * std::sqrt(disc));

    // 4 a2^2 + g4 = 0
    double a2sq = -g[4] / 4.0;
    if (a2sq < 0.0)
        throw complex_branch_error("the quadratic exponent square is negative");
    double a2 = -branch_a2 * std::sqrt(a2sq);

    // 4 a1 a2 + g3 = 0
    double a1;
    if (a2 != 0.0) {
        a1 = -g[3] / (4.0 * a2);
    } else if (g[3] != 0.0) {
        throw degenerate_error("cubic balance requires a2 != 0 for this potential");
    } else {
        a1 = 0.0;
    }

    Reduction red;
    red.a0 = a0;
    red.a1 = a1;
    red.a2 = a2;
    red.E = E;
    red.mass = mass;
    red.hbar = hbar;
    red.bch.gamma = 2.0 * a0 + pc.m1;
    red.bch.delta = 2.0 * a1;
    red.bch.eps = 4.0 * a2;
    red.bch.alpha = a1 * a1 + 2.0 * a2 * (2.0 * a0 + pc.m1 + 1.0) + g[2];
    red.bch.q = -a1 * (2.0 * a0 + pc.m1) - g[1];
    return red;
}

PsiEval psi_eval(const Reduction& red, const PotentialClass& pc, double z,
                 Solver solver, int sign) {
    validate_class(pc);
    if (!std::isfinite(z) || z <= 0.0) throw domain_error("psi_eval needs z > 0");

    bch::SeriesEval u;
    if (solver == Solver::frobenius) {
        const int orders[] = {60, 120, 240};
        for (int i = 0;; ++i) {
            bch::SeriesSolution sol = bch::frobenius_series(red.bch, orders[i]);
            try {
                u = bch::series_eval(sol, z);
                break;
            } catch (const truncation_error&) {
                if (i == 2) throw;
            }
        }
    } else {
        expansion::TerminationCheck tc = expansion::check_termination(red.bch, sign);
        if (!tc.is_terminating)
            throw domain_error("the finite-sum solver needs a terminating parameter set");
        expansion::HermiteExpansion ex =
            expansion::expansion_coeffs(red.bch, sign, tc.n_terminate);
        u = expansion::finite_sum_eval(ex, z);
    }

    double phi = std::pow(z, red.a0) * std::exp(red.a1 * z + red.a2 * z * z);
    double lphi = red.a0 / z + red.a1 + 2.0 * red.a2 * z;
    double psi = phi * u.u;
    double dpsi_dz = phi * (lphi * u.u + u.du);
    double rho = std::pow(z, pc.m1) / pc.sigma;
    return PsiEval{psi, dpsi_dz * rho};
}

} // namespace heunite::schrod
