#include "doctest.h"

#include "heunite/expansion.hpp"
#include "heunite/n3well.hpp"
#include "heunite/oracle.hpp"
#include "heunite/schrod.hpp"

#include <cmath>
#include <random>

using namespace heunite;
using namespace heunite::schrod;

namespace {

PotentialClass make_class(double m1, std::array<double, 5> vp, double sigma = 1.0,
                          double x0 = 0.0) {
    PotentialClass pc;
    pc.m1 = m1;
    pc.vp = vp;
    pc.sigma = sigma;
    pc.x0 = x0;
    return pc;
}

// V = c2/x^2 + Vm x^{-2/3} + V0 + c1 x^{2/3} with the exponents and the
// x^{2/3} weight tied to Vm so the reduction terminates; class m1 = -1/2
PotentialClass tied_well_class(double Vm, double V0, double m, double hb) {
    double c23 = std::cbrt(2.0 / 3.0) * std::cbrt(2.0 / 3.0);
    return make_class(-0.5, {V0, (9.0 * m * Vm * Vm / (8.0 * hb * hb)) * c23,
                             Vm / c23, 0.0, 55.0 * hb * hb / (32.0 * m)});
}

// relative mismatch between psi_eval and the adaptive integrator seeded
// from psi_eval at the first checkpoint
double ode_mismatch(const Reduction& red, const PotentialClass& pc, Solver sv,
                    double z_from, double z_to, int checkpoints) {
    double tm = 2.0 * red.mass / (red.hbar * red.hbar);
    oracle::OdeProblem op;
    op.p = [](double) { return 0.0; };
    op.r = [&](double x) { return -tm * (potential_value(pc, x) - red.E); };
    op.z_lo = coordinate_map_inverse(pc, z_from);
    PsiEval first = psi_eval(red, pc, z_from, sv, +1);
    op.u0 = first.psi;
    op.du0 = first.dpsi_dx;
    double worst = 0.0;
    for (int i = 1; i <= checkpoints; ++i) {
        double z = z_from + (z_to - z_from) * i / checkpoints;
        oracle::OdeResult got = oracle::integrate(op, coordinate_map_inverse(pc, z), 1e-12);
        PsiEval pe = psi_eval(red, pc, z, sv, +1);
        double scale = std::fabs(got.u) + std::fabs(got.du) + 1e-300;
        worst = std::max(worst, (std::fabs(got.u - pe.psi) +
                                 std::fabs(got.du - pe.dpsi_dx)) / scale);
    }
    return worst;
}

} // namespace

TEST_SUITE("schrod") {

TEST_CASE("class validation") {
    CHECK_THROWS_AS(coordinate_map(make_class(0.3, {}), 1.0), domain_error);
    CHECK_THROWS_AS(coordinate_map(make_class(0.0, {}, 0.0), 1.0), domain_error);
    CHECK_THROWS_AS(reduce(make_class(0.0, {}), 0.0, 1.0, 1.0, +1, 2), domain_error);
    CHECK_THROWS_AS(reduce(make_class(0.0, {}), 0.0, -1.0, 1.0, +1, +1), domain_error);
    CHECK_THROWS_AS(reduce(make_class(0.0, {}), 0.0, 1.0, 0.0, +1, +1), domain_error);
}

TEST_CASE("coordinate maps at pinned points") {
    CHECK(coordinate_map(make_class(-0.5, {}), 2.0 / 3.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(coordinate_map(make_class(1.0, {}), 0.0) == 1.0);
    CHECK(coordinate_map(make_class(-1.0, {}), 0.5) == doctest::Approx(1.0).epsilon(1e-15));
    // shift and scale act before the power map
    CHECK(coordinate_map(make_class(0.0, {}, 2.0, 1.0), 3.0) == 1.0);
    CHECK(coordinate_map(make_class(1.0, {}, 2.0, 1.0), 1.0) == 1.0);
    CHECK_THROWS_AS(coordinate_map(make_class(-1.0, {}), -0.5), domain_error);
    CHECK_THROWS_AS(coordinate_map(make_class(-0.5, {}, 1.0, 2.0), 1.5), domain_error);
}

TEST_CASE("map and inverse round-trip on every class") {
    for (double m1 : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
        PotentialClass pc = make_class(m1, {}, 1.3, -0.4);
        for (double z : {0.3, 1.0, 2.7}) {
            double x = coordinate_map_inverse(pc, z);
            CHECK(coordinate_map(pc, x) == doctest::Approx(z).epsilon(1e-14));
        }
        CHECK_THROWS_AS(coordinate_map_inverse(pc, 0.0), domain_error);
        CHECK_THROWS_AS(coordinate_map_inverse(pc, -1.0), domain_error);
    }
}

TEST_CASE("r and v bookkeeping") {
    std::array<double, 5> vp{1.5, -2.0, 0.5, 3.0, -1.0};

    RvCoeffs a = rv_coeffs(make_class(-0.5, vp));
    CHECK(a.r == std::array<double, 5>{0, 0, 0, 1.0, 0});
    CHECK(a.v == std::array<double, 5>{-1.0, 3.0, 0.5, 1.5, -2.0});

    RvCoeffs b = rv_coeffs(make_class(0.0, vp));
    CHECK(b.r == std::array<double, 5>{0, 0, 1.0, 0, 0});
    CHECK(b.v == std::array<double, 5>{-1.0, 3.0, 1.5, -2.0, 0.5});

    RvCoeffs c = rv_coeffs(make_class(1.0, vp, 2.0));
    CHECK(c.r == std::array<double, 5>{4.0, 0, 0, 0, 0});
    CHECK(c.v == std::array<double, 5>{6.0, -8.0, 2.0, 12.0, -4.0});

    RvCoeffs d = rv_coeffs(make_class(-1.0, vp));
    CHECK(d.r == std::array<double, 5>{0, 0, 0, 0, 1.0});
    CHECK(d.v == std::array<double, 5>{-1.0, 3.0, 0.5, -2.0, 1.5});

    RvCoeffs e = rv_coeffs(make_class(0.5, vp));
    CHECK(e.r == std::array<double, 5>{0, 1.0, 0, 0, 0});
    CHECK(e.v == std::array<double, 5>{-1.0, 1.5, -2.0, 0.5, 3.0});
}

TEST_CASE("v coefficients reproduce the potential") {
    std::mt19937_64 rng(20250817);
    std::uniform_real_distribution<double> u3(-3.0, 3.0);
    double m1s[5] = {-1.0, -0.5, 0.0, 0.5, 1.0};
    for (int t = 0; t < 25; ++t) {
        PotentialClass pc = make_class(m1s[t % 5],
                                       {u3(rng), u3(rng), u3(rng), u3(rng), u3(rng)},
                                       0.5 + 0.1 * (t % 7));
        RvCoeffs rv = rv_coeffs(pc);
        for (double z : {0.4, 1.1, 2.3}) {
            double x = coordinate_map_inverse(pc, z);
            double vpoly = 0.0, rpoly = 0.0, zk = 1.0;
            for (int i = 0; i < 5; ++i) {
                vpoly += rv.v[i] * zk;
                rpoly += rv.r[i] * zk;
                zk *= z;
            }
            double weight = pc.sigma * pc.sigma * std::pow(z, 2.0 - 2.0 * pc.m1);
            CHECK(rpoly == doctest::Approx(weight).epsilon(1e-13));
            CHECK(vpoly == doctest::Approx(potential_value(pc, x) * weight)
                               .epsilon(1e-12));
        }
    }
}

TEST_CASE("exponent quadratic roots and branch selection") {
    PotentialClass pc = make_class(-0.5, {});
    Reduction plus = reduce(pc, 0.0, 1.0, 1.0, +1, +1);
    Reduction minus = reduce(pc, 0.0, 1.0, 1.0, -1, +1);
    CHECK(plus.a0 == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(minus.a0 == 0.0);
    CHECK(plus.a2 == 0.0);
    CHECK(plus.a1 == 0.0);
}

TEST_CASE("quadratic exponent sign convention") {
    // with only the z^3 potential term, a2^2 = m vp3 / (2 hbar^2)
    PotentialClass pc = make_class(0.5, {0.0, 0.0, 0.0, 2.0, 0.0});
    CHECK(reduce(pc, 0.3, 1.0, 1.0, +1, +1).a2 == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(reduce(pc, 0.3, 1.0, 1.0, +1, -1).a2 == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("complex and degenerate branches are refused") {
    CHECK_THROWS_AS(reduce(make_class(0.0, {0, 0, 0, 0, -1.0}), 0.0, 1.0, 1.0, +1, +1),
                    complex_branch_error);
    CHECK_THROWS_AS(reduce(make_class(0.0, {0, 0, -1.0, 0, 0}), 0.0, 1.0, 1.0, +1, +1),
                    complex_branch_error);
    CHECK_THROWS_AS(reduce(make_class(0.0, {0, 1.0, 0, 0, 0}), 0.0, 1.0, 1.0, +1, +1),
                    degenerate_error);
    CHECK_NOTHROW(reduce(make_class(0.0, {1.0, 0, 0, 0, 0}), 0.0, 1.0, 1.0, +1, +1));
}

TEST_CASE("constant-factor solution comes out exactly") {
    // coefficients tuned so the series factor is identically one
    PotentialClass pc = make_class(0.0, {0.0, 2.0, 2.0, -1.0, 0.0});
    Reduction red = reduce(pc, 2.5, 1.0, 1.0, +1, +1);
    CHECK(red.a0 == 1.0);
    CHECK(red.a1 == -1.0);
    CHECK(red.a2 == -1.0);
    CHECK(red.bch.gamma == 2.0);
    CHECK(red.bch.delta == -2.0);
    CHECK(red.bch.eps == -4.0);
    CHECK(red.bch.alpha == 0.0);
    CHECK(red.bch.q == 0.0);
    for (double z : {0.5, 1.5}) {
        PsiEval pe = psi_eval(red, pc, z, Solver::frobenius, +1);
        double e = std::exp(-z - z * z);
        CHECK(pe.psi == doctest::Approx(z * e).epsilon(1e-14));
        CHECK(pe.dpsi_dx == doctest::Approx(e * (1.0 - z - 2.0 * z * z)).epsilon(1e-13));
    }
    CHECK_THROWS_AS(psi_eval(red, pc, 0.0, Solver::frobenius, +1), domain_error);
    CHECK_THROWS_AS(psi_eval(red, pc, -1.0, Solver::frobenius, +1), domain_error);
}

TEST_CASE("all defining balances hold for random classes and branches") {
    std::mt19937_64 rng(771203);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double m1s[5] = {-1.0, -0.5, 0.0, 0.5, 1.0};
    int reductions = 0;
    for (int t = 0; t < 200; ++t) {
        PotentialClass pc = make_class(m1s[t % 5], {});
        for (int i = 0; i < 5; ++i) pc.vp[i] = -2.0 + 4.0 * u01(rng);
        double E = -2.0 + 4.0 * u01(rng);
        double m = 0.5 + 2.0 * u01(rng), hb = 0.5 + 2.0 * u01(rng);
        RvCoeffs rv = rv_coeffs(pc);
        double tm = 2.0 * m / (hb * hb);
        // every real branch combination must produce a consistent reduction
        for (int ba0 : {+1, -1}) {
            for (int ba2 : {+1, -1}) {
                Reduction red;
                try {
                    red = reduce(pc, E, m, hb, ba0, ba2);
                } catch (const validation_error&) {
                    continue;
                }
                ++reductions;
                double g[5];
                for (int i = 0; i < 5; ++i) g[i] = tm * (E * rv.r[i] - rv.v[i]);
                CHECK(std::fabs(red.a0 * (red.a0 + pc.m1 - 1.0) + g[0]) <= 1e-10);
                CHECK(std::fabs(4.0 * red.a1 * red.a2 + g[3]) <= 1e-10);
                CHECK(std::fabs(4.0 * red.a2 * red.a2 + g[4]) <= 1e-10);
                CHECK(red.bch.gamma == doctest::Approx(2.0 * red.a0 + pc.m1).epsilon(1e-14));
                CHECK(red.bch.delta == doctest::Approx(2.0 * red.a1).epsilon(1e-14));
                CHECK(red.bch.eps == doctest::Approx(4.0 * red.a2).epsilon(1e-14));
                double alpha_want = red.a1 * red.a1 +
                                    2.0 * red.a2 * (2.0 * red.a0 + pc.m1 + 1.0) + g[2];
                double q_want = -red.a1 * (2.0 * red.a0 + pc.m1) - g[1];
                CHECK(std::fabs(red.bch.alpha - alpha_want) <=
                      1e-10 * std::max(1.0, std::fabs(alpha_want)));
                CHECK(std::fabs(red.bch.q - q_want) <=
                      1e-10 * std::max(1.0, std::fabs(q_want)));
            }
        }
    }
    CHECK(reductions >= 100);
}

TEST_CASE("wavefunctions track the integrated equation") {
    std::mt19937_64 rng(99021);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double m1s[5] = {-1.0, -0.5, 0.0, 0.5, 1.0};
    int checked = 0;
    for (int t = 0; t < 40 && checked < 8; ++t) {
        PotentialClass pc = make_class(m1s[t % 5], {});
        for (int i = 0; i < 5; ++i) pc.vp[i] = -1.5 + 3.0 * u01(rng);
        double E = -1.5 + 3.0 * u01(rng);
        double m = 0.6 + 1.2 * u01(rng), hb = 0.6 + 1.2 * u01(rng);
        int ba0 = u01(rng) < 0.5 ? +1 : -1;
        int ba2 = u01(rng) < 0.5 ? +1 : -1;
        Reduction red;
        try {
            red = reduce(pc, E, m, hb, ba0, ba2);
        } catch (const validation_error&) {
            continue;
        }
        double g = red.bch.gamma;
        if (g <= 0.0 && g == std::floor(g)) continue;
        CHECK(ode_mismatch(red, pc, Solver::frobenius, 0.4, 2.2, 20) <= 1e-7);
        ++checked;
    }
    CHECK(checked == 8);
}

TEST_CASE("tied quartic well: reduction invariants across draws") {
    std::mt19937_64 rng(20250817);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int t = 0; t < 100; ++t) {
        double Vm = (u01(rng) < 0.5 ? -1.0 : 1.0) * (0.3 + 4.7 * u01(rng));
        double V0 = -5.0 + 10.0 * u01(rng);
        double m = 0.3 + 2.7 * u01(rng);
        double hb = 0.3 + 2.7 * u01(rng);
        double E = V0 - 3.0 + 9.0 * u01(rng);
        PotentialClass pc = tied_well_class(Vm, V0, m, hb);
        Reduction red = reduce(pc, E, m, hb, -1, +1);
        CHECK(red.a0 == doctest::Approx(-1.25).epsilon(1e-12));
        CHECK(std::fabs(red.bch.gamma + 3.0) <= 1e-10);
        // the energy-dependent accessory parameter always lands on a root
        // of the degree-four termination polynomial
        expansion::QPolynomial qp =
            expansion::q_polynomial(3, red.bch.delta, red.bch.eps, red.bch.alpha);
        double val = 0.0, scl = 0.0, qk = 1.0;
        for (size_t k = 0; k < qp.coeffs.size(); ++k) {
            val += qp.coeffs[k] * qk;
            scl = std::max(scl, std::fabs(qp.coeffs[k] * qk));
            qk *= red.bch.q;
        }
        CHECK(std::fabs(val) <= 1e-9 * scl);
    }
}

TEST_CASE("tied quartic well: finite-sum wavefunction solves the equation") {
    double m = 1.0, hb = 1.0, Vm = -2.0, V0 = 0.5, E = 1.3;
    PotentialClass pc = tied_well_class(Vm, V0, m, hb);
    Reduction red = reduce(pc, E, m, hb, -1, +1);
    expansion::TerminationCheck tc = expansion::check_termination(red.bch, +1);
    REQUIRE(tc.is_terminating);
    CHECK(tc.n_terminate == 3);
    CHECK(ode_mismatch(red, pc, Solver::finite_sum, 0.5, 2.5, 10) <= 1e-7);
    // the series branch is closed here: the exponent difference is integral
    CHECK_THROWS_AS(psi_eval(red, pc, 1.0, Solver::frobenius, +1), indicial_error);
}

TEST_CASE("finite-sum solver refuses non-terminating parameters") {
    PotentialClass pc = make_class(0.0, {0.3, 0.0, 1.0, 0.0, 0.0});
    Reduction red = reduce(pc, 0.9, 1.0, 1.0, +1, +1);
    CHECK(!expansion::check_termination(red.bch, +1).is_terminating);
    CHECK_THROWS_AS(psi_eval(red, pc, 1.0, Solver::finite_sum, +1), domain_error);
}

TEST_CASE("exponent branches give independent solutions") {
    PotentialClass pc = make_class(-0.5, {0.3, 0.5, -0.2, 0.0, 0.4});
    double E = 0.7;
    Reduction rp = reduce(pc, E, 1.0, 1.0, +1, +1);
    Reduction rm = reduce(pc, E, 1.0, 1.0, -1, +1);
    double frac = rp.bch.gamma - std::floor(rp.bch.gamma);
    CHECK(frac > 1e-6); // the independence argument needs a non-integral exponent gap
    double w[2];
    int i = 0;
    for (double z : {0.7, 1.6}) {
        PsiEval a = psi_eval(rp, pc, z, Solver::frobenius, +1);
        PsiEval b = psi_eval(rm, pc, z, Solver::frobenius, +1);
        w[i] = a.psi * b.dpsi_dx - a.dpsi_dx * b.psi;
        double scale = std::fabs(a.psi * b.dpsi_dx) + std::fabs(a.dpsi_dx * b.psi);
        CHECK(std::fabs(w[i]) >= 1e-6 * scale);
        ++i;
    }
    // no first-derivative term in physical coordinates: the Wronskian is flat
    CHECK(w[0] == doctest::Approx(w[1]).epsilon(1e-8));
}

TEST_CASE("tied class reproduces the dedicated well construction") {
    // same potential, same branch: the finite-sum solution and the packaged
    // four-term form differ by the constant c0 exp(-y0^2/2)
    for (auto [V0, V2, E] : {std::array<double, 3>{0.5, -2.0, 1.3},
                             std::array<double, 3>{-1.0, 3.0, 7.7}}) {
        PotentialClass pc = tied_well_class(V2, V0, 1.0, 1.0);
        Reduction red = reduce(pc, E, 1.0, 1.0, -1, +1);
        n3well::N3Well w;
        w.V0 = V0;
        w.V2 = V2;
        int s = V2 > 0 ? -1 : 1;
        n3well::EnergyState st = n3well::energy_state(w, E, s);
        double expect = st.c[0] * std::exp(-0.5 * st.y0 * st.y0);
        for (double x : {0.5, 0.9, 1.4, 2.0}) {
            CHECK(potential_value(pc, x) ==
                  doctest::Approx(n3well::potential_v(w, x)).epsilon(1e-12));
            double z = coordinate_map(pc, x);
            double ps = psi_eval(red, pc, z, Solver::finite_sum, +1).psi;
            double pn = n3well::fundamental_psi(w, E, s, x);
            CHECK(pn / ps == doctest::Approx(expect).epsilon(1e-9));
        }
    }
}

} // TEST_SUITE
