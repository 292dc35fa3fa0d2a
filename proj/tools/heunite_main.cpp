#include "CLI11.hpp"

#include "heunite/bch.hpp"
#include "heunite/errors.hpp"
#include "heunite/expansion.hpp"
#include "heunite/io.hpp"
#include "heunite/n3well.hpp"
#include "heunite/oracle.hpp"
#include "heunite/schrod.hpp"
#include "heunite/specfun.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

using namespace heunite;

namespace {

std::vector<double> linspace(double from, double to, int count) {
    if (count < 2 || !(to > from))
        throw domain_error("grid needs count >= 2 and to > from");
    std::vector<double> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i)
        out.push_back(from + (to - from) * i / (count - 1));
    return out;
}

// sum k(k-1) a_k z^{k-2}
double series_ddu(const bch::SeriesSolution& sol, double z) {
    double acc = 0.0;
    for (int k = (int)sol.coeffs.size() - 1; k >= 2; --k)
        acc = acc * z + sol.coeffs[k] * k * (k - 1);
    return acc;
}

struct HeunArgs {
    bch::BchParams p{};
    std::vector<double> zs;
    std::string method = "frobenius";
    int sign = 1;
    int order = 80;
};

io::Table cmd_eval_heun(const HeunArgs& a) {
    io::Table t;
    bool frob = a.method == "frobenius" || a.method == "both";
    bool hsum = a.method == "hermite-sum" || a.method == "both";

    bch::SeriesSolution sol;
    if (frob)
        sol = bch::frobenius_series(a.p, a.order);
    expansion::HermiteExpansion ex;
    if (hsum) {
        expansion::TerminationCheck tc = expansion::check_termination(a.p, a.sign);
        if (!tc.is_terminating)
            throw domain_error(
                "hermite-sum evaluation needs a terminating parameter set");
        ex = expansion::expansion_coeffs(a.p, a.sign, tc.n_terminate);
    }

    if (a.method != "both") {
        t.columns = {"z", "u", "du", "residual"};
        for (double z : a.zs) {
            double u, du, ddu;
            if (frob) {
                bch::SeriesEval se = bch::series_eval(sol, z);
                u = se.u;
                du = se.du;
                ddu = series_ddu(sol, z);
            } else {
                bch::SeriesEval se = expansion::finite_sum_eval(ex, z);
                u = se.u;
                du = se.du;
                ddu = expansion::finite_sum_ddu(ex, z);
            }
            t.add_row({z, u, du, bch::bch_residual(a.p, u, du, ddu, z)});
        }
        return t;
    }

    // both: least-squares scale on u, then the per-point gap
    std::vector<double> uf, duf, us, dus, rf, rs;
    double num = 0.0, den = 0.0;
    for (double z : a.zs) {
        bch::SeriesEval se = bch::series_eval(sol, z);
        bch::SeriesEval he = expansion::finite_sum_eval(ex, z);
        uf.push_back(se.u);
        duf.push_back(se.du);
        us.push_back(he.u);
        dus.push_back(he.du);
        rf.push_back(bch::bch_residual(a.p, se.u, se.du, series_ddu(sol, z), z));
        rs.push_back(bch::bch_residual(a.p, he.u, he.du,
                                       expansion::finite_sum_ddu(ex, z), z));
        num += se.u * he.u;
        den += he.u * he.u;
    }
    if (den == 0.0)
        throw precision_loss_error("hermite-sum vanished on the whole grid");
    double scale = num / den;
    t.columns = {"z", "u_series", "du_series", "residual_series",
                 "u_sum", "du_sum", "residual_sum", "scaled_gap"};
    for (size_t i = 0; i < a.zs.size(); ++i)
        t.add_row({a.zs[i], uf[i], duf[i], rf[i], us[i], dus[i], rs[i],
                   std::fabs(uf[i] - scale * us[i])});
    return t;
}

struct QrootArgs {
    int N = 0;
    double delta = 0, eps = -2, alpha = 0;
};

io::Table cmd_qroots(const QrootArgs& a) {
    expansion::QPolynomial poly =
        expansion::q_polynomial(a.N, a.delta, a.eps, a.alpha);
    expansion::QRoots roots = expansion::q_roots(poly);
    io::Table t;
    t.columns = {"q_re", "q_im", "terminates"};
    for (double q : roots.real_roots) {
        bch::BchParams p{-(double)a.N, a.delta, a.eps, a.alpha, q};
        expansion::TerminationCheck tc = expansion::check_termination(p, +1);
        t.add_row({q, 0.0, tc.is_terminating && tc.n_terminate == a.N});
    }
    for (auto& c : roots.complex_roots)
        t.add_row({c.real(), c.imag(), false});
    return t;
}

struct ReduceArgs {
    double m1 = -0.5;
    std::vector<double> vp;
    double sigma = 1.0, x0 = 0.0;
    double E = 0.0, mass = 1.0, hbar = 1.0;
    int branch_a0 = -1, branch_a2 = 1;
};

io::Table cmd_reduce(const ReduceArgs& a) {
    if (a.vp.size() != 5)
        throw domain_error("--vp needs exactly five coefficients");
    schrod::PotentialClass pc;
    pc.m1 = a.m1;
    for (int i = 0; i < 5; ++i)
        pc.vp[i] = a.vp[i];
    pc.sigma = a.sigma;
    pc.x0 = a.x0;
    schrod::Reduction red =
        schrod::reduce(pc, a.E, a.mass, a.hbar, a.branch_a0, a.branch_a2);
    expansion::TerminationCheck tc = expansion::check_termination(red.bch, +1);
    io::Table t;
    t.columns = {"a0",    "a1",  "a2",    "gamma",      "delta",
                 "eps",   "alpha", "q",   "terminates", "ladder_terms"};
    t.add_row({red.a0, red.a1, red.a2, red.bch.gamma, red.bch.delta,
               red.bch.eps, red.bch.alpha, red.bch.q, tc.is_terminating,
               (double)(tc.is_terminating ? tc.n_terminate + 1 : 0)});
    return t;
}

struct WellArgs {
    n3well::N3Well well;
    int n_max = 8;
    std::string compare = "oracle";
};

io::Table cmd_spectrum(const WellArgs& a) {
    n3well::SpectrumResult sr = n3well::bound_states(a.well, a.n_max);
    io::Table t;
    if (a.compare == "oracle") {
        t.columns = {"n", "E", "a", "fn_residual", "oracle_gap"};
        for (const auto& lv : sr.levels)
            t.add_row({(double)lv.n, lv.E, lv.a, lv.spectrum_fn_residual,
                       lv.oracle_gap});
        return t;
    }
    t.columns = {"n", "E", "E_estimate", "rel_err"};
    for (const auto& lv : sr.levels) {
        double est = a.compare == "asymptotic"
                         ? n3well::asymptotic_energy(a.well, lv.n)
                         : n3well::phase_equation_solve(a.well, lv.n);
        t.add_row({(double)lv.n, lv.E, est, std::fabs(est - lv.E) / std::fabs(lv.E)});
    }
    return t;
}

struct WaveArgs {
    n3well::N3Well well;
    int level = 1;
    double x_from = 0.0, x_to = 5.0;
    int x_count = 501;
};

io::Table cmd_wavefunction(const WaveArgs& a) {
    n3well::SpectrumResult sr = n3well::bound_states(a.well, a.level);
    const n3well::Level& lv = sr.levels[a.level - 1];
    int s = a.well.V2 > 0 ? -1 : 1;
    n3well::EnergyState st = n3well::energy_state(a.well, lv.E, s);
    std::vector<double> grid = linspace(a.x_from, a.x_to, a.x_count);
    std::vector<double> psi = n3well::bound_wavefunction(a.well, st, grid);
    io::Table t;
    t.columns = {"x", "psi"};
    for (size_t i = 0; i < grid.size(); ++i)
        t.add_row({grid[i], psi[i]});
    return t;
}

struct PotentialArgs {
    double V0 = 0.0, mass = 1.0, hbar = 1.0, x0 = 0.0;
    std::vector<double> v2s;
    double x_from = 0.05, x_to = 4.0;
    int x_count = 400;
};

io::Table cmd_potential(const PotentialArgs& a) {
    std::vector<double> v2s = a.v2s;
    if (v2s.empty())
        v2s = {0.0, 3.5, -3.5, 5.0, -5.0};
    io::Table t;
    t.columns = {"x"};
    for (double v2 : v2s) {
        char buf[48];
        std::snprintf(buf, sizeof buf, "V(V2=%.6g)", v2);
        t.columns.push_back(buf);
    }
    for (double x : linspace(a.x_from, a.x_to, a.x_count)) {
        std::vector<io::Cell> row{x};
        for (double v2 : v2s) {
            n3well::N3Well w;
            w.V0 = a.V0;
            w.V2 = v2;
            w.mass = a.mass;
            w.hbar = a.hbar;
            w.x0 = a.x0;
            row.push_back(n3well::potential_v(w, x));
        }
        t.add_row(row);
    }
    return t;
}

struct SzegoArgs {
    double a_from = 2.05, a_to = 12.0;
    int a_count = 500;
};

io::Table cmd_szego(const SzegoArgs& a) {
    io::Table t;
    t.columns = {"a", "exact", "guarded", "continued"};
    for (double av : linspace(a.a_from, a.a_to, a.a_count)) {
        double nu = av - 2.0, w = -std::sqrt(2.0 * av);
        double exact = specfun::hermite_fn(nu, w).value;
        double guarded = std::numeric_limits<double>::quiet_NaN();
        try {
            guarded = n3well::szego_approx(nu, w);
        } catch (const validation_error&) {
        }
        t.add_row({av, exact, guarded, n3well::szego_continued(nu, w)});
    }
    return t;
}

io::Table cmd_selftest(bool& all_ok) {
    io::Table t;
    t.columns = {"check", "passed"};
    auto record = [&](const std::string& name, bool ok) {
        t.add_row({name, ok});
        all_ok = all_ok && ok;
    };

    {
        bch::BchParams p{1.5, 0.3, -1.0, 0.0, 0.0};
        bch::SeriesSolution sol = bch::frobenius_series(p, 40);
        record("constant-solution",
               std::fabs(bch::series_eval(sol, 0.7).u - 1.0) <= 1e-14);
    }
    {
        expansion::QRoots r =
            expansion::q_roots(expansion::q_polynomial(0, 1.7, -2.0, 0.4));
        record("first-termination-root", r.real_roots.size() == 1 &&
                                             r.complex_roots.empty() &&
                                             std::fabs(r.real_roots[0]) <= 1e-12);
    }
    {
        double c23 = std::cbrt(2.0 / 3.0) * std::cbrt(2.0 / 3.0);
        schrod::PotentialClass pc;
        pc.m1 = -0.5;
        pc.vp = {0.0, (9.0 * 25.0 / 8.0) * c23, -5.0 / c23, 0.0, 55.0 / 32.0};
        schrod::Reduction red = schrod::reduce(pc, 18.0, 1.0, 1.0, -1, +1);
        bool ok = std::fabs(red.bch.gamma + 3.0) <= 1e-12 &&
                  std::fabs(-red.bch.alpha / red.bch.eps - 2.576) <= 1e-10;
        expansion::QRoots r = expansion::q_roots(expansion::q_polynomial(
            3, red.bch.delta, red.bch.eps, red.bch.alpha));
        bool hit = false;
        for (double q : r.real_roots)
            hit = hit || std::fabs(q - red.bch.q) <= 1e-8 * std::fabs(red.bch.q);
        record("reduction-reaches-termination", ok);
        record("physical-q-is-a-root", hit);
    }
    {
        n3well::N3Well w;
        w.V2 = -5.0;
        n3well::SpectrumResult sr = n3well::bound_states(w, 2);
        bool ok = std::fabs(sr.levels[0].E - 18.477994141) <= 1e-7 &&
                  std::fabs(sr.levels[1].E - 29.0870282765) <= 1e-7;
        record("frozen-spectrum", ok);
    }
    {
        double g = n3well::szego_approx(3.0, 1.0);
        double c = n3well::szego_continued(3.0, 1.0);
        record("layer-continuation-consistent",
               std::fabs(g - c) <= 1e-12 * std::fabs(g));
    }
    {
        io::Table s;
        s.columns = {"x", "tag"};
        s.add_row({-1.0 / 3.0, std::string("a,b")});
        std::string first = io::to_csv(s);
        record("table-roundtrip", io::to_csv(io::parse_csv(first)) == first);
    }
    return t;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "bi-confluent Heun toolkit: series and Hermite-ladder solutions, "
        "power-law well reductions, spectra, wavefunctions, layer "
        "approximations"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "flat key=value file mirroring the flags; explicit flags "
                   "take precedence");
    std::string format = "csv", out_path;
    app.add_option("--format", format, "output format")
        ->transform(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app.add_option("--out", out_path, "output path (default: stdout)");

    HeunArgs ha;
    CLI::App* eval = app.add_subcommand(
        "eval-heun", "evaluate u, u' and the equation residual on a z-list");
    eval->add_option("--gamma", ha.p.gamma, "")->required();
    eval->add_option("--delta", ha.p.delta, "")->required();
    eval->add_option("--eps", ha.p.eps, "")->required();
    eval->add_option("--alpha", ha.p.alpha, "")->required();
    eval->add_option("--q", ha.p.q, "")->required();
    eval->add_option("--z", ha.zs, "evaluation points")->required();
    eval->add_option("--method", ha.method, "solution form")
        ->transform(CLI::IsMember({"frobenius", "hermite-sum", "both"}))
        ->capture_default_str();
    eval->add_option("--sign", ha.sign, "Hermite argument branch, +1 or -1")
        ->capture_default_str();
    eval->add_option("--order", ha.order, "series truncation order")
        ->capture_default_str();

    QrootArgs qa;
    CLI::App* qr = app.add_subcommand(
        "qroots", "accessory-parameter values that terminate the ladder");
    qr->add_option("--n-terminate", qa.N, "ladder length minus one")->required();
    qr->add_option("--delta", qa.delta, "")->required();
    qr->add_option("--eps", qa.eps, "")->required();
    qr->add_option("--alpha", qa.alpha, "")->required();

    ReduceArgs ra;
    CLI::App* rd = app.add_subcommand(
        "reduce", "map a power-law potential class to equation parameters");
    rd->add_option("--m1", ra.m1, "class exponent")->capture_default_str();
    rd->add_option("--vp", ra.vp, "five potential coefficients")->required();
    rd->add_option("--sigma", ra.sigma, "")->capture_default_str();
    rd->add_option("--x0", ra.x0, "")->capture_default_str();
    rd->add_option("--energy", ra.E, "")->required();
    rd->add_option("--mass", ra.mass, "")->capture_default_str();
    rd->add_option("--hbar", ra.hbar, "")->capture_default_str();
    rd->add_option("--branch-a0", ra.branch_a0, "indicial branch, +1 or -1")
        ->capture_default_str();
    rd->add_option("--branch-a2", ra.branch_a2, "Gaussian branch, +1 or -1")
        ->capture_default_str();

    WellArgs sa;
    CLI::App* sp = app.add_subcommand(
        "spectrum", "bound-state energies of the x^(2/3)-confined well");
    sp->add_option("--v0", sa.well.V0, "")->capture_default_str();
    sp->add_option("--v2", sa.well.V2, "")->required();
    sp->add_option("--mass", sa.well.mass, "")->capture_default_str();
    sp->add_option("--hbar", sa.well.hbar, "")->capture_default_str();
    sp->add_option("--x0", sa.well.x0, "")->capture_default_str();
    sp->add_option("--n-max", sa.n_max, "number of levels")->capture_default_str();
    sp->add_option("--compare", sa.compare, "companion estimate column")
        ->transform(CLI::IsMember({"oracle", "asymptotic", "phase"}))
        ->capture_default_str();

    WaveArgs wa;
    CLI::App* wf = app.add_subcommand("wavefunction",
                                      "normalized bound-state wavefunction");
    wf->add_option("--v0", wa.well.V0, "")->capture_default_str();
    wf->add_option("--v2", wa.well.V2, "")->required();
    wf->add_option("--mass", wa.well.mass, "")->capture_default_str();
    wf->add_option("--hbar", wa.well.hbar, "")->capture_default_str();
    wf->add_option("--x0", wa.well.x0, "")->capture_default_str();
    wf->add_option("--level", wa.level, "level index, lowest is 1")
        ->capture_default_str();
    wf->add_option("--x-from", wa.x_from, "")->capture_default_str();
    wf->add_option("--x-to", wa.x_to, "")->capture_default_str();
    wf->add_option("--x-count", wa.x_count, "")->capture_default_str();

    PotentialArgs pa;
    CLI::App* pt = app.add_subcommand("potential",
                                      "well profile, one column per V2");
    pt->add_option("--v0", pa.V0, "")->capture_default_str();
    pt->add_option("--v2", pa.v2s,
                   "repeatable; default 0, 3.5, -3.5, 5, -5");
    pt->add_option("--mass", pa.mass, "")->capture_default_str();
    pt->add_option("--hbar", pa.hbar, "")->capture_default_str();
    pt->add_option("--x0", pa.x0, "")->capture_default_str();
    pt->add_option("--x-from", pa.x_from, "")->capture_default_str();
    pt->add_option("--x-to", pa.x_to, "")->capture_default_str();
    pt->add_option("--x-count", pa.x_count, "")->capture_default_str();

    SzegoArgs za;
    CLI::App* sz = app.add_subcommand(
        "szego", "oscillatory-layer approximation against the exact function");
    sz->add_option("--a-from", za.a_from, "")->capture_default_str();
    sz->add_option("--a-to", za.a_to, "")->capture_default_str();
    sz->add_option("--a-count", za.a_count, "")->capture_default_str();

    CLI::App* st = app.add_subcommand("selftest", "quick consistency pass");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    int exit_code = 0;
    try {
        io::Table t;
        if (app.got_subcommand(eval))
            t = cmd_eval_heun(ha);
        else if (app.got_subcommand(qr))
            t = cmd_qroots(qa);
        else if (app.got_subcommand(rd))
            t = cmd_reduce(ra);
        else if (app.got_subcommand(sp))
            t = cmd_spectrum(sa);
        else if (app.got_subcommand(wf))
            t = cmd_wavefunction(wa);
        else if (app.got_subcommand(pt))
            t = cmd_potential(pa);
        else if (app.got_subcommand(sz))
            t = cmd_szego(za);
        else if (app.got_subcommand(st)) {
            bool all_ok = true;
            t = cmd_selftest(all_ok);
            if (!all_ok)
                exit_code = 3;
        }
        std::string text =
            io::render(t, format == "csv" ? io::Format::csv : io::Format::json);
        if (out_path.empty())
            std::fputs(text.c_str(), stdout);
        else
            io::write_file(out_path, text);
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const numerical_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return exit_code;
}
