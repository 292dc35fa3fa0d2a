#include "heunite/expansion.hpp"

#include "heunite/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace heunite::expansion {
namespace {

constexpr int ABERTH_ITER_CAP = 200;

void require_real_branch(double eps)
{
    if (!(eps < 0.0))
        throw domain_error("hermite ladder: eps < 0 required so the argument "
                           "scale sqrt(-eps/2) is real");
}

void require_sign(int sign)
{
    if (sign != 1 && sign != -1)
        throw domain_error("hermite ladder: sign branch must be +1 or -1");
}

} // namespace

RecurrenceTriple recurrence_coeffs(const bch::BchParams& p, double alpha0, int n,
                                   int sign)
{
    require_real_branch(p.eps);
    require_sign(sign);
    const double an = alpha0 + n;
    double R = std::sqrt(2.0 / -p.eps) * an * (p.alpha + (an - p.gamma) * p.eps);
    double Q = -sign * (p.alpha * p.delta + (p.q + an * p.delta) * p.eps) / p.eps;
    double P = (p.alpha + an * p.eps) / std::sqrt(-2.0 * p.eps);
    return {R, Q, P};
}

HermiteExpansion expansion_coeffs(const bch::BchParams& p, int sign, int n_max)
{
    require_real_branch(p.eps);
    require_sign(sign);
    if (n_max < 0) throw domain_error("expansion_coeffs: n_max < 0");
    const double alpha0 = p.gamma - p.alpha / p.eps;
    if (alpha0 == 0.0)
        throw domain_error("expansion_coeffs: base order 0 (gamma = alpha/eps) "
                           "selects the polynomial ladder, which is not provided");

    HermiteExpansion ex;
    ex.params = p;
    ex.alpha0 = alpha0;
    ex.s0 = sign * std::sqrt(-p.eps / 2.0);
    ex.z0 = p.delta / p.eps;
    ex.sign = sign;
    ex.coeffs.assign(static_cast<size_t>(n_max) + 1, 0.0);
    ex.coeffs[0] = 1.0;
    for (int n = 1; n <= n_max; ++n) {
        RecurrenceTriple tn = recurrence_coeffs(p, alpha0, n, sign);
        if (tn.R == 0.0)
            throw resonance_error("expansion_coeffs: R vanishes at n = " +
                                  std::to_string(n) + "; the ladder breaks down");
        double acc = recurrence_coeffs(p, alpha0, n - 1, sign).Q * ex.coeffs[n - 1];
        if (n >= 2)
            acc += recurrence_coeffs(p, alpha0, n - 2, sign).P * ex.coeffs[n - 2];
        ex.coeffs[n] = -acc / tn.R;
    }
    return ex;
}

QPolynomial q_polynomial(int N, double delta, double eps, double alpha)
{
    if (N < 0) throw domain_error("q_polynomial: N < 0");
    require_real_branch(eps);
    if (!std::isfinite(delta) || !std::isfinite(alpha))
        throw domain_error("q_polynomial: non-finite parameter");

    // scaled ladder d_n = c_n * prod_{j<=n} R_j obeys
    //   d_n = -(Q_{n-1} d_{n-1} + P_{n-2} R_{n-1} d_{n-2}),
    // division-free; Q_n is affine in q with q-coefficient -1 on the +1
    // branch, so d_{N+1} comes out monic of degree N+1
    const double gamma = -static_cast<double>(N);
    const double alpha0 = gamma - alpha / eps;
    const bch::BchParams p0{gamma, delta, eps, alpha, 0.0};

    std::vector<double> dprev;      // d_{n-1}, ascending in q
    std::vector<double> dcur{1.0};  // d_n
    for (int n = 1; n <= N + 1; ++n) {
        RecurrenceTriple tq = recurrence_coeffs(p0, alpha0, n - 1, +1);
        std::vector<double> next(static_cast<size_t>(n) + 1, 0.0);
        for (size_t i = 0; i < dcur.size(); ++i) {
            next[i] += -tq.Q * dcur[i]; // -(Q at q=0) * d_{n-1}
            next[i + 1] += dcur[i];     // +q * d_{n-1}
        }
        if (n >= 2) {
            double f = -recurrence_coeffs(p0, alpha0, n - 2, +1).P * tq.R;
            for (size_t i = 0; i < dprev.size(); ++i) next[i] += f * dprev[i];
        }
        dprev = std::move(dcur);
        dcur = std::move(next);
    }
    return {N, std::move(dcur)};
}

QRoots q_roots(const QPolynomial& poly)
{
    const std::vector<double>& a = poly.coeffs;
    if (a.size() < 2 || a.back() == 0.0 ||
        !std::all_of(a.begin(), a.end(), [](double c) { return std::isfinite(c); }))
        throw domain_error("q_roots: need a finite polynomial of degree >= 1");
    const int d = static_cast<int>(a.size()) - 1;
    using C = std::complex<double>;

    double radius = 0.0;
    for (int i = 0; i < d; ++i) radius = std::max(radius, std::fabs(a[i] / a[d]));
    radius = 1.0 + radius;
    std::vector<C> zs(d);
    for (int i = 0; i < d; ++i)
        zs[i] = std::polar(radius, 2.0 * M_PI * i / d + 0.4);

    auto peval = [&a, d](C z, C& pd) {
        C v = a[d];
        pd = C(0.0);
        for (int k = d - 1; k >= 0; --k) {
            pd = pd * z + v;
            v = v * z + a[k];
        }
        return v;
    };

    bool converged = false;
    for (int it = 0; it < ABERTH_ITER_CAP && !converged; ++it) {
        converged = true;
        for (int i = 0; i < d; ++i) {
            C pd;
            C pv = peval(zs[i], pd);
            if (pv == C(0.0)) continue;
            if (pd == C(0.0)) { // critical point: nudge off it
                zs[i] += C(1e-8 * (1.0 + std::abs(zs[i])), 1e-8);
                converged = false;
                continue;
            }
            C ratio = pv / pd;
            C s(0.0);
            for (int j = 0; j < d; ++j)
                if (j != i && zs[i] != zs[j]) s += C(1.0) / (zs[i] - zs[j]);
            C den = C(1.0) - ratio * s;
            C w = (den == C(0.0)) ? ratio : ratio / den;
            zs[i] -= w;
            if (std::abs(w) > 1e-14 * std::max(1.0, std::abs(zs[i])))
                converged = false;
        }
    }
    if (!converged)
        throw convergence_error("q_roots: simultaneous iteration did not settle");

    // merge near-coincident roots (multiple roots land in a tight cluster whose
    // mean is far more accurate than any member), then split real from complex
    std::vector<int> parent(d);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&parent](int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            double tol = 1e-6 * std::max({1.0, std::abs(zs[i]), std::abs(zs[j])});
            if (std::abs(zs[i] - zs[j]) <= tol) parent[find(i)] = find(j);
        }

    QRoots out;
    for (int root = 0; root < d; ++root) {
        if (find(root) != root) continue;
        C mean(0.0);
        int size = 0;
        for (int i = 0; i < d; ++i)
            if (find(i) == root) {
                mean += zs[i];
                ++size;
            }
        mean /= static_cast<double>(size);
        if (std::fabs(mean.imag()) <= 1e-8 * std::max(1.0, std::abs(mean))) {
            for (int k = 0; k < size; ++k) out.real_roots.push_back(mean.real());
        } else {
            for (int i = 0; i < d; ++i)
                if (find(i) == root) out.complex_roots.push_back(zs[i]);
        }
    }
    std::sort(out.real_roots.begin(), out.real_roots.end());
    std::sort(out.complex_roots.begin(), out.complex_roots.end(),
              [](C x, C y) {
                  return x.real() != y.real() ? x.real() < y.real()
                                              : x.imag() < y.imag();
              });
    return out;
}

TerminationCheck check_termination(const bch::BchParams& p, int sign)
{
    require_real_branch(p.eps);
    require_sign(sign);
    const double qnan = std::numeric_limits<double>::quiet_NaN();
    const double nr = std::round(-p.gamma);
    if (!(nr >= 0.0) || std::fabs(-p.gamma - nr) > 1e-10) return {false, -1, qnan};
    const int N = static_cast<int>(nr);

    std::vector<double> c;
    try {
        c = expansion_coeffs(p, sign, N + 1).coeffs;
    } catch (const error&) {
        return {false, -1, qnan}; // resonant or polynomial-branch ladder
    }
    double cmax = 0.0;
    for (int n = 0; n <= N; ++n) cmax = std::max(cmax, std::fabs(c[n]));

    double tail = std::fabs(c[N + 1]);
    const double alpha0 = p.gamma - p.alpha / p.eps;
    RecurrenceTriple t2 = recurrence_coeffs(p, alpha0, N + 2, sign);
    if (t2.R != 0.0) {
        double next = -(recurrence_coeffs(p, alpha0, N + 1, sign).Q * c[N + 1] +
                        recurrence_coeffs(p, alpha0, N, sign).P * c[N]) /
                      t2.R;
        tail = std::max(tail, std::fabs(next));
    }
    bool ok = std::fabs(c[N + 1]) <= 1e-10 * cmax;
    return {ok, ok ? N : -1, tail / cmax};
}

bch::SeriesEval finite_sum_eval(const HermiteExpansion& ex, double z)
{
    if (!std::isfinite(z)) throw domain_error("finite_sum_eval: non-finite z");
    const double w = ex.s0 * (z + ex.z0);
    double u = 0.0, du = 0.0;
    for (size_t n = 0; n < ex.coeffs.size(); ++n) {
        const double c = ex.coeffs[n];
        if (c == 0.0) continue;
        const double nu = ex.alpha0 + static_cast<double>(n);
        u += c * specfun::hermite_fn(nu, w).value;
        du += c * specfun::hermite_deriv(nu, w).value;
    }
    return {u, ex.s0 * du};
}

double finite_sum_ddu(const HermiteExpansion& ex, double z)
{
    if (!std::isfinite(z)) throw domain_error("finite_sum_ddu: non-finite z");
    const double w = ex.s0 * (z + ex.z0);
    double acc = 0.0;
    for (size_t n = 0; n < ex.coeffs.size(); ++n) {
        const double c = ex.coeffs[n];
        if (c == 0.0) continue;
        const double nu = ex.alpha0 + static_cast<double>(n);
        const double f = 4.0 * nu * (nu - 1.0);
        if (f == 0.0) continue;
        acc += c * f * specfun::hermite_fn(nu - 2.0, w).value;
    }
    return acc * ex.s0 * ex.s0;
}

} // namespace heunite::expansion
