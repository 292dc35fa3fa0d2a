#include "heunite/bch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace heunite::bch {
namespace {

constexpr double EPS_D = std::numeric_limits<double>::epsilon();
constexpr double TAIL_REL = 1e-10;
// a last-terms decay ratio beyond this gives no usable geometric bound
constexpr double TAIL_RATIO_MAX = 0.75;

bool is_nonpos_int(double x) { return x <= 0.0 && x == std::floor(x); }

// geometric tail bound from the last retained terms (index, magnitude).
// The decay rate is the median of all gap-normalized pairwise ratios:
// per-index ratios keep series with structural zero coefficients (even/odd
// solutions) certifiable, and the median survives one term dipping to a
// near-cancellation or spiking, which would poison a consecutive-pair
// estimate in either direction. +inf when decay is too slow to bound.
double tail_bound(const int* idx, const double* mag, int n)
{
    int nzi[5];
    double nzm[5];
    int nz = 0;
    double m = 0.0;
    for (int i = 0; i < n; ++i) {
        if (mag[i] == 0.0) continue;
        nzi[nz] = idx[i];
        nzm[nz] = mag[i];
        ++nz;
        m = std::max(m, mag[i]);
    }
    if (nz == 0) return 0.0;
    double ratio;
    if (nz == 1) {
        ratio = 0.5; // isolated term: no rate estimate, bound by m
    } else {
        double r[10];
        int nr = 0;
        for (int i = 0; i < nz; ++i)
            for (int j = i + 1; j < nz; ++j)
                r[nr++] = std::pow(nzm[j] / nzm[i], 1.0 / (nzi[j] - nzi[i]));
        std::sort(r, r + nr);
        ratio = (nr % 2) ? r[nr / 2] : 0.5 * (r[nr / 2 - 1] + r[nr / 2]);
    }
    if (!(ratio < TAIL_RATIO_MAX)) return std::numeric_limits<double>::infinity();
    return m * ratio / (1.0 - ratio) + m * EPS_D;
}

} // namespace

SeriesSolution frobenius_series(const BchParams& p, int trunc_order)
{
    if (!std::isfinite(p.gamma) || !std::isfinite(p.delta) || !std::isfinite(p.eps) ||
        !std::isfinite(p.alpha) || !std::isfinite(p.q))
        throw domain_error("frobenius_series: non-finite parameter");
    if (is_nonpos_int(p.gamma))
        throw indicial_error("frobenius_series: gamma is a non-positive integer; "
                             "the exponent-0 branch degenerates");
    if (trunc_order < 2) throw domain_error("frobenius_series: trunc_order < 2");

    std::vector<double> a(static_cast<size_t>(trunc_order) + 1);
    a[0] = 1.0;
    for (int k = 0; k < trunc_order; ++k) {
        double prev = (k == 0) ? 0.0 : a[k - 1];
        a[k + 1] = ((p.q - p.delta * k) * a[k] - (p.alpha + p.eps * (k - 1)) * prev) /
                   ((k + 1.0) * (k + p.gamma));
    }
    return {p, std::move(a), trunc_order};
}

SeriesEval series_eval(const SeriesSolution& sol, double z)
{
    if (!std::isfinite(z)) throw domain_error("series_eval: non-finite z");
    const auto& a = sol.coeffs;
    const int K = static_cast<int>(a.size()) - 1;
    if (z == 0.0) return {a[0], a[1]};

    double u = a[K], du = K * a[K];
    for (int k = K - 1; k >= 1; --k) {
        u = u * z + a[k];
        du = du * z + k * a[k];
    }
    u = u * z + a[0];

    // forward magnitude sweep: the peak term sets the cancellation noise
    // floor of the double sum, the last-five window feeds the tail bound.
    // |z|^k is tracked in extended range to survive k up to a few hundred.
    const int lo = std::max(0, K - 4);
    int iu[5], id[5];
    double tu[5], td[5];
    int nu = 0, nd = 0;
    double peak_u = 0.0, peak_du = 0.0;
    long double zk = 1.0L;
    for (int k = 0; k <= K; ++k) {
        double t = static_cast<double>(std::fabs(a[k]) * zk);
        peak_u = std::max(peak_u, t);
        if (k >= 1) {
            double td_k = static_cast<double>(k * std::fabs(a[k]) * zk /
                                              std::fabs((long double)z));
            peak_du = std::max(peak_du, td_k);
            if (k >= lo && k >= 1) {
                id[nd] = k;
                td[nd++] = td_k;
            }
        }
        if (k >= lo) {
            iu[nu] = k;
            tu[nu++] = t;
        }
        zk *= std::fabs((long double)z);
    }

    double bu = tail_bound(iu, tu, nu);
    double bd = tail_bound(id, td, nd);
    if (!(bu <= TAIL_REL * std::max(1.0, std::fabs(u))) ||
        !(bd <= TAIL_REL * std::max(1.0, std::fabs(du))))
        throw truncation_error("series_eval: truncation tail not certified at this "
                               "z; increase trunc_order");

    // cancellation through a large interior peak leaves the double sum with
    // too few correct digits, and the stored double coefficients carry the
    // same peak-scaled noise; regenerate the recurrence and the sum at quad
    // precision, where the peak costs nothing
    double noise = EPS_D * (K + 1.0);
    if (noise * peak_u > TAIL_REL * std::max(1.0, std::fabs(u)) ||
        noise * peak_du > TAIL_REL * std::max(1.0, std::fabs(du))) {
        const BchParams& p = sol.params;
        std::vector<__float128> aq(static_cast<size_t>(K) + 1);
        aq[0] = 1.0;
        for (int k = 0; k < K; ++k) {
            __float128 prev = (k == 0) ? __float128(0) : aq[k - 1];
            aq[k + 1] = (((__float128)p.q - (__float128)p.delta * k) * aq[k] -
                         ((__float128)p.alpha + (__float128)p.eps * (k - 1)) * prev) /
                        ((k + __float128(1)) * (k + (__float128)p.gamma));
        }
        __float128 uq = aq[K], duq = K * aq[K];
        __float128 zq = z;
        for (int k = K - 1; k >= 1; --k) {
            uq = uq * zq + aq[k];
            duq = duq * zq + k * aq[k];
        }
        uq = uq * zq + aq[0];
        u = static_cast<double>(uq);
        du = static_cast<double>(duq);
    }
    return {u, du};
}

double bch_residual_raw(const BchParams& p, double u, double du, double ddu, double z)
{
    if (z == 0.0) throw singularity_error("bch_residual: z = 0 is the singular point");
    double t2 = (p.gamma / z + p.delta + p.eps * z) * du;
    double t3 = (p.alpha * z - p.q) / z * u;
    return ddu + t2 + t3;
}

double bch_residual(const BchParams& p, double u, double du, double ddu, double z)
{
    if (z == 0.0) throw singularity_error("bch_residual: z = 0 is the singular point");
    double t2 = (p.gamma / z + p.delta + p.eps * z) * du;
    double t3 = (p.alpha * z - p.q) / z * u;
    double den = std::max({std::fabs(ddu), std::fabs(t2), std::fabs(t3), 1.0});
    return std::fabs(ddu + t2 + t3) / den;
}

} // namespace heunite::bch
