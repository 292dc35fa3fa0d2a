#include "heunite/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace heunite::oracle {
namespace {

struct State {
    double u, du;
};

// Dormand-Prince 5(4) tableau
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                 B5 = -2187.0 / 6784, B6 = 11.0 / 84;
constexpr double E1 = 35.0 / 384 - 5179.0 / 57600, E3 = 500.0 / 1113 - 7571.0 / 16695,
                 E4 = 125.0 / 192 - 393.0 / 640,
                 E5 = -2187.0 / 6784 + 92097.0 / 339200, E6 = 11.0 / 84 - 187.0 / 2100,
                 E7 = -1.0 / 40;

template <class Rhs>
State dp5_step(const Rhs& f, double z, const State& y, double h, double& err_norm,
               double atol, double rtol)
{
    State k1 = f(z, y);
    State k2 = f(z + h / 5, {y.u + h * A21 * k1.u, y.du + h * A21 * k1.du});
    State k3 = f(z + 3 * h / 10, {y.u + h * (A31 * k1.u + A32 * k2.u),
                                  y.du + h * (A31 * k1.du + A32 * k2.du)});
    State k4 = f(z + 4 * h / 5, {y.u + h * (A41 * k1.u + A42 * k2.u + A43 * k3.u),
                                 y.du + h * (A41 * k1.du + A42 * k2.du + A43 * k3.du)});
    State k5 = f(z + 8 * h / 9,
                 {y.u + h * (A51 * k1.u + A52 * k2.u + A53 * k3.u + A54 * k4.u),
                  y.du + h * (A51 * k1.du + A52 * k2.du + A53 * k3.du + A54 * k4.du)});
    State k6 = f(z + h, {y.u + h * (A61 * k1.u + A62 * k2.u + A63 * k3.u + A64 * k4.u +
                                    A65 * k5.u),
                         y.du + h * (A61 * k1.du + A62 * k2.du + A63 * k3.du +
                                     A64 * k4.du + A65 * k5.du)});
    State y5{y.u + h * (B1 * k1.u + B3 * k3.u + B4 * k4.u + B5 * k5.u + B6 * k6.u),
             y.du + h * (B1 * k1.du + B3 * k3.du + B4 * k4.du + B5 * k5.du + B6 * k6.du)};
    State k7 = f(z + h, y5);
    double eu = h * (E1 * k1.u + E3 * k3.u + E4 * k4.u + E5 * k5.u + E6 * k6.u +
                     E7 * k7.u);
    double edu = h * (E1 * k1.du + E3 * k3.du + E4 * k4.du + E5 * k5.du + E6 * k6.du +
                      E7 * k7.du);
    double su = atol + rtol * std::max(std::fabs(y.u), std::fabs(y5.u));
    double sdu = atol + rtol * std::max(std::fabs(y.du), std::fabs(y5.du));
    err_norm = std::sqrt(0.5 * ((eu / su) * (eu / su) + (edu / sdu) * (edu / sdu)));
    return y5;
}

template <class Rhs>
State dp5_adaptive(const Rhs& f, double z0, State y, double z1, double tol,
                   double h0_frac = 0.01)
{
    if (z0 == z1) return y;
    const double span = z1 - z0;
    double h = span * h0_frac;
    double z = z0;
    const double hmin = std::fabs(span) * 1e-14;
    int steps = 0;
    while ((span > 0) ? (z < z1) : (z > z1)) {
        if (++steps > 2000000)
            throw convergence_error("integrate: step budget exhausted");
        if ((span > 0) ? (z + h > z1) : (z + h < z1)) h = z1 - z;
        double err = 0;
        State ynew = dp5_step(f, z, y, h, err, tol, tol);
        if (err <= 1.0) {
            z += h;
            y = ynew;
        }
        double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
        h *= std::clamp(fac, 0.2, 5.0);
        if (std::fabs(h) < hmin)
            throw convergence_error("integrate: step size underflow "
                                    "(singular or stiff coefficients)");
    }
    return y;
}

} // namespace

OdeResult integrate(const OdeProblem& prob, double z_target, double tol)
{
    if (!std::isfinite(z_target) || !std::isfinite(tol) || tol <= 0)
        throw domain_error("integrate: bad target or tolerance");
    auto rhs = [&prob](double z, const State& y) -> State {
        return {y.du, -prob.p(z) * y.du - prob.r(z) * y.u};
    };
    State a = dp5_adaptive(rhs, prob.z_lo, {prob.u0, prob.du0}, z_target, tol);
    State b = dp5_adaptive(rhs, prob.z_lo, {prob.u0, prob.du0}, z_target, tol / 2);
    return {b.u, b.du, std::fabs(a.u - b.u), std::fabs(a.du - b.du)};
}

OdeResult integrate_fixed(const OdeProblem& prob, double z_target, int n_steps)
{
    if (n_steps < 1) throw domain_error("integrate_fixed: n_steps < 1");
    auto rhs = [&prob](double z, const State& y) -> State {
        return {y.du, -prob.p(z) * y.du - prob.r(z) * y.u};
    };
    const double h = (z_target - prob.z_lo) / n_steps;
    State y{prob.u0, prob.du0};
    double z = prob.z_lo;
    for (int i = 0; i < n_steps; ++i) {
        double err = 0;
        y = dp5_step(rhs, z, y, h, err, 1.0, 1.0);
        z = prob.z_lo + (i + 1) * h;
    }
    return {y.u, y.du, 0.0, 0.0};
}

namespace {

struct Shot {
    double mismatch; // scaled Wronskian of left/right solutions at x_match
    int nodes;       // interior sign changes of the left solution
};

// one shooting evaluation at energy E
Shot shoot_once(const std::function<double(double)>& V, double mass, double hbar,
                double E, const ShootingConfig& cfg)
{
    const double two_m_h2 = 2 * mass / (hbar * hbar);
    auto rhs = [&](double x, const State& y) -> State {
        return {y.du, two_m_h2 * (V(x) - E) * y.u};
    };

    // left: regular solution from x_min
    State yl;
    if (cfg.start) {
        cfg.start(E, cfg.x_min, yl.u, yl.du);
    } else {
        double s = cfg.local_exponent;
        yl.u = std::pow(cfg.x_min, s);
        yl.du = s * std::pow(cfg.x_min, s - 1);
    }
    int nodes = 0;
    double prev_sign = (yl.u > 0) ? 1.0 : -1.0;
    const int segs = 200;
    for (int i = 0; i < segs; ++i) {
        double xa = cfg.x_min + (cfg.x_match - cfg.x_min) * i / segs;
        double xb = cfg.x_min + (cfg.x_match - cfg.x_min) * (i + 1) / segs;
        yl = dp5_adaptive(rhs, xa, yl, xb, cfg.ode_tol, 0.25);
        double sign = (yl.u > 0) ? 1.0 : (yl.u < 0 ? -1.0 : prev_sign);
        if (sign != prev_sign) ++nodes;
        prev_sign = sign;
        // left solution may grow through a barrier; scale freely (linear ODE)
        double m = std::max(std::fabs(yl.u), std::fabs(yl.du));
        if (m > 1e200) {
            yl.u /= m;
            yl.du /= m;
        }
    }

    // right: decaying direction from x_max, WKB slope, integrated inward
    State yr;
    double k = std::sqrt(std::max(two_m_h2 * (V(cfg.x_max) - E), 1e-12));
    yr.u = 1.0;
    yr.du = -k;
    const int rsegs = 200;
    for (int i = 0; i < rsegs; ++i) {
        double xa = cfg.x_max + (cfg.x_match - cfg.x_max) * i / rsegs;
        double xb = cfg.x_max + (cfg.x_match - cfg.x_max) * (i + 1) / rsegs;
        yr = dp5_adaptive(rhs, xa, yr, xb, cfg.ode_tol, 0.25);
        double m = std::max(std::fabs(yr.u), std::fabs(yr.du));
        if (m > 1e200) {
            yr.u /= m;
            yr.du /= m;
        }
    }

    double w = yl.u * yr.du - yl.du * yr.u;
    double scale = std::fabs(yl.u * yr.du) + std::fabs(yl.du * yr.u) +
                   std::numeric_limits<double>::min();
    return {w / scale, nodes};
}

} // namespace

std::vector<double> shoot_spectrum(const std::function<double(double)>& potential,
                                   double mass, double hbar, double e_lo,
                                   double e_hi, int n_max,
                                   const ShootingConfig& cfg)
{
    if (!(e_lo < e_hi) || n_max < 1)
        throw domain_error("shoot_spectrum: bad energy range or n_max");
    if (!(0 < cfg.x_min && cfg.x_min < cfg.x_match && cfg.x_match < cfg.x_max))
        throw domain_error("shoot_spectrum: require 0 < x_min < x_match < x_max");

    std::vector<double> roots;
    const int n = std::max(cfg.scan_points, 8);
    double prev_e = e_lo;
    double prev_f = shoot_once(potential, mass, hbar, prev_e, cfg).mismatch;
    for (int i = 1; i <= n && static_cast<int>(roots.size()) < n_max; ++i) {
        double e = e_lo + (e_hi - e_lo) * i / n;
        double f = shoot_once(potential, mass, hbar, e, cfg).mismatch;
        if ((prev_f < 0 && f > 0) || (prev_f > 0 && f < 0)) {
            double a = prev_e, b = e, fa = prev_f;
            for (int it = 0; it < 200; ++it) {
                double mid = 0.5 * (a + b);
                if (b - a <= 1e-12 * std::max(1.0, std::fabs(mid))) break;
                double fm = shoot_once(potential, mass, hbar, mid, cfg).mismatch;
                if ((fa < 0) == (fm < 0)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        prev_e = e;
        prev_f = f;
    }
    if (static_cast<int>(roots.size()) < n_max)
        throw convergence_error("shoot_spectrum: bracketing failed; fewer sign "
                                "changes than requested levels in the range");
    return roots;
}

int shoot_node_count(const std::function<double(double)>& potential, double mass,
                     double hbar, double E, const ShootingConfig& cfg)
{
    // count over (x_min, x_max): integrate the regular solution across the
    // whole interval in small segments
    ShootingConfig c = cfg;
    c.x_match = cfg.x_max * 0.98;
    return shoot_once(potential, mass, hbar, E, c).nodes;
}

double wronskian(const std::function<double(double)>& f,
                 const std::function<double(double)>& g, double z, double h)
{
    auto d = [&](const std::function<double(double)>& fn) {
        double d1 = (fn(z + h) - fn(z - h)) / (2 * h);
        double d2 = (fn(z + h / 2) - fn(z - h / 2)) / h;
        return (4 * d2 - d1) / 3;
    };
    return f(z) * d(g) - d(f) * g(z);
}

double fd_derivative(const std::function<double(double)>& f, double z, int order,
                     double h)
{
    if (order == 1) {
        double d1 = (f(z + h) - f(z - h)) / (2 * h);
        double d2 = (f(z + h / 2) - f(z - h / 2)) / h;
        return (4 * d2 - d1) / 3;
    }
    if (order == 2) {
        double fz = f(z);
        double s1 = (f(z + h) - 2 * fz + f(z - h)) / (h * h);
        double s2 = (f(z + h / 2) - 2 * fz + f(z - h / 2)) / (h * h / 4);
        return (4 * s2 - s1) / 3;
    }
    throw domain_error("fd_derivative: order must be 1 or 2");
}

} // namespace heunite::oracle
