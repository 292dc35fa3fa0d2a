#pragma once

#include "heunite/errors.hpp"

#include <functional>
#include <vector>

namespace heunite::oracle {

// u'' + p(z) u' + r(z) u = 0 with initial data (u0, du0) at z_lo
struct OdeProblem {
    std::function<double(double)> p;
    std::function<double(double)> r;
    double z_lo;
    double u0;
    double du0;
};

struct OdeResult {
    double u;
    double du;
    double u_err;  // global estimate from the tolerance-halving re-run
    double du_err;
};

// adaptive embedded Runge-Kutta 5(4); local error <= tol per step, the
// returned value is from the tol/2 re-run and *_err fields hold the
// difference between the two runs
OdeResult integrate(const OdeProblem& prob, double z_target, double tol);

// single run at fixed step count, same tableau; for convergence-order checks
OdeResult integrate_fixed(const OdeProblem& prob, double z_target, int n_steps);

struct ShootingConfig {
    double x_min = 1e-4;
    double x_match = 1.0;
    double x_max = 30.0;
    double ode_tol = 1e-12;
    double local_exponent = 11.0 / 6.0; // psi ~ x^s at the origin
    int scan_points = 400;
    // optional high-order start data at x_min overriding the bare power law
    std::function<void(double E, double x, double& psi, double& dpsi)> start;
};

// bound states of -hbar^2/(2m) psi'' + V(x) psi = E psi on the half line,
// psi(0) = psi(inf) = 0: energies in [e_lo, e_hi] where the log-derivative
// mismatch at x_match vanishes; at most n_max lowest levels
std::vector<double> shoot_spectrum(const std::function<double(double)>& potential,
                                   double mass, double hbar, double e_lo,
                                   double e_hi, int n_max,
                                   const ShootingConfig& cfg);

// interior nodes of the left-integrated solution at energy E
int shoot_node_count(const std::function<double(double)>& potential, double mass,
                     double hbar, double E, const ShootingConfig& cfg);

// f g' - f' g with Richardson-extrapolated central differences
double wronskian(const std::function<double(double)>& f,
                 const std::function<double(double)>& g, double z, double h);

// central-difference derivative (order 1 or 2), Richardson-extrapolated
double fd_derivative(const std::function<double(double)>& f, double z, int order,
                     double h);

} // namespace heunite::oracle
