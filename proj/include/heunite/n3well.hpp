#pragma once

#include "heunite/errors.hpp"

#include <array>
#include <utility>
#include <vector>

namespace heunite::n3well {

// half-line well with a fixed x^-2 barrier and tied x^{-2/3}, x^{2/3}
// strengths; V2 != 0 for everything beyond potential evaluation
struct N3Well {
    double V0 = 0.0;
    double V2 = 0.0;
    double mass = 1.0;
    double hbar = 1.0;
    double x0 = 0.0;
};

// parameters of the four-Hermite-term fundamental solution at energy E on
// the s branch; y0 is the argument value at x = x0
struct EnergyState {
    double E = 0.0;
    int s = 1;
    double a = 0.0;
    double a1 = 0.0;
    double a2 = 0.0;
    double y0 = 0.0;
    std::array<double, 4> c{};
};

struct Level {
    int n;
    double E;
    double a;
    double spectrum_fn_residual;
    double oracle_gap;
};

struct SpectrumResult {
    std::vector<Level> levels;
};

double potential_v(const N3Well& well, double x);

EnergyState energy_state(const N3Well& well, double E, int s);

double fundamental_psi(const N3Well& well, double E, int s, double x);

// coefficients of the equivalent two-term boundary form; the second one
// vanishes identically on the s = +1 branch
std::pair<double, double> two_term_reduction(const EnergyState& st);

// scalar whose zeros in E are the bound-state energies
double spectrum_fn(const N3Well& well, double E);

// first n_max spectrum roots, each refined to 1e-10 relative and validated
// against the shooting integrator
SpectrumResult bound_states(const N3Well& well, int n_max);

std::vector<double> bound_wavefunction(const N3Well& well, const EnergyState& level,
                                       const std::vector<double>& x_grid);

// transition-layer cosine approximation, proportionality constant 1;
// requires nu > 0 and w^2 < 2 nu
double szego_approx(double nu, double w);

// real part of the principal-branch continuation of the same expression
// past the w^2 = 2 nu edge; matches szego_approx inside the domain
double szego_continued(double nu, double w);

double asymptotic_energy(const N3Well& well, int n);

// energy solving the quantization condition built from the cosine phase of
// the layer approximation; sits between the exact root and the closed-form
// asymptotics
double phase_equation_solve(const N3Well& well, int n);

} // namespace heunite::n3well
