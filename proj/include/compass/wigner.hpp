#pragma once

// Wigner functions of coherent-state superpositions.
//
// Units: x = a + a^dagger and p = -i (a - a^dagger), so a coherent state
// |alpha> peaks at (2 Re alpha, 2 Im alpha) with unit variance in both
// quadratures. Kernel values use the unnormalised scaling in which that peak
// equals 1; normalised outputs divide by 2*pi*<psi|psi> and integrate to 1.

#include <span>
#include <vector>

#include "compass/states.hpp"

namespace compass {

struct PhasePoint {
    double x = 0.0;
    double p = 0.0;
};

struct WignerValue {
    double value = 0.0;
    /// Imaginary residue of the pair sum before taking the real part.
    double raw_complex_imag = 0.0;
};

/// Rotates a phase-space point by theta about the origin.
PhasePoint rotate_point(PhasePoint pt, double theta);

/// Wigner contribution of the operator |alpha><beta| (unnormalised).
///
/// With zeta = (x + i p)/2 this is <beta|alpha> exp(-2 (zeta* - beta*)(zeta - alpha)),
/// a Gaussian of unit width centred on alpha + beta, times a plane wave. It
/// factorises as phase * X(x) * P(p); both factors have modulus <= 1.
complex wigner_pair_kernel(complex alpha, complex beta, PhasePoint pt);
complex wigner_pair_kernel(const CoherentComponent& c1, const CoherentComponent& c2, PhasePoint pt);

/// Normalised Wigner function of the state at one point.
WignerValue wigner_exact(const StateSpec& state, PhasePoint pt);

/// Unnormalised interference pattern near the origin of an n-compass state,
/// keeping only antipodal component pairs:
///   2 e^{-(x^2+p^2)/2} sum_m [cos(2a(p cos t_m - x sin t_m)) + cos(2a(x cos t_m + p sin t_m))]
/// with t_m = m*pi/(2n).
double wigner_center_approx(int n, double a, PhasePoint pt);

/// Area of one tile of the single-compass chessboard pattern, pi^2/(2a^2).
double tile_area(double a);

/// Rectangular lattice of cell centres: x_i = x_min + (i + 1/2) dx.
struct GridAxes {
    double x_min = 0.0, x_max = 0.0, p_min = 0.0, p_max = 0.0;
    int nx = 0, np = 0;

    double dx() const { return (x_max - x_min) / nx; }
    double dp() const { return (p_max - p_min) / np; }
    double x_at(int i) const { return x_min + (i + 0.5) * dx(); }
    double p_at(int j) const { return p_min + (j + 0.5) * dp(); }
};

/// Normalised Wigner function on every cell centre, row-major (p rows, x columns).
///
/// Pairs are summed in a fixed pair-major order (j <= k), so output is
/// bit-identical regardless of how rows are split across threads. Per pair,
/// rows and columns where the Gaussian envelope drops below 1e-16 relative to
/// the pair weight are skipped.
std::vector<double> wigner_grid(const StateSpec& state, const GridAxes& axes);

/// wigner_center_approx on every cell, divided by 2*pi*<psi|psi> of the
/// n-compass state so it is directly comparable with wigner_grid.
std::vector<double> wigner_center_grid(int n, double a, const GridAxes& axes);

}  // namespace compass
