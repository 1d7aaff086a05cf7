#pragma once

// Overlap gamma(delta) = |<psi|D(delta)|psi>|^2 / <psi|psi>^2 between a state
// and its displaced copy, exactly (every component pair) and in the
// self-term approximation for n-compass states.

#include "compass/states.hpp"

namespace compass {

struct Displacement {
    double magnitude = 0.0;  // |delta|
    double direction = 0.0;  // arg delta

    static Displacement from_complex(complex d) { return {std::abs(d), std::arg(d)}; }
    complex value() const { return std::polar(magnitude, direction); }
    double re() const { return value().real(); }
    double im() const { return value().imag(); }
};

enum class OverlapMode { exact, approx };

struct OverlapResult {
    double gamma = 0.0;
    complex amplitude{};  // normalised <psi|D(delta)|psi>
    OverlapMode mode = OverlapMode::exact;
};

/// <a1 e^{i t1}| D(delta) |a2 e^{i t2}>, from D(delta)|beta> = e^{(delta beta* - delta* beta)/2} |beta + delta>.
complex pair_overlap(double a1, double theta1, double a2, double theta2, Displacement delta);
complex pair_overlap(complex bra, complex ket, complex delta);

/// gamma with every pair of components, normalised by the exact Gram norm.
OverlapResult gamma_exact(const StateSpec& state, Displacement delta);

/// Self-term sum for the n-compass state:
///   e^{-|d|^2} |sum_m [cos(2a|d| cos(arg d + m pi/2n)) + cos(2a|d| sin(arg d + m pi/2n))]|^2 / (4 n^2).
/// The amplitude is the signed bracket times e^{-|d|^2/2} / (2n).
OverlapResult gamma_approx(int n, double a, Displacement delta);

/// Sum over distinct component pairs of |w_j w_k <a_j|D(delta)|a_k>| / <psi|psi>.
double cross_term_bound(const StateSpec& state, Displacement delta);

}  // namespace compass
