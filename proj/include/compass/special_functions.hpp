#pragma once

// Bessel functions of the first kind for integer order and the Jacobi-Anger
// expansions built from them.

#include <string_view>
#include <vector>

namespace compass::special {

struct BesselEval {
    int order = 0;
    double argument = 0.0;
    double value = 0.0;
    double abs_error_bound = 0.0;
};

/// Arguments up to this magnitude use the ascending power series; larger ones
/// use normalised backward recurrence.
inline constexpr double series_cutoff = 4.0;

/// J_order(z) for integer order >= 0 and finite real z.
double bessel_j(int order, double z);

/// Same value together with an a-posteriori error estimate.
BesselEval bessel_j_eval(int order, double z);

/// J_0(z), ..., J_max_order(z) from a single recurrence pass.
std::vector<double> bessel_j_sequence(int max_order, double z);

enum class JacobiAngerKind {
    cos_cos,  // cos(z cos t) = J0 + 2 sum (-1)^k J_{2k} cos(2k t)
    cos_sin,  // cos(z sin t) = J0 + 2 sum J_{2k} cos(2k t)
    sin_sin,  // sin(z sin t) = 2 sum J_{2k-1} sin((2k-1) t)
    sin_cos,  // sin(z cos t) = -2 sum (-1)^k J_{2k-1} cos((2k-1) t)
};

JacobiAngerKind parse_jacobi_anger_kind(std::string_view name);

/// Harmonic count at which the expansion tail is negligible: ceil(|z|) + 30.
int default_max_harmonic(double z);

/// Partial sum of the expansion through harmonic index max_harmonic.
double jacobi_anger(JacobiAngerKind kind, double z, double theta, int max_harmonic);

/// The trigonometric function the expansion converges to.
double jacobi_anger_closed_form(JacobiAngerKind kind, double z, double theta);

}  // namespace compass::special
