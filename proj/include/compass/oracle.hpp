#pragma once

// Brute-force reference computations used to certify the closed forms:
// state algebra in a truncated Fock basis (displacement by matrix
// exponential) and direct quadrature of the Wigner integral over position
// wavefunctions. Deliberately simple and slow.

#include <stdexcept>
#include <string>
#include <vector>

#include "compass/overlap.hpp"
#include "compass/wigner.hpp"

namespace compass::oracle {

class TruncationError : public std::runtime_error {
public:
    explicit TruncationError(const std::string& what) : std::runtime_error(what) {}
};

struct FockVector {
    int dim = 0;
    std::vector<complex> amplitudes;

    double norm_squared() const;
    /// |c_{dim-1}|^2 / norm^2; must stay below 1e-20 for the truncation to be trusted.
    double tail_fraction() const;
};

/// ceil(a^2 + 10a + 20): more than ten standard deviations of photon number above a^2.
int fock_dimension(double a);

/// c_k = e^{-a^2/2} (a e^{i theta})^k / sqrt(k!), computed through logarithms.
/// Throws TruncationError unless dim > a^2 + 10a.
FockVector fock_coherent(double a, double theta, int dim);

/// Weighted sum of the state's coherent components.
FockVector fock_state(const StateSpec& state, int dim);

/// exp(delta a^dagger - conj(delta) a) applied with truncated ladder matrices.
/// Throws TruncationError when the result has significant weight at the top level.
FockVector fock_displace(const FockVector& v, Displacement delta);

complex fock_inner(const FockVector& bra, const FockVector& ket);

/// <psi|D(delta)|psi> / <psi|psi>, everything computed in the Fock basis. The
/// dimension is sized for radius max|alpha| + |delta|.
complex fock_overlap_amplitude(const StateSpec& state, Displacement delta);

/// <psi|psi> from Fock amplitudes.
double fock_norm_squared(const StateSpec& state);

/// Position wavefunction sum_j w_j psi_{alpha_j}(x), with x = a + a^dagger, so
/// psi_alpha(x) = (2 pi)^{-1/4} exp(-(x - 2 Re alpha)^2 / 4 + i Im alpha x - i Re alpha Im alpha).
complex position_wavefunction(const StateSpec& state, double x);

/// Normalised Wigner function by adaptive Gauss-Kronrod quadrature of
///   (1 / 4 pi) int dy e^{i p y / 2} psi*(x + y/2) psi(x - y/2) / <psi|psi>.
double wigner_quadrature(const StateSpec& state, PhasePoint pt);

/// int |psi(x)|^2 dx by the same quadrature.
double position_norm_squared(const StateSpec& state);

}  // namespace compass::oracle
