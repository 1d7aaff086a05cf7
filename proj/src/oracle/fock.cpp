#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "compass/oracle.hpp"

namespace compass::oracle {

namespace {

constexpr double max_tail_fraction = 1e-20;

double max_radius(const StateSpec& state) {
    double r = 0.0;
    for (const auto& c : state.components()) {
        r = std::max(r, c.radius);
    }
    return r;
}

Eigen::VectorXcd to_eigen(const FockVector& v) {
    return Eigen::Map<const Eigen::VectorXcd>(v.amplitudes.data(), v.dim);
}

FockVector from_eigen(const Eigen::VectorXcd& v) {
    FockVector out;
    out.dim = static_cast<int>(v.size());
    out.amplitudes.assign(v.data(), v.data() + v.size());
    return out;
}

}  // namespace

double FockVector::norm_squared() const {
    double s = 0.0;
    for (const auto& c : amplitudes) {
        s += std::norm(c);
    }
    return s;
}

double FockVector::tail_fraction() const {
    const double n2 = norm_squared();
    return n2 > 0.0 ? std::norm(amplitudes.back()) / n2 : 0.0;
}

int fock_dimension(double a) {
    return static_cast<int>(std::ceil(a * a + 10.0 * a + 20.0));
}

FockVector fock_coherent(double a, double theta, int dim) {
    if (a < 0.0) {
        throw std::domain_error("coherent amplitude must be non-negative");
    }
    if (!(dim > a * a + 10.0 * a)) {
        throw TruncationError("Fock dimension " + std::to_string(dim) + " too small for amplitude " +
                              std::to_string(a));
    }
    FockVector v;
    v.dim = dim;
    v.amplitudes.assign(static_cast<std::size_t>(dim), complex{});
    if (a == 0.0) {
        v.amplitudes[0] = 1.0;
        return v;
    }
    const double log_a = std::log(a);
    for (int k = 0; k < dim; ++k) {
        const double log_mag = -0.5 * a * a + k * log_a - 0.5 * std::lgamma(k + 1.0);
        v.amplitudes[static_cast<std::size_t>(k)] = std::polar(std::exp(log_mag), k * theta);
    }
    return v;
}

FockVector fock_state(const StateSpec& state, int dim) {
    FockVector sum;
    sum.dim = dim;
    sum.amplitudes.assign(static_cast<std::size_t>(dim), complex{});
    for (const auto& c : state.components()) {
        const FockVector v = fock_coherent(c.radius, c.angle, dim);
        for (int k = 0; k < dim; ++k) {
            sum.amplitudes[static_cast<std::size_t>(k)] += c.weight * v.amplitudes[static_cast<std::size_t>(k)];
        }
    }
    return sum;
}

FockVector fock_displace(const FockVector& v, Displacement delta) {
    const int dim = v.dim;
    const complex d = delta.value();
    // Generator delta a^dagger - conj(delta) a on the truncated basis.
    Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(dim, dim);
    for (int k = 1; k < dim; ++k) {
        const double s = std::sqrt(static_cast<double>(k));
        gen(k, k - 1) = d * s;              // a^dagger |k-1> = sqrt(k) |k>
        gen(k - 1, k) = -std::conj(d) * s;  // a |k> = sqrt(k) |k-1>
    }
    const Eigen::MatrixXcd disp = gen.exp();
    FockVector out = from_eigen(disp * to_eigen(v));
    if (out.tail_fraction() > max_tail_fraction) {
        throw TruncationError("displaced state reaches the top of the truncated basis (dim " +
                              std::to_string(dim) + ")");
    }
    return out;
}

complex fock_inner(const FockVector& bra, const FockVector& ket) {
    if (bra.dim != ket.dim) {
        throw std::invalid_argument("Fock vectors have different dimensions");
    }
    complex s{};
    for (int k = 0; k < bra.dim; ++k) {
        s += std::conj(bra.amplitudes[static_cast<std::size_t>(k)]) * ket.amplitudes[static_cast<std::size_t>(k)];
    }
    return s;
}

complex fock_overlap_amplitude(const StateSpec& state, Displacement delta) {
    const int dim = fock_dimension(max_radius(state) + delta.magnitude);
    const FockVector v = fock_state(state, dim);
    const FockVector moved = fock_displace(v, delta);
    return fock_inner(v, moved) / v.norm_squared();
}

double fock_norm_squared(const StateSpec& state) {
    return fock_state(state, fock_dimension(max_radius(state))).norm_squared();
}

}  // namespace compass::oracle
