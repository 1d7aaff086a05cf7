#include "compass/overlap.hpp"

#include <cmath>
#include <stdexcept>

namespace compass {

complex pair_overlap(complex bra, complex ket, complex delta) {
    // <bra| D(delta) |ket> = e^{i Im(delta ket*)} <bra|ket + delta>
    //   = exp(-|bra - ket - delta|^2 / 2 + i [Im(delta ket*) + Im(bra* (ket + delta))])
    const complex shifted = ket + delta;
    const double phase = std::imag(delta * std::conj(ket)) + std::imag(std::conj(bra) * shifted);
    return std::exp(complex{-0.5 * std::norm(bra - shifted), phase});
}

complex pair_overlap(double a1, double theta1, double a2, double theta2, Displacement delta) {
    if (a1 < 0.0 || a2 < 0.0) {
        throw std::domain_error("coherent amplitudes must be non-negative");
    }
    return pair_overlap(std::polar(a1, theta1), std::polar(a2, theta2), delta.value());
}

OverlapResult gamma_exact(const StateSpec& state, Displacement delta) {
    const auto& comps = state.components();
    const complex d = delta.value();
    complex sum{};
    for (const auto& cj : comps) {
        for (const auto& ck : comps) {
            sum += std::conj(cj.weight) * ck.weight * pair_overlap(cj.amplitude(), ck.amplitude(), d);
        }
    }
    const complex amplitude = sum / gram_norm_squared(state);
    return {std::norm(amplitude), amplitude, OverlapMode::exact};
}

OverlapResult gamma_approx(int n, double a, Displacement delta) {
    if (n < 1) {
        throw std::domain_error("n must be at least 1");
    }
    if (!(a > 0.0)) {
        throw std::domain_error("gamma_approx requires a > 0");
    }
    const double r = delta.magnitude;
    double bracket = 0.0;
    for (int m = 0; m < n; ++m) {
        const double t = delta.direction + m * pi / (2.0 * n);
        bracket += std::cos(2.0 * a * r * std::cos(t)) + std::cos(2.0 * a * r * std::sin(t));
    }
    const double amplitude = std::exp(-0.5 * r * r) * bracket / (2.0 * n);
    return {amplitude * amplitude, complex{amplitude, 0.0}, OverlapMode::approx};
}

double cross_term_bound(const StateSpec& state, Displacement delta) {
    const auto& comps = state.components();
    const complex d = delta.value();
    double sum = 0.0;
    for (std::size_t j = 0; j < comps.size(); ++j) {
        for (std::size_t k = 0; k < comps.size(); ++k) {
            if (j == k) {
                continue;
            }
            sum += std::abs(comps[j].weight * comps[k].weight) *
                   std::exp(-0.5 * std::norm(comps[j].amplitude() - comps[k].amplitude() - d));
        }
    }
    return sum / gram_norm_squared(state);
}

}  // namespace compass
