#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "compass/oracle.hpp"

namespace compass::oracle {

namespace {

using Rule = boost::math::quadrature::gauss_kronrod<double, 61>;

constexpr double quadrature_tolerance = 1e-12;
constexpr unsigned max_depth = 15;
constexpr double segment_length = 1.0;

// Integrates over [lo, hi] piecewise so the adaptive rule never has to find a
// narrow lobe inside one huge interval.
template <typename F>
double integrate(F&& f, double lo, double hi) {
    const int pieces = std::max(1, static_cast<int>(std::ceil((hi - lo) / segment_length)));
    const double h = (hi - lo) / pieces;
    double total = 0.0;
    for (int i = 0; i < pieces; ++i) {
        total += Rule::integrate(f, lo + i * h, lo + (i + 1) * h, max_depth, quadrature_tolerance);
    }
    return total;
}

// Half-width in x beyond which every component's wavefunction is below ~e^{-100}.
double support_half_width(const StateSpec& state) {
    double r = 0.0;
    for (const auto& c : state.components()) {
        r = std::max(r, std::abs(2.0 * c.amplitude().real()));
    }
    return r + 20.0;
}

}  // namespace

complex position_wavefunction(const StateSpec& state, double x) {
    static const double prefactor = std::pow(two_pi, -0.25);
    complex sum{};
    for (const auto& c : state.components()) {
        const complex alpha = c.amplitude();
        const double shift = x - 2.0 * alpha.real();
        const double phase = alpha.imag() * x - alpha.real() * alpha.imag();
        sum += c.weight * std::polar(prefactor * std::exp(-0.25 * shift * shift), phase);
    }
    return sum;
}

double position_norm_squared(const StateSpec& state) {
    const double half = support_half_width(state);
    return integrate([&](double x) { return std::norm(position_wavefunction(state, x)); }, -half, half);
}

double wigner_quadrature(const StateSpec& state, PhasePoint pt) {
    // psi(x +- y/2) is negligible once |x +- y/2| exceeds the support.
    const double half = support_half_width(state);
    const double y_max = 2.0 * (half + std::abs(pt.x));
    auto integrand = [&](double y) {
        const complex v = std::polar(1.0, 0.5 * pt.p * y) *
                          std::conj(position_wavefunction(state, pt.x + 0.5 * y)) *
                          position_wavefunction(state, pt.x - 0.5 * y);
        return v.real();
    };
    const double raw = integrate(integrand, -y_max, y_max);
    return raw / (4.0 * pi * position_norm_squared(state));
}

}  // namespace compass::oracle
