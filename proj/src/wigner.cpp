#include "compass/wigner.hpp"

#include <cmath>
#include <stdexcept>

#include "parallel.hpp"

namespace compass {

namespace {

// Factorised kernel pieces for one ordered pair |alpha><beta|.
struct PairFactors {
    complex phase;   // e^{i Im(conj(beta) alpha)}
    complex u;       // alpha + conj(beta)
    complex v;       // conj(beta) - alpha
    double x_centre; // Re(alpha + beta)
    double p_centre; // Im(alpha + beta)

    PairFactors(complex alpha, complex beta)
        : phase(std::polar(1.0, std::imag(std::conj(beta) * alpha))),
          u(alpha + std::conj(beta)),
          v(std::conj(beta) - alpha),
          x_centre(std::real(alpha + beta)),
          p_centre(std::imag(alpha + beta)) {}

    complex x_factor(double x) const {
        const complex d = x - u;
        return std::exp(-0.5 * d * d - 0.5 * u.imag() * u.imag());
    }

    complex p_factor(double p) const {
        const complex d = p - complex{0.0, 1.0} * v;
        return std::exp(-0.5 * d * d - 0.5 * v.real() * v.real());
    }
};

constexpr double skip_threshold = 1e-16;

}  // namespace

PhasePoint rotate_point(PhasePoint pt, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return {c * pt.x - s * pt.p, s * pt.x + c * pt.p};
}

complex wigner_pair_kernel(complex alpha, complex beta, PhasePoint pt) {
    const PairFactors f(alpha, beta);
    return f.phase * f.x_factor(pt.x) * f.p_factor(pt.p);
}

complex wigner_pair_kernel(const CoherentComponent& c1, const CoherentComponent& c2, PhasePoint pt) {
    return wigner_pair_kernel(c1.amplitude(), c2.amplitude(), pt);
}

WignerValue wigner_exact(const StateSpec& state, PhasePoint pt) {
    if (!std::isfinite(pt.x) || !std::isfinite(pt.p)) {
        throw std::domain_error("phase point must be finite");
    }
    const auto& comps = state.components();
    complex sum{};
    for (const auto& cj : comps) {
        for (const auto& ck : comps) {
            sum += cj.weight * std::conj(ck.weight) * wigner_pair_kernel(cj, ck, pt);
        }
    }
    const double scale = two_pi * gram_norm_squared(state);
    return {sum.real() / scale, sum.imag() / scale};
}

double wigner_center_approx(int n, double a, PhasePoint pt) {
    if (n < 1) {
        throw std::domain_error("n must be at least 1");
    }
    double sum = 0.0;
    for (int m = 0; m < n; ++m) {
        const double t = m * pi / (2.0 * n);
        const double c = std::cos(t), s = std::sin(t);
        sum += std::cos(2.0 * a * (pt.p * c - pt.x * s)) + std::cos(2.0 * a * (pt.x * c + pt.p * s));
    }
    return 2.0 * std::exp(-0.5 * (pt.x * pt.x + pt.p * pt.p)) * sum;
}

double tile_area(double a) {
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw std::domain_error("tile_area requires a > 0");
    }
    return pi * pi / (2.0 * a * a);
}

std::vector<double> wigner_grid(const StateSpec& state, const GridAxes& axes) {
    const auto& comps = state.components();
    const std::size_t nx = static_cast<std::size_t>(axes.nx);
    std::vector<double> out(nx * static_cast<std::size_t>(axes.np), 0.0);
    const double scale = 1.0 / (two_pi * gram_norm_squared(state));

    detail::parallel_rows(axes.np, [&](int row_begin, int row_end) {
        std::vector<complex> xf(nx);
        for (std::size_t j = 0; j < comps.size(); ++j) {
            for (std::size_t k = j; k < comps.size(); ++k) {
                const complex coeff = (j == k ? 1.0 : 2.0) * comps[j].weight *
                                      std::conj(comps[k].weight) * scale;
                const double mag = std::abs(coeff);
                if (mag <= skip_threshold) {
                    continue;
                }
                const double reach = std::sqrt(2.0 * std::log(mag / skip_threshold));
                const PairFactors f(comps[j].amplitude(), comps[k].amplitude());
                const complex c = coeff * f.phase;

                int col_lo = axes.nx, col_hi = -1;
                for (int i = 0; i < axes.nx; ++i) {
                    const double x = axes.x_at(i);
                    if (std::abs(x - f.x_centre) <= reach) {
                        xf[static_cast<std::size_t>(i)] = c * f.x_factor(x);
                        col_lo = std::min(col_lo, i);
                        col_hi = std::max(col_hi, i);
                    }
                }
                if (col_hi < col_lo) {
                    continue;
                }
                for (int r = row_begin; r < row_end; ++r) {
                    const double p = axes.p_at(r);
                    if (std::abs(p - f.p_centre) > reach) {
                        continue;
                    }
                    const complex pf = f.p_factor(p);
                    double* row = out.data() + static_cast<std::size_t>(r) * nx;
                    for (int i = col_lo; i <= col_hi; ++i) {
                        const complex& q = xf[static_cast<std::size_t>(i)];
                        row[i] += q.real() * pf.real() - q.imag() * pf.imag();
                    }
                }
            }
        }
    });
    return out;
}

std::vector<double> wigner_center_grid(int n, double a, const GridAxes& axes) {
    const double scale = 1.0 / (two_pi * gram_norm_squared(make_n_compass(n, a)));
    const std::size_t nx = static_cast<std::size_t>(axes.nx);
    std::vector<double> out(nx * static_cast<std::size_t>(axes.np));
    detail::parallel_rows(axes.np, [&](int row_begin, int row_end) {
        for (int r = row_begin; r < row_end; ++r) {
            for (int i = 0; i < axes.nx; ++i) {
                out[static_cast<std::size_t>(r) * nx + static_cast<std::size_t>(i)] =
                    scale * wigner_center_approx(n, a, {axes.x_at(i), axes.p_at(r)});
            }
        }
    });
    return out;
}

}  // namespace compass
