#include "compass/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "compass/special_functions.hpp"
#include "parallel.hpp"

namespace compass {

namespace {

void check_inputs(int n, double a) {
    if (n < 1) {
        throw std::domain_error("n must be at least 1");
    }
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw std::domain_error("a must be positive and finite");
    }
}

// Everything below works in the scaled radius t = a|delta|; the root
// condition depends on a only through t.
struct Derivatives {
    double f = 0.0;
    double df = 0.0;   // d/dt
    double d2f = 0.0;  // d^2/dt^2
};

Derivatives scaled_condition(int n, double phi, double t) {
    Derivatives d;
    for (int m = 0; m < n; ++m) {
        const double theta = phi + m * pi / (2.0 * n);
        const double c = std::cos(theta), s = std::sin(theta);
        const double uc = 2.0 * t * c, us = 2.0 * t * s;
        const double cos_c = std::cos(uc), cos_s = std::cos(us);
        d.f += cos_c + cos_s;
        d.df -= 2.0 * (c * std::sin(uc) + s * std::sin(us));
        d.d2f -= 4.0 * (c * c * cos_c + s * s * cos_s);
    }
    return d;
}

double scaled_value(int n, double phi, double t) {
    double f = 0.0;
    for (int m = 0; m < n; ++m) {
        const double theta = phi + m * pi / (2.0 * n);
        f += std::cos(2.0 * t * std::cos(theta)) + std::cos(2.0 * t * std::sin(theta));
    }
    return f;
}

constexpr int newton_max_iterations = 50;
constexpr double tangent_tolerance = 1e-12;
constexpr double scan_step = 0.005;

struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
    bool tangent = false;  // f touches zero without changing sign; root is lo == hi
};

// Zeros of f along the ray, in increasing t. Sign changes are caught on a fine
// grid; a local extremum that dips to (or through) zero between grid points is
// resolved by a Brent search so that nearly coincident roots are not skipped.
std::vector<Bracket> zero_brackets(int n, double phi, double t_max, bool first_only) {
    std::vector<Bracket> out;
    const int steps = static_cast<int>(std::ceil(t_max / scan_step));
    double t_prev = 0.0, f_prev = scaled_value(n, phi, 0.0);
    double t_prev2 = 0.0, f_prev2 = f_prev;
    for (int i = 1; i <= steps; ++i) {
        const double t = i * scan_step;
        const double f = scaled_value(n, phi, t);
        if (f_prev == 0.0) {
            out.push_back({t_prev, t_prev, true});
        } else if ((f_prev < 0.0) != (f < 0.0) && f != 0.0) {
            out.push_back({t_prev, t, false});
        } else if (i >= 2 && (f_prev - f_prev2) * (f - f_prev) < 0.0 && std::abs(f_prev) < 0.25) {
            // Extremum near zero between t_prev2 and t: check whether it crosses.
            const double sign = f_prev > 0.0 ? 1.0 : -1.0;
            auto g = [&](double x) { return sign * scaled_value(n, phi, x); };
            const auto [t_ext, g_ext] =
                boost::math::tools::brent_find_minima(g, t_prev2, t, std::numeric_limits<double>::digits);
            if (sign * (f_prev - f_prev2) < 0.0) {  // only a valley in g can touch zero
                if (g_ext < 0.0) {
                    out.push_back({t_prev2, t_ext, false});
                    if (!first_only) {
                        out.push_back({t_ext, t, false});
                    }
                } else if (g_ext <= tangent_tolerance) {
                    out.push_back({t_ext, t_ext, true});
                }
            }
        }
        if (first_only && !out.empty()) {
            break;
        }
        t_prev2 = t_prev;
        f_prev2 = f_prev;
        t_prev = t;
        f_prev = f;
    }
    return out;
}

// Newton on f in t, continuing a few steps past the residual test so the
// iterate settles at working precision.
std::optional<double> newton_scaled(int n, double phi, double t) {
    int extra = 0;
    for (int it = 0; it < newton_max_iterations; ++it) {
        const Derivatives d = scaled_condition(n, phi, t);
        if (d.df == 0.0 || !std::isfinite(d.df)) {
            return std::nullopt;
        }
        const double step = d.f / d.df;
        if (std::abs(d.f) < root_residual_tolerance) {
            if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(t) ||
                ++extra > 3) {
                return t;
            }
        }
        t -= step;
        if (!std::isfinite(t) || t <= 0.0) {
            return std::nullopt;
        }
    }
    const double f = scaled_value(n, phi, t);
    if (std::abs(f) < root_residual_tolerance) {
        return t;
    }
    return std::nullopt;
}

double root_in_bracket(int n, double phi, const Bracket& b, std::optional<double> seed) {
    if (b.tangent) {
        return b.lo;
    }
    if (seed && *seed >= b.lo && *seed <= b.hi) {
        if (auto t = newton_scaled(n, phi, *seed); t && *t >= b.lo && *t <= b.hi) {
            return *t;
        }
    }
    auto f = [&](double t) { return scaled_value(n, phi, t); };
    std::uintmax_t iters = 200;
    const auto [lo, hi] = boost::math::tools::toms748_solve(
        f, b.lo, b.hi, boost::math::tools::eps_tolerance<double>(std::numeric_limits<double>::digits - 1),
        iters);
    const double mid = 0.5 * (lo + hi);
    if (auto t = newton_scaled(n, phi, mid); t && *t >= b.lo && *t <= b.hi) {
        return *t;
    }
    return mid;
}

struct CoefficientParts {
    double a_part = 0.0;  // contribution to A
    double f_part = 0.0;  // contribution to f(y)
    double d_part = 0.0;  // contribution to f'(y)
};

// Harmonic k >= 1 of the Bessel expansion (s = 4kn), without the cos(s phi) factor.
CoefficientParts bessel_harmonic(int n, double a, double z, int k) {
    const int s = 4 * k * n;
    const double js = special::bessel_j(s, z);
    const double jm1 = special::bessel_j(s - 1, z), jp1 = special::bessel_j(s + 1, z);
    const double jm2 = special::bessel_j(s - 2, z), jp2 = special::bessel_j(s + 2, z);
    return {n * a * a * (2.0 * jm2 + 2.0 * jp2 - 4.0 * js), 4.0 * n * js, 4.0 * a * n * (jm1 - jp1)};
}

double harmonic_bound(int n, double a, double y, int k) {
    const CoefficientParts h = bessel_harmonic(n, a, 2.0 * a * y, k);
    const double da = std::abs(h.a_part);
    const double db = std::abs(h.d_part) + 2.0 * y * da;
    const double dc = std::abs(h.f_part) + y * db + y * y * da;
    return std::max({da, db, dc});
}

// Sum of bounds over dropped harmonics k > kept, until they stop mattering.
double neglected_harmonics_bound(int n, double a, double y, int kept) {
    double total = 0.0;
    for (int k = kept + 1; k <= kept + 64; ++k) {
        const double b = harmonic_bound(n, a, y, k);
        total += b;
        if (b < 1e-300 || b < 1e-20 * total) {
            break;
        }
    }
    return total;
}

}  // namespace

double default_expansion_point(double a) {
    if (!(a > 0.0)) {
        throw std::domain_error("a must be positive");
    }
    return 6.0 / (5.0 * a);
}

double root_condition(int n, double a, Displacement delta) {
    return scaled_value(n, delta.direction, a * delta.magnitude);
}

double root_condition_derivative(int n, double a, Displacement delta) {
    return a * scaled_condition(n, delta.direction, a * delta.magnitude).df;
}

QuadraticCoefficients taylor_coeffs_raw(int n, double a, double arg_delta, double y) {
    check_inputs(n, a);
    if (!(y > 0.0)) {
        throw std::domain_error("expansion point must be positive");
    }
    const Derivatives d = scaled_condition(n, arg_delta, a * y);
    const double f = d.f, df = a * d.df, d2f = a * a * d.d2f;
    QuadraticCoefficients q;
    q.a_coef = 0.5 * d2f;
    q.b_coef = df - d2f * y;
    q.c_coef = f - q.b_coef * y - q.a_coef * y * y;
    q.expansion_point = y;
    q.n = n;
    q.a = a;
    q.arg_delta = arg_delta;
    q.form = CoefficientForm::raw_taylor;
    return q;
}

QuadraticCoefficients taylor_coeffs_bessel(int n, double a, double arg_delta, double y, int harmonics) {
    check_inputs(n, a);
    if (!(y > 0.0)) {
        throw std::domain_error("expansion point must be positive");
    }
    if (harmonics < 0) {
        throw std::domain_error("harmonic count must be non-negative");
    }
    const double z = 2.0 * a * y;
    const auto j = special::bessel_j_sequence(2, z);
    double a_coef = 2.0 * a * a * n * (j[2] - j[0]);
    double f = 2.0 * n * j[0];
    double df = -4.0 * a * n * j[1];
    for (int k = 1; k <= harmonics; ++k) {
        const CoefficientParts h = bessel_harmonic(n, a, z, k);
        const double c = std::cos(4.0 * k * n * arg_delta);
        a_coef += c * h.a_part;
        f += c * h.f_part;
        df += c * h.d_part;
    }
    QuadraticCoefficients q;
    q.a_coef = a_coef;
    q.b_coef = -2.0 * a_coef * y + df;
    q.c_coef = -a_coef * y * y - q.b_coef * y + f;
    q.expansion_point = y;
    q.n = n;
    q.a = a;
    q.arg_delta = arg_delta;
    q.form = CoefficientForm::bessel;
    q.neglected_bound = neglected_harmonics_bound(n, a, y, harmonics);
    return q;
}

int converged_bessel_harmonics(int n, double a, double y, double tolerance) {
    check_inputs(n, a);
    for (int k = 1; k < 256; ++k) {
        if (neglected_harmonics_bound(n, a, y, k) < tolerance) {
            return k;
        }
    }
    return 256;
}

double solve_quadratic_root(const QuadraticCoefficients& q) {
    const double A = q.a_coef, B = q.b_coef, C = q.c_coef, y = q.expansion_point;
    const double scale = std::max({std::abs(A) * y * y, std::abs(B) * y, std::abs(C)});
    if (std::abs(A) * y * y <= 1e-14 * scale || A == 0.0) {
        if (B == 0.0) {
            throw NoRealRootError("degenerate quadratic: A and B both vanish");
        }
        const double r = -C / B;
        if (!(r > 0.0)) {
            throw NoRealRootError("linear fallback root is not positive");
        }
        return r;
    }
    double disc = B * B - 4.0 * A * C;
    if (disc < 0.0) {
        if (disc < -1e-12) {
            throw NoRealRootError("quadratic has no real root (discriminant " + std::to_string(disc) + ")");
        }
        disc = 0.0;
    }
    // Cancellation-free pair of roots.
    const double qv = -0.5 * (B + std::copysign(std::sqrt(disc), B));
    double r1 = qv / A;
    double r2 = qv != 0.0 ? C / qv : r1;
    if (r1 > r2) {
        std::swap(r1, r2);
    }
    if (r1 > 0.0 && r2 > 0.0) {
        return std::abs(r1 - y) <= std::abs(r2 - y) ? r1 : r2;
    }
    if (r2 > 0.0) {
        return r2;
    }
    throw NoRealRootError("quadratic has no positive root");
}

double refine_root(int n, double a, double arg_delta, double seed_root) {
    check_inputs(n, a);
    if (!(seed_root > 0.0)) {
        throw std::domain_error("seed root must be positive");
    }
    double t = a * seed_root;
    int extra = 0;
    for (int it = 0; it < newton_max_iterations; ++it) {
        const Derivatives d = scaled_condition(n, arg_delta, t);
        if (d.df == 0.0) {
            throw RootNotConvergedError("vanishing derivative during Newton iteration", t / a);
        }
        const double step = d.f / d.df;
        if (std::abs(d.f) < root_residual_tolerance &&
            (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * t || ++extra > 3)) {
            return t / a;
        }
        t -= step;
        if (!std::isfinite(t)) {
            throw RootNotConvergedError("Newton iterate diverged", seed_root);
        }
    }
    if (std::abs(scaled_value(n, arg_delta, t)) < root_residual_tolerance) {
        return t / a;
    }
    throw RootNotConvergedError("Newton iteration did not converge in 50 steps", t / a);
}

namespace {

struct RootAt {
    double seed = std::numeric_limits<double>::quiet_NaN();
    double root = 0.0;  // in t units
};

RootAt root_along(int n, double a, double phi, double y, bool first_zero) {
    RootAt out;
    std::optional<double> seed_t;
    try {
        out.seed = solve_quadratic_root(taylor_coeffs_raw(n, a, phi, y));
        seed_t = a * out.seed;
    } catch (const NoRealRootError&) {
    }
    const double t_y = a * y;
    const auto brackets = zero_brackets(n, phi, std::max(4.0, 2.0 * t_y + 1.0), first_zero);
    if (brackets.empty()) {
        throw NoRealRootError("no zero of the overlap found along direction " + std::to_string(phi));
    }
    const Bracket* chosen = &brackets.front();
    if (!first_zero) {
        for (const auto& b : brackets) {
            const double dist = std::abs(0.5 * (b.lo + b.hi) - t_y);
            if (dist < std::abs(0.5 * (chosen->lo + chosen->hi) - t_y)) {
                chosen = &b;
            }
        }
    }
    out.root = root_in_bracket(n, phi, *chosen, seed_t);
    return out;
}

}  // namespace

SensitivityReport sensitivity_sweep(int n, double a, int steps, std::optional<double> expansion_point) {
    check_inputs(n, a);
    if (steps < 8) {
        throw std::domain_error("sweep needs at least 8 steps");
    }
    const bool first_zero = !expansion_point.has_value();
    const double y = expansion_point.value_or(default_expansion_point(a));
    if (!(y > 0.0)) {
        throw std::domain_error("expansion point must be positive");
    }

    SensitivityReport rep;
    rep.n = n;
    rep.a = a;
    rep.expansion_point = y;
    rep.sweep_period = pi / (2.0 * n);
    rep.samples.resize(static_cast<std::size_t>(steps));

    detail::parallel_rows(steps, [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
            const double phi = rep.sweep_period * i / steps;
            const RootAt r = root_along(n, a, phi, y, first_zero);
            rep.samples[static_cast<std::size_t>(i)] = {phi, r.seed, r.root / a};
        }
    });

    auto by_root = [](const SweepSample& l, const SweepSample& r) { return l.root < r.root; };
    const auto lo_it = std::min_element(rep.samples.begin(), rep.samples.end(), by_root);
    const auto hi_it = std::max_element(rep.samples.begin(), rep.samples.end(), by_root);
    rep.delta_min = lo_it->root;
    rep.arg_min = lo_it->arg_delta;
    rep.root_range_low = lo_it->root;
    rep.root_range_high = hi_it->root;

    // Golden-section style polish of both extremes between neighbouring samples.
    const double h = rep.sweep_period / steps;
    auto root_at = [&](double phi) { return root_along(n, a, phi, y, first_zero).root / a; };
    {
        const auto [phi, r] = boost::math::tools::brent_find_minima(
            root_at, lo_it->arg_delta - h, lo_it->arg_delta + h, std::numeric_limits<double>::digits / 2);
        if (r < rep.delta_min) {
            rep.delta_min = rep.root_range_low = r;
            rep.arg_min = phi;
        }
    }
    {
        auto neg = [&](double phi) { return -root_at(phi); };
        const auto [phi, r] = boost::math::tools::brent_find_minima(
            neg, hi_it->arg_delta - h, hi_it->arg_delta + h, std::numeric_limits<double>::digits / 2);
        rep.root_range_high = std::max(rep.root_range_high, -r);
    }
    rep.arg_min = canonical_angle(rep.arg_min);
    return rep;
}

double isotropy_metric(const SensitivityReport& report) {
    return (report.root_range_high - report.root_range_low) * report.a;
}

double min_separated_radius(int n, double separation) {
    if (n < 1) {
        throw std::domain_error("n must be at least 1");
    }
    return separation / (2.0 * std::sin(pi / (4.0 * n)));
}

std::vector<IsotropyRow> asymptotic_isotropy_table(int n_max, double a, int steps) {
    if (n_max < 1) {
        throw std::domain_error("n_max must be at least 1");
    }
    std::vector<IsotropyRow> rows;
    for (int n = 1; n <= n_max; ++n) {
        const SensitivityReport rep = sensitivity_sweep(n, a, steps);
        rows.push_back({n, isotropy_metric(rep), a * rep.delta_min, a >= min_separated_radius(n)});
    }
    return rows;
}

std::string format_report(const SensitivityReport& r) {
    char buf[512];
    std::ostringstream os;
    std::snprintf(buf, sizeof buf,
                  "n               %d\n"
                  "a               %.10g\n"
                  "expansion y     %.10g\n"
                  "delta_min       %.12g\n"
                  "a*delta_min     %.12g\n"
                  "arg_min         %.10g rad\n"
                  "root range      [%.12g, %.12g]\n"
                  "scaled range    [%.12g, %.12g]\n"
                  "isotropy        %.6e\n"
                  "sweep period    %.10g rad (%zu samples)\n",
                  r.n, r.a, r.expansion_point, r.delta_min, r.a * r.delta_min, r.arg_min, r.root_range_low,
                  r.root_range_high, r.a * r.root_range_low, r.a * r.root_range_high, isotropy_metric(r),
                  r.sweep_period, r.samples.size());
    os << buf;
    return os.str();
}

std::string format_report_rows(const SensitivityReport& r) {
    std::ostringstream os;
    os << "# n a arg_delta root\n";
    char buf[160];
    for (const auto& s : r.samples) {
        std::snprintf(buf, sizeof buf, "%d %.17g %.17g %.17g\n", r.n, r.a, s.arg_delta, s.root);
        os << buf;
    }
    return os.str();
}

}  // namespace compass
