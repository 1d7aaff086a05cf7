#pragma once

// Displacement sensitivity of n-compass states.
//
// Along a fixed direction arg(delta), the self-term overlap vanishes where
//   f(|delta|) = sum_m [cos(2a|delta| cos(arg + m pi/2n)) + cos(2a|delta| sin(arg + m pi/2n))]
// crosses zero. The first zero ring is located by a quadratic Taylor model of
// f about y (default 6/(5a)), then polished by Newton iteration on f itself.
// f depends on a and |delta| only through a|delta|, so a*|delta|_min is
// independent of a.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "compass/overlap.hpp"

namespace compass {

/// Newton tolerance on |f| at a refined root.
inline constexpr double root_residual_tolerance = 1e-13;

/// The overlap threshold below which a displaced state counts as orthogonal.
inline constexpr double default_epsilon = 1e-15;

/// Default Taylor expansion point y = 6/(5a).
double default_expansion_point(double a);

/// f(|delta|) at the given direction; zero exactly where gamma_approx vanishes.
double root_condition(int n, double a, Displacement delta);

/// df/d|delta| at fixed direction.
double root_condition_derivative(int n, double a, Displacement delta);

enum class CoefficientForm { raw_taylor, bessel };

/// A |delta|^2 + B |delta| + C, the quadratic Taylor model of f about y.
struct QuadraticCoefficients {
    double a_coef = 0.0;
    double b_coef = 0.0;
    double c_coef = 0.0;
    double expansion_point = 0.0;
    int n = 1;
    double a = 0.0;
    double arg_delta = 0.0;
    CoefficientForm form = CoefficientForm::raw_taylor;
    /// Bessel form only: largest magnitude any coefficient can lose to the
    /// harmonics that were dropped (0 for the raw form).
    double neglected_bound = 0.0;
};

/// Coefficients by direct trigonometric summation over the 2n cosines.
QuadraticCoefficients taylor_coeffs_raw(int n, double a, double arg_delta, double y);

/// Coefficients in closed Bessel form. With z = 2ay and phi = arg_delta:
///   A = 2a^2 n [J2 - J0] + n a^2 sum_k cos(4kn phi) [2 J_{4kn-2} + 2 J_{4kn+2} - 4 J_{4kn}]
///   B = -2 A y - 4 a n J1 + 4 a n sum_k cos(4kn phi) [J_{4kn-1} - J_{4kn+1}]
///   C = -A y^2 - B y + 2n J0 + 4n sum_k cos(4kn phi) J_{4kn}
/// keeping harmonics k = 1..harmonics. harmonics = 1 is the leading-order form.
QuadraticCoefficients taylor_coeffs_bessel(int n, double a, double arg_delta, double y,
                                           int harmonics = 1);

/// Smallest harmonic count whose first dropped harmonic is below `tolerance`
/// in every coefficient.
int converged_bessel_harmonics(int n, double a, double y, double tolerance = 1e-16);

class NoRealRootError : public std::runtime_error {
public:
    explicit NoRealRootError(const std::string& what) : std::runtime_error(what) {}
};

class RootNotConvergedError : public std::runtime_error {
public:
    RootNotConvergedError(const std::string& what, double last_iterate)
        : std::runtime_error(what), last_iterate_(last_iterate) {}
    double last_iterate() const { return last_iterate_; }

private:
    double last_iterate_;
};

/// Positive root of the quadratic model, preferring the one nearest y.
/// A discriminant in [-1e-12, 0) is clamped to zero; |A| ~ 0 falls back to -C/B.
double solve_quadratic_root(const QuadraticCoefficients& coeffs);

/// Newton iteration on f at fixed direction until |f| < 1e-13.
double refine_root(int n, double a, double arg_delta, double seed_root);

struct SweepSample {
    double arg_delta = 0.0;
    double seed_root = 0.0;  // quadratic-model root
    double root = 0.0;       // Newton-refined first zero
};

struct SensitivityReport {
    int n = 1;
    double a = 0.0;
    double expansion_point = 0.0;
    double delta_min = 0.0;
    double arg_min = 0.0;
    double root_range_low = 0.0;
    double root_range_high = 0.0;
    double sweep_period = 0.0;
    std::vector<SweepSample> samples;  // ordered by arg_delta
};

inline constexpr int default_sweep_steps = 720;

/// Sweeps arg(delta) over one period [0, pi/(2n)), refining the first zero at
/// each sample; the minimum is then polished by golden-section search.
SensitivityReport sensitivity_sweep(int n, double a, int steps = default_sweep_steps,
                                    std::optional<double> expansion_point = std::nullopt);

/// Dimensionless oscillation width of the first zero ring: (high - low) * a.
double isotropy_metric(const SensitivityReport& report);

/// Smallest a with adjacent components at least `separation` apart: a*2 sin(pi/(4n)) >= separation.
double min_separated_radius(int n, double separation = 6.0);

struct IsotropyRow {
    int n = 1;
    double metric = 0.0;
    double delta_min_scaled = 0.0;  // a * delta_min
    bool well_separated = true;
};

/// Isotropy metric for n = 1..n_max at a common a (so 2ay = 12/5 throughout).
std::vector<IsotropyRow> asymptotic_isotropy_table(int n_max, double a,
                                                   int steps = default_sweep_steps);

/// Plain-text summary table.
std::string format_report(const SensitivityReport& report);

/// One `n a arg_delta root` row per sample.
std::string format_report_rows(const SensitivityReport& report);

}  // namespace compass
