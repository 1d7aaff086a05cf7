#include "compass/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace compass::special {

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();

void check_arguments(int order, double z) {
    if (order < 0) {
        throw std::domain_error("Bessel order must be non-negative");
    }
    if (!std::isfinite(z)) {
        throw std::domain_error("Bessel argument must be finite");
    }
}

struct SeriesResult {
    double value;
    double abs_sum;
};

// J_n(x) = sum_l (-1)^l (x/2)^{2l+n} / (l! (n+l)!), for x >= 0.
SeriesResult bessel_series(int order, double x) {
    const double half = 0.5 * x;
    double term = 1.0;
    for (int k = 1; k <= order; ++k) {
        term *= half / k;
    }
    if (term == 0.0) {
        return {0.0, 0.0};
    }
    const double q = half * half;
    double sum = term;
    double abs_sum = std::abs(term);
    for (int l = 1; l < 500; ++l) {
        term *= -q / (static_cast<double>(l) * static_cast<double>(order + l));
        sum += term;
        abs_sum += std::abs(term);
        if (std::abs(term) <= 0.25 * eps * std::abs(sum)) {
            break;
        }
    }
    return {sum, abs_sum};
}

int miller_start(int max_order, double x) {
    const int top = std::max(max_order, static_cast<int>(std::ceil(x)));
    int start = top + 20 + static_cast<int>(std::sqrt(40.0 * top));
    return start + (start & 1);
}

// Backward recurrence J_{k-1} = (2k/x) J_k - J_{k+1} from an arbitrary seed,
// normalised with J_0 + 2 (J_2 + J_4 + ...) = 1. Valid for x > 0.
std::vector<double> bessel_miller(int max_order, double x) {
    constexpr double big = 1e250;
    const int start = miller_start(max_order, x);
    std::vector<double> out(static_cast<std::size_t>(max_order) + 1, 0.0);
    double upper = 0.0;  // b_{k+1}
    double current = 1.0;  // b_k
    double norm = 0.0;
    for (int k = start; k >= 1; --k) {
        if (k <= max_order) {
            out[static_cast<std::size_t>(k)] = current;
        }
        if ((k & 1) == 0) {
            norm += 2.0 * current;
        }
        double lower = (2.0 * k / x) * current - upper;
        upper = current;
        current = lower;
        if (std::abs(current) > big) {
            current /= big;
            upper /= big;
            norm /= big;
            for (int j = k; j <= max_order; ++j) {
                out[static_cast<std::size_t>(j)] /= big;
            }
        }
    }
    out[0] = current;
    norm += current;
    for (auto& v : out) {
        v /= norm;
    }
    return out;
}

double parity(int order) { return (order & 1) ? -1.0 : 1.0; }

}  // namespace

double bessel_j(int order, double z) { return bessel_j_eval(order, z).value; }

BesselEval bessel_j_eval(int order, double z) {
    check_arguments(order, z);
    const double x = std::abs(z);
    const double sign = z < 0.0 ? parity(order) : 1.0;
    BesselEval r{order, z, 0.0, 0.0};
    if (x == 0.0) {
        r.value = order == 0 ? 1.0 : 0.0;
        return r;
    }
    if (x <= series_cutoff) {
        const auto s = bessel_series(order, x);
        r.value = sign * s.value;
        r.abs_error_bound = 4.0 * eps * s.abs_sum;
    } else {
        const auto seq = bessel_miller(order, x);
        r.value = sign * seq[static_cast<std::size_t>(order)];
        r.abs_error_bound = 4.0 * eps * miller_start(order, x);
    }
    return r;
}

std::vector<double> bessel_j_sequence(int max_order, double z) {
    check_arguments(max_order, z);
    const double x = std::abs(z);
    std::vector<double> seq;
    if (x == 0.0) {
        seq.assign(static_cast<std::size_t>(max_order) + 1, 0.0);
        seq[0] = 1.0;
        return seq;
    }
    if (x <= series_cutoff) {
        seq.resize(static_cast<std::size_t>(max_order) + 1);
        for (int k = 0; k <= max_order; ++k) {
            seq[static_cast<std::size_t>(k)] = bessel_series(k, x).value;
        }
    } else {
        seq = bessel_miller(max_order, x);
    }
    if (z < 0.0) {
        for (int k = 1; k <= max_order; k += 2) {
            seq[static_cast<std::size_t>(k)] = -seq[static_cast<std::size_t>(k)];
        }
    }
    return seq;
}

JacobiAngerKind parse_jacobi_anger_kind(std::string_view name) {
    if (name == "cos_cos") return JacobiAngerKind::cos_cos;
    if (name == "cos_sin") return JacobiAngerKind::cos_sin;
    if (name == "sin_sin") return JacobiAngerKind::sin_sin;
    if (name == "sin_cos") return JacobiAngerKind::sin_cos;
    throw std::domain_error("unknown Jacobi-Anger kind '" + std::string(name) + "'");
}

int default_max_harmonic(double z) { return static_cast<int>(std::ceil(std::abs(z))) + 30; }

double jacobi_anger(JacobiAngerKind kind, double z, double theta, int max_harmonic) {
    if (max_harmonic < 1) {
        throw std::domain_error("max_harmonic must be at least 1");
    }
    const auto j = bessel_j_sequence(2 * max_harmonic, z);
    double sum = 0.0;
    switch (kind) {
        case JacobiAngerKind::cos_cos:
            for (int k = max_harmonic; k >= 1; --k) {
                sum += parity(k) * j[2 * k] * std::cos(2.0 * k * theta);
            }
            return j[0] + 2.0 * sum;
        case JacobiAngerKind::cos_sin:
            for (int k = max_harmonic; k >= 1; --k) {
                sum += j[2 * k] * std::cos(2.0 * k * theta);
            }
            return j[0] + 2.0 * sum;
        case JacobiAngerKind::sin_sin:
            for (int k = max_harmonic; k >= 1; --k) {
                sum += j[2 * k - 1] * std::sin((2.0 * k - 1.0) * theta);
            }
            return 2.0 * sum;
        case JacobiAngerKind::sin_cos:
            for (int k = max_harmonic; k >= 1; --k) {
                sum += parity(k) * j[2 * k - 1] * std::cos((2.0 * k - 1.0) * theta);
            }
            return -2.0 * sum;
    }
    throw std::domain_error("unknown Jacobi-Anger kind");
}

double jacobi_anger_closed_form(JacobiAngerKind kind, double z, double theta) {
    switch (kind) {
        case JacobiAngerKind::cos_cos: return std::cos(z * std::cos(theta));
        case JacobiAngerKind::cos_sin: return std::cos(z * std::sin(theta));
        case JacobiAngerKind::sin_sin: return std::sin(z * std::sin(theta));
        case JacobiAngerKind::sin_cos: return std::sin(z * std::cos(theta));
    }
    throw std::domain_error("unknown Jacobi-Anger kind");
}

}  // namespace compass::special
