#include <doctest.h>

#include <cmath>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "compass/oracle.hpp"
#include "compass/wigner.hpp"

using namespace compass;

namespace {

// Independent transcription of the named compass-state terms.
double w_coherent(double x, double p, double a) {
    return std::exp(-(p * p + (x - 2.0 * a) * (x - 2.0 * a)) / 2.0);
}
double w_north_south(double x, double p, double a) { return w_coherent(p, x, a) + w_coherent(p, x, -a); }
double w_east_west(double x, double p, double a) { return w_coherent(x, p, a) + w_coherent(x, p, -a); }
double w_centre(double x, double p, double a) {
    return 2.0 * std::exp(-(p * p + x * x) / 2.0) * (std::cos(2.0 * a * p) + std::cos(2.0 * a * x));
}
double g_rhombus(double x, double p, double a) {
    return std::exp(-0.5 * ((x - a) * (x - a) + (p - a) * (p - a))) * std::cos(a * (x + p - a));
}
double w_rhombus(double x, double p, double a) {
    double s = 0.0;
    for (double sx : {1.0, -1.0}) {
        for (double sp : {1.0, -1.0}) {
            s += g_rhombus(sx * x, sp * p, a);
        }
    }
    return 2.0 * s;
}
double w_compass_terms(double x, double p, double a) {
    return w_north_south(x, p, a) + w_east_west(x, p, a) + w_rhombus(x, p, a) + w_centre(x, p, a);
}

}  // namespace

TEST_CASE("coherent-state kernel peaks at (2a, 0)") {
    for (double a : {0.0, 1.5, 5.0, 8.0}) {
        const complex k = wigner_pair_kernel(complex{a, 0.0}, complex{a, 0.0}, {2.0 * a, 0.0});
        CHECK(k.real() == doctest::Approx(1.0));
        CHECK(std::abs(k.imag()) < 1e-15);
        for (auto [x, p] : {std::pair{0.3, -1.2}, {2.0 * a + 1.0, 0.5}}) {
            CHECK(wigner_pair_kernel(complex{a, 0.0}, complex{a, 0.0}, {x, p}).real() ==
                  doctest::Approx(w_coherent(x, p, a)).epsilon(1e-14));
        }
    }
    CHECK(wigner_exact(make_coherent(8.0), {16.0, 0.0}).value == doctest::Approx(1.0 / two_pi));
}

TEST_CASE("antipodal pair gives the cat interference term") {
    const double a = 5.0;
    const CoherentComponent east{a, 0.0, 1.0}, west{a, pi, 1.0};
    for (double x : {-0.4, 0.0, 0.7}) {
        for (double p : {-1.1, 0.0, 0.2, 0.9}) {
            const complex k = wigner_pair_kernel(east, west, {x, p}) + wigner_pair_kernel(west, east, {x, p});
            CHECK(k.real() == doctest::Approx(2.0 * std::exp(-(x * x + p * p) / 2.0) * std::cos(2.0 * a * p)).epsilon(1e-12));
            CHECK(std::abs(k.imag()) < 1e-14);
        }
    }
}

TEST_CASE("adjacent pair gives the rhombus term") {
    const double a = 5.0;
    const CoherentComponent east{a, 0.0, 1.0}, north{a, pi / 2, 1.0};
    for (double x = 2.0; x <= 8.0; x += 0.75) {
        for (double p = 2.0; p <= 8.0; p += 0.6) {
            const complex k = wigner_pair_kernel(east, north, {x, p}) + wigner_pair_kernel(north, east, {x, p});
            CHECK(k.real() == doctest::Approx(2.0 * g_rhombus(x, p, a)).epsilon(1e-12).scale(1e-14));
        }
    }
}

TEST_CASE("adjacent pair kernel matches quadrature of the wavefunction integral") {
    const double a = 2.0;
    const StateSpec pair = StateSpec::from_components({{a, 0.0, 1.0}, {a, pi / 2, 1.0}});
    const double scale = two_pi * gram_norm_squared(pair);
    for (auto [x, p] : {std::pair{2.0, 2.0}, {1.3, 2.4}, {2.6, 1.1}, {0.5, 3.0}}) {
        const double rhombus = 2.0 * g_rhombus(x, p, a);
        const double lobes = w_coherent(x, p, a) + w_coherent(p, x, a);
        const double from_quadrature = oracle::wigner_quadrature(pair, {x, p}) * scale;
        CHECK(std::abs(from_quadrature - lobes - rhombus) < 1e-8);
    }
}

TEST_CASE("single compass reassembles from its named terms") {
    const double a = 5.0;
    const StateSpec s = make_n_compass(1, a);
    const double scale = two_pi * gram_norm_squared(s);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coord(-2.0 * a - 4.0, 2.0 * a + 4.0);
    for (int i = 0; i < 200; ++i) {
        const double x = coord(rng), p = coord(rng);
        CHECK(std::abs(wigner_exact(s, {x, p}).value * scale - w_compass_terms(x, p, a)) < 1e-9);
    }
}

TEST_CASE("special values") {
    CHECK(wigner_exact(make_coherent(0.0), {0.0, 0.0}).value == doctest::Approx(1.0 / two_pi));
    const StateSpec s = make_n_compass(1, 5.0);
    CHECK(std::abs(wigner_exact(s, {0.0, 0.0}).value - 4.0 / (two_pi * gram_norm_squared(s))) < 1e-9);
    CHECK_THROWS_AS(wigner_exact(s, {NAN, 0.0}), std::domain_error);
}

TEST_CASE("pair sums are real") {
    const StateSpec odd = StateSpec::from_components({{2.0, 0.1, {1.0, 0.3}}, {1.5, 2.0, -0.7}, {3.0, 4.0, {0.0, 1.0}}});
    for (const auto& s : {make_n_compass(3, 12.0), make_n_compass(2, 8.0), odd}) {
        for (double x = -20.0; x <= 20.0; x += 2.3) {
            for (double p = -20.0; p <= 20.0; p += 3.1) {
                const WignerValue w = wigner_exact(s, {x, p});
                CHECK(std::abs(w.raw_complex_imag) <= 1e-10 * (1.0 + std::abs(w.value)));
            }
        }
    }
}

TEST_CASE("rotation covariance") {
    const StateSpec s = StateSpec::from_components({{2.0, 0.1, {1.0, 0.3}}, {1.5, 2.0, -0.7}, {3.0, 4.0, 1.0}});
    for (double theta : {0.3, 1.7, -2.2}) {
        const StateSpec r = rotate(s, theta);
        for (double x = -6.0; x <= 6.0; x += 1.7) {
            for (double p = -6.0; p <= 6.0; p += 1.3) {
                CHECK(std::abs(wigner_exact(r, {x, p}).value -
                               wigner_exact(s, rotate_point({x, p}, -theta)).value) < 1e-10);
            }
        }
    }
}

TEST_CASE("unit integral") {
    for (auto [n, a] : {std::pair{1, 5.0}, {2, 8.0}, {3, 12.0}}) {
        const double half = 2.0 * a + 6.0;
        const int cells = static_cast<int>(std::round(2.0 * half / 0.05));
        const GridAxes axes{-half, half, -half, half, cells, cells};
        const auto values = wigner_grid(make_n_compass(n, a), axes);
        double sum = 0.0;
        for (double v : values) {
            sum += v;
        }
        CAPTURE(n);
        CHECK(std::abs(sum * axes.dx() * axes.dp() - 1.0) < 1e-4);
    }
}

TEST_CASE("grid evaluation matches pointwise evaluation") {
    const StateSpec s = make_n_compass(2, 8.0);
    const GridAxes axes{-22.0, 22.0, -20.0, 21.0, 37, 29};
    const auto grid = wigner_grid(s, axes);
    for (int j = 0; j < axes.np; ++j) {
        for (int i = 0; i < axes.nx; ++i) {
            CHECK(std::abs(grid[j * axes.nx + i] - wigner_exact(s, {axes.x_at(i), axes.p_at(j)}).value) < 1e-15);
        }
    }
}

TEST_CASE("centre approximation reduces to the explicit n = 1, 2, 3 patterns") {
    const double a = 5.0, r2 = std::sqrt(2.0), r3 = std::sqrt(3.0);
    for (double x = -1.0; x <= 1.0; x += 0.27) {
        for (double p = -1.0; p <= 1.0; p += 0.31) {
            const double env = 2.0 * std::exp(-0.5 * (x * x + p * p));
            const double base = std::cos(2 * x * a) + std::cos(2 * p * a);
            CHECK(wigner_center_approx(1, a, {x, p}) == doctest::Approx(env * base).epsilon(1e-12));
            const double two = base + std::cos(r2 * (p * a + x * a)) + std::cos(r2 * (p * a - x * a));
            CHECK(wigner_center_approx(2, a, {x, p}) == doctest::Approx(env * two).epsilon(1e-12));
            const double three = base + std::cos(r3 * x * a + p * a) + std::cos(r3 * p * a - x * a) +
                                 std::cos(r3 * p * a + x * a) + std::cos(r3 * x * a - p * a);
            CHECK(wigner_center_approx(3, a, {x, p}) == doctest::Approx(env * three).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(wigner_center_approx(0, a, {0.0, 0.0}), std::domain_error);
}

TEST_CASE("centre approximation equals the antipodal-pair part of the exact sum") {
    for (auto [n, a] : {std::pair{1, 5.0}, {2, 8.0}, {3, 12.0}}) {
        const StateSpec s = make_n_compass(n, a);
        const auto& c = s.components();
        const double scale = two_pi * gram_norm_squared(s);
        double worst = 0.0, largest = 0.0;
        for (double x = -1.0; x <= 1.0; x += 0.05) {
            for (double p = -1.0; p <= 1.0; p += 0.05) {
                if (x * x + p * p > 1.0) {
                    continue;
                }
                complex partial{};
                for (std::size_t j = 0; j < c.size(); ++j) {
                    for (std::size_t k = 0; k < c.size(); ++k) {
                        if (std::abs(c[j].amplitude() + c[k].amplitude()) < 1e-9) {
                            partial += wigner_pair_kernel(c[j], c[k], {x, p});
                        }
                    }
                }
                const double approx = wigner_center_approx(n, a, {x, p}) / scale;
                worst = std::max(worst, std::abs(partial.real() / scale - approx));
                largest = std::max(largest, std::abs(approx));
            }
        }
        CAPTURE(n);
        CHECK(worst < 1e-6 * largest);
    }
}

TEST_CASE("tile area") {
    CHECK(tile_area(5.0) == doctest::Approx(pi * pi / 50.0));
    CHECK(tile_area(5.0) == doctest::Approx(0.19739).epsilon(1e-5));
    CHECK(tile_area(1.0) == doctest::Approx(pi * pi / 2.0));
    CHECK(tile_area(8.0) == doctest::Approx(pi * pi / 128.0));
    CHECK_THROWS_AS(tile_area(0.0), std::domain_error);
    CHECK_THROWS_AS(tile_area(-2.0), std::domain_error);
}

TEST_CASE("position marginal of the cat state") {
    const StateSpec cat = make_cat(3.0);
    const double gram = gram_norm_squared(cat);
    for (double x : {-6.0, -2.5, 0.0, 0.4, 3.3, 6.0}) {
        auto f = [&](double p) { return wigner_exact(cat, {x, p}).value; };
        double marginal = 0.0;
        for (double lo = -30.0; lo < 30.0; lo += 2.0) {
            marginal += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, lo + 2.0, 10, 1e-13);
        }
        const double density = std::norm(oracle::position_wavefunction(cat, x)) / gram;
        CAPTURE(x);
        CHECK(std::abs(marginal - density) < 1e-6);
    }
}

TEST_CASE("chessboard zero spacing along x") {
    // cos(2ax) + cos(2ap) = 2 cos(a(x+p)) cos(a(x-p)): the tiles are squares
    // tilted by 45 degrees. On the line p = pi/(4a) the zeros along x are
    // evenly spaced by pi/(2a).
    const double a = 5.0;
    const double p = pi / (4.0 * a);
    double prev = wigner_center_approx(1, a, {0.0, p});
    std::vector<double> zeros;
    const double h = 1e-4;
    for (double x = h; x < 2.0; x += h) {
        const double v = wigner_center_approx(1, a, {x, p});
        if ((v < 0.0) != (prev < 0.0)) {
            zeros.push_back(x - h / 2);
        }
        prev = v;
    }
    REQUIRE(zeros.size() >= 3);
    for (std::size_t i = 1; i < zeros.size(); ++i) {
        CHECK(std::abs(zeros[i] - zeros[i - 1] - pi / (2.0 * a)) < 2 * h);
    }
}

TEST_CASE("tile half-diagonal along the x axis") {
    // On p = 0 the pattern is 2(1 + cos(2ax)): the first zero sits at the tile
    // corner x = pi/(2a), and a square with that half-diagonal has area
    // 2 (pi/(2a))^2 = pi^2/(2a^2).
    const double a = 5.0;
    double best_x = 0.0, best = INFINITY;
    for (double x = 0.0; x < pi / a; x += 1e-5) {
        const double v = std::abs(wigner_center_approx(1, a, {x, 0.0}));
        if (v < best) {
            best = v;
            best_x = x;
        }
    }
    CHECK(best_x == doctest::Approx(pi / (2.0 * a)).epsilon(1e-4));
    CHECK(2.0 * best_x * best_x == doctest::Approx(tile_area(a)).epsilon(1e-4));
}
