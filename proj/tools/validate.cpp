// `compass validate`: compares the closed forms against the brute-force
// references and prints one line per check.

#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "cli.hpp"
#include "compass/oracle.hpp"
#include "compass/overlap.hpp"
#include "compass/sensitivity.hpp"
#include "compass/special_functions.hpp"
#include "compass/wigner.hpp"

namespace compass::cli {

namespace {

struct Check {
    std::string name;
    double error = 0.0;
    double tolerance = 0.0;
    bool passed() const { return std::isfinite(error) && error <= tolerance; }
};

std::string label(int n, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "n=%d a=%g", n, a);
    return buf;
}

Check fock_overlap_check(int n, double a, std::mt19937_64& rng) {
    const StateSpec s = make_n_compass(n, a);
    std::uniform_real_distribution<double> mag(0.0, 1.0), ang(0.0, two_pi);
    double worst = 0.0;
    for (int i = 0; i < 6; ++i) {
        const Displacement d{mag(rng), ang(rng)};
        const complex ref = oracle::fock_overlap_amplitude(s, d);
        worst = std::max(worst, std::abs(gamma_exact(s, d).gamma - std::norm(ref)));
    }
    return {"overlap vs Fock basis      " + label(n, a), worst, 1e-8};
}

Check fock_norm_check(int n, double a) {
    const StateSpec s = make_n_compass(n, a);
    const double g = gram_norm_squared(s);
    return {"Gram norm vs Fock basis    " + label(n, a), std::abs(g - oracle::fock_norm_squared(s)) / g, 1e-10};
}

Check pair_check(double a, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> rad(0.0, a), ang(0.0, two_pi), mag(0.0, 2.0);
    double worst = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double r1 = rad(rng), t1 = ang(rng), r2 = rad(rng), t2 = ang(rng);
        const Displacement d{mag(rng), ang(rng)};
        const int dim = oracle::fock_dimension(std::max(r1, r2) + d.magnitude);
        const auto bra = oracle::fock_coherent(r1, t1, dim);
        const auto ket = oracle::fock_displace(oracle::fock_coherent(r2, t2, dim), d);
        worst = std::max(worst, std::abs(oracle::fock_inner(bra, ket) - pair_overlap(r1, t1, r2, t2, d)));
    }
    char name[64];
    std::snprintf(name, sizeof name, "pair overlap vs Fock basis a<=%g", a);
    return {name, worst, 1e-10};
}

Check quadrature_check(int n, double a, std::mt19937_64& rng) {
    const StateSpec s = make_n_compass(n, a);
    const double half = 2.0 * a + 4.0;
    std::uniform_real_distribution<double> coord(-half, half);
    double worst = 0.0;
    for (int i = 0; i < 4; ++i) {
        const PhasePoint pt{coord(rng), coord(rng)};
        worst = std::max(worst, std::abs(wigner_exact(s, pt).value - oracle::wigner_quadrature(s, pt)));
    }
    return {"Wigner vs quadrature       " + label(n, a), worst, 1e-7};
}

Check bessel_check() {
    double worst = 0.0;
    for (double z : {0.5, 2.4, 7.0, 15.0, 30.0}) {
        const auto j = special::bessel_j_sequence(60, z);
        double norm = j[0];
        for (std::size_t k = 2; k < j.size(); k += 2) {
            norm += 2.0 * j[k];
        }
        worst = std::max(worst, std::abs(norm - 1.0));
        for (std::size_t k = 1; k + 1 < j.size(); ++k) {
            worst = std::max(worst, std::abs(j[k - 1] + j[k + 1] - 2.0 * k / z * j[k]));
        }
    }
    return {"Bessel recurrence and normalisation", worst, 1e-12};
}

Check jacobi_anger_check() {
    using special::JacobiAngerKind;
    double worst = 0.0;
    for (auto kind : {JacobiAngerKind::cos_cos, JacobiAngerKind::cos_sin, JacobiAngerKind::sin_sin,
                      JacobiAngerKind::sin_cos}) {
        for (double z : {0.3, 2.4, 11.0, 30.0}) {
            for (double t : {0.0, 0.4, 1.3, 2.9}) {
                worst = std::max(worst, std::abs(special::jacobi_anger(kind, z, t, special::default_max_harmonic(z)) -
                                                 special::jacobi_anger_closed_form(kind, z, t)));
            }
        }
    }
    return {"Jacobi-Anger expansions", worst, 1e-12};
}

Check taylor_check(int n, double a) {
    const double y = default_expansion_point(a);
    const int k = converged_bessel_harmonics(n, a, y);
    double worst = 0.0;
    for (int i = 0; i < 16; ++i) {
        const double phi = i * pi / (2.0 * n * 16);
        const auto raw = taylor_coeffs_raw(n, a, phi, y);
        const auto bes = taylor_coeffs_bessel(n, a, phi, y, k);
        worst = std::max({worst, std::abs(raw.a_coef - bes.a_coef), std::abs(raw.b_coef - bes.b_coef),
                          std::abs(raw.c_coef - bes.c_coef)});
    }
    return {"Taylor raw vs Bessel form  " + label(n, a), worst, 1e-11};
}

}  // namespace

int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    std::vector<std::pair<int, double>> cases;
    if (cfg.a || cfg.n != 1) {
        cases.emplace_back(cfg.n, cfg.a.value_or(default_radius(cfg.n)));
    } else {
        cases = {{1, 5.0}, {2, 8.0}};
    }
    std::mt19937_64 rng(20240611);

    std::vector<std::function<Check()>> checks;
    checks.emplace_back(bessel_check);
    checks.emplace_back(jacobi_anger_check);
    for (const auto& [n, a] : cases) {
        checks.emplace_back([n = n, a = a] { return fock_norm_check(n, a); });
        checks.emplace_back([n = n, a = a, &rng] { return fock_overlap_check(n, a, rng); });
        checks.emplace_back([a = a, &rng] { return pair_check(a, rng); });
        checks.emplace_back([n = n, a = a] { return taylor_check(n, a); });
        if (!cfg.quick) {
            checks.emplace_back([n = n, a = a, &rng] { return quadrature_check(n, a, rng); });
        }
    }

    int failed = 0;
    for (const auto& run_check : checks) {
        Check c;
        try {
            c = run_check();
        } catch (const std::exception& e) {
            err << "error in check: " << e.what() << "\n";
            c.name = "check raised an exception";
            c.error = INFINITY;
        }
        char buf[256];
        std::snprintf(buf, sizeof buf, "%s  %-45s  err %.2e  tol %.0e\n", c.passed() ? "PASS" : "FAIL",
                      c.name.c_str(), c.error, c.tolerance);
        out << buf;
        if (!c.passed()) {
            ++failed;
            err << "failed: " << c.name << "\n";
        }
    }
    out << (failed == 0 ? "all checks passed\n" : std::to_string(failed) + " check(s) failed\n");
    return failed == 0 ? exit_ok : exit_failure;
}

}  // namespace compass::cli
