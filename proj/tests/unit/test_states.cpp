#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "compass/oracle.hpp"
#include "compass/states.hpp"

using namespace compass;

namespace {

bool same_components(const StateSpec& l, const StateSpec& r, double tol = 1e-12) {
    if (l.size() != r.size()) {
        return false;
    }
    for (std::size_t i = 0; i < l.size(); ++i) {
        const auto& a = l.components()[i];
        const auto& b = r.components()[i];
        const double dangle = std::abs(std::remainder(a.angle - b.angle, two_pi));
        if (std::abs(a.radius - b.radius) > tol || dangle > tol || std::abs(a.weight - b.weight) > tol) {
            return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("coherent state is a single unit-weight component") {
    const StateSpec s = make_coherent(5.0);
    REQUIRE(s.size() == 1);
    CHECK(s.components()[0].radius == 5.0);
    CHECK(s.components()[0].angle == 0.0);
    CHECK(s.components()[0].weight == complex{1.0, 0.0});

    const StateSpec vac = make_coherent(0.0);
    REQUIRE(vac.size() == 1);
    CHECK(vac.components()[0].radius == 0.0);

    CHECK_THROWS_AS(make_coherent(-1.0), std::domain_error);
}

TEST_CASE("cat state components and the degenerate merge at a = 0") {
    const StateSpec cat = make_cat(5.0);
    REQUIRE(cat.size() == 2);
    CHECK(cat.components()[0].angle == doctest::Approx(0.0));
    CHECK(cat.components()[1].angle == doctest::Approx(pi));

    const StateSpec merged = make_cat(0.0);
    REQUIRE(merged.size() == 1);
    CHECK(merged.components()[0].weight == complex{2.0, 0.0});
}

TEST_CASE("n-compass component layout") {
    for (auto [n, a] : {std::pair{1, 5.0}, {2, 8.0}, {3, 12.0}, {5, 20.0}}) {
        const StateSpec s = make_n_compass(n, a);
        REQUIRE(s.size() == static_cast<std::size_t>(4 * n));
        REQUIRE(s.provenance().has_value());
        CHECK(s.provenance()->n == n);
        for (const auto& c : s.components()) {
            CHECK(c.radius == a);
            const double k = c.angle / (pi / (2.0 * n));
            CHECK(std::abs(k - std::round(k)) < 1e-12);
            CHECK(c.weight == complex{1.0, 0.0});
        }
    }
    CHECK_THROWS_AS(make_n_compass(0, 5.0), std::domain_error);
}

TEST_CASE("angles are canonicalised into [0, 2pi)") {
    CHECK(canonical_angle(-pi / 2) == doctest::Approx(1.5 * pi));
    CHECK(canonical_angle(5 * pi) == doctest::Approx(pi));
    CHECK(canonical_angle(two_pi) == 0.0);
    const StateSpec s = StateSpec::from_components({{1.0, -0.5, 1.0}});
    CHECK(s.components()[0].angle == doctest::Approx(two_pi - 0.5));
}

TEST_CASE("duplicate components merge and cancelling weights are removed") {
    const StateSpec s = StateSpec::from_components({{2.0, 0.3, 1.0}, {2.0, 0.3 + two_pi, {0.0, 1.0}}, {1.0, 0.0, 1.0}});
    REQUIRE(s.size() == 2);
    const StateSpec gone = StateSpec::from_components({{2.0, 0.3, 1.0}, {2.0, 0.3, -1.0}, {1.0, 0.0, 1.0}});
    CHECK(gone.size() == 1);
    CHECK_THROWS_AS(StateSpec::from_components({{2.0, 0.3, 1.0}, {2.0, 0.3, -1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(StateSpec::from_components({}), std::invalid_argument);
}

TEST_CASE("merging coincident components preserves the Gram norm") {
    const StateSpec split = StateSpec::from_components({{3.0, 1.0, 0.5}, {3.0, 1.0, 0.5}, {3.0, 2.0, 1.0}});
    const StateSpec whole = StateSpec::from_components({{3.0, 1.0, 1.0}, {3.0, 2.0, 1.0}});
    CHECK(split.size() == 2);
    CHECK(gram_norm_squared(split) == doctest::Approx(gram_norm_squared(whole)).epsilon(1e-15));
}

TEST_CASE("rotation shifts angles and composes with its inverse") {
    const StateSpec cat = rotate(make_cat(5.0), pi / 2);
    REQUIRE(cat.size() == 2);
    CHECK(cat.components()[0].angle == doctest::Approx(pi / 2));
    CHECK(cat.components()[1].angle == doctest::Approx(1.5 * pi));

    const StateSpec s = make_n_compass(2, 8.0);
    CHECK(same_components(rotate(s, 0.0), s, 0.0));
    CHECK(same_components(rotate(rotate(s, 0.37), -0.37), s));
}

TEST_CASE("Gram norm values") {
    CHECK(gram_norm_squared(make_coherent(5.0)) == doctest::Approx(1.0).epsilon(1e-15));
    for (double a : {0.3, 1.0, 2.0, 5.0}) {
        // <a|a> + <-a|-a> + 2 Re <a|-a> with <a|-a> = e^{-2a^2}.
        CHECK(gram_norm_squared(make_cat(a)) == doctest::Approx(2.0 * (1.0 + std::exp(-2.0 * a * a))).epsilon(1e-14));
    }
    // Off-diagonal terms are bounded by the pairwise overlaps e^{-|alpha_j - alpha_k|^2 / 2}.
    for (int n = 1; n <= 3; ++n) {
        const StateSpec s = make_n_compass(n, 12.0);
        double cross = 0.0;
        for (const auto& c1 : s.components()) {
            for (const auto& c2 : s.components()) {
                const double d = std::abs(std::polar(c1.radius, c1.angle) - std::polar(c2.radius, c2.angle));
                cross += d > 0.0 ? std::exp(-d * d / 2.0) : 0.0;
            }
        }
        CHECK(std::abs(gram_norm_squared(s) - 4.0 * n) <= cross + 1e-12);
        CHECK(cross < 1e-6);
    }
}

TEST_CASE("Gram norm agrees with the Fock-basis computation") {
    for (auto [n, a] : {std::pair{1, 2.0}, {2, 8.0}, {1, 0.7}}) {
        const StateSpec s = make_n_compass(n, a);
        CHECK(std::abs(gram_norm_squared(s) - oracle::fock_norm_squared(s)) < 1e-10 * gram_norm_squared(s));
    }
    const StateSpec odd = StateSpec::from_components({{1.5, 0.0, 1.0}, {1.5, pi, -1.0}});
    CHECK(std::abs(gram_norm_squared(odd) - oracle::fock_norm_squared(odd)) < 1e-12);
}

TEST_CASE("Gram norm is rotation invariant") {
    const StateSpec s = StateSpec::from_components({{1.0, 0.2, {1.0, 0.5}}, {1.7, 2.0, -0.3}, {0.4, 4.0, 1.0}});
    CHECK(gram_norm_squared(rotate(s, 1.234)) == doctest::Approx(gram_norm_squared(s)).epsilon(1e-14));
}

TEST_CASE("coherent inner product") {
    const complex a{1.0, 2.0}, b{-0.5, 0.3};
    CHECK(std::abs(coherent_inner_product(a, a) - 1.0) < 1e-15);
    CHECK(std::abs(coherent_inner_product(a, b) - std::conj(coherent_inner_product(b, a))) < 1e-15);
    CHECK(std::abs(coherent_inner_product(a, b)) == doctest::Approx(std::exp(-0.5 * std::norm(a - b))));
}

TEST_CASE("state text round trip") {
    const StateSpec s = make_n_compass(2, 8.0);
    const StateSpec back = parse_state_text(to_text(s));
    CHECK(same_components(s, back, 1e-15));
    REQUIRE(back.provenance().has_value());
    CHECK(back.provenance()->n == 2);
    CHECK(back.provenance()->a == 8.0);

    const StateSpec custom = StateSpec::from_components({{1.25, 0.5, {0.5, -2.0}}}, "custom");
    const StateSpec c2 = parse_state_text(to_text(custom));
    CHECK(same_components(custom, c2, 1e-15));
    CHECK_FALSE(c2.provenance().has_value());

    CHECK_THROWS(parse_state_text("# nothing here\n"));
    CHECK_THROWS(parse_state_text("1.0 abc 1 0\n"));
}

TEST_CASE("state files report their path on failure") {
    const auto path = std::filesystem::temp_directory_path() / "compass_state_roundtrip.txt";
    write_state_file(make_cat(3.0), path.string());
    CHECK(read_state_file(path.string()).size() == 2);
    std::filesystem::remove(path);
    try {
        read_state_file("/nonexistent/dir/state.txt");
        FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("/nonexistent/dir/state.txt") != std::string::npos);
    }
}
