#include "compass/states.hpp"

#include <cmath>
#include <cstdio>
#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace compass {

double canonical_angle(double theta) {
    if (!std::isfinite(theta)) {
        throw std::domain_error("angle must be finite");
    }
    double r = std::fmod(theta, two_pi);
    if (r < 0.0) {
        r += two_pi;
    }
    if (r >= two_pi) {
        r = 0.0;
    }
    return r;
}

namespace {

double circular_distance(double u, double v) {
    const double d = std::abs(u - v);
    return std::min(d, two_pi - d);
}

bool coincident(const CoherentComponent& x, const CoherentComponent& y) {
    return std::abs(x.radius - y.radius) <= merge_tolerance &&
           circular_distance(x.angle, y.angle) <= merge_tolerance;
}

void require_non_negative(double a, const char* what) {
    if (!std::isfinite(a) || a < 0.0) {
        throw std::domain_error(std::string(what) + " must be finite and non-negative");
    }
}

}  // namespace

StateSpec StateSpec::from_components(std::vector<CoherentComponent> components, std::string label,
                                     std::optional<CompassProvenance> provenance) {
    StateSpec s;
    s.label_ = std::move(label);
    s.provenance_ = provenance;
    for (auto c : components) {
        require_non_negative(c.radius, "component radius");
        c.angle = c.radius <= merge_tolerance ? 0.0 : canonical_angle(c.angle);
        if (c.radius <= merge_tolerance) {
            c.radius = 0.0;
        }
        bool merged = false;
        for (auto& existing : s.components_) {
            if (coincident(existing, c)) {
                existing.weight += c.weight;
                merged = true;
                break;
            }
        }
        if (!merged) {
            s.components_.push_back(c);
        }
    }
    std::erase_if(s.components_, [](const CoherentComponent& c) { return c.weight == complex{}; });
    if (s.components_.empty()) {
        throw std::invalid_argument("state has no components with non-zero weight");
    }
    return s;
}

StateSpec make_coherent(double a) {
    require_non_negative(a, "a");
    return StateSpec::from_components({{a, 0.0, 1.0}}, "coherent");
}

StateSpec make_cat(double a) {
    require_non_negative(a, "a");
    return StateSpec::from_components({{a, 0.0, 1.0}, {a, pi, 1.0}}, "cat");
}

StateSpec make_n_compass(int n, double a) {
    if (n < 1) {
        throw std::domain_error("n must be at least 1");
    }
    require_non_negative(a, "a");
    std::vector<CoherentComponent> comps;
    comps.reserve(4 * static_cast<std::size_t>(n));
    for (int m = 0; m < n; ++m) {
        for (int k = 0; k < 4; ++k) {
            comps.push_back({a, m * pi / (2.0 * n) + k * pi / 2.0, 1.0});
        }
    }
    return StateSpec::from_components(std::move(comps), "n-compass", CompassProvenance{n, a});
}

StateSpec rotate(const StateSpec& state, double theta) {
    if (theta == 0.0) {
        return state;
    }
    std::vector<CoherentComponent> comps = state.components();
    for (auto& c : comps) {
        c.angle += theta;
    }
    return StateSpec::from_components(std::move(comps), state.label());
}

complex coherent_inner_product(complex alpha, complex beta) {
    // <alpha|beta> = exp(-|alpha|^2/2 - |beta|^2/2 + conj(alpha) beta)
    //              = exp(-|alpha - beta|^2/2 + i Im(conj(alpha) beta))
    return std::exp(complex{-0.5 * std::norm(alpha - beta), std::imag(std::conj(alpha) * beta)});
}

double gram_norm_squared(const StateSpec& state) {
    const auto& comps = state.components();
    complex sum{};
    for (const auto& cj : comps) {
        for (const auto& ck : comps) {
            sum += std::conj(cj.weight) * ck.weight *
                   coherent_inner_product(cj.amplitude(), ck.amplitude());
        }
    }
    return sum.real();
}

std::string to_text(const StateSpec& state) {
    std::ostringstream out;
    out.precision(17);
    if (state.provenance()) {
        out << "# n-compass n=" << state.provenance()->n << " a=" << state.provenance()->a << '\n';
    } else if (!state.label().empty()) {
        out << "# " << state.label() << '\n';
    }
    out << "# radius angle_degrees weight_re weight_im\n";
    for (const auto& c : state.components()) {
        out << c.radius << ' ' << c.angle * 180.0 / pi << ' ' << c.weight.real() << ' '
            << c.weight.imag() << '\n';
    }
    return out.str();
}

StateSpec parse_state_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::vector<CoherentComponent> comps;
    std::optional<CompassProvenance> provenance;
    std::string label;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) {
            continue;
        }
        if (line[first] == '#') {
            int n = 0;
            double a = 0.0;
            if (line_no == 1 && std::sscanf(line.c_str(), "# n-compass n=%d a=%lf", &n, &a) == 2) {
                provenance = CompassProvenance{n, a};
                label = "n-compass";
            }
            continue;
        }
        std::istringstream fields(line);
        double radius = 0.0, degrees = 0.0, re = 0.0, im = 0.0;
        if (!(fields >> radius >> degrees >> re >> im)) {
            throw std::runtime_error("state text line " + std::to_string(line_no) +
                                     ": expected `radius angle_degrees weight_re weight_im`");
        }
        comps.push_back({radius, degrees * pi / 180.0, {re, im}});
    }
    if (comps.empty()) {
        throw std::runtime_error("state text contains no components");
    }
    return StateSpec::from_components(std::move(comps), label, provenance);
}

StateSpec read_state_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open state file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_state_text(buf.str());
    } catch (const std::exception& e) {
        throw std::runtime_error("'" + path + "': " + e.what());
    }
}

void write_state_file(const StateSpec& state, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    out << to_text(state);
    if (!out) {
        throw std::runtime_error("write failed for '" + path + "'");
    }
}

}  // namespace compass
