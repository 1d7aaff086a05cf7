#include "compass/grid_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "parallel.hpp"

namespace compass {

namespace {

std::runtime_error io_error(const std::filesystem::path& path, const std::string& what) {
    return std::runtime_error(path.string() + ": " + what);
}

// Pair terms whose modulus falls below this (relative to the Gram norm) are
// dropped; they cannot move gamma at double precision.
constexpr double negligible_pair = 1e-20;

struct OverlapPairs {
    std::vector<complex> bra, ket;
    std::vector<complex> coeff;  // conj(w_j) w_k / <psi|psi>
    std::vector<double> reach2;  // |alpha_j - alpha_k - delta|^2 beyond which the pair is negligible
};

OverlapPairs prepare_pairs(const StateSpec& state) {
    OverlapPairs pairs;
    const auto& comps = state.components();
    const double gram = gram_norm_squared(state);
    for (const auto& cj : comps) {
        for (const auto& ck : comps) {
            const complex c = std::conj(cj.weight) * ck.weight / gram;
            const double mag = std::abs(c);
            if (mag <= negligible_pair) {
                continue;
            }
            pairs.bra.push_back(cj.amplitude());
            pairs.ket.push_back(ck.amplitude());
            pairs.coeff.push_back(c);
            pairs.reach2.push_back(2.0 * std::log(mag / negligible_pair));
        }
    }
    return pairs;
}

double gamma_from_pairs(const OverlapPairs& pairs, complex delta) {
    complex sum{};
    for (std::size_t i = 0; i < pairs.coeff.size(); ++i) {
        if (std::norm(pairs.bra[i] - pairs.ket[i] - delta) > pairs.reach2[i]) {
            continue;
        }
        sum += pairs.coeff[i] * pair_overlap(pairs.bra[i], pairs.ket[i], delta);
    }
    return std::norm(sum);
}

const CompassProvenance& require_compass(const StateSpec& state, const char* what) {
    if (!state.provenance()) {
        throw std::invalid_argument(std::string(what) + " is only defined for n-compass states");
    }
    return *state.provenance();
}

void put_u16(std::string& out, std::uint16_t v) {
    out.push_back(static_cast<char>(v >> 8));
    out.push_back(static_cast<char>(v & 0xff));
}

}  // namespace

std::string to_string(FieldKind kind) {
    switch (kind) {
        case FieldKind::wigner: return "wigner";
        case FieldKind::wigner_center: return "wigner_center";
        case FieldKind::gamma: return "gamma";
        case FieldKind::gamma_zero_mask: return "gamma_zero_mask";
    }
    return "unknown";
}

FieldKind parse_field_kind(const std::string& text) {
    for (FieldKind k : {FieldKind::wigner, FieldKind::wigner_center, FieldKind::gamma,
                        FieldKind::gamma_zero_mask}) {
        if (to_string(k) == text) {
            return k;
        }
    }
    throw std::domain_error("unknown field kind '" + text + "'");
}

void validate_axes(const GridAxes& axes) {
    if (axes.nx < 2 || axes.np < 2) {
        throw std::invalid_argument("grid needs at least 2 cells along each axis");
    }
    if (!(axes.x_min < axes.x_max) || !(axes.p_min < axes.p_max) || !std::isfinite(axes.x_min) ||
        !std::isfinite(axes.x_max) || !std::isfinite(axes.p_min) || !std::isfinite(axes.p_max)) {
        throw std::invalid_argument("grid window is degenerate or not finite");
    }
}

void validate_field(const GridField& f) {
    validate_axes(f.axes);
    if (f.values.size() != static_cast<std::size_t>(f.axes.nx) * static_cast<std::size_t>(f.axes.np)) {
        throw std::invalid_argument("field has " + std::to_string(f.values.size()) + " values, expected " +
                                    std::to_string(f.axes.nx * f.axes.np));
    }
    for (double v : f.values) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("field contains a non-finite value");
        }
        if (f.kind == FieldKind::gamma && (v < 0.0 || v > 1.0 + 1e-9)) {
            throw std::invalid_argument("overlap value outside [0, 1]");
        }
        if (f.kind == FieldKind::gamma_zero_mask && v != 0.0 && v != 1.0) {
            throw std::invalid_argument("mask value other than 0 or 1");
        }
    }
}

GridField sample_field(FieldKind kind, const StateSpec& state, const GridAxes& axes,
                       const SampleOptions& options) {
    validate_axes(axes);
    if (!(options.cutoff > 0.0 && options.cutoff < 1.0)) {
        throw std::invalid_argument("zero cutoff must lie in (0, 1)");
    }
    GridField field;
    field.kind = kind;
    field.axes = axes;
    if (state.provenance()) {
        field.meta.n = state.provenance()->n;
        field.meta.a = state.provenance()->a;
    }

    switch (kind) {
        case FieldKind::wigner:
            field.meta.mode = "exact";
            field.values = wigner_grid(state, axes);
            break;
        case FieldKind::wigner_center: {
            const auto& prov = require_compass(state, "the centre approximation");
            field.meta.mode = "center";
            field.values = wigner_center_grid(prov.n, prov.a, axes);
            break;
        }
        case FieldKind::gamma:
        case FieldKind::gamma_zero_mask: {
            const bool approx = options.overlap_mode == OverlapMode::approx;
            const CompassProvenance prov =
                approx ? require_compass(state, "the self-term overlap") : CompassProvenance{};
            field.meta.mode = approx ? "approx" : "exact";
            const OverlapPairs pairs = approx ? OverlapPairs{} : prepare_pairs(state);
            const bool mask = kind == FieldKind::gamma_zero_mask;
            field.values.assign(static_cast<std::size_t>(axes.nx) * static_cast<std::size_t>(axes.np), 0.0);
            detail::parallel_rows(axes.np, [&](int begin, int end) {
                for (int j = begin; j < end; ++j) {
                    for (int i = 0; i < axes.nx; ++i) {
                        const complex d{axes.x_at(i), axes.p_at(j)};
                        const double g = approx
                                             ? gamma_approx(prov.n, prov.a, Displacement::from_complex(d)).gamma
                                             : gamma_from_pairs(pairs, d);
                        field.values[static_cast<std::size_t>(j) * axes.nx + i] =
                            mask ? (g < options.cutoff ? 1.0 : 0.0) : g;
                    }
                }
            });
            break;
        }
        default:
            throw std::domain_error("unknown field kind");
    }
    return field;
}

GridField sample_field(FieldKind kind, int n, double a, const GridAxes& axes, const SampleOptions& options) {
    return sample_field(kind, make_n_compass(n, a), axes, options);
}

GridAxes default_window(FieldKind kind, double a, int resolution) {
    if (!(a > 0.0)) {
        throw std::domain_error("a must be positive");
    }
    const double half =
        (kind == FieldKind::wigner || kind == FieldKind::wigner_center) ? 2.0 * a + 6.0 : 3.0 / a;
    return {-half, half, -half, half, resolution, resolution};
}

std::string to_csv(const GridField& f) {
    validate_field(f);
    std::string out;
    out.reserve(f.values.size() * 64 + 256);
    char buf[256];
    out += "# kind n a x_min x_max p_min p_max nx np\n";
    std::snprintf(buf, sizeof buf, "# %s %d %.17g %.17g %.17g %.17g %.17g %d %d\n", to_string(f.kind).c_str(),
                  f.meta.n, f.meta.a, f.axes.x_min, f.axes.x_max, f.axes.p_min, f.axes.p_max, f.axes.nx,
                  f.axes.np);
    out += buf;
    out += "# mode " + f.meta.mode + "\n";
    out += "x,p,value\n";
    for (int j = 0; j < f.axes.np; ++j) {
        const double p = f.axes.p_at(j);
        for (int i = 0; i < f.axes.nx; ++i) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", f.axes.x_at(i), p, f.at(i, j));
            out += buf;
        }
    }
    return out;
}

void write_csv(const GridField& field, const std::filesystem::path& path) {
    const std::string text = to_csv(field);
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw io_error(path, "cannot open for writing");
    }
    os.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!os) {
        throw io_error(path, "write failed");
    }
}

GridField parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    GridField f;
    bool have_header = false;
    std::size_t expected = 0;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        if (line[0] == '#') {
            std::istringstream ls(line.substr(1));
            std::string first;
            ls >> first;
            if (first == "kind" || first.empty()) {
                continue;
            }
            if (first == "mode") {
                ls >> f.meta.mode;
                continue;
            }
            f.kind = parse_field_kind(first);
            ls >> f.meta.n >> f.meta.a >> f.axes.x_min >> f.axes.x_max >> f.axes.p_min >> f.axes.p_max >>
                f.axes.nx >> f.axes.np;
            if (!ls) {
                throw std::runtime_error("malformed grid header: " + line);
            }
            validate_axes(f.axes);
            expected = static_cast<std::size_t>(f.axes.nx) * static_cast<std::size_t>(f.axes.np);
            f.values.reserve(expected);
            have_header = true;
            continue;
        }
        if (line.rfind("x,", 0) == 0) {
            continue;
        }
        if (!have_header) {
            throw std::runtime_error("data row before grid header");
        }
        // Third comma-separated field is the value; strtod reads %.17g back exactly.
        const auto c2 = line.find(',', line.find(',') + 1);
        if (c2 == std::string::npos) {
            throw std::runtime_error("malformed data row: " + line);
        }
        char* end = nullptr;
        const double v = std::strtod(line.c_str() + c2 + 1, &end);
        if (end == line.c_str() + c2 + 1) {
            throw std::runtime_error("malformed value in row: " + line);
        }
        f.values.push_back(v);
    }
    if (!have_header) {
        throw std::runtime_error("missing grid header");
    }
    if (f.values.size() != expected) {
        throw std::runtime_error("expected " + std::to_string(expected) + " data rows, found " +
                                 std::to_string(f.values.size()));
    }
    return f;
}

GridField read_csv(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw io_error(path, "cannot open for reading");
    }
    std::ostringstream ss;
    ss << is.rdbuf();
    try {
        return parse_csv(ss.str());
    } catch (const std::exception& e) {
        throw io_error(path, e.what());
    }
}

std::vector<std::uint16_t> pgm_levels(const GridField& f, PgmScale scale) {
    validate_field(f);
    std::vector<std::uint16_t> out(f.values.size());
    if (scale == PgmScale::symmetric) {
        double m = 0.0;
        for (double v : f.values) {
            m = std::max(m, std::abs(v));
        }
        for (std::size_t i = 0; i < out.size(); ++i) {
            const double u = m > 0.0 ? f.values[i] / m : 0.0;
            out[i] = static_cast<std::uint16_t>(std::clamp(std::floor((u + 1.0) * 32767.5), 0.0, 65535.0));
        }
    } else {
        double m = 0.0;
        for (double v : f.values) {
            m = std::max(m, v);
        }
        for (std::size_t i = 0; i < out.size(); ++i) {
            const double u = m > 0.0 ? std::clamp(f.values[i] / m, 0.0, 1.0) : 0.0;
            out[i] = static_cast<std::uint16_t>(std::lround(u * 65535.0));
        }
    }
    return out;
}

void write_pgm(const GridField& f, const std::filesystem::path& path, PgmScale scale) {
    const auto levels = pgm_levels(f, scale);
    std::string data = "P5\n" + std::to_string(f.axes.nx) + " " + std::to_string(f.axes.np) + "\n65535\n";
    data.reserve(data.size() + levels.size() * 2);
    for (int j = f.axes.np - 1; j >= 0; --j) {
        for (int i = 0; i < f.axes.nx; ++i) {
            put_u16(data, levels[static_cast<std::size_t>(j) * f.axes.nx + i]);
        }
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw io_error(path, "cannot open for writing");
    }
    os.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!os) {
        throw io_error(path, "write failed");
    }
}

}  // namespace compass
