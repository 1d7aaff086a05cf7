#pragma once

// Sampling of Wigner and overlap fields on rectangular grids, plus CSV and
// 16-bit PGM writers. The on-disk formats are described in FORMATS.md.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "compass/overlap.hpp"
#include "compass/wigner.hpp"

namespace compass {

enum class FieldKind { wigner, wigner_center, gamma, gamma_zero_mask };

std::string to_string(FieldKind kind);
FieldKind parse_field_kind(const std::string& text);  // domain_error on unknown

inline constexpr double default_zero_cutoff = 1e-3;

struct FieldMeta {
    int n = 0;        // 0 when the state is not an n-compass state
    double a = 0.0;
    std::string mode = "exact";
};

struct GridField {
    FieldKind kind = FieldKind::wigner;
    GridAxes axes;
    FieldMeta meta;
    std::vector<double> values;  // row-major: p rows, x columns

    double at(int i, int j) const { return values[static_cast<std::size_t>(j) * axes.nx + i]; }
};

/// Throws std::invalid_argument unless the axes describe at least a 2x2
/// non-degenerate grid.
void validate_axes(const GridAxes& axes);

/// Throws std::invalid_argument if the field breaks its kind's invariants.
void validate_field(const GridField& field);

struct SampleOptions {
    OverlapMode overlap_mode = OverlapMode::exact;
    double cutoff = default_zero_cutoff;  // gamma < cutoff counts as zero in masks
};

/// Evaluates `kind` at every cell centre. Overlap fields are sampled over
/// (Re delta, Im delta). wigner_center and approximate overlap need the state's
/// n-compass provenance and throw std::invalid_argument without it.
GridField sample_field(FieldKind kind, const StateSpec& state, const GridAxes& axes,
                       const SampleOptions& options = {});

/// Convenience for the n-compass state with parameters (n, a).
GridField sample_field(FieldKind kind, int n, double a, const GridAxes& axes,
                       const SampleOptions& options = {});

/// Default windows: +-(2a + 6) for Wigner fields, +-3/a for overlap fields.
GridAxes default_window(FieldKind kind, double a, int resolution);

void write_csv(const GridField& field, const std::filesystem::path& path);
std::string to_csv(const GridField& field);
GridField read_csv(const std::filesystem::path& path);
GridField parse_csv(const std::string& text);

enum class PgmScale { linear, symmetric };

/// Binary P5 with maxval 65535, big-endian samples, top row at p_max.
void write_pgm(const GridField& field, const std::filesystem::path& path, PgmScale scale);
std::vector<std::uint16_t> pgm_levels(const GridField& field, PgmScale scale);

}  // namespace compass
