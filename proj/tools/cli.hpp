#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace compass::cli {

enum class Command { wigner, overlap, sensitivity, isotropy, validate };
enum class Mode { exact, approx, center };
enum class Format { csv, pgm, table };

struct RunConfig {
    Command command = Command::sensitivity;
    int n = 1;
    std::optional<double> a;                    // unset: per-n default
    std::optional<std::array<double, 4>> window;  // x_min x_max p_min p_max
    int resolution = 400;
    Mode mode = Mode::exact;
    double epsilon = 1e-15;
    double cutoff = 1e-3;
    std::optional<double> y;
    std::filesystem::path output;
    Format format = Format::csv;
    std::filesystem::path state_file;
    bool mask = false;
    bool compare = false;
    bool rows = false;
    bool quick = false;
    int steps = 720;
    int n_max = 5;
};

/// a = 5, 8, 12 for n = 1, 2, 3; beyond that the smallest a that keeps
/// neighbouring coherent components six units apart, rounded up.
double default_radius(int n);

/// Exit codes.
inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_usage = 2;

/// Parses argv and runs the selected subcommand. Normal output goes to `out`,
/// warnings and errors to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cmd_wigner(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_overlap(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_sensitivity(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_isotropy(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace compass::cli
