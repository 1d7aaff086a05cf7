#pragma once

// Superpositions of coherent states placed on a circle in phase space.
//
// A coherent component |a e^{i theta}> carries an unnormalised complex weight;
// cat, compass and n-compass states are all finite sums of such components.
// States stay unnormalised; callers divide by gram_norm_squared() where a
// normalised quantity is needed.

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace compass {

using complex = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

/// Components closer than this in radius and angle are treated as one.
inline constexpr double merge_tolerance = 1e-12;

/// Maps any angle into [0, 2*pi).
double canonical_angle(double theta);

struct CoherentComponent {
    double radius = 0.0;  // |alpha|
    double angle = 0.0;   // arg alpha, in [0, 2*pi)
    complex weight{1.0, 0.0};

    /// Complex amplitude alpha = radius * e^{i angle}.
    complex amplitude() const { return std::polar(radius, angle); }
};

/// Parameters recorded when a state came from make_n_compass().
struct CompassProvenance {
    int n = 0;
    double a = 0.0;
};

/// Immutable superposition of coherent components.
///
/// Construction canonicalises every angle, merges coincident components by
/// summing their weights and drops components whose merged weight is exactly
/// zero. The resulting component list is never empty.
class StateSpec {
public:
    static StateSpec from_components(std::vector<CoherentComponent> components,
                                     std::string label = {},
                                     std::optional<CompassProvenance> provenance = std::nullopt);

    const std::vector<CoherentComponent>& components() const { return components_; }
    std::size_t size() const { return components_.size(); }
    const std::string& label() const { return label_; }
    const std::optional<CompassProvenance>& provenance() const { return provenance_; }

private:
    StateSpec() = default;

    std::vector<CoherentComponent> components_;
    std::string label_;
    std::optional<CompassProvenance> provenance_;
};

/// |a>, the coherent state on the positive real axis.
StateSpec make_coherent(double a);

/// Even cat |a> + |-a>.
StateSpec make_cat(double a);

/// Superposition of n compass states, the m-th rotated by m*pi/(2n).
/// Yields 4n components at angles m*pi/(2n) + k*pi/2.
StateSpec make_n_compass(int n, double a);

/// Applies the rotation exp(i theta a^dagger a): every angle shifts by theta.
StateSpec rotate(const StateSpec& state, double theta);

/// <psi|psi> for the unnormalised superposition.
double gram_norm_squared(const StateSpec& state);

/// <alpha|beta> for coherent states (closed form).
complex coherent_inner_product(complex alpha, complex beta);

// Plain-text state format: one `radius angle_degrees weight_re weight_im`
// line per component; `#` lines are comments, except a leading
// `# n-compass n=<n> a=<a>` header which restores provenance.
std::string to_text(const StateSpec& state);
StateSpec parse_state_text(std::string_view text);
StateSpec read_state_file(const std::string& path);
void write_state_file(const StateSpec& state, const std::string& path);

}  // namespace compass
