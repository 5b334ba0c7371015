#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "shadow/geom.hpp"

namespace shadow {

enum class Verdict { Shadow, NoShadow, Undetermined };
enum class Method { Exact2D, Exact3D, MonteCarlo, Adversarial };

std::string_view verdict_name(Verdict v);
std::string_view method_name(Method m);

struct CoverageReport {
    Verdict verdict = Verdict::Undetermined;
    Method method = Method::MonteCarlo;
    /// Minimum over directions of the best ball margin, in radians.
    double worst_margin = 0.0;
    /// Uncovered direction for NoShadow, otherwise the minimal-margin one.
    std::optional<Vec> witness;
    std::uint64_t samples_used = 0;
    std::uint64_t uncovered_count = 0;
    std::optional<double> uncovered_fraction_estimate;
    std::optional<std::uint64_t> seed;
    /// The verdict hinged on a tangency resolved inside the tolerance band.
    bool tolerance_critical = false;
};

/// Tolerance (radians, and arc parameter units) inside which exact
/// verifiers treat two arc endpoints as coincident.
inline constexpr double kExactTolerance = 1e-10;

/// Margins within this distance of zero count as tangent in the adversarial
/// search.
inline constexpr double kZeroMarginTolerance = 1e-9;

CoverageReport verify_exact_2d(const ShadowInstance& inst);

/// How the 3D decision handles the sign ambiguity of lines.
enum class AntipodalMode {
    /// Add the antipodal cap of every ball and test all boundary circles.
    ExplicitCaps,
    /// Keep one cap per ball and identify directions with their negatives.
    Projective,
};

CoverageReport verify_exact_3d(const ShadowInstance& inst, AntipodalMode mode = AntipodalMode::ExplicitCaps);

/// Uniform direction sample number `index` of the stream `seed`. The stream
/// is counter based, so any subset of indices can be drawn independently.
Vec sample_direction(std::size_t dimension, std::uint64_t seed, std::uint64_t index);

CoverageReport verify_monte_carlo(const ShadowInstance& inst, std::uint64_t n_samples, std::uint64_t seed);

struct AdversarialOptions {
    double initial_step = 0.1;
    int max_iterations = 200;
    double min_step = 1e-12;
    /// Directions drawn to seed the Monte Carlo starts.
    std::uint64_t probe_samples = 20000;
};

CoverageReport adversarial_min_margin(const ShadowInstance& inst, std::uint64_t n_starts, std::uint64_t seed,
                                      const AdversarialOptions& options = {});

/// Exact method for n <= 3; otherwise Monte Carlo followed by adversarial
/// search.
CoverageReport verify_auto(const ShadowInstance& inst, std::uint64_t n_samples, std::uint64_t n_starts,
                           std::uint64_t seed);

} // namespace shadow
