#pragma once

#include <cstddef>
#include <optional>

#include "shadow/geom.hpp"

namespace shadow {

/// Preferred minimal overlap (radians) of the two planar arcs that close the
/// tangent plane of the three-ball construction.
inline constexpr double kMarginGuard = 1e-3;

/// Step of the grid scanned when B2's angular position is chosen
/// automatically.
inline constexpr double kThetaGridStep = 1e-4;

struct SimplexParams {
    std::size_t dimension = 3;
    double epsilon = 0.0;
    /// Fraction of the verified margin given up when the open balls are
    /// shrunk away from mutual tangency.
    double shrink = 0.5;
};

struct EllipsoidParams {
    double a = 1.0;       // minor semi-axis
    double b_prime = 4.0; // major semi-axis
    std::optional<double> theta;
};

struct InteriorPointParams {
    double r = 1.0;
    double h = 0.9;
};

/// Angle closed in the tangent plane by the ball centred at the end of the
/// major semi-axis and tangent to the ball on the minor axis.
double phi_angle(double a, double b);

/// Projective arc closed in the tangent plane by the ball tangent to B1 whose
/// center sits at angle theta on the minor-axis circle.
double b2_coverage_arc(double a, double theta);

/// Overlap of the two covering arcs in the tangent plane beyond mere
/// touching; the construction shades x iff this is positive.
double seam_overlap(double a, double b_prime, double theta);

/// Guard actually demanded for a given ratio: kMarginGuard, reduced to half
/// the attainable overlap when the ratio is too close to 2*sqrt(2).
double required_seam_overlap(double a, double b_prime);

ShadowInstance ellipsoid_three_balls(const EllipsoidParams& p);
ShadowInstance interior_point_three_balls(const InteriorPointParams& p);

ShadowInstance regular_simplex_system(std::size_t dimension, bool closed);

/// Mutually tangent balls with radii a+eps, a-eps/2, ..., a-eps/2^n placed by
/// distance-geometry embedding, with x at the circumcenter of their centers.
/// Geometry only: no shrink and no coverage check.
ShadowInstance embed_perturbed_simplex(std::size_t dimension, double epsilon);

ShadowInstance perturbed_simplex_system(const SimplexParams& p);

ShadowInstance equalize_radii(const ShadowInstance& inst);

ShadowInstance disk_pair_2d(double r);

/// Half the edge of the regular simplex inscribed in the unit sphere.
double simplex_half_edge(std::size_t dimension);

} // namespace shadow
