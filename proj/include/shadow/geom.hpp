#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "shadow/errors.hpp"

namespace shadow {

/// Point or direction of R^n; the dimension is a runtime property.
using Vec = Eigen::VectorXd;

/// Relative tolerance used when checking that ball centers sit on the
/// constraint sphere.
inline constexpr double kTolOnSphere = 1e-9;

/// Width of the band (relative to the length scale of the comparison) inside
/// which two lengths are considered equal. Equalities are tangencies and are
/// reported as boundary contacts.
inline constexpr double kContactBand = 1e-12;

struct Ball {
    Vec center;
    double radius = 0.0;
    bool closed = false;
};

struct Sphere {
    Vec center;
    double radius = 0.0;
    /// When set, every ball radius must be strictly below the sphere radius.
    bool radius_restricted = false;
};

/// A shadow point together with the ball system that should shade it.
struct ShadowInstance {
    Vec point;
    std::vector<Ball> balls;
    std::optional<Sphere> sphere;
    std::map<std::string, std::string> metadata;

    std::size_t dimension() const { return static_cast<std::size_t>(point.size()); }
};

/// Projection of a ball onto the sphere of directions at the shadow point.
/// Half-angle lies in (0, pi/2]; pi/2 only for an open ball touching x.
struct Cap {
    Vec axis;
    double half_angle = 0.0;
    bool open = true;
};

struct BallMargin {
    std::size_t index = 0;
    double margin = 0.0;
};

struct MarginBreakdown {
    std::vector<BallMargin> per_ball;
    std::optional<std::size_t> best_index;
    double best_margin = 0.0;
};

Cap cap_of_ball(const Vec& x, const Ball& b);

/// Signed angular clearance of the line {x + t d}: half-angle minus the angle
/// between the line and the cap axis. Positive means the line enters the
/// ball's interior, zero is tangency.
double line_margin(const Vec& x, const Vec& d, const Ball& b);

/// Same quantity against a precomputed cap; `d` must be a unit vector.
double cap_margin(const Cap& cap, const Vec& d);

MarginBreakdown system_margin(const ShadowInstance& inst, const Vec& d);

/// Whether the line through x along d meets at least one ball, honouring the
/// open/closed flag of every ball whose margin is exactly zero.
bool direction_covered(const ShadowInstance& inst, const MarginBreakdown& margins);

Ball homothety_ball(const Vec& x, const Ball& b, double k);

struct OverlapViolation {
    std::size_t first = 0;
    std::size_t second = 0;
    double depth = 0.0;
};

std::vector<OverlapViolation> pairwise_disjoint(const ShadowInstance& inst);

enum class FindingKind {
    DimensionMismatch,
    NonFinite,
    NonPositiveRadius,
    ContainsPoint,
    Overlap,
    OffSphere,
    RadiusNotBelowSphere,
    BoundaryContact,
};

std::string_view finding_name(FindingKind kind);

struct Finding {
    FindingKind kind;
    std::vector<std::size_t> balls;
    double value = 0.0;
    std::string message;
};

struct ValidityReport {
    bool valid = true;
    /// Violations that make the instance invalid.
    std::vector<Finding> errors;
    /// Informational findings, currently only boundary contacts.
    std::vector<Finding> notes;

    bool has(FindingKind kind) const;
};

ValidityReport validate_instance(const ShadowInstance& inst);

/// Throws on the first error of validate_instance.
void require_valid(const ShadowInstance& inst);

/// Weaker check used by the coverage routines: consistent dimensions,
/// positive radii and no ball containing x. Overlaps and the constraint
/// sphere do not affect whether lines are blocked.
void require_coverable(const ShadowInstance& inst);

} // namespace shadow
