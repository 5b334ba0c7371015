#pragma once

#include <span>
#include <vector>

namespace shadow {

/// Arc on a circle of circumference `period`. Open arcs exclude both
/// endpoints. A `full` arc covers the whole circle and has no endpoints;
/// a closed arc of length zero is a single point.
struct Arc {
    double start = 0.0;
    double length = 0.0;
    bool closed = false;
    bool full = false;
};

/// Uncovered piece of a circle. A gap of length zero is an isolated point.
struct Gap {
    double start = 0.0;
    double length = 0.0;

    double midpoint(double period) const;
};

struct CircleCoverage {
    std::vector<Gap> gaps;
    /// Set when the status of some point was decided by endpoints that agree
    /// only up to the tolerance (a tangency).
    bool tolerance_critical = false;

    bool covered() const { return gaps.empty(); }
    bool only_isolated_points() const;
    const Gap* largest_gap() const;
};

double wrap_angle(double value, double period);

/// Computes the uncovered part of the circle [0, period). Endpoints closer
/// than `tol` are merged and treated as coincident; a merged point is then
/// covered iff it is interior to some arc or is an endpoint of a closed arc.
CircleCoverage cover_circle(std::span<const Arc> arcs, double period, double tol);

} // namespace shadow
