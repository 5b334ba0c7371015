#include "shadow/geom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace shadow {

namespace {

bool within_band(double lhs, double rhs) {
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    return std::abs(lhs - rhs) <= kContactBand * scale;
}

void require_same_dimension(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) {
        std::ostringstream os;
        os << "dimension " << a.size() << " vs " << b.size();
        throw Error(ErrorCode::DimensionMismatch, os.str());
    }
}

// Open balls may pass through x; closed balls must keep it strictly outside.
// Inside the contact band an open ball counts as touching x and a closed one
// as containing it.
bool contains_point(const Ball& b, double dist) {
    if (b.closed) return dist <= b.radius || within_band(dist, b.radius);
    return dist < b.radius && !within_band(dist, b.radius);
}

} // namespace

Cap cap_of_ball(const Vec& x, const Ball& b) {
    require_same_dimension(x, b.center);
    if (!(b.radius > 0.0) || !std::isfinite(b.radius))
        throw Error(ErrorCode::RadiusNonPositive, "ball radius must be positive and finite");

    const Vec offset = b.center - x;
    const double dist = offset.norm();
    if (contains_point(b, dist)) {
        std::ostringstream os;
        os << "distance " << dist << " to center, radius " << b.radius
           << (b.closed ? " (closed)" : " (open)");
        throw Error(ErrorCode::PointInsideBall, os.str());
    }

    Cap cap;
    cap.axis = offset / dist;
    cap.open = !b.closed;
    if (within_band(dist, b.radius))
        cap.half_angle = std::numbers::pi / 2;
    else
        cap.half_angle = std::asin(std::min(1.0, b.radius / dist));
    return cap;
}

double cap_margin(const Cap& cap, const Vec& d) {
    const double along = cap.axis.dot(d);
    const double across = (d - along * cap.axis).norm();
    return cap.half_angle - std::atan2(across, std::abs(along));
}

double line_margin(const Vec& x, const Vec& d, const Ball& b) {
    require_same_dimension(x, d);
    if (std::abs(d.norm() - 1.0) > 1e-12)
        throw Error(ErrorCode::InvalidParameter, "direction must be a unit vector");
    return cap_margin(cap_of_ball(x, b), d);
}

MarginBreakdown system_margin(const ShadowInstance& inst, const Vec& d) {
    MarginBreakdown out;
    out.best_margin = -std::numbers::pi / 2;
    out.per_ball.reserve(inst.balls.size());
    for (std::size_t i = 0; i < inst.balls.size(); ++i) {
        const double m = line_margin(inst.point, d, inst.balls[i]);
        out.per_ball.push_back({i, m});
        if (!out.best_index || m > out.best_margin) {
            out.best_index = i;
            out.best_margin = m;
        }
    }
    return out;
}

bool direction_covered(const ShadowInstance& inst, const MarginBreakdown& margins) {
    for (const auto& pb : margins.per_ball) {
        if (pb.margin > 0.0) return true;
        if (pb.margin == 0.0 && inst.balls[pb.index].closed) return true;
    }
    return false;
}

Ball homothety_ball(const Vec& x, const Ball& b, double k) {
    require_same_dimension(x, b.center);
    if (!(k > 0.0) || !std::isfinite(k))
        throw Error(ErrorCode::NonPositiveCoefficient, "homothety coefficient must be positive");
    Ball out = b;
    out.center = x + k * (b.center - x);
    out.radius = k * b.radius;
    return out;
}

std::vector<OverlapViolation> pairwise_disjoint(const ShadowInstance& inst) {
    std::vector<OverlapViolation> out;
    const auto& balls = inst.balls;
    for (std::size_t i = 0; i < balls.size(); ++i) {
        for (std::size_t j = i + 1; j < balls.size(); ++j) {
            if (balls[i].center.size() != balls[j].center.size()) continue;
            const double dist = (balls[i].center - balls[j].center).norm();
            const double sum = balls[i].radius + balls[j].radius;
            const bool touching = within_band(dist, sum);
            bool overlap;
            if (balls[i].closed && balls[j].closed)
                overlap = dist <= sum || touching;
            else
                overlap = dist < sum && !touching;
            if (overlap) out.push_back({i, j, sum - dist});
        }
    }
    return out;
}

std::string_view finding_name(FindingKind kind) {
    switch (kind) {
    case FindingKind::DimensionMismatch: return "DimensionMismatch";
    case FindingKind::NonFinite: return "NonFinite";
    case FindingKind::NonPositiveRadius: return "NonPositiveRadius";
    case FindingKind::ContainsPoint: return "ContainsPoint";
    case FindingKind::Overlap: return "Overlap";
    case FindingKind::OffSphere: return "OffSphere";
    case FindingKind::RadiusNotBelowSphere: return "RadiusNotBelowSphere";
    case FindingKind::BoundaryContact: return "BoundaryContact";
    }
    return "Unknown";
}

bool ValidityReport::has(FindingKind kind) const {
    return std::any_of(errors.begin(), errors.end(), [&](const Finding& f) { return f.kind == kind; })
        || std::any_of(notes.begin(), notes.end(), [&](const Finding& f) { return f.kind == kind; });
}

ValidityReport validate_instance(const ShadowInstance& inst) {
    ValidityReport report;
    auto fail = [&](FindingKind kind, std::vector<std::size_t> balls, double value, std::string msg) {
        report.valid = false;
        report.errors.push_back({kind, std::move(balls), value, std::move(msg)});
    };
    auto note = [&](std::vector<std::size_t> balls, double value, std::string msg) {
        report.notes.push_back({FindingKind::BoundaryContact, std::move(balls), value, std::move(msg)});
    };

    const auto n = inst.point.size();
    if (n < 2) fail(FindingKind::DimensionMismatch, {}, double(n), "dimension must be at least 2");
    if (!inst.point.allFinite()) fail(FindingKind::NonFinite, {}, 0.0, "point has non-finite coordinates");

    bool shapes_ok = n >= 2;
    for (std::size_t i = 0; i < inst.balls.size(); ++i) {
        const Ball& b = inst.balls[i];
        if (b.center.size() != n) {
            fail(FindingKind::DimensionMismatch, {i}, double(b.center.size()), "ball center dimension differs from point");
            shapes_ok = false;
            continue;
        }
        if (!b.center.allFinite() || !std::isfinite(b.radius)) {
            fail(FindingKind::NonFinite, {i}, 0.0, "ball has non-finite data");
            shapes_ok = false;
            continue;
        }
        if (!(b.radius > 0.0)) {
            fail(FindingKind::NonPositiveRadius, {i}, b.radius, "radius must be positive");
            shapes_ok = false;
        }
    }
    if (inst.sphere && inst.sphere->center.size() != n) {
        fail(FindingKind::DimensionMismatch, {}, double(inst.sphere->center.size()), "sphere center dimension differs from point");
        shapes_ok = false;
    }
    if (!shapes_ok) return report;

    for (std::size_t i = 0; i < inst.balls.size(); ++i) {
        const Ball& b = inst.balls[i];
        const double dist = (b.center - inst.point).norm();
        if (contains_point(b, dist))
            fail(FindingKind::ContainsPoint, {i}, b.radius - dist, "ball contains the shadow point");
        else if (within_band(dist, b.radius))
            note({i}, dist - b.radius, "shadow point lies on the boundary of an open ball");
    }

    for (const auto& v : pairwise_disjoint(inst))
        fail(FindingKind::Overlap, {v.first, v.second}, v.depth, "balls intersect");
    for (std::size_t i = 0; i < inst.balls.size(); ++i) {
        for (std::size_t j = i + 1; j < inst.balls.size(); ++j) {
            const auto& bi = inst.balls[i];
            const auto& bj = inst.balls[j];
            const double dist = (bi.center - bj.center).norm();
            if (within_band(dist, bi.radius + bj.radius) && !(bi.closed && bj.closed))
                note({i, j}, dist - bi.radius - bj.radius, "balls are tangent");
        }
    }

    if (inst.sphere) {
        const Sphere& s = *inst.sphere;
        for (std::size_t i = 0; i < inst.balls.size(); ++i) {
            const double dev = (inst.balls[i].center - s.center).norm() - s.radius;
            if (std::abs(dev) > kTolOnSphere * s.radius)
                fail(FindingKind::OffSphere, {i}, dev, "ball center is off the constraint sphere");
            if (s.radius_restricted && !(inst.balls[i].radius < s.radius))
                fail(FindingKind::RadiusNotBelowSphere, {i}, inst.balls[i].radius, "radius must be below the sphere radius");
        }
    }
    return report;
}

namespace {

[[noreturn]] void raise_finding(const Finding& first) {
    std::ostringstream os;
    os << finding_name(first.kind) << ": " << first.message;
    for (auto idx : first.balls) os << " [" << idx << "]";
    const auto code = first.kind == FindingKind::ContainsPoint ? ErrorCode::PointInsideBall
                    : first.kind == FindingKind::DimensionMismatch ? ErrorCode::DimensionMismatch
                    : ErrorCode::InvalidParameter;
    throw Error(code, os.str());
}

} // namespace

void require_valid(const ShadowInstance& inst) {
    const auto report = validate_instance(inst);
    if (!report.valid) raise_finding(report.errors.front());
}

void require_coverable(const ShadowInstance& inst) {
    const auto report = validate_instance(inst);
    for (const auto& f : report.errors) {
        switch (f.kind) {
        case FindingKind::DimensionMismatch:
        case FindingKind::NonFinite:
        case FindingKind::NonPositiveRadius:
        case FindingKind::ContainsPoint: raise_finding(f);
        default: break;
        }
    }
}

} // namespace shadow
