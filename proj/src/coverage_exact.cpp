#include "shadow/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "shadow/arcs.hpp"

namespace shadow {

namespace {

constexpr double kPi = std::numbers::pi;
// Tangencies met while bracketing the worst margin are resolved much more
// tightly than the verdict itself.
constexpr double kSearchTolerance = 1e-12;

std::vector<Cap> caps_of(const ShadowInstance& inst) {
    std::vector<Cap> caps;
    caps.reserve(inst.balls.size());
    for (const auto& b : inst.balls) caps.push_back(cap_of_ball(inst.point, b));
    return caps;
}

// Largest delta such that every cap shrunk by delta (and treated as closed)
// still covers; covered(lo) holds and covered(hi) fails throughout.
template <class Covered>
double bracket_worst_margin(Covered&& covered, double lo, double hi) {
    for (int i = 0; i < 200 && hi - lo > 1e-14; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (covered(mid))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

double max_half_angle(const std::vector<Cap>& caps) {
    double m = 0.0;
    for (const auto& c : caps) m = std::max(m, c.half_angle);
    return m;
}

// ---------------------------------------------------------------- planar ---

struct PlanarCap {
    double axis_angle; // mod pi
    double half_angle;
    bool closed;
};

std::vector<Arc> planar_arcs(const std::vector<PlanarCap>& caps, double shrink, bool force_closed) {
    std::vector<Arc> arcs;
    for (const auto& c : caps) {
        const double half = c.half_angle - shrink;
        if (half <= 0.0) continue;
        Arc a;
        a.closed = force_closed || c.closed;
        if (2.0 * half >= kPi && (a.closed || 2.0 * half > kPi)) {
            a.full = true;
        } else {
            a.start = c.axis_angle - half;
            a.length = std::min(2.0 * half, kPi);
        }
        arcs.push_back(a);
    }
    return arcs;
}

Vec planar_direction(double angle) {
    Vec d(2);
    d << std::cos(angle), std::sin(angle);
    return d;
}

// ----------------------------------------------------------------- space ---

struct SpaceCap {
    Eigen::Vector3d axis;
    double half_angle;
    bool closed;
};

struct SphereTest {
    bool covered = false;
    bool tolerance_critical = false;
    std::optional<Eigen::Vector3d> witness;
};

void orthonormal_complement(const Eigen::Vector3d& u, Eigen::Vector3d& e, Eigen::Vector3d& f) {
    Eigen::Index k;
    u.cwiseAbs().minCoeff(&k);
    Eigen::Vector3d seed = Eigen::Vector3d::Zero();
    seed[k] = 1.0;
    e = (seed - seed.dot(u) * u).normalized();
    f = u.cross(e);
}

// Arc of the boundary circle of `own` lying inside `other`, parametrised by
// t in [0, 2pi) through own.axis*cos(a) + sin(a)*(e cos t + f sin t).
// Returns false when the intersection is empty.
bool arc_inside(const SpaceCap& own, const Eigen::Vector3d& e, const Eigen::Vector3d& f, const SpaceCap& other,
                double tol, Arc& out) {
    const double sa = std::sin(own.half_angle);
    const double ca = std::cos(own.half_angle);
    const double a = sa * other.axis.dot(e);
    const double b = sa * other.axis.dot(f);
    const double c = std::cos(other.half_angle) - ca * other.axis.dot(own.axis);
    const double r = std::hypot(a, b);
    out = Arc{};
    out.closed = other.closed;

    if (r <= tol) {
        if (c < -tol || (c <= tol && other.closed)) {
            out.full = true;
            return true;
        }
        return false;
    }

    const double center = std::atan2(b, a);
    const double ratio = c / r;
    // Signed half-width, extended past [0, pi] so that near-misses can be
    // compared against the tolerance on the angle scale.
    double half;
    if (ratio >= 1.0)
        half = -std::sqrt(2.0 * (ratio - 1.0));
    else if (ratio <= -1.0)
        half = kPi + std::sqrt(2.0 * (-1.0 - ratio));
    else
        half = std::acos(ratio);

    if (half < -tol) return false;
    if (half <= tol) {
        if (!other.closed) return false;
        out.start = center;
        out.length = 0.0;
        return true;
    }
    if (half > kPi + tol) {
        out.full = true;
        return true;
    }
    if (half >= kPi - tol) {
        if (other.closed) {
            out.full = true;
            return true;
        }
        out.start = center - kPi;
        out.length = 2.0 * kPi;
        return true;
    }
    out.start = center - half;
    out.length = 2.0 * half;
    return true;
}

// The union of caps is the whole sphere iff it is nonempty and, for every
// cap, the points of its boundary circle not covered by the other caps are
// absent (open cap) or isolated (closed cap). Coinciding circles on the same
// side are skipped; a closed cap facing its exact complement is covered.
SphereTest test_sphere(const std::vector<SpaceCap>& caps, std::size_t circles, const std::vector<std::vector<std::size_t>>& others,
                       double tol) {
    SphereTest out;
    if (caps.empty()) {
        out.witness = Eigen::Vector3d::UnitX();
        return out;
    }
    if (std::any_of(caps.begin(), caps.end(), [](const SpaceCap& c) { return c.half_angle >= kPi; })) {
        out.covered = true;
        return out;
    }
    for (std::size_t i = 0; i < circles; ++i) {
        const SpaceCap& own = caps[i];
        Eigen::Vector3d e, f;
        orthonormal_complement(own.axis, e, f);

        std::vector<Arc> arcs;
        bool complement_closed_pair = false;
        for (std::size_t j : others[i]) {
            const SpaceCap& other = caps[j];
            if ((other.axis - own.axis).norm() <= tol && std::abs(other.half_angle - own.half_angle) <= tol) continue;
            if (own.closed && (other.axis + own.axis).norm() <= tol
                && std::abs(other.half_angle + own.half_angle - kPi) <= tol) {
                complement_closed_pair = true;
                break;
            }
            Arc a;
            if (arc_inside(own, e, f, other, tol, a)) arcs.push_back(a);
        }
        if (complement_closed_pair) continue;

        const CircleCoverage cov = cover_circle(arcs, 2.0 * kPi, tol);
        out.tolerance_critical = out.tolerance_critical || cov.tolerance_critical;
        if (cov.covered()) continue;
        if (own.closed && cov.only_isolated_points()) {
            out.tolerance_critical = true;
            continue;
        }
        const Gap* g = cov.largest_gap();
        const double t = g->midpoint(2.0 * kPi);
        out.witness = std::cos(own.half_angle) * own.axis
                    + std::sin(own.half_angle) * (std::cos(t) * e + std::sin(t) * f);
        return out;
    }
    out.covered = true;
    return out;
}

struct SpaceCapSet {
    std::vector<SpaceCap> caps;
    std::size_t circles = 0;
    std::vector<std::vector<std::size_t>> others;
};

SpaceCapSet build_cap_set(const std::vector<Cap>& caps, AntipodalMode mode, double shrink, bool force_closed) {
    SpaceCapSet set;
    std::vector<SpaceCap> base;
    for (const auto& c : caps) {
        const double half = c.half_angle - shrink;
        if (half <= 0.0) continue;
        base.push_back({Eigen::Vector3d(c.axis[0], c.axis[1], c.axis[2]), half, force_closed || !c.open});
    }
    const std::size_t m = base.size();
    set.caps = base;
    for (const auto& c : base) set.caps.push_back({-c.axis, c.half_angle, c.closed});

    if (mode == AntipodalMode::ExplicitCaps) {
        // Every cap and every antipode gets its own circle test.
        set.circles = 2 * m;
        set.others.resize(2 * m);
        for (std::size_t i = 0; i < 2 * m; ++i)
            for (std::size_t j = 0; j < 2 * m; ++j)
                if (j != i) set.others[i].push_back(j);
    } else {
        // Directions are taken modulo sign: only the original circles are
        // tested, and a ball covers a point when either of its signed
        // copies contains it.
        set.circles = m;
        set.others.resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                if (j != i) set.others[i].push_back(j);
                set.others[i].push_back(m + j);
            }
        }
    }
    return set;
}

Vec to_vec(const Eigen::Vector3d& v) {
    Vec out(3);
    out << v[0], v[1], v[2];
    return out.normalized();
}

} // namespace

std::string_view verdict_name(Verdict v) {
    switch (v) {
    case Verdict::Shadow: return "shadow";
    case Verdict::NoShadow: return "no_shadow";
    case Verdict::Undetermined: return "undetermined";
    }
    return "undetermined";
}

std::string_view method_name(Method m) {
    switch (m) {
    case Method::Exact2D: return "exact2d";
    case Method::Exact3D: return "exact3d";
    case Method::MonteCarlo: return "monte_carlo";
    case Method::Adversarial: return "adversarial";
    }
    return "unknown";
}

CoverageReport verify_exact_2d(const ShadowInstance& inst) {
    if (inst.dimension() != 2) throw Error(ErrorCode::DimensionMismatch, "exact 2D coverage needs a planar instance");
    require_coverable(inst);

    CoverageReport report;
    report.method = Method::Exact2D;
    const auto caps = caps_of(inst);
    if (caps.empty()) {
        report.verdict = Verdict::NoShadow;
        report.worst_margin = -kPi / 2;
        report.witness = planar_direction(0.0);
        return report;
    }

    std::vector<PlanarCap> planar;
    for (const auto& c : caps)
        planar.push_back({wrap_angle(std::atan2(c.axis[1], c.axis[0]), kPi), c.half_angle, !c.open});

    const auto arcs = planar_arcs(planar, 0.0, false);
    const CircleCoverage cov = cover_circle(arcs, kPi, kExactTolerance);
    report.verdict = cov.covered() ? Verdict::Shadow : Verdict::NoShadow;
    report.tolerance_critical = cov.tolerance_critical;

    auto covered_at = [&](double shrink) {
        const auto shrunk = planar_arcs(planar, shrink, true);
        return cover_circle(shrunk, kPi, kSearchTolerance).covered();
    };
    report.worst_margin = bracket_worst_margin(covered_at, -kPi / 2 - 0.01, max_half_angle(caps) + 0.01);

    if (!cov.covered()) {
        report.witness = planar_direction(cov.largest_gap()->midpoint(kPi));
    } else {
        const auto probe = cover_circle(planar_arcs(planar, report.worst_margin + 1e-10, true), kPi, kSearchTolerance);
        if (!probe.covered()) report.witness = planar_direction(probe.largest_gap()->midpoint(kPi));
    }
    return report;
}

CoverageReport verify_exact_3d(const ShadowInstance& inst, AntipodalMode mode) {
    if (inst.dimension() != 3) throw Error(ErrorCode::DimensionMismatch, "exact 3D coverage needs a spatial instance");
    require_coverable(inst);

    CoverageReport report;
    report.method = Method::Exact3D;
    const auto caps = caps_of(inst);
    if (caps.empty()) {
        report.verdict = Verdict::NoShadow;
        report.worst_margin = -kPi / 2;
        report.witness = to_vec(Eigen::Vector3d::UnitX());
        return report;
    }

    const auto set = build_cap_set(caps, mode, 0.0, false);
    const SphereTest test = test_sphere(set.caps, set.circles, set.others, kExactTolerance);
    report.verdict = test.covered ? Verdict::Shadow : Verdict::NoShadow;
    report.tolerance_critical = test.tolerance_critical;

    auto covered_at = [&](double shrink) {
        const auto shrunk = build_cap_set(caps, AntipodalMode::ExplicitCaps, shrink, true);
        return test_sphere(shrunk.caps, shrunk.circles, shrunk.others, kSearchTolerance).covered;
    };
    report.worst_margin = bracket_worst_margin(covered_at, -kPi / 2 - 0.01, max_half_angle(caps) + 0.01);

    if (!test.covered && report.worst_margin < -kExactTolerance) {
        // A point of the largest hole beats the boundary witness.
        const auto shrunk = build_cap_set(caps, AntipodalMode::ExplicitCaps, report.worst_margin + 1e-10, true);
        const auto probe = test_sphere(shrunk.caps, shrunk.circles, shrunk.others, kSearchTolerance);
        report.witness = to_vec(probe.witness.value_or(*test.witness));
    } else if (!test.covered) {
        report.witness = to_vec(*test.witness);
    } else {
        const auto shrunk = build_cap_set(caps, AntipodalMode::ExplicitCaps, report.worst_margin + 1e-10, true);
        const auto probe = test_sphere(shrunk.caps, shrunk.circles, shrunk.others, kSearchTolerance);
        if (probe.witness) report.witness = to_vec(*probe.witness);
    }
    return report;
}

} // namespace shadow
