#include "shadow/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "shadow/coverage.hpp"

namespace shadow {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCanvas = 600.0;

void check_plane(const ShadowInstance& inst, const PlaneSpec& plane) {
    const auto n = inst.point.size();
    if (plane.u.size() != n || plane.v.size() != n)
        throw Error(ErrorCode::DegeneratePlane, "plane vectors must match the instance dimension");
    if (std::abs(plane.u.norm() - 1.0) > 1e-9 || std::abs(plane.v.norm() - 1.0) > 1e-9
        || std::abs(plane.u.dot(plane.v)) > 1e-9)
        throw Error(ErrorCode::DegeneratePlane, "plane vectors must be orthonormal");
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    std::string s = buf;
    if (s == "-0.000000") s = "0.000000";
    return s;
}

struct Disk {
    double x, y, r;
    bool section;
};

} // namespace

PlaneSpec default_plane(std::size_t dimension) {
    PlaneSpec p{Vec::Zero(static_cast<Eigen::Index>(dimension)), Vec::Zero(static_cast<Eigen::Index>(dimension))};
    p.u[0] = 1.0;
    p.v[1] = 1.0;
    return p;
}

CircleCoverage in_plane_coverage(const ShadowInstance& inst, const PlaneSpec& plane) {
    check_plane(inst, plane);
    require_coverable(inst);
    std::vector<Arc> arcs;
    for (const auto& b : inst.balls) {
        const Cap cap = cap_of_ball(inst.point, b);
        const double p = cap.axis.dot(plane.u);
        const double q = cap.axis.dot(plane.v);
        const double rho = std::hypot(p, q);
        const double c = std::cos(cap.half_angle);
        // |rho cos(phi - phi0)| against cos(alpha).
        if (rho <= 0.0 || c > rho) continue;
        if (c == rho && cap.open) continue;
        const double half = std::acos(std::min(1.0, c / rho));
        Arc a;
        a.closed = !cap.open;
        a.start = std::atan2(q, p) - half;
        a.length = std::min(2.0 * half, kPi);
        arcs.push_back(a);
    }
    return cover_circle(arcs, kPi, kExactTolerance);
}

std::string emit_svg(const ShadowInstance& inst, const PlaneSpec& plane) {
    const CircleCoverage coverage = in_plane_coverage(inst, plane);

    auto project = [&](const Vec& p) {
        const Vec rel = p - inst.point;
        const double x = rel.dot(plane.u);
        const double y = rel.dot(plane.v);
        const double off = (rel - x * plane.u - y * plane.v).norm();
        return std::array<double, 3>{x, y, off};
    };

    std::vector<Disk> disks;
    for (const auto& b : inst.balls) {
        const auto [x, y, off] = project(b.center);
        if (off < b.radius)
            disks.push_back({x, y, std::sqrt(b.radius * b.radius - off * off), true});
        else
            disks.push_back({x, y, b.radius, false});
    }
    std::optional<Disk> sphere;
    if (inst.sphere) {
        const auto [x, y, off] = project(inst.sphere->center);
        if (off < inst.sphere->radius)
            sphere = Disk{x, y, std::sqrt(inst.sphere->radius * inst.sphere->radius - off * off), true};
    }

    double extent = 1.0;
    for (const auto& d : disks) extent = std::max(extent, std::max(std::abs(d.x), std::abs(d.y)) + d.r);
    if (sphere) extent = std::max(extent, std::max(std::abs(sphere->x), std::abs(sphere->y)) + sphere->r);
    extent *= 1.1;
    const double scale = 0.5 * kCanvas / extent;
    const double mid = 0.5 * kCanvas;
    auto sx = [&](double x) { return fmt(mid + scale * x); };
    auto sy = [&](double y) { return fmt(mid - scale * y); };

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + fmt(kCanvas) + "\" height=\""
         + fmt(kCanvas) + "\" viewBox=\"0 0 " + fmt(kCanvas) + " " + fmt(kCanvas) + "\">\n";
    out += "  <rect x=\"0\" y=\"0\" width=\"" + fmt(kCanvas) + "\" height=\"" + fmt(kCanvas) + "\" fill=\"white\"/>\n";

    const double reach = extent * std::numbers::sqrt2;
    for (const auto& gap : coverage.gaps) {
        for (double turn : {0.0, kPi}) {
            const double a0 = gap.start + turn;
            const double a1 = a0 + gap.length;
            if (gap.length == 0.0) {
                out += "  <line class=\"uncovered\" x1=\"" + sx(-reach * std::cos(a0)) + "\" y1=\"" + sy(-reach * std::sin(a0))
                     + "\" x2=\"" + sx(reach * std::cos(a0)) + "\" y2=\"" + sy(reach * std::sin(a0))
                     + "\" stroke=\"#d62728\" stroke-width=\"1\"/>\n";
                break;
            }
            out += "  <path class=\"uncovered\" d=\"M " + sx(0.0) + " " + sy(0.0) + " L " + sx(reach * std::cos(a0)) + " "
                 + sy(reach * std::sin(a0)) + " A " + fmt(scale * reach) + " " + fmt(scale * reach) + " 0 0 0 "
                 + sx(reach * std::cos(a1)) + " " + sy(reach * std::sin(a1))
                 + " Z\" fill=\"#d62728\" fill-opacity=\"0.25\" stroke=\"none\"/>\n";
        }
    }
    if (sphere) {
        out += "  <circle class=\"sphere\" cx=\"" + sx(sphere->x) + "\" cy=\"" + sy(sphere->y) + "\" r=\""
             + fmt(scale * sphere->r) + "\" fill=\"none\" stroke=\"#7f7f7f\" stroke-width=\"1\"/>\n";
    }
    for (std::size_t i = 0; i < disks.size(); ++i) {
        const Disk& d = disks[i];
        out += "  <circle class=\"" + std::string(d.section ? "ball" : "ball-outline") + "\" data-index=\""
             + std::to_string(i) + "\" cx=\"" + sx(d.x) + "\" cy=\"" + sy(d.y) + "\" r=\"" + fmt(scale * d.r) + "\"";
        if (d.section)
            out += " fill=\"#1f77b4\" fill-opacity=\"0.3\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>\n";
        else
            out += " fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1\" stroke-dasharray=\"6 4\"/>\n";
    }
    out += "  <circle class=\"point\" cx=\"" + sx(0.0) + "\" cy=\"" + sy(0.0) + "\" r=\"3\" fill=\"black\"/>\n";
    out += "</svg>\n";
    return out;
}

} // namespace shadow
