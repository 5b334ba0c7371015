#pragma once

#include <string>

#include "shadow/arcs.hpp"
#include "shadow/geom.hpp"

namespace shadow {

/// Plane through the shadow point spanned by two orthonormal vectors.
struct PlaneSpec {
    Vec u;
    Vec v;
};

/// Plane of the first two coordinate axes.
PlaneSpec default_plane(std::size_t dimension);

/// Uncovered in-plane line directions, as angles mod pi measured from `u`
/// towards `v`.
CircleCoverage in_plane_coverage(const ShadowInstance& inst, const PlaneSpec& plane);

/// Static SVG 1.1 cross-section. Balls meeting the plane are drawn as their
/// sections, others as dashed outlines; uncovered directions are shaded.
std::string emit_svg(const ShadowInstance& inst, const PlaneSpec& plane);

} // namespace shadow
