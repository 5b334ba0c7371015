#include "shadow/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "shadow/coverage.hpp"

namespace shadow {

namespace {

constexpr double kPi = std::numbers::pi;
const double kCriticalRatio = 2.0 * std::numbers::sqrt2;

// Seed and budgets used when a construction in n >= 4 has to be checked by
// sampling.
constexpr std::uint64_t kVerifySeed = 42;
constexpr std::uint64_t kVerifySamples = 1'000'000;
constexpr std::uint64_t kVerifyStarts = 32;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Vec vec3(double x, double y, double z) {
    Vec v(3);
    v << x, y, z;
    return v;
}

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw Error(ErrorCode::InvalidParameter, std::string(name) + " must be positive and finite");
}

void require_exact_shadow(const ShadowInstance& inst, const char* what) {
    const auto validity = validate_instance(inst);
    if (!validity.valid)
        throw Error(ErrorCode::ConstructionUnverified,
                    std::string(what) + " is not a valid instance: " + validity.errors.front().message);
    const auto report = inst.dimension() == 2 ? verify_exact_2d(inst) : verify_exact_3d(inst);
    if (report.verdict != Verdict::Shadow)
        throw Error(ErrorCode::ConstructionUnverified, std::string(what) + " does not shade the point");
}

// Margin certified for a system of open balls; non-positive when the system
// fails to shade x.
double certified_margin(const ShadowInstance& inst) {
    if (inst.dimension() <= 3) {
        const auto report = inst.dimension() == 2 ? verify_exact_2d(inst) : verify_exact_3d(inst);
        return report.verdict == Verdict::Shadow ? report.worst_margin : std::min(report.worst_margin, 0.0);
    }
    const auto mc = verify_monte_carlo(inst, kVerifySamples, kVerifySeed);
    if (mc.verdict == Verdict::NoShadow) return std::min(mc.worst_margin, 0.0);
    const auto adv = adversarial_min_margin(inst, kVerifyStarts, kVerifySeed);
    if (adv.verdict == Verdict::NoShadow) return std::min(adv.worst_margin, 0.0);
    return std::min(mc.worst_margin, adv.worst_margin);
}

} // namespace

double phi_angle(double a, double b) {
    require_positive(a, "a");
    require_positive(b, "b");
    return 2.0 * std::asin((std::hypot(a, b) - a) / b);
}

double b2_coverage_arc(double a, double theta) {
    require_positive(a, "a");
    if (!(theta > kPi / 3))
        throw Error(ErrorCode::RadiusNonPositive, "theta must exceed pi/3 for B2 to have positive radius");
    if (!(theta < kPi)) throw Error(ErrorCode::InvalidParameter, "theta must be below pi");
    const double s = std::sin(0.5 * theta);
    const double arg = 1.0 / std::sqrt(s * (1.0 + s));
    if (arg >= 1.0) return 0.0;
    return kPi - 2.0 * std::asin(arg);
}

double seam_overlap(double a, double b_prime, double theta) {
    return b2_coverage_arc(a, theta) + phi_angle(a, b_prime) - kPi;
}

double required_seam_overlap(double a, double b_prime) {
    // The arc of B2 never reaches pi/2, so phi - pi/2 bounds the overlap.
    const double attainable = phi_angle(a, b_prime) - kPi / 2;
    return std::min(kMarginGuard, 0.5 * attainable);
}

ShadowInstance ellipsoid_three_balls(const EllipsoidParams& p) {
    require_positive(p.a, "a");
    require_positive(p.b_prime, "b_prime");
    if (!(p.b_prime / p.a > kCriticalRatio)) {
        std::ostringstream os;
        os << "b'/a = " << p.b_prime / p.a << " must exceed 2*sqrt(2)";
        throw Error(ErrorCode::RatioTooSmall, os.str());
    }

    const double guard = required_seam_overlap(p.a, p.b_prime);
    double theta = 0.0;
    if (p.theta) {
        theta = *p.theta;
        if (!(theta > kPi / 3) || !(theta < kPi))
            throw Error(ErrorCode::NoFeasibleTheta,
                        "RadiusNonPositive: theta must lie in (pi/3, pi), got " + num(theta));
    } else {
        bool found = false;
        for (long k = 1;; ++k) {
            const double t = kPi / 3 + static_cast<double>(k) * kThetaGridStep;
            if (t >= kPi) break;
            if (seam_overlap(p.a, p.b_prime, t) > guard) {
                theta = t;
                found = true;
                break;
            }
        }
        if (!found) throw Error(ErrorCode::NoFeasibleTheta, "no grid angle reaches the required seam overlap");
    }

    const double a = p.a;
    ShadowInstance inst;
    inst.point = Vec::Zero(3);
    inst.balls.push_back({vec3(0.0, a, 0.0), a, false});
    inst.balls.push_back({vec3(0.0, a * std::cos(theta), a * std::sin(theta)), 2.0 * a * std::sin(0.5 * theta) - a, false});
    inst.balls.push_back({vec3(-p.b_prime, 0.0, 0.0), std::hypot(a, p.b_prime) - a, false});
    inst.metadata["construction"] = "ellipsoid3";
    inst.metadata["a"] = num(a);
    inst.metadata["b_prime"] = num(p.b_prime);
    inst.metadata["theta"] = num(theta);
    inst.metadata["seam_overlap"] = num(seam_overlap(a, p.b_prime, theta));
    inst.metadata["required_overlap"] = num(guard);

    require_exact_shadow(inst, "three-ball ellipsoid system");
    return inst;
}

ShadowInstance interior_point_three_balls(const InteriorPointParams& p) {
    require_positive(p.r, "r");
    if (!(p.h > 7.0 * p.r / 9.0)) {
        std::ostringstream os;
        os << "h = " << p.h << " must exceed 7r/9 = " << 7.0 * p.r / 9.0;
        throw Error(ErrorCode::ThresholdViolated, os.str());
    }
    if (!(p.h < p.r)) throw Error(ErrorCode::InvalidParameter, "h must be below r");

    const double a = std::sqrt(p.r * p.r - p.h * p.h);
    const double b = p.h + p.r;
    ShadowInstance inst = ellipsoid_three_balls({a, b, std::nullopt});

    // Move the sphere center to the origin; x then sits at (h, 0, 0).
    const Vec shift = vec3(p.h, 0.0, 0.0);
    inst.point += shift;
    for (auto& ball : inst.balls) ball.center += shift;
    inst.sphere = Sphere{Vec::Zero(3), p.r, false};
    inst.metadata["construction"] = "interior3";
    inst.metadata["r"] = num(p.r);
    inst.metadata["h"] = num(p.h);

    require_exact_shadow(inst, "interior-point system");
    return inst;
}

double simplex_half_edge(std::size_t dimension) {
    const double n = static_cast<double>(dimension);
    return std::sqrt((n + 1.0) / (2.0 * n));
}

ShadowInstance regular_simplex_system(std::size_t dimension, bool closed) {
    if (dimension < 2) throw Error(ErrorCode::InvalidParameter, "dimension must be at least 2");
    const auto n = static_cast<Eigen::Index>(dimension);

    // Standard basis of R^{n+1} centred and expressed in the Helmert basis of
    // the hyperplane of zero coordinate sum.
    Eigen::MatrixXd helmert = Eigen::MatrixXd::Zero(n + 1, n);
    for (Eigen::Index k = 1; k <= n; ++k) {
        const double scale = 1.0 / std::sqrt(static_cast<double>(k * (k + 1)));
        for (Eigen::Index i = 0; i < k; ++i) helmert(i, k - 1) = scale;
        helmert(k, k - 1) = -static_cast<double>(k) * scale;
    }

    std::vector<Vec> vertices;
    for (Eigen::Index i = 0; i <= n; ++i) vertices.push_back(helmert.row(i).transpose().normalized());
    const double radius = 0.5 * (vertices[0] - vertices[1]).norm();

    ShadowInstance inst;
    inst.point = Vec::Zero(n);
    for (const auto& v : vertices) inst.balls.push_back({v, radius, closed});
    inst.sphere = Sphere{Vec::Zero(n), 1.0, true};
    inst.metadata["construction"] = "regular_simplex";
    inst.metadata["dimension"] = std::to_string(dimension);
    inst.metadata["closed"] = closed ? "true" : "false";
    return inst;
}

ShadowInstance embed_perturbed_simplex(std::size_t dimension, double epsilon) {
    if (dimension < 2) throw Error(ErrorCode::InvalidParameter, "dimension must be at least 2");
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
        throw Error(ErrorCode::InvalidParameter, "epsilon must be non-negative");
    const auto n = static_cast<Eigen::Index>(dimension);
    const double a = simplex_half_edge(dimension);

    std::vector<double> radii{a + epsilon};
    for (Eigen::Index i = 1; i <= n; ++i) radii.push_back(a - epsilon / std::ldexp(1.0, static_cast<int>(i)));
    if (radii.back() <= 0.0 || radii[1] <= 0.0)
        throw Error(ErrorCode::EmbeddingFailed, "epsilon leaves a non-positive radius");

    auto target = [&](Eigen::Index i, Eigen::Index j) { return radii[i] + radii[j]; };

    // Gram matrix of the centers relative to center 0.
    Eigen::MatrixXd gram(n, n);
    for (Eigen::Index i = 1; i <= n; ++i) {
        for (Eigen::Index j = 1; j <= n; ++j) {
            const double d0i = target(0, i);
            const double d0j = target(0, j);
            const double dij = i == j ? 0.0 : target(i, j);
            gram(i - 1, j - 1) = 0.5 * (d0i * d0i + d0j * d0j - dij * dij);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    if (eig.info() != Eigen::Success) throw Error(ErrorCode::EmbeddingFailed, "eigendecomposition failed");
    Eigen::VectorXd values = eig.eigenvalues();
    if (values.minCoeff() < -1e-9) {
        std::ostringstream os;
        os << "Gram matrix has eigenvalue " << values.minCoeff() << "; epsilon is too large";
        throw Error(ErrorCode::EmbeddingFailed, os.str());
    }
    values = values.cwiseMax(0.0);
    if (values.minCoeff() <= 1e-12 * values.maxCoeff())
        throw Error(ErrorCode::EmbeddingFailed, "centers are affinely dependent");
    const Eigen::MatrixXd coords = eig.eigenvectors() * values.cwiseSqrt().asDiagonal();

    std::vector<Vec> centers{Vec::Zero(n)};
    for (Eigen::Index i = 0; i < n; ++i) centers.push_back(coords.row(i).transpose());

    double worst = 0.0;
    for (Eigen::Index i = 0; i <= n; ++i)
        for (Eigen::Index j = i + 1; j <= n; ++j)
            worst = std::max(worst, std::abs((centers[i] - centers[j]).norm() - target(i, j)));
    if (worst >= 1e-9) {
        std::ostringstream os;
        os << "embedded distances deviate by " << worst;
        throw Error(ErrorCode::EmbeddingFailed, os.str());
    }

    // Circumcenter z: 2 c_i . z = |c_i|^2 for every center other than c_0 = 0.
    Eigen::MatrixXd lhs(n, n);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        lhs.row(i) = 2.0 * centers[i + 1].transpose();
        rhs[i] = centers[i + 1].squaredNorm();
    }
    const Vec circumcenter = lhs.colPivHouseholderQr().solve(rhs);

    ShadowInstance inst;
    inst.point = Vec::Zero(n);
    double sphere_radius = 0.0;
    for (Eigen::Index i = 0; i <= n; ++i) {
        inst.balls.push_back({centers[i] - circumcenter, radii[i], false});
        sphere_radius += inst.balls.back().center.norm();
    }
    inst.sphere = Sphere{Vec::Zero(n), sphere_radius / static_cast<double>(n + 1), true};
    inst.metadata["construction"] = "perturbed_simplex";
    inst.metadata["dimension"] = std::to_string(dimension);
    inst.metadata["epsilon"] = num(epsilon);
    return inst;
}

ShadowInstance perturbed_simplex_system(const SimplexParams& p) {
    if (!(p.epsilon > 0.0)) throw Error(ErrorCode::InvalidParameter, "epsilon must be positive");
    if (!(p.shrink >= 0.0 && p.shrink < 1.0)) throw Error(ErrorCode::InvalidParameter, "shrink must lie in [0, 1)");

    ShadowInstance inst = embed_perturbed_simplex(p.dimension, p.epsilon);
    const double margin = certified_margin(inst);
    if (!(margin > 0.0)) throw Error(ErrorCode::ShadowLost, "tangent system does not shade its circumcenter");

    // Scaling a radius by (1 - s) lowers the half-angle by about s*tan(alpha),
    // so the steepest cap bounds how much of the margin a shrink consumes.
    double steepest = 0.0;
    for (const auto& b : inst.balls) steepest = std::max(steepest, std::tan(cap_of_ball(inst.point, b).half_angle));
    const double factor = 1.0 - p.shrink * margin / steepest;
    if (p.shrink > 0.0) {
        for (auto& b : inst.balls) b.radius *= factor;
        if (!(certified_margin(inst) > 0.0)) throw Error(ErrorCode::ShadowLost, "shrunk system does not shade");
    }
    inst.metadata["shrink"] = num(p.shrink);
    inst.metadata["shrink_factor"] = num(p.shrink > 0.0 ? factor : 1.0);
    inst.metadata["tangent_margin"] = num(margin);

    const auto validity = validate_instance(inst);
    if (!validity.valid)
        throw Error(ErrorCode::ConstructionUnverified, "perturbed simplex is invalid: " + validity.errors.front().message);
    return inst;
}

ShadowInstance equalize_radii(const ShadowInstance& inst) {
    require_valid(inst);
    ShadowInstance out = inst;
    out.sphere.reset();
    out.metadata["equalized"] = "true";
    if (inst.balls.empty()) return out;

    const bool closed = inst.balls.front().closed;
    double largest = 0.0;
    for (const auto& b : inst.balls) {
        if (b.closed != closed) throw Error(ErrorCode::MixedBallKinds, "balls must be all open or all closed");
        largest = std::max(largest, b.radius);
    }
    for (auto& b : out.balls) {
        b = homothety_ball(inst.point, b, largest / b.radius);
        b.radius = largest;
    }

    const auto violations = pairwise_disjoint(out);
    if (!violations.empty()) {
        std::ostringstream os;
        os << "balls " << violations.front().first << " and " << violations.front().second
           << " overlap by " << violations.front().depth << " after equalization";
        throw Error(ErrorCode::DisjointnessLost, os.str());
    }
    return out;
}

ShadowInstance disk_pair_2d(double r) {
    require_positive(r, "r");
    ShadowInstance inst;
    inst.point = Vec::Zero(2);
    Vec c1(2), c2(2);
    c1 << r, 0.0;
    c2 << 0.0, r;
    inst.balls.push_back({c1, 0.5 * r, false});
    inst.balls.push_back({c2, 0.88 * r, false});
    inst.sphere = Sphere{Vec::Zero(2), r, true};
    inst.metadata["construction"] = "diskpair";
    inst.metadata["r"] = num(r);
    require_exact_shadow(inst, "disk pair");
    return inst;
}

} // namespace shadow
