#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "shadow/constructions.hpp"
#include "shadow/coverage.hpp"
#include "support.hpp"

using namespace shadow;
using shadow::test::Rng;

namespace {

constexpr double kPi = std::numbers::pi;

Vec v2(double x, double y) {
    Vec v(2);
    v << x, y;
    return v;
}

Vec v3(double x, double y, double z) {
    Vec v(3);
    v << x, y, z;
    return v;
}

/// Minimum best margin over n equally spaced line directions of the plane.
double dense_min_margin_2d(const ShadowInstance& inst, int n, bool* any_uncovered) {
    double worst = kPi;
    *any_uncovered = false;
    for (int k = 0; k < n; ++k) {
        const double t = kPi * (k + 0.5) / n;
        const Vec d = v2(std::cos(t), std::sin(t));
        worst = std::min(worst, test::oracle_margin(inst, d));
        if (!test::line_hits_any(inst, d)) *any_uncovered = true;
    }
    return worst;
}

ShadowInstance random_2d(Rng& rng) {
    return test::random_instance(rng, 2, rng.integer(1, 5), 0.1, 1.2);
}

ShadowInstance rotated(const ShadowInstance& inst, const Eigen::MatrixXd& q) {
    ShadowInstance out = inst;
    for (auto& b : out.balls) b.center = inst.point + q * (b.center - inst.point);
    return out;
}

} // namespace

TEST_CASE("2D: disk pair shades its center") {
    const auto inst = disk_pair_2d(1.0);
    const auto rep = verify_exact_2d(inst);
    CHECK(rep.verdict == Verdict::Shadow);
    CHECK(rep.worst_margin > 0);
    CHECK(rep.method == Method::Exact2D);
}

TEST_CASE("2D: removing a disk opens a gap") {
    for (std::size_t drop = 0; drop < 2; ++drop) {
        auto inst = disk_pair_2d(1.0);
        inst.balls.erase(inst.balls.begin() + static_cast<long>(drop));
        const auto rep = verify_exact_2d(inst);
        CHECK(rep.verdict == Verdict::NoShadow);
        REQUIRE(rep.witness);
        CHECK_FALSE(test::line_hits_any(inst, *rep.witness));
    }
}

TEST_CASE("2D: triangle of tangent disks overlaps with margin pi/6") {
    // Axes at 0, pi/3, 2pi/3 mod pi with half-width pi/3 each.
    for (bool closed : {true, false}) {
        const auto rep = verify_exact_2d(regular_simplex_system(2, closed));
        CHECK(rep.verdict == Verdict::Shadow);
        CHECK(rep.worst_margin == doctest::Approx(kPi / 6).epsilon(1e-9));
    }
}

TEST_CASE("2D: exact verdict and margin against dense sampling") {
    Rng rng(5);
    for (int trial = 0; trial < 60; ++trial) {
        const auto inst = random_2d(rng);
        const auto rep = verify_exact_2d(inst);
        bool uncovered = false;
        const double sampled = dense_min_margin_2d(inst, 1'000'000 / 20, &uncovered);
        CHECK(sampled >= rep.worst_margin - 1e-9);
        CHECK(sampled <= rep.worst_margin + 1e-4);
        if (rep.verdict == Verdict::Shadow) CHECK_FALSE(uncovered);
        if (uncovered) CHECK(rep.verdict == Verdict::NoShadow);
    }
}

TEST_CASE("2D: one million directions agree with exact verdict") {
    Rng rng(17);
    const auto inst = random_2d(rng);
    const auto rep = verify_exact_2d(inst);
    bool uncovered = false;
    dense_min_margin_2d(inst, 1'000'000, &uncovered);
    CHECK(uncovered == (rep.verdict == Verdict::NoShadow));
}

TEST_CASE("3D: regular simplex") {
    const auto closed = verify_exact_3d(regular_simplex_system(3, true));
    CHECK(closed.verdict == Verdict::Shadow);
    CHECK(std::abs(closed.worst_margin) < 1e-9);
    CHECK(closed.tolerance_critical);

    const auto open = verify_exact_3d(regular_simplex_system(3, false));
    CHECK(open.verdict == Verdict::NoShadow);
    REQUIRE(open.witness);
    CHECK(std::abs(open.worst_margin) < 1e-9);
}

TEST_CASE("3D: single ball") {
    ShadowInstance inst;
    inst.point = Vec::Zero(3);
    inst.balls = {{v3(3, 0, 0), 1.0, false}};
    const auto rep = verify_exact_3d(inst);
    CHECK(rep.verdict == Verdict::NoShadow);
    REQUIRE(rep.witness);
    CHECK(system_margin(inst, *rep.witness).best_margin < 0);
    CHECK(rep.worst_margin == doctest::Approx(std::asin(1.0 / 3.0) - kPi / 2).epsilon(1e-8));
}

TEST_CASE("3D: orthant system margin") {
    const auto inst = test::orthant_instance(3, 1.0);
    const auto rep = verify_exact_3d(inst);
    CHECK(rep.verdict == Verdict::Shadow);
    CHECK(rep.worst_margin == doctest::Approx(test::orthant_margin(3, 1.0)).epsilon(1e-8));
}

TEST_CASE("3D: both antipodal treatments agree") {
    Rng rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const auto inst = test::random_instance(rng, 3, rng.integer(2, 7), 0.4, 1.3);
        const auto a = verify_exact_3d(inst, AntipodalMode::ExplicitCaps);
        const auto b = verify_exact_3d(inst, AntipodalMode::Projective);
        CHECK(a.verdict == b.verdict);
        CHECK(a.worst_margin == doctest::Approx(b.worst_margin).epsilon(1e-9));
    }
}

TEST_CASE("3D: invariance under permutation and rotation") {
    Rng rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        auto inst = test::random_instance(rng, 3, rng.integer(3, 7), 0.5, 1.3);
        const auto base = verify_exact_3d(inst);

        auto perm = inst;
        std::shuffle(perm.balls.begin(), perm.balls.end(), rng.engine());
        const auto p = verify_exact_3d(perm);
        CHECK(p.verdict == base.verdict);
        CHECK(p.worst_margin == doctest::Approx(base.worst_margin).epsilon(1e-9));

        const auto r = verify_exact_3d(rotated(inst, rng.rotation(3)));
        CHECK(r.verdict == base.verdict);
        CHECK(r.worst_margin == doctest::Approx(base.worst_margin).epsilon(1e-8));
    }
}

TEST_CASE("3D: adding a ball never hurts") {
    Rng rng(37);
    for (int trial = 0; trial < 40; ++trial) {
        auto inst = test::random_instance(rng, 3, rng.integer(3, 6), 0.5, 1.3, false);
        const auto before = verify_exact_3d(inst);
        // A far ball keeps the system disjoint.
        const Vec axis = rng.unit(3);
        double far = 0;
        for (const auto& b : inst.balls) far = std::max(far, (b.center - inst.point).norm() + b.radius);
        const double alpha = rng.uniform(0.3, 1.2);
        const double dist = 2.0 * far / (1.0 - std::sin(alpha));
        inst.balls.push_back({inst.point + dist * axis, dist * std::sin(alpha), false});
        const auto after = verify_exact_3d(inst);
        CHECK(after.worst_margin >= before.worst_margin - 1e-9);
        if (before.verdict == Verdict::Shadow) CHECK(after.verdict == Verdict::Shadow);
    }
}

TEST_CASE("3D: margins are symmetric under d -> -d") {
    Rng rng(41);
    const auto inst = test::random_instance(rng, 3, 5, 0.3, 1.2);
    for (int k = 0; k < 1000; ++k) {
        const Vec d = rng.unit(3);
        CHECK(std::abs(system_margin(inst, d).best_margin - system_margin(inst, -d).best_margin) < 1e-15);
    }
}

TEST_CASE("3D: exact verdict never contradicted by sampling") {
    Rng rng(43);
    for (int trial = 0; trial < 60; ++trial) {
        const auto inst = test::random_instance(rng, 3, rng.integer(2, 8), 0.4, 1.35);
        const auto exact = verify_exact_3d(inst);
        const auto mc = verify_monte_carlo(inst, 20000, static_cast<std::uint64_t>(trial));
        CHECK(mc.worst_margin >= exact.worst_margin - 1e-9);
        if (exact.verdict == Verdict::Shadow) CHECK(mc.uncovered_count == 0);
        if (mc.uncovered_count > 0) CHECK(exact.verdict == Verdict::NoShadow);
    }
}

TEST_CASE("exact methods reject other dimensions") {
    CHECK_THROWS_AS(verify_exact_2d(test::orthant_instance(3, 1.0)), Error);
    CHECK_THROWS_AS(verify_exact_3d(test::orthant_instance(4, 1.0)), Error);
}

TEST_CASE("sample directions are unit and reproducible") {
    for (std::uint64_t i = 0; i < 100; ++i) {
        const Vec a = sample_direction(5, 9, i);
        CHECK(a.norm() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(a == sample_direction(5, 9, i));
    }
    CHECK(sample_direction(5, 9, 0) != sample_direction(5, 10, 0));
}

TEST_CASE("sample directions are isotropic") {
    const int n = 200000;
    Eigen::MatrixXd second = Eigen::MatrixXd::Zero(4, 4);
    Vec mean = Vec::Zero(4);
    for (int i = 0; i < n; ++i) {
        const Vec d = sample_direction(4, 1, static_cast<std::uint64_t>(i));
        mean += d;
        second += d * d.transpose();
    }
    mean /= n;
    second /= n;
    CHECK(mean.norm() < 0.01);
    CHECK((second - 0.25 * Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 0.01);
}

TEST_CASE("monte carlo never claims a shadow") {
    const auto rep = verify_monte_carlo(test::orthant_instance(4, 1.2), 50000, 3);
    CHECK(rep.verdict == Verdict::Undetermined);
    CHECK(rep.uncovered_count == 0);
    CHECK(rep.samples_used == 50000);
    REQUIRE(rep.seed);
    CHECK(*rep.seed == 3);
    CHECK(rep.worst_margin >= test::orthant_margin(4, 1.2) - 1e-12);
}

TEST_CASE("monte carlo finds holes and is deterministic") {
    ShadowInstance inst;
    inst.point = Vec::Zero(5);
    inst.balls = {{Vec::Unit(5, 0) * 2.0, 1.0, false}};
    const auto a = verify_monte_carlo(inst, 10000, 8);
    const auto b = verify_monte_carlo(inst, 10000, 8);
    CHECK(a.verdict == Verdict::NoShadow);
    REQUIRE(a.witness);
    CHECK_FALSE(test::line_hits_any(inst, *a.witness));
    CHECK(a.uncovered_count == b.uncovered_count);
    CHECK(a.worst_margin == b.worst_margin);
    CHECK(*a.witness == *b.witness);
    REQUIRE(a.uncovered_fraction_estimate);
    CHECK(*a.uncovered_fraction_estimate > 0.5);
}

TEST_CASE("monte carlo rejects zero samples") {
    CHECK_THROWS_AS(verify_monte_carlo(test::orthant_instance(4, 1.2), 0, 1), Error);
    CHECK_THROWS_AS(adversarial_min_margin(test::orthant_instance(4, 1.2), 0, 1), Error);
}

TEST_CASE("adversarial search reaches the analytic minimum") {
    for (std::size_t n : {4u, 5u, 6u}) {
        const auto inst = test::orthant_instance(n, 1.3);
        const auto rep = adversarial_min_margin(inst, 16, 1);
        CHECK(rep.verdict == Verdict::Undetermined);
        CHECK(rep.worst_margin == doctest::Approx(test::orthant_margin(n, 1.3)).epsilon(1e-6));
    }
}

TEST_CASE("adversarial search finds a hole a coarse sample misses") {
    // Orthant system with slightly too small caps: holes only near the
    // diagonals.
    const auto inst = test::orthant_instance(5, std::acos(1.0 / std::sqrt(5.0)) - 0.01);
    const auto rep = adversarial_min_margin(inst, 16, 2);
    CHECK(rep.verdict == Verdict::NoShadow);
    REQUIRE(rep.witness);
    CHECK_FALSE(test::line_hits_any(inst, *rep.witness));
    CHECK(rep.worst_margin == doctest::Approx(-0.01).epsilon(1e-6));
}

TEST_CASE("auto dispatches by dimension") {
    CHECK(verify_auto(disk_pair_2d(1.0), 1000, 4, 1).method == Method::Exact2D);
    CHECK(verify_auto(test::orthant_instance(3, 1.0), 1000, 4, 1).method == Method::Exact3D);
    const auto high = verify_auto(test::orthant_instance(4, 1.2), 20000, 8, 1);
    CHECK(high.verdict == Verdict::Undetermined);
    CHECK(high.samples_used == 20000 + AdversarialOptions{}.probe_samples);
    CHECK(high.uncovered_count == 0);
    CHECK(high.worst_margin == doctest::Approx(test::orthant_margin(4, 1.2)).epsilon(1e-6));
}
