#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "shadow/geom.hpp"

namespace shadow::test {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
    bool coin() { return integer(0, 1) == 1; }

    Vec unit(std::size_t dim) {
        std::normal_distribution<double> g;
        Vec v(static_cast<Eigen::Index>(dim));
        do {
            for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = g(eng_);
        } while (v.norm() < 1e-6);
        return v.normalized();
    }

    Vec point(std::size_t dim, double scale) {
        Vec v(static_cast<Eigen::Index>(dim));
        for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = uniform(-scale, scale);
        return v;
    }

    Eigen::MatrixXd rotation(std::size_t dim) {
        std::normal_distribution<double> g;
        const auto n = static_cast<Eigen::Index>(dim);
        Eigen::MatrixXd m(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) m(i, j) = g(eng_);
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
        Eigen::MatrixXd q = qr.householderQ();
        if (q.determinant() < 0) q.col(0) *= -1.0;
        return q;
    }

    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
};

/// Balls realizing the given caps at x, pushed out along their axes at
/// geometrically growing distances so that they are pairwise disjoint.
inline ShadowInstance realize_caps(const Vec& x, const std::vector<Vec>& axes, const std::vector<double>& half_angles,
                                   const std::vector<bool>& closed) {
    ShadowInstance inst;
    inst.point = x;
    double dist = 1.0;
    for (std::size_t i = 0; i < axes.size(); ++i) {
        const double s = std::sin(half_angles[i]);
        if (i > 0) {
            const double prev = std::sin(half_angles[i - 1]);
            dist = 1.05 * dist * (1.0 + prev) / (1.0 - s);
        }
        inst.balls.push_back({x + dist * axes[i], dist * s, closed[i]});
    }
    return inst;
}

/// Random instance of m caps in dimension `dim`.
inline ShadowInstance random_instance(Rng& rng, std::size_t dim, int m, double alpha_lo, double alpha_hi,
                                      bool allow_closed = true) {
    std::vector<Vec> axes;
    std::vector<double> alphas;
    std::vector<bool> closed;
    for (int i = 0; i < m; ++i) {
        axes.push_back(rng.unit(dim));
        alphas.push_back(rng.uniform(alpha_lo, alpha_hi));
        closed.push_back(allow_closed && rng.coin());
    }
    return realize_caps(rng.point(dim, 2.0), axes, alphas, closed);
}

/// Balls on the coordinate axes with equal half-angle alpha. Every unit
/// vector has a coordinate of modulus at least 1/sqrt(n), so the worst
/// margin is alpha - acos(1/sqrt(n)).
inline ShadowInstance orthant_instance(std::size_t dim, double alpha) {
    std::vector<Vec> axes;
    for (std::size_t i = 0; i < dim; ++i) axes.push_back(Vec::Unit(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(i)));
    return realize_caps(Vec::Zero(static_cast<Eigen::Index>(dim)), axes, std::vector<double>(dim, alpha),
                        std::vector<bool>(dim, false));
}

inline double orthant_margin(std::size_t dim, double alpha) {
    return alpha - std::acos(1.0 / std::sqrt(static_cast<double>(dim)));
}

/// Independent coverage oracle: the line x + t d meets the ball iff the
/// distance from the center to the line is below the radius (or equal, for
/// a closed ball).
inline bool line_hits_ball(const Vec& x, const Vec& d, const Ball& b) {
    const Vec rel = b.center - x;
    const double dist = (rel - rel.dot(d) * d).norm();
    return b.closed ? dist <= b.radius : dist < b.radius;
}

inline bool line_hits_any(const ShadowInstance& inst, const Vec& d) {
    for (const auto& b : inst.balls)
        if (line_hits_ball(inst.point, d, b)) return true;
    return false;
}

/// Best margin by the same independent formula: asin(r/|c-x|) minus the
/// acute angle between the line and the center direction.
inline double oracle_margin(const ShadowInstance& inst, const Vec& d) {
    double best = -M_PI / 2;
    for (const auto& b : inst.balls) {
        const Vec rel = b.center - inst.point;
        const double dist = rel.norm();
        const double cosang = std::min(1.0, std::abs(rel.dot(d)) / dist);
        best = std::max(best, std::asin(std::min(1.0, b.radius / dist)) - std::acos(cosang));
    }
    return best;
}

} // namespace shadow::test
