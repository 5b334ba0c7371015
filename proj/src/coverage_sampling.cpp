#include "shadow/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

namespace shadow {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

double unit_open(std::uint64_t word) {
    return (static_cast<double>(word >> 11) + 0.5) * 0x1.0p-53;
}

// Runs body(begin, end, chunk) over [0, count) on a fixed number of chunks.
// Results must be merged by the caller in chunk order, which keeps them
// independent of scheduling.
template <class Body>
void parallel_chunks(std::uint64_t count, std::size_t chunks, Body&& body) {
    std::vector<std::thread> workers;
    workers.reserve(chunks);
    for (std::size_t c = 0; c < chunks; ++c) {
        const std::uint64_t begin = count * c / chunks;
        const std::uint64_t end = count * (c + 1) / chunks;
        workers.emplace_back([&body, begin, end, c] { body(begin, end, c); });
    }
    for (auto& w : workers) w.join();
}

std::size_t chunk_count(std::uint64_t work) {
    const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    return static_cast<std::size_t>(std::clamp<std::uint64_t>(work / 4096, 1, hw));
}

std::vector<Cap> caps_of(const ShadowInstance& inst) {
    std::vector<Cap> caps;
    for (const auto& b : inst.balls) caps.push_back(cap_of_ball(inst.point, b));
    return caps;
}

struct Probe {
    double best = -kPi / 2;
    bool covered = false;
};

Probe probe(const std::vector<Cap>& caps, const Vec& d) {
    Probe p;
    for (const auto& c : caps) {
        const double m = cap_margin(c, d);
        p.best = std::max(p.best, m);
        if (m > 0.0 || (m == 0.0 && !c.open)) p.covered = true;
    }
    return p;
}

double envelope(const std::vector<Cap>& caps, const Vec& d) {
    double best = -kPi / 2;
    for (const auto& c : caps) best = std::max(best, cap_margin(c, d));
    return best;
}

// Minimum-norm point of the convex hull of a few vectors, by enumerating the
// supports and keeping the best feasible affine minimiser.
Vec min_norm_hull(const std::vector<Vec>& g) {
    const std::size_t k = g.size();
    Vec best = g.front();
    double best_norm = best.squaredNorm();
    for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < k; ++i)
            if (mask & (std::size_t{1} << i)) idx.push_back(i);
        const auto s = static_cast<Eigen::Index>(idx.size());
        Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(s + 1, s + 1);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(s + 1);
        for (Eigen::Index a = 0; a < s; ++a) {
            for (Eigen::Index b = 0; b < s; ++b) kkt(a, b) = g[idx[a]].dot(g[idx[b]]);
            kkt(a, s) = 1.0;
            kkt(s, a) = 1.0;
        }
        rhs[s] = 1.0;
        const Eigen::VectorXd sol = kkt.colPivHouseholderQr().solve(rhs);
        if (!sol.allFinite() || (kkt * sol - rhs).norm() > 1e-9) continue;
        if ((sol.head(s).array() < -1e-12).any()) continue;
        Vec p = Vec::Zero(g.front().size());
        for (Eigen::Index a = 0; a < s; ++a) p += sol[a] * g[idx[a]];
        const double n2 = p.squaredNorm();
        if (n2 < best_norm) {
            best_norm = n2;
            best = p;
        }
    }
    return best;
}

Vec any_tangent(const Vec& d) {
    Eigen::Index k;
    d.cwiseAbs().minCoeff(&k);
    Vec e = Vec::Zero(d.size());
    e[k] = 1.0;
    return (e - e.dot(d) * d).normalized();
}

struct Descent {
    Vec direction;
    double value;
};

// Steepest descent of the upper envelope of cap margins on the unit sphere,
// using the minimum-norm element of the epsilon-subdifferential with epsilon
// tied to the current step.
Descent descend(const std::vector<Cap>& caps, Vec d, const AdversarialOptions& opt) {
    constexpr std::size_t kMaxActive = 8;
    double value = envelope(caps, d);
    double step = opt.initial_step;
    for (int iter = 0; iter < opt.max_iterations; ++iter) {
        std::vector<std::pair<double, std::size_t>> ranked;
        for (std::size_t i = 0; i < caps.size(); ++i) {
            const double m = cap_margin(caps[i], d);
            if (m >= value - step) ranked.emplace_back(-m, i);
        }
        std::sort(ranked.begin(), ranked.end());
        if (ranked.size() > kMaxActive) ranked.resize(kMaxActive);

        std::vector<Vec> grads;
        for (const auto& [neg_m, i] : ranked) {
            const Vec& axis = caps[i].axis;
            const double along = axis.dot(d);
            const Vec across = axis - along * d;
            const double sin_beta = across.norm();
            if (sin_beta < 1e-15) continue; // on the axis: any move descends
            const Vec unit = across / sin_beta;
            if (along > 0.0)
                grads.push_back(unit);
            else if (along < 0.0)
                grads.push_back(-unit);
            else {
                grads.push_back(unit);
                grads.push_back(-unit);
            }
        }

        Vec dir = grads.empty() ? any_tangent(d) : Vec(-min_norm_hull(grads));
        const double dir_norm = dir.norm();
        if (dir_norm < 1e-14) {
            if (step < opt.min_step) break;
            step *= 0.5;
            continue;
        }
        dir /= dir_norm;

        double t = step;
        bool accepted = false;
        while (t >= opt.min_step) {
            Vec trial = (std::cos(t) * d + std::sin(t) * dir).normalized();
            const double v = envelope(caps, trial);
            if (v < value) {
                d = std::move(trial);
                value = v;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) break;
        step = std::min(opt.initial_step, 2.0 * t);
    }
    return {d, value};
}

Vec slerp_towards(const Vec& from, const Vec& to, double angle) {
    const Vec ortho = to - from.dot(to) * from;
    const double n = ortho.norm();
    if (n < 1e-15) return from;
    return (std::cos(angle) * from + std::sin(angle) * ortho / n).normalized();
}

} // namespace

Vec sample_direction(std::size_t dimension, std::uint64_t seed, std::uint64_t index) {
    const std::uint64_t base = splitmix64(seed ^ splitmix64(index));
    Vec d(static_cast<Eigen::Index>(dimension));
    for (std::uint64_t attempt = 0;; ++attempt) {
        std::uint64_t counter = base + attempt * 0x632BE59BD9B4E019ull;
        for (std::size_t k = 0; k < dimension; k += 2) {
            const double u1 = unit_open(splitmix64(counter++));
            const double u2 = unit_open(splitmix64(counter++));
            const double radius = std::sqrt(-2.0 * std::log(u1));
            d[static_cast<Eigen::Index>(k)] = radius * std::cos(2.0 * kPi * u2);
            if (k + 1 < dimension) d[static_cast<Eigen::Index>(k + 1)] = radius * std::sin(2.0 * kPi * u2);
        }
        const double n = d.norm();
        if (n > 1e-300) return d / n;
    }
}

CoverageReport verify_monte_carlo(const ShadowInstance& inst, std::uint64_t n_samples, std::uint64_t seed) {
    if (n_samples < 1) throw Error(ErrorCode::InvalidSampleCount, "at least one sample is required");
    require_coverable(inst);
    const auto caps = caps_of(inst);
    const std::size_t dim = inst.dimension();

    struct Partial {
        double worst = std::numeric_limits<double>::infinity();
        std::uint64_t worst_index = 0;
        std::uint64_t uncovered = 0;
        std::uint64_t first_uncovered = std::numeric_limits<std::uint64_t>::max();
    };
    const std::size_t chunks = chunk_count(n_samples);
    std::vector<Partial> partial(chunks);
    parallel_chunks(n_samples, chunks, [&](std::uint64_t begin, std::uint64_t end, std::size_t c) {
        Partial& p = partial[c];
        for (std::uint64_t i = begin; i < end; ++i) {
            const Vec d = sample_direction(dim, seed, i);
            const Probe pr = probe(caps, d);
            if (pr.best < p.worst) {
                p.worst = pr.best;
                p.worst_index = i;
            }
            if (!pr.covered) {
                ++p.uncovered;
                p.first_uncovered = std::min(p.first_uncovered, i);
            }
        }
    });

    Partial total;
    for (const auto& p : partial) {
        if (p.worst < total.worst) {
            total.worst = p.worst;
            total.worst_index = p.worst_index;
        }
        total.uncovered += p.uncovered;
        total.first_uncovered = std::min(total.first_uncovered, p.first_uncovered);
    }

    CoverageReport report;
    report.method = Method::MonteCarlo;
    report.samples_used = n_samples;
    report.seed = seed;
    report.worst_margin = total.worst;
    report.uncovered_count = total.uncovered;
    report.uncovered_fraction_estimate = static_cast<double>(total.uncovered) / static_cast<double>(n_samples);
    if (total.uncovered > 0) {
        report.verdict = Verdict::NoShadow;
        report.witness = sample_direction(dim, seed, total.first_uncovered);
    } else {
        report.verdict = Verdict::Undetermined;
        report.witness = sample_direction(dim, seed, total.worst_index);
    }
    return report;
}

CoverageReport adversarial_min_margin(const ShadowInstance& inst, std::uint64_t n_starts, std::uint64_t seed,
                                      const AdversarialOptions& options) {
    if (n_starts < 1) throw Error(ErrorCode::InvalidStartCount, "at least one start is required");
    require_coverable(inst);
    const auto caps = caps_of(inst);
    const std::size_t dim = inst.dimension();

    CoverageReport report;
    report.method = Method::Adversarial;
    report.seed = seed;
    if (caps.empty()) {
        Vec d = Vec::Zero(static_cast<Eigen::Index>(dim));
        d[0] = 1.0;
        report.verdict = Verdict::NoShadow;
        report.worst_margin = -kPi / 2;
        report.witness = d;
        return report;
    }

    // Starts: the lowest Monte Carlo probes, then points where pairs of
    // signed caps meet along the great circle joining their axes.
    const std::uint64_t probes = std::max<std::uint64_t>(options.probe_samples, n_starts);
    std::vector<std::pair<double, std::uint64_t>> ranked(probes);
    for (std::uint64_t i = 0; i < probes; ++i) ranked[i] = {envelope(caps, sample_direction(dim, seed, i)), i};
    const std::uint64_t from_probes = (n_starts + 1) / 2;
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(from_probes), ranked.end());

    std::vector<Vec> starts;
    for (std::uint64_t i = 0; i < from_probes; ++i) starts.push_back(sample_direction(dim, seed, ranked[i].second));
    for (std::size_t i = 0; i < caps.size() && starts.size() < n_starts; ++i) {
        for (std::size_t j = i + 1; j < caps.size() && starts.size() < n_starts; ++j) {
            for (double sign : {1.0, -1.0}) {
                if (starts.size() >= n_starts) break;
                const Vec other = sign * caps[j].axis;
                const double gap = std::acos(std::clamp(caps[i].axis.dot(other), -1.0, 1.0));
                if (gap < 1e-9) continue;
                const double along = std::clamp(0.5 * (gap + caps[i].half_angle - caps[j].half_angle), 0.0, gap);
                starts.push_back(slerp_towards(caps[i].axis, other, along));
            }
        }
    }
    for (std::uint64_t i = from_probes; starts.size() < n_starts; ++i)
        starts.push_back(sample_direction(dim, seed, ranked[i % probes].second));

    std::vector<Descent> results(starts.size(), Descent{Vec(), 0.0});
    const std::size_t chunks = std::min<std::size_t>(starts.size(), std::max(1u, std::thread::hardware_concurrency()));
    parallel_chunks(starts.size(), chunks, [&](std::uint64_t begin, std::uint64_t end, std::size_t) {
        for (std::uint64_t s = begin; s < end; ++s) results[s] = descend(caps, starts[s], options);
    });

    std::size_t best = 0;
    for (std::size_t s = 1; s < results.size(); ++s)
        if (results[s].value < results[best].value) best = s;

    report.samples_used = probes;
    report.worst_margin = results[best].value;
    report.witness = results[best].direction;

    bool zero_and_open = std::abs(report.worst_margin) <= kZeroMarginTolerance;
    for (const auto& c : caps) {
        if (cap_margin(c, *report.witness) >= report.worst_margin - kZeroMarginTolerance && !c.open) zero_and_open = false;
    }
    if (report.worst_margin < -kZeroMarginTolerance || zero_and_open)
        report.verdict = Verdict::NoShadow;
    else
        report.verdict = Verdict::Undetermined;
    return report;
}

CoverageReport verify_auto(const ShadowInstance& inst, std::uint64_t n_samples, std::uint64_t n_starts,
                           std::uint64_t seed) {
    if (inst.dimension() == 2) return verify_exact_2d(inst);
    if (inst.dimension() == 3) return verify_exact_3d(inst);

    const CoverageReport mc = verify_monte_carlo(inst, n_samples, seed);
    if (mc.verdict == Verdict::NoShadow) return mc;
    CoverageReport adv = adversarial_min_margin(inst, n_starts, seed);
    adv.samples_used += mc.samples_used;
    adv.uncovered_count = mc.uncovered_count;
    adv.uncovered_fraction_estimate = mc.uncovered_fraction_estimate;
    if (mc.worst_margin < adv.worst_margin) {
        adv.worst_margin = mc.worst_margin;
        adv.witness = mc.witness;
    }
    return adv;
}

} // namespace shadow
