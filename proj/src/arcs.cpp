#include "shadow/arcs.hpp"

#include <algorithm>
#include <cmath>

namespace shadow {

double wrap_angle(double value, double period) {
    double r = std::fmod(value, period);
    if (r < 0.0) r += period;
    if (r >= period) r -= period;
    return r;
}

double Gap::midpoint(double period) const { return wrap_angle(start + 0.5 * length, period); }

bool CircleCoverage::only_isolated_points() const {
    return std::all_of(gaps.begin(), gaps.end(), [](const Gap& g) { return g.length == 0.0; });
}

const Gap* CircleCoverage::largest_gap() const {
    const Gap* best = nullptr;
    for (const auto& g : gaps)
        if (!best || g.length > best->length) best = &g;
    return best;
}

namespace {

struct Item {
    double position;
    double length; // zero for cluster points
    bool covered;
    bool strictly_covered;
};

// Offset of p from the arc start folded into (-tol, period - tol].
double folded_offset(double p, const Arc& a, double period, double tol) {
    double t = wrap_angle(p - a.start, period);
    if (t > period - tol) t -= period;
    return t;
}

} // namespace

CircleCoverage cover_circle(std::span<const Arc> arcs, double period, double tol) {
    CircleCoverage out;
    if (std::any_of(arcs.begin(), arcs.end(), [](const Arc& a) { return a.full; })) return out;

    std::vector<double> ends;
    ends.reserve(2 * arcs.size());
    for (const auto& a : arcs) {
        ends.push_back(wrap_angle(a.start, period));
        ends.push_back(wrap_angle(a.start + a.length, period));
    }
    if (ends.empty()) {
        out.gaps.push_back({0.0, period});
        return out;
    }
    std::sort(ends.begin(), ends.end());

    std::vector<double> clusters;
    for (double e : ends)
        if (clusters.empty() || e - clusters.back() > tol) clusters.push_back(e);
    // Points just below `period` coincide with points just above zero.
    while (clusters.size() > 1 && clusters.front() + period - clusters.back() <= tol) clusters.pop_back();

    const std::size_t k = clusters.size();
    std::vector<Item> items;
    items.reserve(2 * k);
    for (std::size_t i = 0; i < k; ++i) {
        const double p = clusters[i];
        bool strict = false;
        bool at_closed_end = false;
        for (const auto& a : arcs) {
            const double t = folded_offset(p, a, period, tol);
            if (t > tol && t < a.length - tol) strict = true;
            if (a.closed && (std::abs(t) <= tol || std::abs(t - a.length) <= tol)) at_closed_end = true;
        }
        items.push_back({p, 0.0, strict || at_closed_end, strict});

        const double next = (i + 1 < k) ? clusters[i + 1] : clusters[0] + period;
        const double mid = wrap_angle(0.5 * (p + next), period);
        bool interval_covered = false;
        for (const auto& a : arcs) {
            const double t = wrap_angle(mid - a.start, period);
            if (t < a.length) {
                interval_covered = true;
                break;
            }
        }
        items.push_back({p, next - p, interval_covered, interval_covered});
    }

    const std::size_t m = items.size();
    for (std::size_t i = 0; i < m; i += 2) {
        const Item& before = items[(i + m - 1) % m];
        const Item& after = items[i + 1];
        if (!items[i].strictly_covered && before.covered && after.covered) out.tolerance_critical = true;
    }

    auto first_covered = std::find_if(items.begin(), items.end(), [](const Item& it) { return it.covered; });
    if (first_covered == items.end()) {
        out.gaps.push_back({clusters.front(), period});
        return out;
    }
    const std::size_t origin = static_cast<std::size_t>(first_covered - items.begin());
    bool in_gap = false;
    Gap current;
    for (std::size_t step = 1; step <= m; ++step) {
        const Item& it = items[(origin + step) % m];
        if (!it.covered) {
            if (!in_gap) {
                in_gap = true;
                current = {it.position, 0.0};
            }
            current.length += it.length;
        } else if (in_gap) {
            in_gap = false;
            out.gaps.push_back(current);
        }
    }
    if (in_gap) out.gaps.push_back(current);
    return out;
}

} // namespace shadow
