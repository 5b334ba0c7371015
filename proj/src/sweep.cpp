#include "shadow/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "shadow/constructions.hpp"
#include "shadow/coverage.hpp"
#include "shadow/errors.hpp"

namespace shadow {

namespace {

double fixed_value(const SweepSpec& spec, const std::string& key, double fallback) {
    const auto it = spec.fixed.find(key);
    return it == spec.fixed.end() ? fallback : it->second;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ShadowInstance build(const SweepSpec& spec, double value) {
    if (spec.construction == "interior3") {
        InteriorPointParams p{fixed_value(spec, "r", 1.0), fixed_value(spec, "h", 0.9)};
        (spec.param == "h" ? p.h : p.r) = value;
        return interior_point_three_balls(p);
    }
    EllipsoidParams p;
    p.a = fixed_value(spec, "a", 1.0);
    p.b_prime = fixed_value(spec, "bprime", 4.0);
    (spec.param == "bprime" ? p.b_prime : p.a) = value;
    return ellipsoid_three_balls(p);
}

} // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    const bool interior = spec.construction == "interior3";
    const bool ellipsoid = spec.construction == "ellipsoid3";
    if (!interior && !ellipsoid)
        throw Error(ErrorCode::InvalidParameter, "unknown sweep construction '" + spec.construction + "'");
    if ((interior && spec.param != "h" && spec.param != "r")
        || (ellipsoid && spec.param != "bprime" && spec.param != "a"))
        throw Error(ErrorCode::InvalidParameter, "parameter '" + spec.param + "' cannot be swept for " + spec.construction);
    if (spec.steps == 0) throw Error(ErrorCode::InvalidParameter, "steps must be at least 1");
    if (!std::isfinite(spec.from) || !std::isfinite(spec.to))
        throw Error(ErrorCode::InvalidParameter, "sweep bounds must be finite");

    std::vector<SweepRow> rows;
    for (std::size_t i = 0; i < spec.steps; ++i) {
        SweepRow row;
        row.value = spec.steps == 1
                        ? spec.from
                        : spec.from + (spec.to - spec.from) * static_cast<double>(i) / static_cast<double>(spec.steps - 1);
        if (i + 1 == spec.steps && spec.steps > 1) row.value = spec.to;
        try {
            const ShadowInstance inst = build(spec, row.value);
            const CoverageReport report = verify_exact_3d(inst);
            row.success = report.verdict == Verdict::Shadow;
            if (!row.success) row.error = std::string(verdict_name(report.verdict));
            row.worst_margin = report.worst_margin;
            row.seam_overlap = std::stod(inst.metadata.at("seam_overlap"));
        } catch (const Error& e) {
            row.error = std::string(error_name(e.code()));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string sweep_csv(const std::string& param, const std::vector<SweepRow>& rows) {
    std::string out = param + ",success,error,worst_margin,seam_overlap\n";
    for (const auto& r : rows) {
        out += num(r.value) + "," + (r.success ? "1" : "0") + "," + r.error + ","
             + (r.worst_margin ? num(*r.worst_margin) : "") + "," + (r.seam_overlap ? num(*r.seam_overlap) : "") + "\n";
    }
    return out;
}

} // namespace shadow
