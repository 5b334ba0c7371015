#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace shadow {

/// One-parameter scan of a three-ball construction.
/// `construction` is "interior3" (param "h" or "r") or "ellipsoid3"
/// (param "bprime" or "a"); `fixed` holds the remaining parameters.
struct SweepSpec {
    std::string construction;
    std::string param;
    double from = 0.0;
    double to = 0.0;
    std::size_t steps = 0;
    std::map<std::string, double> fixed;
};

struct SweepRow {
    double value = 0.0;
    bool success = false;
    std::string error; // error name when the construction fails
    std::optional<double> worst_margin;
    std::optional<double> seam_overlap;
};

/// Evenly spaced values from `from` to `to` inclusive; a single step yields
/// `from`. Throws InvalidParameter for zero steps or an unknown construction.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

std::string sweep_csv(const std::string& param, const std::vector<SweepRow>& rows);

} // namespace shadow
