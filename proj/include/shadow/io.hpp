#pragma once

#include <optional>
#include <string>

#include "shadow/coverage.hpp"
#include "shadow/geom.hpp"

namespace shadow {

inline constexpr int kSchemaVersion = 1;

/// Parses an instance document. Throws Error(SchemaError) naming the
/// offending field (for example "balls[2].radius") or the parse position.
ShadowInstance load_instance(const std::string& text);

/// Serializes with shortest round-trip reals, so load(save(i)) reproduces
/// every double bit for bit.
std::string save_instance(const ShadowInstance& inst);

/// Report document: the coverage report, the validity findings and,
/// optionally, the wall time of the verification.
std::string save_report(const CoverageReport& report, const ValidityReport& validity,
                        std::optional<double> elapsed_ms = std::nullopt);

} // namespace shadow
