#include "shadow/io.hpp"

#include <json.hpp>

namespace shadow {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& field, const std::string& what) {
    throw Error(ErrorCode::SchemaError, field + ": " + what);
}

const json& member(const json& obj, const std::string& key, const std::string& path) {
    const auto it = obj.find(key);
    if (it == obj.end()) schema_error(path + key, "missing field");
    return *it;
}

double real_at(const json& v, const std::string& path) {
    if (!v.is_number()) schema_error(path, "expected a number");
    return v.get<double>();
}

Vec vec_at(const json& v, const std::string& path) {
    if (!v.is_array()) schema_error(path, "expected an array of numbers");
    Vec out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i)
        out[static_cast<Eigen::Index>(i)] = real_at(v[i], path + "[" + std::to_string(i) + "]");
    return out;
}

json vec_json(const Vec& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

} // namespace

ShadowInstance load_instance(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        schema_error("document", e.what());
    }
    if (!doc.is_object()) schema_error("document", "expected an object");

    const json& version = member(doc, "schema_version", "");
    if (!version.is_number_integer() || version.get<int>() != kSchemaVersion)
        schema_error("schema_version", "expected " + std::to_string(kSchemaVersion));

    ShadowInstance inst;
    inst.point = vec_at(member(doc, "point", ""), "point");
    const auto n = inst.point.size();

    const json& balls = member(doc, "balls", "");
    if (!balls.is_array()) schema_error("balls", "expected an array");
    for (std::size_t i = 0; i < balls.size(); ++i) {
        const std::string path = "balls[" + std::to_string(i) + "].";
        const json& b = balls[i];
        if (!b.is_object()) schema_error("balls[" + std::to_string(i) + "]", "expected an object");
        Ball ball;
        ball.center = vec_at(member(b, "center", path), path + "center");
        if (ball.center.size() != n) schema_error(path + "center", "dimension differs from point");
        ball.radius = real_at(member(b, "radius", path), path + "radius");
        const json& closed = member(b, "closed", path);
        if (!closed.is_boolean()) schema_error(path + "closed", "expected a boolean");
        ball.closed = closed.get<bool>();
        inst.balls.push_back(std::move(ball));
    }

    if (const auto it = doc.find("sphere"); it != doc.end() && !it->is_null()) {
        if (!it->is_object()) schema_error("sphere", "expected an object");
        Sphere s;
        s.center = vec_at(member(*it, "center", "sphere."), "sphere.center");
        if (s.center.size() != n) schema_error("sphere.center", "dimension differs from point");
        s.radius = real_at(member(*it, "radius", "sphere."), "sphere.radius");
        if (const auto r = it->find("radius_restricted"); r != it->end()) {
            if (!r->is_boolean()) schema_error("sphere.radius_restricted", "expected a boolean");
            s.radius_restricted = r->get<bool>();
        }
        inst.sphere = std::move(s);
    }

    if (const auto it = doc.find("metadata"); it != doc.end()) {
        if (!it->is_object()) schema_error("metadata", "expected an object of strings");
        for (const auto& [key, value] : it->items()) {
            if (!value.is_string()) schema_error("metadata." + key, "expected a string");
            inst.metadata[key] = value.get<std::string>();
        }
    }
    return inst;
}

std::string save_instance(const ShadowInstance& inst) {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["point"] = vec_json(inst.point);
    doc["balls"] = json::array();
    for (const auto& b : inst.balls)
        doc["balls"].push_back({{"center", vec_json(b.center)}, {"radius", b.radius}, {"closed", b.closed}});
    if (inst.sphere) {
        doc["sphere"] = {{"center", vec_json(inst.sphere->center)},
                         {"radius", inst.sphere->radius},
                         {"radius_restricted", inst.sphere->radius_restricted}};
    }
    doc["metadata"] = json::object();
    for (const auto& [k, v] : inst.metadata) doc["metadata"][k] = v;
    return doc.dump(2) + "\n";
}

std::string save_report(const CoverageReport& report, const ValidityReport& validity,
                        std::optional<double> elapsed_ms) {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["verdict"] = std::string(verdict_name(report.verdict));
    doc["method"] = std::string(method_name(report.method));
    doc["worst_margin"] = report.worst_margin;
    doc["witness"] = report.witness ? vec_json(*report.witness) : json(nullptr);
    doc["samples_used"] = report.samples_used;
    doc["uncovered_count"] = report.uncovered_count;
    doc["uncovered_fraction_estimate"] =
        report.uncovered_fraction_estimate ? json(*report.uncovered_fraction_estimate) : json(nullptr);
    doc["seed"] = report.seed ? json(*report.seed) : json(nullptr);
    doc["tolerance_critical"] = report.tolerance_critical;

    auto findings = [](const std::vector<Finding>& list) {
        json arr = json::array();
        for (const auto& f : list)
            arr.push_back({{"kind", std::string(finding_name(f.kind))},
                           {"balls", f.balls},
                           {"value", f.value},
                           {"message", f.message}});
        return arr;
    };
    doc["validity"] = {{"valid", validity.valid}, {"errors", findings(validity.errors)}, {"notes", findings(validity.notes)}};
    if (elapsed_ms) doc["timing_ms"] = *elapsed_ms;
    return doc.dump(2) + "\n";
}

} // namespace shadow
