#pragma once

// JSON documents: analysis reports, raw diagrams and landscapes. Reals are
// written with 17 significant digits so every double survives a round trip,
// and objects keep insertion order, so equal inputs give byte-identical files.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "landscape.hpp"
#include "persistence.hpp"
#include "structures.hpp"

namespace branchtopo {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

namespace detail {

inline std::string format_real(double v)
{
    if (!std::isfinite(v)) {
        return "null";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline bool is_flat(const Json& j)
{
    return std::none_of(j.begin(), j.end(), [](const Json& e) { return e.is_structured(); });
}

inline void write_json(std::ostream& os, const Json& j, int depth)
{
    const std::string pad(2 * (depth + 1), ' '), close(2 * depth, ' ');
    switch (j.type()) {
    case Json::value_t::number_float:
        os << format_real(j.get<double>());
        return;
    case Json::value_t::array:
        if (j.empty() || is_flat(j)) {
            os << '[';
            for (std::size_t i = 0; i < j.size(); ++i) {
                os << (i ? ", " : "");
                write_json(os, j[i], depth + 1);
            }
            os << ']';
            return;
        }
        os << "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            os << pad;
            write_json(os, j[i], depth + 1);
            os << (i + 1 < j.size() ? ",\n" : "\n");
        }
        os << close << ']';
        return;
    case Json::value_t::object: {
        if (j.empty()) {
            os << "{}";
            return;
        }
        os << "{\n";
        std::size_t i = 0;
        for (const auto& [key, value] : j.items()) {
            os << pad << Json(key).dump() << ": ";
            write_json(os, value, depth + 1);
            os << (++i < j.size() ? ",\n" : "\n");
        }
        os << close << '}';
        return;
    }
    default:
        os << j.dump();
    }
}

}  // namespace detail

/// Pretty-printed; arrays of scalars stay on one line.
inline std::string to_json_text(const Json& j)
{
    std::ostringstream os;
    detail::write_json(os, j, 0);
    os << '\n';
    return os.str();
}

inline void write_json_file(const Json& j, const std::string& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write '" + path + "'");
    }
    out << to_json_text(j);
    if (!out.flush()) {
        throw IoError("write failed for '" + path + "'");
    }
}

inline Json read_json_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path + "'");
    }
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path + ": " + e.what(), 0, e.byte);
    }
}

inline const char* to_string(Units u) { return u == Units::Radius2 ? "radius2" : "radius"; }

inline Units units_from_string(const std::string& name)
{
    if (name == "radius") return Units::Radius;
    if (name == "radius2") return Units::Radius2;
    throw std::invalid_argument("units must be 'radius' or 'radius2'");
}

// Diagrams

/// Pairs as {birth, death} objects in output units; an infinite death is null.
inline Json diagram_to_json(const PersistenceDiagram& d, Units units = Units::Radius)
{
    std::vector<PersistencePair> pairs = d.pairs;
    std::stable_sort(pairs.begin(), pairs.end(), [](const PersistencePair& a, const PersistencePair& b) {
        return a.birth != b.birth ? a.birth < b.birth : a.death < b.death;
    });
    Json out = Json::array();
    for (const auto& p : pairs) {
        out.push_back({{"birth", in_units(p.birth, units)},
                       {"death", p.infinite ? Json(nullptr) : Json(in_units(p.death, units))}});
    }
    return out;
}

/// Accepts an array of pairs, each either {birth, death} or [birth, death].
inline PersistenceDiagram diagram_from_json_array(const Json& arr)
{
    if (!arr.is_array()) {
        throw ParseError("diagram must be an array of pairs");
    }
    PersistenceDiagram d;
    for (const Json& e : arr) {
        PersistencePair p;
        const Json* birth = nullptr;
        const Json* death = nullptr;
        if (e.is_object() && e.contains("birth") && e.contains("death")) {
            birth = &e["birth"];
            death = &e["death"];
        } else if (e.is_array() && e.size() == 2) {
            birth = &e[0];
            death = &e[1];
        } else {
            throw ParseError("diagram entry must be {birth, death} or [birth, death]: " + e.dump());
        }
        if (!birth->is_number() || !(death->is_number() || death->is_null())) {
            throw ParseError("diagram entry has non-numeric values: " + e.dump());
        }
        p.birth = birth->get<double>();
        if (death->is_null()) {
            p.infinite = true;
        } else {
            p.death = death->get<double>();
        }
        d.pairs.push_back(p);
    }
    return d;
}

/// A diagram document: a bare array, or an object holding "diagram" (raw
/// diagram files) or "diagram_xu" (analysis reports).
inline PersistenceDiagram diagram_from_json(const Json& j)
{
    if (j.is_array()) {
        return diagram_from_json_array(j);
    }
    for (const char* key : {"diagram", "diagram_xu"}) {
        if (j.is_object() && j.contains(key)) {
            return diagram_from_json_array(j[key]);
        }
    }
    throw ParseError("no diagram found (expected an array, \"diagram\" or \"diagram_xu\")");
}

// Landscapes

inline Json levels_to_json(const Landscape& l)
{
    Json levels = Json::array();
    for (const auto& level : l.levels) {
        Json pts = Json::array();
        for (const auto& bp : level.breakpoints()) {
            pts.push_back(Json::array({bp.t, bp.v}));
        }
        levels.push_back(std::move(pts));
    }
    return levels;
}

inline Json landscape_to_json(const Landscape& l, std::optional<double> integral = std::nullopt)
{
    Json j = {{"schema_version", kSchemaVersion}, {"levels", levels_to_json(l)}};
    if (integral) {
        j["integral_of_square"] = *integral;
    }
    return j;
}

/// "levels" holds the family on or above the baseline, so at (pi/4, 0) it is
/// identical to the ordinary landscape document's "levels".
inline Json generalized_landscape_to_json(const GeneralizedLandscape& g)
{
    return {{"schema_version", kSchemaVersion},
            {"theta", g.theta},
            {"y", g.y},
            {"levels", levels_to_json(g.positive)},
            {"negative_levels", levels_to_json(g.negative)}};
}

// Analysis reports

struct AnalysisReport {
    StructureAnalysis analysis;
    ClassCounts counts;
    std::optional<double> area_ratio;
    std::optional<double> lambda1_sq_integral;
    /// Input-side settings recorded verbatim under "parameters".
    Json input = Json::object();
};

/// Landscape of the internal features above threshold, in analysis units;
/// returns the integral of its first level squared.
inline double internal_lambda1_sq_integral(const StructureAnalysis& a)
{
    std::vector<Bar> bars;
    for (const auto& f : a.features) {
        if (f.cls == FeatureClass::Internal && !f.below_threshold && !f.pair.infinite) {
            bars.emplace_back(in_units(f.pair.birth, a.params.units), in_units(f.pair.death, a.params.units));
        }
    }
    return integral_of_square(build_landscape(bars));
}

inline AnalysisReport make_report(StructureAnalysis analysis)
{
    AnalysisReport r;
    r.counts = count_by_class(analysis.features);
    r.analysis = std::move(analysis);
    return r;
}

inline Json report_to_json(const AnalysisReport& r)
{
    const StructureAnalysis& a = r.analysis;
    const Units u = a.params.units;

    Json params = r.input;
    params["hull_interval"] = a.params.hull_interval;
    params["persistence_min_internal"] = a.params.persistence_min_internal;
    params["persistence_min_external"] = a.params.persistence_min_external;
    params["match_tol"] = a.params.match_tol;
    params["units"] = to_string(u);

    Json hull = Json::array();
    for (const Point2 p : a.augmentation.hull_points) {
        hull.push_back(Json::array({p.x, p.y}));
    }

    std::vector<const ClassifiedFeature*> order;
    for (const auto& f : a.features) {
        order.push_back(&f);
    }
    std::stable_sort(order.begin(), order.end(), [](const ClassifiedFeature* x, const ClassifiedFeature* y) {
        return x->pair.birth != y->pair.birth ? x->pair.birth < y->pair.birth : x->pair.death < y->pair.death;
    });
    Json features = Json::array();
    for (const ClassifiedFeature* f : order) {
        Json loc = f->location ? Json::array({f->location->x, f->location->y}) : Json(nullptr);
        features.push_back({{"class", to_string(f->cls)},
                            {"birth", in_units(f->pair.birth, u)},
                            {"death", f->pair.infinite ? Json(nullptr) : Json(in_units(f->pair.death, u))},
                            {"persistence", f->persistence},
                            {"location", std::move(loc)},
                            {"below_threshold", f->below_threshold}});
    }

    Json j = {{"schema_version", kSchemaVersion},
              {"parameters", std::move(params)},
              {"hull_points", std::move(hull)},
              {"diagram_x", diagram_to_json(a.diagram_x, u)},
              {"diagram_xu", diagram_to_json(a.diagram_xu, u)},
              {"features", std::move(features)},
              {"counts", {{"internal", r.counts.internal}, {"external", r.counts.external}}}};
    if (r.area_ratio) {
        j["area_ratio"] = *r.area_ratio;
    }
    if (r.lambda1_sq_integral) {
        j["lambda1_sq_integral"] = *r.lambda1_sq_integral;
    }
    return j;
}

inline void write_report(const AnalysisReport& r, const std::string& path) { write_json_file(report_to_json(r), path); }

}  // namespace branchtopo
