#pragma once

// Command-line surface. run() is the whole program; main() only forwards to it
// so tests can drive every subcommand in-process.
//
// Exit codes: 0 success, 2 usage error, 3 input or parse error,
// 4 degenerate geometry.

#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "error.hpp"
#include "io.hpp"
#include "landscape.hpp"
#include "report.hpp"
#include "structures.hpp"
#include "svg.hpp"
#include "testkit.hpp"

namespace branchtopo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInput = 3;
inline constexpr int kExitDegenerate = 4;

/// Flag combinations CLI11 cannot express, such as --area-ratio on CSV input.
class UsageError : public Error {
public:
    using Error::Error;
};

namespace detail {

inline PersistenceDiagram scenario_diagram(const Json& j)
{
    if (j.is_object() && j.contains("fixture")) {
        const PointCloud cloud = testkit::generate_fixture(testkit::fixture_spec_from_json(j["fixture"]));
        if (j.contains("hull_interval")) {
            return compute_persistence(
                alpha_complex(augment_with_hull(cloud, j["hull_interval"].get<double>()).augmented));
        }
        return compute_persistence(alpha_complex(cloud));
    }
    return diagram_from_json(j);
}

inline std::vector<PointVelocity> velocities_from_json(const Json& j)
{
    std::vector<PointVelocity> v;
    for (const Json& e : j) {
        if (!e.is_array() || e.size() != 2) {
            throw ParseError("velocity must be [alpha, beta]: " + e.dump());
        }
        v.push_back({e[0].get<double>(), e[1].get<double>()});
    }
    return v;
}

}  // namespace detail

/// Scenario document for `derivcheck`:
///   {"mode": "points" | "theta" | "y", "diagram": D, "groups": [D, ...],
///    "velocities": [[alpha, beta], ...], "group_velocities": [[...], ...],
///    "theta": t, "y": y, "scale": s}
/// where each D is a diagram (array of pairs) or {"fixture": spec} with an
/// optional "hull_interval", meaning PD1 of the generated cloud.
inline DerivativeScenario derivative_scenario_from_json(const Json& j)
{
    DerivativeScenario s;
    try {
        const std::string mode = j.value("mode", std::string("points"));
        if (mode == "points") {
            s.mode = DerivativeMode::Points;
        } else if (mode == "theta") {
            s.mode = DerivativeMode::Theta;
        } else if (mode == "y") {
            s.mode = DerivativeMode::Y;
        } else {
            throw ParseError("unknown mode '" + mode + "'");
        }
        s.diagram = finite_bars(detail::scenario_diagram(j.at("diagram")));
        for (const Json& g : j.at("groups")) {
            s.groups.push_back(finite_bars(detail::scenario_diagram(g)));
        }
        if (j.contains("velocities")) {
            s.velocities = detail::velocities_from_json(j["velocities"]);
        }
        if (j.contains("group_velocities")) {
            for (const Json& g : j["group_velocities"]) {
                s.group_velocities.push_back(detail::velocities_from_json(g));
            }
        }
        s.theta = j.value("theta", s.theta);
        s.y = j.value("y", s.y);
        s.scale = j.value("scale", s.scale);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("scenario: ") + e.what());
    }
    return s;
}

namespace detail {

struct Options {
    std::string input, format = "csv", out_json, out_svg, units = "radius";
    double hull_interval = 20.0, persistence_min = 0.0, match_tol = 1e-6;
    std::optional<double> min_internal, min_external, augment_hull;
    bool area_ratio = false, landscape_integral = false, integral_of_square = false;
    double binarize_threshold = kDefaultBinarizeThreshold;
    std::size_t stride = 1;
    std::string diagram, scenario;
    double theta = 0.0, y = 0.0;
    std::vector<std::string> groups;
};

inline void emit(const Json& j, const std::string& path, std::ostream& out)
{
    if (path.empty()) {
        out << to_json_text(j);
    } else {
        write_json_file(j, path);
    }
}

inline void add_input_options(CLI::App* cmd, Options& o)
{
    cmd->add_option("--input", o.input, "Input file")->required();
    cmd->add_option("--format", o.format, "Input format")
        ->required()
        ->check(CLI::IsMember({"csv", "pgm", "png"}));
    cmd->add_option("--binarize-threshold", o.binarize_threshold,
                    "Images: foreground iff luminance (0..255) >= this value")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 256.0));
    cmd->add_option("--stride", o.stride, "Images: keep every Nth foreground pixel in row-major order")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
}

inline PointCloud load_input(const Options& o)
{
    return load_point_cloud(o.input, input_format_from_string(o.format), {o.binarize_threshold, o.stride});
}

inline Json input_parameters(const Options& o)
{
    Json j = {{"input", o.input}, {"format", o.format}};
    if (o.format != "csv") {
        j["binarize_threshold"] = o.binarize_threshold;
        j["stride"] = o.stride;
    }
    return j;
}

inline void analyze(const Options& o, std::ostream& out)
{
    if (o.area_ratio && o.format == "csv") {
        throw UsageError("--area-ratio needs image input (pgm or png)");
    }
    AnalysisParams params;
    params.hull_interval = o.hull_interval;
    params.match_tol = o.match_tol;
    params.persistence_min_internal = o.min_internal.value_or(o.persistence_min);
    params.persistence_min_external = o.min_external.value_or(o.persistence_min);
    params.units = units_from_string(o.units);

    const PointCloud cloud = load_input(o);
    AnalysisReport report = make_report(classify_structures(cloud, params));
    report.input = input_parameters(o);
    if (o.area_ratio) {
        report.area_ratio = area_ratio(load_image(o.input, input_format_from_string(o.format), o.binarize_threshold));
    }
    if (o.landscape_integral) {
        report.lambda1_sq_integral = internal_lambda1_sq_integral(report.analysis);
    }
    const Json j = report_to_json(report);
    if (!o.out_svg.empty()) {
        write_overlay_svg(cloud, report.analysis.augmentation.hull_points, report.analysis.features, o.out_svg);
    }
    if (o.out_json.empty()) {
        out << to_json_text(j);
    } else {
        write_json_file(j, o.out_json);
        out << "internal " << report.counts.internal << "\nexternal " << report.counts.external << '\n';
    }
}

inline void diagram(const Options& o, std::ostream& out)
{
    const PointCloud cloud = load_input(o);
    Json params = input_parameters(o);
    Json j = {{"schema_version", kSchemaVersion}};
    PersistenceDiagram d;
    if (o.augment_hull) {
        const Augmentation aug = augment_with_hull(cloud, *o.augment_hull);
        params["augment_hull"] = *o.augment_hull;
        Json hull = Json::array();
        for (const Point2 p : aug.hull_points) {
            hull.push_back(Json::array({p.x, p.y}));
        }
        j["parameters"] = std::move(params);
        j["hull_points"] = std::move(hull);
        d = compute_persistence(alpha_complex(aug.augmented));
    } else {
        j["parameters"] = std::move(params);
        d = compute_persistence(alpha_complex(cloud));
    }
    j["diagram"] = diagram_to_json(d);
    emit(j, o.out_json, out);
}

inline void landscape(const Options& o, std::ostream& out)
{
    const Landscape l = build_landscape(diagram_from_json(read_json_file(o.diagram)));
    emit(landscape_to_json(l, o.integral_of_square ? std::optional(integral_of_square(l)) : std::nullopt), o.out_json,
         out);
}

inline void glandscape(const Options& o, std::ostream& out)
{
    const PersistenceDiagram d = diagram_from_json(read_json_file(o.diagram));
    emit(generalized_landscape_to_json(build_generalized_landscape(d, o.theta, o.y)), o.out_json, out);
}

/// Each group file is {"diagrams": [D, ...]}; prints the 0-based index of the
/// group whose average landscape is nearest in L2.
inline void classify(const Options& o, std::ostream& out)
{
    const Landscape input = build_landscape(diagram_from_json(read_json_file(o.diagram)));
    std::vector<Landscape> averages;
    for (const std::string& path : o.groups) {
        const Json g = read_json_file(path);
        if (!g.is_object() || !g.contains("diagrams") || !g["diagrams"].is_array() || g["diagrams"].empty()) {
            throw ParseError(path + ": expected {\"diagrams\": [...]} with at least one diagram");
        }
        std::vector<Landscape> members;
        for (const Json& d : g["diagrams"]) {
            members.push_back(build_landscape(diagram_from_json(d)));
        }
        averages.push_back(average(std::span<const Landscape>(members)));
    }
    out << classify_by_nearest_average(input, std::span<const Landscape>(averages)) << '\n';
}

inline void derivcheck(const Options& o, std::ostream& out)
{
    const DerivativeReport r = derivative_check(derivative_scenario_from_json(read_json_file(o.scenario)));
    const auto g = [](double v) { return branchtopo::detail::format_real(v); };
    out << "d0 " << g(r.d0) << '\n';
    out << "eps forward backward\n";
    for (std::size_t i = 0; i < r.eps.size(); ++i) {
        out << g(r.eps[i]) << ' ' << g(r.forward_slopes[i]) << ' ' << g(r.backward_slopes[i]) << '\n';
    }
    out << "limit " << g(r.limit_estimate) << '\n';
    out << "baseline_contact " << (r.baseline_contact ? "true" : "false") << '\n';
    out << "converged " << (r.converged ? "true" : "false") << '\n';
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    detail::Options o;
    CLI::App app{"Internal/external branch structures from persistent homology, and persistence landscapes",
                 "branchtopo"};
    app.require_subcommand(1);

    auto* analyze = app.add_subcommand("analyze", "Classify loops as internal or external");
    detail::add_input_options(analyze, o);
    analyze->add_option("--hull-interval", o.hull_interval, "Arc-length spacing of hull samples (px)")
        ->required()
        ->check(CLI::PositiveNumber);
    analyze->add_option("--persistence-min", o.persistence_min,
                        "Persistence threshold, in the --units scale")
        ->required()
        ->check(CLI::NonNegativeNumber);
    analyze->add_option("--persistence-min-internal", o.min_internal, "Internal threshold (default --persistence-min)")
        ->check(CLI::NonNegativeNumber);
    analyze->add_option("--persistence-min-external", o.min_external, "External threshold (default --persistence-min)")
        ->check(CLI::NonNegativeNumber);
    analyze->add_option("--match-tol", o.match_tol, "L-infinity tolerance for matching diagram points")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    analyze->add_option("--out-json", o.out_json, "Report path (default: stdout)");
    analyze->add_option("--out-svg", o.out_svg, "Overlay figure path");
    analyze->add_flag("--area-ratio", o.area_ratio, "Report foreground pixels / hull area (image input only)");
    analyze->add_flag("--landscape-integral", o.landscape_integral,
                      "Report the integral of lambda_1 squared over internal features above threshold");
    analyze->add_option("--units", o.units,
                        "Output scale for birth/death: radius, or radius2 (squared). Persistence thresholds are "
                        "read in the same scale; computation is unchanged")
        ->capture_default_str()
        ->check(CLI::IsMember({"radius", "radius2"}));

    auto* diagram = app.add_subcommand("diagram", "Raw PD1 of a cloud, optionally hull-augmented");
    detail::add_input_options(diagram, o);
    diagram->add_option("--augment-hull", o.augment_hull, "Add hull samples at this spacing (px)")
        ->check(CLI::PositiveNumber);
    diagram->add_option("--out-json", o.out_json, "Output path")->required();

    auto* landscape = app.add_subcommand("landscape", "Persistence landscape of a diagram");
    landscape->add_option("--diagram", o.diagram, "Diagram or report JSON")->required();
    landscape->add_option("--out-json", o.out_json, "Output path")->required();
    landscape->add_flag("--integral-of-square", o.integral_of_square, "Also report the integral of lambda_1 squared");

    auto* glandscape = app.add_subcommand("glandscape", "Generalized landscape with baseline (theta, y)");
    glandscape->add_option("--diagram", o.diagram, "Diagram or report JSON")->required();
    glandscape->add_option("--theta", o.theta, "Baseline angle (radians)")->required();
    glandscape->add_option("--y", o.y, "Baseline y-intercept")->required();
    glandscape->add_option("--out-json", o.out_json, "Output path")->required();

    auto* classify = app.add_subcommand("classify", "Nearest group average landscape; prints the group index");
    classify->add_option("--input", o.diagram, "Diagram JSON to classify")->required();
    classify->add_option("--groups", o.groups, "Group files, each {\"diagrams\": [...]}")->required();

    auto* derivcheck = app.add_subcommand("derivcheck", "Secant slopes of the distance to a group average");
    derivcheck->add_option("--scenario", o.scenario, "Scenario JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (analyze->parsed()) detail::analyze(o, out);
        else if (diagram->parsed()) detail::diagram(o, out);
        else if (landscape->parsed()) detail::landscape(o, out);
        else if (glandscape->parsed()) detail::glandscape(o, out);
        else if (classify->parsed()) detail::classify(o, out);
        else if (derivcheck->parsed()) detail::derivcheck(o, out);
        return kExitOk;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DegenerateHull& e) {
        err << "degenerate geometry: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const CollinearInput& e) {
        err << "degenerate geometry: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const NoDeathSimplex& e) {
        err << "degenerate geometry: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const Error& e) {
        err << "input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const nlohmann::json::exception& e) {
        err << "input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        err << "input error: " << e.what() << '\n';
        return kExitInput;
    }
}

}  // namespace branchtopo::cli
