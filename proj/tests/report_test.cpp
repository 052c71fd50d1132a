#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <regex>
#include <string>

#include <branchtopo/report.hpp>
#include <branchtopo/svg.hpp>
#include <branchtopo/testkit.hpp>

namespace branchtopo {
namespace {

StructureAnalysis analyze_fixture(testkit::FixtureKind kind, Units units = Units::Radius)
{
    testkit::FixtureSpec spec;
    spec.kind = kind;
    AnalysisParams params;
    params.persistence_min_internal = params.persistence_min_external = 5.0;
    params.units = units;
    return classify_structures(testkit::generate_fixture(spec), params);
}

std::size_t occurrences(const std::string& text, const std::string& needle)
{
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) {
        ++n;
    }
    return n;
}

TEST(JsonText, RealsUseSeventeenDigits)
{
    EXPECT_EQ(to_json_text(Json(0.1)), "0.10000000000000001\n");
    EXPECT_EQ(to_json_text(Json(0.5)), "0.5\n");
    EXPECT_EQ(to_json_text(Json(std::numeric_limits<double>::infinity())), "null\n");
    const double third = 1.0 / 3.0;
    EXPECT_EQ(Json::parse(to_json_text(Json(third))).get<double>(), third);
}

TEST(JsonText, KeepsInsertionOrder)
{
    Json j;
    j["z"] = 1;
    j["a"] = Json::array({1.5, 2});
    EXPECT_EQ(to_json_text(j), "{\n  \"z\": 1,\n  \"a\": [1.5, 2]\n}\n");
}

TEST(DiagramJson, AcceptsObjectsPairsAndReports)
{
    const Json objects = Json::parse(R"([{"birth": 1, "death": 2}, {"birth": 0.5, "death": null}])");
    const PersistenceDiagram d = diagram_from_json(objects);
    ASSERT_EQ(d.size(), 2u);
    EXPECT_EQ(d.pairs[0].birth, 1.0);
    EXPECT_EQ(d.pairs[0].death, 2.0);
    EXPECT_TRUE(d.pairs[1].infinite);

    EXPECT_EQ(diagram_from_json(Json::parse(R"({"diagram": [[1, 3]]})")).pairs[0].death, 3.0);
    EXPECT_EQ(diagram_from_json(Json::parse(R"({"diagram_xu": [[2, 4]]})")).pairs[0].birth, 2.0);
}

TEST(DiagramJson, MalformedIsParseError)
{
    EXPECT_THROW(diagram_from_json(Json::parse(R"({"other": []})")), ParseError);
    EXPECT_THROW(diagram_from_json(Json::parse(R"([[1, 2, 3]])")), ParseError);
    EXPECT_THROW(diagram_from_json(Json::parse(R"([["a", 2]])")), ParseError);
    EXPECT_THROW(diagram_from_json(Json::parse(R"([{"birth": 1}])")), ParseError);
}

TEST(DiagramJson, SortedByBirthThenDeath)
{
    const auto d = PersistenceDiagram::from_points({{2, 3}, {1, 5}, {1, 4}});
    const Json j = diagram_to_json(d, Units::Radius2);
    ASSERT_EQ(j.size(), 3u);
    EXPECT_EQ(j[0]["death"].get<double>(), 16.0);
    EXPECT_EQ(j[1]["death"].get<double>(), 25.0);
    EXPECT_EQ(j[2]["birth"].get<double>(), 4.0);
}

TEST(Report, SchemaAndKeyOrder)
{
    const Json j = report_to_json(make_report(analyze_fixture(testkit::FixtureKind::CShape)));
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items()) {
        keys.push_back(k);
    }
    const std::vector<std::string> expected{"schema_version", "parameters", "hull_points", "diagram_x",
                                            "diagram_xu",     "features",   "counts"};
    EXPECT_EQ(keys, expected);
    EXPECT_EQ(j["schema_version"], 1);
    EXPECT_EQ(j["parameters"]["units"], "radius");
}

TEST(Report, CountsAgreeWithFeatureFlags)
{
    for (const auto kind : {testkit::FixtureKind::Ring, testkit::FixtureKind::CShape, testkit::FixtureKind::FigureEight}) {
        const Json j = report_to_json(make_report(analyze_fixture(kind)));
        std::size_t internal = 0, external = 0;
        for (const Json& f : j["features"]) {
            if (f["below_threshold"].get<bool>()) {
                continue;
            }
            internal += f["class"] == "internal" ? 1 : 0;
            external += f["class"] == "external" ? 1 : 0;
        }
        EXPECT_EQ(j["counts"]["internal"].get<std::size_t>(), internal);
        EXPECT_EQ(j["counts"]["external"].get<std::size_t>(), external);
    }
}

TEST(Report, FeaturesSortedByBirthThenDeath)
{
    const Json j = report_to_json(make_report(analyze_fixture(testkit::FixtureKind::FigureEight)));
    const Json& f = j["features"];
    ASSERT_GE(f.size(), 2u);
    for (std::size_t i = 1; i < f.size(); ++i) {
        const auto prev = std::pair(f[i - 1]["birth"].get<double>(), f[i - 1]["death"].get<double>());
        const auto cur = std::pair(f[i]["birth"].get<double>(), f[i]["death"].get<double>());
        EXPECT_LE(prev, cur);
    }
}

TEST(Report, SquaredUnitsOnOutputOnly)
{
    const StructureAnalysis r = analyze_fixture(testkit::FixtureKind::CShape);
    const StructureAnalysis r2 = analyze_fixture(testkit::FixtureKind::CShape, Units::Radius2);
    const Json j = report_to_json(make_report(r));
    const Json j2 = report_to_json(make_report(r2));
    ASSERT_EQ(j["diagram_xu"].size(), j2["diagram_xu"].size());
    for (std::size_t i = 0; i < j["diagram_xu"].size(); ++i) {
        const double b = j["diagram_xu"][i]["birth"].get<double>();
        EXPECT_EQ(j2["diagram_xu"][i]["birth"].get<double>(), b * b);
    }
    EXPECT_EQ(j["hull_points"], j2["hull_points"]);
    EXPECT_EQ(j2["parameters"]["units"], "radius2");
}

TEST(Report, DiagramRoundTripRebuildsTheLandscape)
{
    const StructureAnalysis a = analyze_fixture(testkit::FixtureKind::FigureEight);
    const Json reread = Json::parse(to_json_text(report_to_json(make_report(a))));
    const Landscape direct = build_landscape(a.diagram_xu);
    const Landscape rebuilt = build_landscape(diagram_from_json(reread));
    ASSERT_EQ(direct.size(), rebuilt.size());
    for (std::size_t k = 0; k < direct.size(); ++k) {
        const auto& p = direct.levels[k].breakpoints();
        const auto& q = rebuilt.levels[k].breakpoints();
        ASSERT_EQ(p.size(), q.size());
        for (std::size_t i = 0; i < p.size(); ++i) {
            EXPECT_NEAR(p[i].t, q[i].t, 1e-12);
            EXPECT_NEAR(p[i].v, q[i].v, 1e-12);
        }
    }
}

TEST(Report, OptionalFields)
{
    AnalysisReport r = make_report(analyze_fixture(testkit::FixtureKind::Ring));
    EXPECT_FALSE(report_to_json(r).contains("area_ratio"));
    r.area_ratio = 0.25;
    r.lambda1_sq_integral = internal_lambda1_sq_integral(r.analysis);
    const Json j = report_to_json(r);
    EXPECT_EQ(j["area_ratio"].get<double>(), 0.25);
    EXPECT_TRUE(j.contains("lambda1_sq_integral"));
}

TEST(Report, LambdaOneIntegralOfASingleInternalBar)
{
    // one internal bar [b, d]: lambda_1 is a tent of height h = (d - b) / 2,
    // whose squared integral is 2 h^3 / 3
    StructureAnalysis a;
    ClassifiedFeature f;
    f.pair.birth = 1.0;
    f.pair.death = 5.0;
    f.cls = FeatureClass::Internal;
    a.features.push_back(f);
    f.cls = FeatureClass::External;
    a.features.push_back(f);
    f.cls = FeatureClass::Internal;
    f.below_threshold = true;
    a.features.push_back(f);
    EXPECT_NEAR(internal_lambda1_sq_integral(a), 2.0 * 8.0 / 3.0, 1e-12);
}

TEST(Report, IdenticalInputsGiveIdenticalText)
{
    const auto once = to_json_text(report_to_json(make_report(analyze_fixture(testkit::FixtureKind::CShape))));
    const auto twice = to_json_text(report_to_json(make_report(analyze_fixture(testkit::FixtureKind::CShape))));
    EXPECT_EQ(once, twice);
}

TEST(Landscapes, GeneralizedAtTheIdentityBaselineMatches)
{
    const auto d = PersistenceDiagram::from_points({{0, 2}, {1, 4}, {1.5, 2.5}});
    const Json plain = landscape_to_json(build_landscape(d));
    const Json general = generalized_landscape_to_json(build_generalized_landscape(d, std::numbers::pi / 4, 0.0));
    EXPECT_EQ(to_json_text(plain["levels"]), to_json_text(general["levels"]));
    EXPECT_TRUE(general["negative_levels"].empty());
}

TEST(Svg, CShapeHasOneRedMarkerAtTheReportedLocation)
{
    testkit::FixtureSpec spec;
    spec.kind = testkit::FixtureKind::CShape;
    const PointCloud cloud = testkit::generate_fixture(spec);
    const StructureAnalysis a = analyze_fixture(spec.kind);
    const std::string svg = overlay_svg(cloud, a.augmentation.hull_points, a.features);
    EXPECT_EQ(occurrences(svg, "class=\"external\""), count_by_class(a.features).external);
    EXPECT_EQ(occurrences(svg, "class=\"internal\""), count_by_class(a.features).internal);
    EXPECT_EQ(occurrences(svg, "fill=\"#d62728\"/>"), count_by_class(a.features).external + 1);  // + legend
    EXPECT_NE(svg.find("<g id=\"legend\""), std::string::npos);
}

TEST(Svg, NoFeaturesMeansOnlyCloudAndHull)
{
    const PointCloud cloud{{0, 0}, {4, 0}, {0, 3}};
    const std::vector<Point2> hull{{2, 0}};
    const std::string svg = overlay_svg(cloud, hull, {});
    EXPECT_EQ(occurrences(svg, "class="), 0u);
    EXPECT_EQ(occurrences(svg, "r=\"2\"/>"), 3u);
    EXPECT_EQ(occurrences(svg, "r=\"3\"/>"), 1u);
}

TEST(Svg, YAxisPointsDown)
{
    const PointCloud cloud{{0, 0}, {0, 10}};
    const std::string svg = overlay_svg(cloud, {}, {});
    std::smatch m;
    const std::regex cy("<circle cx=\"[0-9.]+\" cy=\"([0-9.]+)\" r=\"2\"/>");
    std::vector<double> ys;
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), cy); it != std::sregex_iterator(); ++it) {
        ys.push_back(std::stod((*it)[1]));
    }
    ASSERT_EQ(ys.size(), 2u);
    EXPECT_LT(ys[0], ys[1]);
}

}  // namespace
}  // namespace branchtopo
