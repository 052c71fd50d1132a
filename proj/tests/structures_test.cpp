#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <branchtopo/structures.hpp>
#include <branchtopo/testkit.hpp>

#include "test_support.hpp"

namespace branchtopo {
namespace {

const PointCloud kUnitSquare{{0, 0}, {1, 0}, {1, 1}, {0, 1}};

testkit::FixtureSpec c_shape_spec()
{
    testkit::FixtureSpec spec;
    spec.kind = testkit::FixtureKind::CShape;
    return spec;
}

std::size_t count_class(const StructureAnalysis& a, FeatureClass cls)
{
    std::size_t n = 0;
    for (const auto& f : a.features) {
        n += f.cls == cls ? 1 : 0;
    }
    return n;
}

TEST(Augment, CornersOnlyWhenIntervalIsTheSide)
{
    const Augmentation a = augment_with_hull(kUnitSquare, 1.0);
    EXPECT_EQ(a.hull_points.size(), 4u);
    EXPECT_EQ(a.augmented, kUnitSquare);
}

TEST(Augment, HalfIntervalAddsMidpoints)
{
    const Augmentation a = augment_with_hull(kUnitSquare, 0.5);
    ASSERT_EQ(a.augmented.size(), 8u);
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_EQ(a.augmented[i], kUnitSquare[i]);
    }
    for (std::size_t i = 4; i < 8; ++i) {
        const Point2 p = a.augmented[i];
        // an edge midpoint has one coordinate 0.5 and the other 0 or 1
        EXPECT_TRUE((p.x == 0.5 && (p.y == 0 || p.y == 1)) || (p.y == 0.5 && (p.x == 0 || p.x == 1)));
    }
}

TEST(Augment, CShapeSampleCount)
{
    // hull of the 15 remaining ring points: 14 one-step chords and one
    // chord spanning the two-step gap
    const double r = 50.0, step = 2 * std::numbers::pi / 16;
    const double perimeter = 14 * 2 * r * std::sin(step / 2) + 2 * r * std::sin(step);
    const Augmentation a = augment_with_hull(testkit::generate_fixture(c_shape_spec()), 20.0);
    EXPECT_EQ(a.hull_points.size(), static_cast<std::size_t>(std::floor(perimeter / 20.0)));
}

TEST(Augment, CollinearCloudIsDegenerate)
{
    EXPECT_THROW(augment_with_hull(PointCloud{{0, 0}, {1, 1}, {2, 2}}, 1.0), DegenerateHull);
}

TEST(Match, IdenticalDiagramsMatchCompletely)
{
    const auto d = PersistenceDiagram::from_points({{1, 2}, {1, 2}, {0.5, 3}});
    const DiagramMatching m = match_diagrams(d, d, 1e-6);
    EXPECT_EQ(m.matched.size(), 3u);
    EXPECT_TRUE(m.unmatched_x.empty());
    EXPECT_TRUE(m.unmatched_xu.empty());
}

TEST(Match, StrictSuperset)
{
    const auto x = PersistenceDiagram::from_points({{1, 2}});
    const auto xu = PersistenceDiagram::from_points({{1, 2}, {3, 4}});
    const DiagramMatching m = match_diagrams(x, xu, 1e-6);
    ASSERT_EQ(m.matched.size(), 1u);
    EXPECT_EQ(m.matched[0], (std::pair<std::size_t, std::size_t>{0, 0}));
    EXPECT_TRUE(m.unmatched_x.empty());
    EXPECT_EQ(m.unmatched_xu, std::vector<std::size_t>{1});
}

TEST(Match, JustOutsideToleranceDoesNotMatch)
{
    const double tol = 1e-6;
    const auto x = PersistenceDiagram::from_points({{1, 2}});
    const auto xu = PersistenceDiagram::from_points({{1, 2 + 2 * tol}});
    const DiagramMatching m = match_diagrams(x, xu, tol);
    EXPECT_TRUE(m.matched.empty());
    EXPECT_EQ(m.unmatched_x, std::vector<std::size_t>{0});
    EXPECT_EQ(m.unmatched_xu, std::vector<std::size_t>{0});
}

TEST(Match, MultiplicityIsConsumed)
{
    const auto x = PersistenceDiagram::from_points({{1, 2}});
    const auto xu = PersistenceDiagram::from_points({{1, 2}, {1, 2}});
    const DiagramMatching m = match_diagrams(x, xu, 1e-6);
    EXPECT_EQ(m.matched.size(), 1u);
    EXPECT_EQ(m.unmatched_xu.size(), 1u);
}

TEST(Match, InfinitePairsOnlyMatchEachOther)
{
    PersistenceDiagram x = PersistenceDiagram::from_points({{1, 2}});
    PersistenceDiagram xu = x;
    xu.pairs[0].infinite = true;
    xu.pairs[0].death = std::numeric_limits<double>::infinity();
    EXPECT_TRUE(match_diagrams(x, xu, 1e9).matched.empty());
    EXPECT_EQ(match_diagrams(xu, xu, 0.0).matched.size(), 1u);
}

TEST(DeathLocation, UnitSquare)
{
    const auto d = compute_persistence(alpha_complex(kUnitSquare));
    ASSERT_EQ(d.size(), 1u);
    const Point2 c = death_location(kUnitSquare, d.pairs[0]);
    EXPECT_NEAR(c.x, 0.5, 1e-12);
    EXPECT_NEAR(c.y, 0.5, 1e-12);
}

TEST(DeathLocation, EquilateralTriangle)
{
    const PointCloud tri{{0, 0}, {2, 0}, {1, std::sqrt(3.0)}};
    PersistencePair p;
    p.death_simplex = Simplex{0, 1, 2};
    const Point2 c = death_location(tri, p);
    EXPECT_NEAR(c.x, 1.0, 1e-12);
    EXPECT_NEAR(c.y, 1.0 / std::sqrt(3.0), 1e-12);
}

TEST(DeathLocation, InfinitePairHasNone)
{
    PersistencePair p;
    p.infinite = true;
    EXPECT_THROW(death_location(kUnitSquare, p), NoDeathSimplex);
}

TEST(Classify, IntervalBeyondPerimeterLeavesEverythingInternal)
{
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const PointCloud cloud = test::random_cloud(seed, 25);
        AnalysisParams params;
        params.hull_interval = 2 * convex_hull(cloud).perimeter();
        const StructureAnalysis a = classify_structures(cloud, params);
        // the single sample is the anchor, a cloud point
        EXPECT_EQ(a.augmentation.augmented, cloud);
        EXPECT_EQ(count_class(a, FeatureClass::External), 0u);
        EXPECT_EQ(count_class(a, FeatureClass::Vanished), 0u);
        EXPECT_EQ(count_class(a, FeatureClass::Internal), a.diagram_x.size());
    }
}

TEST(Classify, FeaturesPartitionBothDiagrams)
{
    for (std::uint64_t seed = 100; seed < 140; ++seed) {
        const PointCloud cloud = test::random_cloud(seed, 40);
        AnalysisParams params;
        params.hull_interval = 15.0;
        const StructureAnalysis a = classify_structures(cloud, params);
        const std::size_t internal = count_class(a, FeatureClass::Internal);
        const std::size_t external = count_class(a, FeatureClass::External);
        const std::size_t vanished = count_class(a, FeatureClass::Vanished);
        EXPECT_EQ(internal + external, a.diagram_xu.size());
        EXPECT_EQ(internal + vanished, a.diagram_x.size());
        ASSERT_EQ(a.features.size(), internal + external + vanished);
        for (std::size_t j = 0; j < a.diagram_xu.size(); ++j) {
            EXPECT_NE(a.features[j].cls, FeatureClass::Vanished);
            EXPECT_EQ(a.features[j].pair.birth, a.diagram_xu.pairs[j].birth);
        }
    }
}

TEST(Classify, HullSamplesCreateNoSliverBars)
{
    // every loop of a planar cloud is filled once r reaches the radius of the
    // cloud's enclosing ball, which is at most its diameter
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const PointCloud cloud = test::random_cloud(seed, 40);
        for (const double interval : {3.0, 7.5, 15.0}) {
            const Augmentation a = augment_with_hull(cloud, interval);
            double diameter = 0.0;
            for (const Point2 p : a.augmented) {
                for (const Point2 q : a.augmented) {
                    diameter = std::max(diameter, distance(p, q));
                }
            }
            for (const auto& p : compute_persistence(alpha_complex(a.augmented)).pairs) {
                ASSERT_FALSE(p.infinite);
                ASSERT_LE(p.death, diameter) << "seed " << seed << " interval " << interval;
            }
        }
    }
}

TEST(Classify, LocationIsDeathCircumcentre)
{
    const PointCloud cloud = test::random_cloud(7, 30);
    const StructureAnalysis a = classify_structures(cloud, AnalysisParams{});
    for (const auto& f : a.features) {
        ASSERT_TRUE(f.location.has_value());
        const PointCloud& source = f.cls == FeatureClass::Vanished ? cloud : a.augmentation.augmented;
        const Simplex& t = *f.pair.death_simplex;
        // equidistant from the three death-triangle vertices
        const double r0 = distance(*f.location, source[t[0]]);
        EXPECT_NEAR(distance(*f.location, source[t[1]]), r0, 1e-9 * r0);
        EXPECT_NEAR(distance(*f.location, source[t[2]]), r0, 1e-9 * r0);
    }
}

TEST(Classify, CShapeGainsAnExternalCavity)
{
    const PointCloud cloud = testkit::generate_fixture(c_shape_spec());
    AnalysisParams params;
    params.persistence_min_internal = params.persistence_min_external = 5.0;
    const StructureAnalysis a = classify_structures(cloud, params);
    EXPECT_GE(count_by_class(a.features).external, 1u);
}

TEST(Classify, ThresholdsApplyPerClassAndUnits)
{
    const PointCloud cloud = testkit::generate_fixture(c_shape_spec());
    AnalysisParams params;
    const StructureAnalysis base = classify_structures(cloud, params);
    for (const auto& f : base.features) {
        EXPECT_DOUBLE_EQ(f.persistence, f.pair.death - f.pair.birth);
        EXPECT_EQ(f.below_threshold, !(f.persistence > 0.0));
    }

    params.units = Units::Radius2;
    params.persistence_min_external = 1e9;
    const StructureAnalysis squared = classify_structures(cloud, params);
    EXPECT_EQ(count_by_class(squared.features).external, 0u);
    for (const auto& f : squared.features) {
        EXPECT_DOUBLE_EQ(f.persistence, f.pair.death * f.pair.death - f.pair.birth * f.pair.birth);
        if (f.cls != FeatureClass::External) {
            EXPECT_FALSE(f.below_threshold);
        }
    }
}

TEST(Classify, InvalidParamsRejected)
{
    AnalysisParams params;
    params.hull_interval = 0.0;
    EXPECT_THROW(classify_structures(kUnitSquare, params), std::invalid_argument);
    params.hull_interval = 1.0;
    params.match_tol = -1.0;
    EXPECT_THROW(classify_structures(kUnitSquare, params), std::invalid_argument);
}

TEST(Classify, ThreeStageExternalDisappears)
{
    testkit::FixtureSpec spec;
    spec.kind = testkit::FixtureKind::ThreeStage;
    const testkit::ThreeStage stages = testkit::three_stage(spec);
    std::vector<Point2> u1 = stages.left_plug, u2 = stages.left_plug;
    u2.insert(u2.end(), stages.lower_plug.begin(), stages.lower_plug.end());
    AnalysisParams params;
    params.persistence_min_internal = params.persistence_min_external = 5.0;
    const auto ext_b =
        class_points(classify_augmented(stages.a, augment_with_points(stages.a, u1), params).features,
                     FeatureClass::External);
    const auto ext_c =
        class_points(classify_augmented(stages.a, augment_with_points(stages.a, u2), params).features,
                     FeatureClass::External);

    // births are half the longest remaining gap: the lower chord at (b), half
    // the plugged left chord at (c)
    const double r = 50.0, step = 2 * std::numbers::pi / 16;
    ASSERT_EQ(ext_b.size(), 1u);
    ASSERT_EQ(ext_c.size(), 1u);
    EXPECT_NEAR(ext_b[0].first, r * std::sin(step), 1e-9);
    EXPECT_NEAR(ext_c[0].first, r * std::sin(1.5 * step) / 2, 1e-9);
    EXPECT_GT(std::max(std::abs(ext_b[0].first - ext_c[0].first), std::abs(ext_b[0].second - ext_c[0].second)),
              params.match_tol);
}

TEST(Counts, EmptyAndThresholded)
{
    EXPECT_EQ(count_by_class({}), (ClassCounts{0, 0}));

    std::vector<ClassifiedFeature> features(4);
    features[0].cls = FeatureClass::Internal;
    features[1].cls = FeatureClass::External;
    features[2].cls = FeatureClass::External;
    features[2].below_threshold = true;
    features[3].cls = FeatureClass::Vanished;
    EXPECT_EQ(count_by_class(features), (ClassCounts{1, 1}));
}

TEST(AreaRatio, FullBlock)
{
    BinaryImage image(10, 10, std::vector<bool>(100, true));
    EXPECT_NEAR(area_ratio(image), 100.0 / 81.0, 1e-12);
}

TEST(AreaRatio, SingleRowIsDegenerate)
{
    BinaryImage image(10, 1, std::vector<bool>(10, true));
    EXPECT_THROW(area_ratio(image), DegenerateHull);
}

TEST(AreaRatio, GrowsWithStrokeWidth)
{
    double previous = 0.0;
    for (int w = 1; w <= 8; ++w) {
        const BinaryImage image(128, 128, testkit::branch_model_mask(w, 128));
        const double ratio = area_ratio(image);
        EXPECT_GT(ratio, previous) << "width " << w;
        previous = ratio;
    }
}

}  // namespace
}  // namespace branchtopo
