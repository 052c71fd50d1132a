#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include <branchtopo/testkit.hpp>

namespace branchtopo::testkit {
namespace {

bool contains(const PointCloud& cloud, Point2 p)
{
    return std::any_of(cloud.begin(), cloud.end(), [&](Point2 q) { return distance(p, q) <= kDedupTolerance; });
}

TEST(Fixture, RingPointsLieOnTheCircle)
{
    FixtureSpec spec;
    spec.center = {10, -4};
    const PointCloud ring = generate_fixture(spec);
    ASSERT_EQ(ring.size(), 16u);
    for (const Point2 p : ring) {
        EXPECT_NEAR(distance(p, spec.center), 50.0, 1e-9);
    }
}

TEST(Fixture, CShapeDropsTheSector)
{
    FixtureSpec spec;
    spec.kind = FixtureKind::CShape;
    const PointCloud c = generate_fixture(spec);
    EXPECT_EQ(c.size(), 15u);
    EXPECT_FALSE(contains(c, {50 * std::cos(spec.gap_direction), 50 * std::sin(spec.gap_direction)}));
    for (const Point2 p : c) {
        // every survivor is at least half the gap away from the gap direction
        EXPECT_GE(std::abs(std::atan2(p.y, p.x) - spec.gap_direction), spec.gap / 2);
    }
}

TEST(Fixture, ThreeStagesAreNested)
{
    FixtureSpec spec;
    spec.kind = FixtureKind::ThreeStage;
    const ThreeStage s = three_stage(spec);
    ASSERT_EQ(s.left_plug.size(), 1u);
    EXPECT_EQ(s.b.size(), s.a.size() + 1);
    EXPECT_EQ(s.a.size(), 13u);
    EXPECT_EQ(s.c.size(), s.b.size() + 2);
    for (const Point2 p : s.a) {
        EXPECT_TRUE(contains(s.b, p));
    }
    EXPECT_TRUE(contains(s.b, s.left_plug[0]));
    for (const Point2 p : s.b) {
        EXPECT_TRUE(contains(s.c, p));
    }
    spec.stage = 'c';
    EXPECT_EQ(generate_fixture(spec), s.c);
}

TEST(Fixture, FigureEightSharesItsCrossings)
{
    FixtureSpec spec;
    spec.kind = FixtureKind::FigureEight;
    spec.points = 8;
    const PointCloud f = generate_fixture(spec);
    EXPECT_EQ(f.size(), 14u);
    const Point2 left{-30, 0}, right{30, 0};
    for (const Point2 p : f) {
        const double dl = std::abs(distance(p, left) - 50), dr = std::abs(distance(p, right) - 50);
        EXPECT_LE(std::min(dl, dr), 1e-9);
    }
}

TEST(Fixture, BranchModelIsARaster)
{
    FixtureSpec spec;
    spec.kind = FixtureKind::BranchModel;
    spec.stroke_width = 3;
    const PointCloud cloud = generate_fixture(spec);
    const auto mask = branch_model_mask(3, 128);
    EXPECT_EQ(cloud.size(), static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true)));
    for (const Point2 p : cloud) {
        EXPECT_EQ(p.x, std::floor(p.x));
        EXPECT_TRUE(mask[static_cast<std::size_t>(p.y) * 128 + static_cast<std::size_t>(p.x)]);
    }
}

TEST(Fixture, GenerationIsDeterministic)
{
    for (const FixtureKind kind : {FixtureKind::Ring, FixtureKind::CShape, FixtureKind::FigureEight,
                                   FixtureKind::ThreeStage, FixtureKind::BranchModel}) {
        FixtureSpec spec;
        spec.kind = kind;
        spec.seed = 42;
        EXPECT_EQ(generate_fixture(spec), generate_fixture(spec));
    }
}

TEST(Fixture, InvalidSpecsRejected)
{
    FixtureSpec spec;
    spec.points = 2;
    EXPECT_THROW(generate_fixture(spec), InvalidSpec);
    spec = FixtureSpec{};
    spec.kind = FixtureKind::FigureEight;
    spec.lobe_separation = 100.0;
    EXPECT_THROW(generate_fixture(spec), InvalidSpec);
    spec = FixtureSpec{};
    spec.kind = FixtureKind::ThreeStage;
    spec.stage = 'd';
    EXPECT_THROW(generate_fixture(spec), InvalidSpec);
    spec.stage = 'a';
    spec.points = 15;
    EXPECT_THROW(generate_fixture(spec), InvalidSpec);
    spec = FixtureSpec{};
    spec.kind = FixtureKind::BranchModel;
    spec.stroke_width = 0;
    EXPECT_THROW(generate_fixture(spec), InvalidSpec);
}

TEST(FixtureJson, ParsesFieldsAndDefaults)
{
    const auto spec = fixture_spec_from_json(
        nlohmann::json::parse(R"({"kind": "cShape", "points": 20, "center": [1, 2], "gap": 1.0})"));
    EXPECT_EQ(spec.kind, FixtureKind::CShape);
    EXPECT_EQ(spec.points, 20);
    EXPECT_EQ(spec.center, (Point2{1, 2}));
    EXPECT_EQ(spec.gap, 1.0);
    EXPECT_EQ(spec.radius, 50.0);
    EXPECT_EQ(fixture_spec_from_json(nlohmann::json::parse(R"({"kind": "three_stage", "stage": "b"})")).stage,
              'b');
}

TEST(FixtureJson, BadInputIsInvalidSpec)
{
    EXPECT_THROW(fixture_spec_from_json(nlohmann::json::parse(R"({"points": 3})")), InvalidSpec);
    EXPECT_THROW(fixture_spec_from_json(nlohmann::json::parse(R"({"kind": "spiral"})")), InvalidSpec);
    EXPECT_THROW(fixture_spec_from_json(nlohmann::json::parse(R"({"kind": "ring", "points": "many"})")), InvalidSpec);
}

}  // namespace
}  // namespace branchtopo::testkit
