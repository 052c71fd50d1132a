#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <branchtopo/filtration.hpp>
#include <branchtopo/persistence.hpp>

#include "test_support.hpp"

namespace branchtopo {
namespace {

const double kSqrt2Half = std::sqrt(2.0) / 2;

PointCloud unit_square() { return PointCloud{{0, 0}, {1, 0}, {1, 1}, {0, 1}}; }

TEST(Simplex, SortsIdsAndListsFaces)
{
    const Simplex t{4, 1, 2};
    EXPECT_EQ(t.dim(), 2);
    EXPECT_EQ(t[0], 1u);
    EXPECT_EQ(t[2], 4u);
    const auto faces = t.faces();
    ASSERT_EQ(faces.size(), 3u);
    EXPECT_EQ(faces[0], Simplex::edge(1, 2));
    EXPECT_EQ(faces[1], Simplex::edge(1, 4));
    EXPECT_EQ(faces[2], Simplex::edge(2, 4));
    EXPECT_TRUE(Simplex::vertex(3).faces().empty());
}

TEST(AlphaComplex, UnitSquare)
{
    const FilteredComplex c = alpha_complex(unit_square());
    EXPECT_EQ(c.validate(), "");
    EXPECT_EQ(c.count(0), 4u);
    EXPECT_EQ(c.count(1), 5u);
    EXPECT_EQ(c.count(2), 2u);
    for (const Simplex& side : {Simplex::edge(0, 1), Simplex::edge(1, 2), Simplex::edge(2, 3), Simplex::edge(0, 3)}) {
        EXPECT_DOUBLE_EQ(c.value_of(side), 0.5);
    }
    // the tie rule keeps the diagonal through the smallest point, (0,0)
    ASSERT_TRUE(c.contains(Simplex::edge(0, 2)));
    EXPECT_FALSE(c.contains(Simplex::edge(1, 3)));
    EXPECT_NEAR(c.value_of(Simplex::edge(0, 2)), kSqrt2Half, 1e-12);
    EXPECT_NEAR(c.value_of(Simplex::triangle(0, 1, 2)), kSqrt2Half, 1e-12);
    EXPECT_NEAR(c.value_of(Simplex::triangle(0, 2, 3)), kSqrt2Half, 1e-12);
}

TEST(AlphaComplex, TwoPoints)
{
    const FilteredComplex c = alpha_complex(PointCloud{{0, 0}, {0, 2}});
    ASSERT_EQ(c.size(), 3u);
    EXPECT_DOUBLE_EQ(c.value_of(Simplex::edge(0, 1)), 1.0);
}

TEST(AlphaComplex, SinglePointAndEmpty)
{
    EXPECT_EQ(alpha_complex(PointCloud{{3, 4}}).size(), 1u);
    EXPECT_TRUE(alpha_complex(PointCloud{}).empty());
}

TEST(AlphaComplex, EquilateralTriangle)
{
    const FilteredComplex c = alpha_complex(PointCloud{{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}});
    EXPECT_EQ(c.validate(), "");
    for (const Simplex& e : {Simplex::edge(0, 1), Simplex::edge(0, 2), Simplex::edge(1, 2)}) {
        EXPECT_NEAR(c.value_of(e), 0.5, 1e-12);
    }
    EXPECT_NEAR(c.value_of(Simplex::triangle(0, 1, 2)), 1 / std::sqrt(3.0), 1e-12);
}

TEST(AlphaComplex, CollinearInputGivesPathOfGabrielEdges)
{
    const FilteredComplex c = alpha_complex(PointCloud{{2, 0}, {0, 0}, {1, 0}, {5, 0}});
    EXPECT_EQ(c.validate(), "");
    EXPECT_EQ(c.count(1), 3u);
    EXPECT_EQ(c.count(2), 0u);
    EXPECT_DOUBLE_EQ(c.value_of(Simplex::edge(0, 3)), 1.5);
}

TEST(AlphaComplex, ObtuseTriangleEdgeIsAttached)
{
    // (1, 0.1) lies inside the diametral disc of the long edge
    const FilteredComplex c = alpha_complex(PointCloud{{0, 0}, {4, 0}, {1, 0.1}});
    const double r = circumradius({0, 0}, {4, 0}, {1, 0.1});
    EXPECT_DOUBLE_EQ(c.value_of(Simplex::edge(0, 1)), r);
    EXPECT_DOUBLE_EQ(c.value_of(Simplex::triangle(0, 1, 2)), r);
}

TEST(AlphaComplex, RandomCloudsAreValidAndDeterministic)
{
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const PointCloud cloud = test::random_cloud(seed, 5 + seed % 40);
        const FilteredComplex a = alpha_complex(cloud);
        EXPECT_EQ(a.validate(), "") << "seed " << seed;
        EXPECT_TRUE(a == alpha_complex(cloud)) << "seed " << seed;
        for (std::size_t i = 1; i < a.size(); ++i) {
            EXPECT_FALSE(filtration_less(a[i], a[i - 1]));
        }
    }
}

TEST(AlphaComplex, PixelGridIsValid)
{
    const FilteredComplex c = alpha_complex(PointCloud(test::pixel_grid(12, 9)));
    EXPECT_EQ(c.validate(), "");
    // every lattice cell is a loop closing at 1/2 and filling at sqrt(2)/2
    const PersistenceDiagram d = compute_persistence(c);
    ASSERT_EQ(d.size(), 11u * 8u);
    for (const auto& p : d.pairs) {
        EXPECT_DOUBLE_EQ(p.birth, 0.5);
        EXPECT_NEAR(p.death, kSqrt2Half, 1e-12);
    }
}

TEST(CechComplex, UnitSquareHasBothDiagonals)
{
    const FilteredComplex c = cech_complex_brute_force(unit_square());
    EXPECT_EQ(c.validate(), "");
    EXPECT_EQ(c.count(1), 6u);
    EXPECT_EQ(c.count(2), 4u);
    EXPECT_NEAR(c.value_of(Simplex::edge(0, 2)), kSqrt2Half, 1e-12);
    EXPECT_NEAR(c.value_of(Simplex::edge(1, 3)), kSqrt2Half, 1e-12);
}

TEST(CechComplex, CollinearTriple)
{
    const FilteredComplex c = cech_complex_brute_force(PointCloud{{0, 0}, {1, 0}, {2, 0}});
    EXPECT_EQ(c.validate(), "");
    EXPECT_DOUBLE_EQ(c.value_of(Simplex::edge(0, 1)), 0.5);
    EXPECT_DOUBLE_EQ(c.value_of(Simplex::edge(1, 2)), 0.5);
    EXPECT_DOUBLE_EQ(c.value_of(Simplex::edge(0, 2)), 1.0);
    EXPECT_DOUBLE_EQ(c.value_of(Simplex::triangle(0, 1, 2)), 1.0);
}

TEST(CechComplex, SinglePoint)
{
    const FilteredComplex c = cech_complex_brute_force(PointCloud{{7, 7}});
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c[0].value, 0.0);
}

TEST(CechComplex, SizeGuard)
{
    EXPECT_THROW(cech_complex_brute_force(test::random_cloud(1, kCechMaxPoints + 1)), TooLarge);
    EXPECT_NO_THROW(cech_complex_brute_force(test::random_cloud(1, kCechMaxPoints)));
}

TEST(CechComplex, RandomCloudsAreMonotone)
{
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        EXPECT_EQ(cech_complex_brute_force(test::random_cloud(seed, 4 + seed % 7)).validate(), "");
    }
}

TEST(FilteredComplex, ValidateReportsViolations)
{
    EXPECT_EQ(FilteredComplex({{Simplex::edge(0, 1), 1.0}}).validate(), "missing face");
    EXPECT_EQ(FilteredComplex({{Simplex::vertex(0), 0.0}, {Simplex::vertex(1), 2.0}, {Simplex::edge(0, 1), 3.0}})
                  .validate(),
              "vertex with nonzero value");
}

TEST(FilteredComplex, OrderBreaksTiesByDimensionThenIds)
{
    const FilteredComplex c({{Simplex::triangle(0, 1, 2), 1.0},
                             {Simplex::edge(1, 2), 1.0},
                             {Simplex::edge(0, 2), 1.0},
                             {Simplex::edge(0, 1), 0.5},
                             {Simplex::vertex(2), 0.0},
                             {Simplex::vertex(0), 0.0},
                             {Simplex::vertex(1), 0.0}});
    EXPECT_EQ(c[0].simplex, Simplex::vertex(0));
    EXPECT_EQ(c[3].simplex, Simplex::edge(0, 1));
    EXPECT_EQ(c[4].simplex, Simplex::edge(0, 2));
    EXPECT_EQ(c[5].simplex, Simplex::edge(1, 2));
    EXPECT_EQ(c[6].simplex, Simplex::triangle(0, 1, 2));
}

TEST(AlphaVsCech, DiagramsAgreeOnSmallClouds)
{
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const PointCloud cloud = test::random_cloud(1000 + seed, 4 + seed % 7);
        const auto a = compute_persistence(alpha_complex(cloud));
        const auto c = compute_persistence(cech_complex_brute_force(cloud));
        ASSERT_EQ(a.size(), c.size()) << "seed " << seed;
        for (std::size_t i = 0; i < a.size(); ++i) {
            EXPECT_NEAR(a.pairs[i].birth, c.pairs[i].birth, 1e-9) << "seed " << seed;
            EXPECT_NEAR(a.pairs[i].death, c.pairs[i].death, 1e-9) << "seed " << seed;
        }
    }
}

}  // namespace
}  // namespace branchtopo
