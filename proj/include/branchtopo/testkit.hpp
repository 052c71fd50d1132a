#pragma once

// Deterministic fixture clouds and an independent brute-force diagram oracle.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "filtration.hpp"
#include "geometry.hpp"
#include "gf2.hpp"
#include "persistence.hpp"

namespace branchtopo::testkit {

enum class FixtureKind { Ring, CShape, FigureEight, ThreeStage, BranchModel };

struct FixtureSpec {
    FixtureKind kind = FixtureKind::Ring;
    Point2 center{0.0, 0.0};
    /// Ring: points on the circle. FigureEight: points per lobe, cusps included.
    int points = 16;
    double radius = 50.0;
    /// CShape: angular width (radians) of the removed sector, centred on
    /// gap_direction. The defaults remove the single ring point at pi/16,
    /// leaving a 39 px arc (38 px chord) between its neighbours.
    double gap = std::numbers::pi / 8;
    double gap_direction = std::numbers::pi / 16;
    /// FigureEight: distance between lobe centres (must be below 2 * radius).
    double lobe_separation = 60.0;
    /// ThreeStage: 'a', 'b' or 'c'.
    char stage = 'a';
    /// BranchModel: stroke width in pixels and canvas size.
    int stroke_width = 1;
    int canvas = 128;
    std::uint64_t seed = 0;
};

namespace detail {

inline double angular_distance(double a, double b)
{
    const double d = std::fmod(std::abs(a - b), 2 * std::numbers::pi);
    return std::min(d, 2 * std::numbers::pi - d);
}

inline Point2 on_circle(Point2 c, double r, double angle) { return {c.x + r * std::cos(angle), c.y + r * std::sin(angle)}; }

inline std::vector<Point2> ring_points(const FixtureSpec& spec)
{
    std::vector<Point2> pts;
    for (int k = 0; k < spec.points; ++k) {
        // half-step offset keeps sectors centred on an axis symmetric
        pts.push_back(on_circle(spec.center, spec.radius, 2 * std::numbers::pi * (k + 0.5) / spec.points));
    }
    return pts;
}

inline std::vector<Point2> without_sector(const std::vector<Point2>& pts, Point2 c, double direction, double width)
{
    std::vector<Point2> kept;
    for (const Point2& p : pts) {
        if (angular_distance(std::atan2(p.y - c.y, p.x - c.x), direction) >= width / 2) {
            kept.push_back(p);
        }
    }
    return kept;
}

inline std::vector<Point2> figure_eight(const FixtureSpec& spec)
{
    const double half = spec.lobe_separation / 2;
    // cusp angle, measured from the right lobe's centre
    const double cusp = std::numbers::pi - std::acos(half / spec.radius);
    const int steps = spec.points - 1;
    std::vector<Point2> pts;
    for (const double side : {1.0, -1.0}) {
        const Point2 c{spec.center.x + side * half, spec.center.y};
        for (int i = 0; i <= steps; ++i) {
            const double t = -cusp + 2 * cusp * i / steps;
            // mirror the right lobe so both lobes share exactly the same cusp points
            pts.push_back({c.x + side * spec.radius * std::cos(t), c.y + spec.radius * std::sin(t)});
        }
    }
    return pts;
}

struct Segment {
    Point2 a, b;
};

/// Y-shaped tree: a trunk splitting twice, plus one closed cell between the
/// upper branches.
inline std::vector<Segment> branch_skeleton(double size)
{
    const auto at = [size](double u, double v) { return Point2{u * size, v * size}; };
    return {
        {at(0.50, 0.95), at(0.50, 0.62)},  // trunk
        {at(0.50, 0.62), at(0.22, 0.36)},  // left branch
        {at(0.50, 0.62), at(0.78, 0.36)},  // right branch
        {at(0.22, 0.36), at(0.08, 0.06)},  // left twigs
        {at(0.22, 0.36), at(0.36, 0.06)},
        {at(0.78, 0.36), at(0.64, 0.06)},  // right twigs
        {at(0.78, 0.36), at(0.94, 0.06)},
        {at(0.22, 0.36), at(0.78, 0.36)},  // cross link closing a cell
    };
}

/// Midpoint (Bresenham) rasterisation of an integer-rounded segment.
inline std::vector<std::pair<int, int>> raster_line(Point2 a, Point2 b)
{
    int x0 = static_cast<int>(std::lround(a.x)), y0 = static_cast<int>(std::lround(a.y));
    const int x1 = static_cast<int>(std::lround(b.x)), y1 = static_cast<int>(std::lround(b.y));
    const int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
    const int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    std::vector<std::pair<int, int>> out;
    while (true) {
        out.emplace_back(x0, y0);
        if (x0 == x1 && y0 == y1) {
            break;
        }
        const int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x0 += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y0 += sy;
        }
    }
    return out;
}

}  // namespace detail

/// Foreground mask (row-major, canvas x canvas) of the branch model.
inline std::vector<bool> branch_model_mask(int stroke_width, int canvas)
{
    if (stroke_width < 1 || canvas < 8) {
        throw InvalidSpec("branch model needs stroke_width >= 1 and canvas >= 8");
    }
    std::vector<bool> mask(static_cast<std::size_t>(canvas) * canvas, false);
    const double r = stroke_width / 2.0;
    const int reach = static_cast<int>(std::ceil(r));
    for (const auto& seg : detail::branch_skeleton(canvas - 1.0)) {
        for (const auto& [cx, cy] : detail::raster_line(seg.a, seg.b)) {
            for (int y = cy - reach; y <= cy + reach; ++y) {
                for (int x = cx - reach; x <= cx + reach; ++x) {
                    if (x < 0 || y < 0 || x >= canvas || y >= canvas) {
                        continue;
                    }
                    const double ddx = x - cx, ddy = y - cy;
                    if (ddx * ddx + ddy * ddy <= r * r) {
                        mask[static_cast<std::size_t>(y) * canvas + x] = true;
                    }
                }
            }
        }
    }
    return mask;
}

/// Three stages of a ring with two openings. (a) drops the two ring points
/// nearest angle pi (left opening) and the one nearest 3pi/2 (lower opening).
/// (b) adds one hull point at the midpoint of the left chord, (c) also adds
/// two hull points splitting the lower chord in thirds. The plugged left gaps
/// are shorter than the lower chord, so at (b) the large loop is born when the
/// lower opening closes.
struct ThreeStage {
    PointCloud a, b, c;
    std::vector<Point2> left_plug;
    std::vector<Point2> lower_plug;
};

inline ThreeStage three_stage(const FixtureSpec& spec)
{
    if (spec.points < 12 || spec.points % 2 != 0 || !(spec.radius > 0)) {
        throw InvalidSpec("three-stage fixture needs an even number (>= 12) of ring points and a positive radius");
    }
    const int n = spec.points;
    const auto ring = detail::ring_points(spec);
    // ring point k sits at angle 2 pi (k + 0.5) / n
    const int left_lo = n / 2 - 1, left_hi = n / 2;
    const int lower = static_cast<int>(std::lround(0.75 * n - 0.5));

    std::vector<Point2> kept;
    for (int k = 0; k < n; ++k) {
        if (k != left_lo && k != left_hi && k != lower) {
            kept.push_back(ring[k]);
        }
    }
    const auto chord_points = [](Point2 p, Point2 q, int pieces) {
        std::vector<Point2> plug;
        for (int i = 1; i < pieces; ++i) {
            plug.push_back(p + (static_cast<double>(i) / pieces) * (q - p));
        }
        return plug;
    };

    ThreeStage out;
    out.a = PointCloud(kept);
    out.left_plug = chord_points(ring[left_lo - 1], ring[left_hi + 1], 2);
    out.lower_plug = chord_points(ring[lower - 1], ring[lower + 1], 3);
    out.b = out.a.united_with(out.left_plug);
    out.c = out.b.united_with(out.lower_plug);
    return out;
}

inline PointCloud generate_fixture(const FixtureSpec& spec)
{
    if (spec.kind != FixtureKind::BranchModel && (spec.points < 3 || !(spec.radius > 0))) {
        throw InvalidSpec("fixture needs at least 3 points and a positive radius");
    }
    switch (spec.kind) {
    case FixtureKind::Ring:
        return PointCloud(detail::ring_points(spec));
    case FixtureKind::CShape:
        if (!(spec.gap > 0) || spec.gap >= 2 * std::numbers::pi) {
            throw InvalidSpec("C-shape gap must lie in (0, 2*pi)");
        }
        return PointCloud(detail::without_sector(detail::ring_points(spec), spec.center, spec.gap_direction, spec.gap));
    case FixtureKind::FigureEight:
        if (!(spec.lobe_separation > 0) || spec.lobe_separation >= 2 * spec.radius) {
            throw InvalidSpec("figure-eight lobes must overlap: 0 < separation < 2 * radius");
        }
        return PointCloud(detail::figure_eight(spec));
    case FixtureKind::ThreeStage: {
        const ThreeStage stages = three_stage(spec);
        switch (spec.stage) {
        case 'a':
            return stages.a;
        case 'b':
            return stages.b;
        case 'c':
            return stages.c;
        default:
            throw InvalidSpec("three-stage fixture stage must be 'a', 'b' or 'c'");
        }
    }
    case FixtureKind::BranchModel: {
        const auto mask = branch_model_mask(spec.stroke_width, spec.canvas);
        std::vector<Point2> pts;
        for (int y = 0; y < spec.canvas; ++y) {
            for (int x = 0; x < spec.canvas; ++x) {
                if (mask[static_cast<std::size_t>(y) * spec.canvas + x]) {
                    pts.push_back({static_cast<double>(x), static_cast<double>(y)});
                }
            }
        }
        return PointCloud(pts);
    }
    }
    throw InvalidSpec("unknown fixture kind");
}

inline FixtureKind fixture_kind_from_string(const std::string& name)
{
    if (name == "ring") return FixtureKind::Ring;
    if (name == "cShape" || name == "c_shape") return FixtureKind::CShape;
    if (name == "figureEight" || name == "figure_eight") return FixtureKind::FigureEight;
    if (name == "threeStage" || name == "three_stage") return FixtureKind::ThreeStage;
    if (name == "branchModel" || name == "branch_model") return FixtureKind::BranchModel;
    throw InvalidSpec("unknown fixture kind '" + name + "'");
}

/// Reads a fixture spec from JSON; absent fields keep their defaults.
inline FixtureSpec fixture_spec_from_json(const nlohmann::json& j)
{
    FixtureSpec spec;
    try {
        spec.kind = fixture_kind_from_string(j.at("kind").get<std::string>());
        if (j.contains("center")) {
            spec.center = {j["center"].at(0).get<double>(), j["center"].at(1).get<double>()};
        }
        spec.points = j.value("points", spec.points);
        spec.radius = j.value("radius", spec.radius);
        spec.gap = j.value("gap", spec.gap);
        spec.gap_direction = j.value("gap_direction", spec.gap_direction);
        spec.lobe_separation = j.value("lobe_separation", spec.lobe_separation);
        spec.stage = j.value("stage", std::string(1, spec.stage)).at(0);
        spec.stroke_width = j.value("stroke_width", spec.stroke_width);
        spec.canvas = j.value("canvas", spec.canvas);
        spec.seed = j.value("seed", spec.seed);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidSpec(std::string("fixture spec: ") + e.what());
    }
    return spec;
}

inline constexpr std::size_t kOracleMaxPoints = 10;

/// Dimension-1 diagram from the brute-force Cech complex, computed without
/// any boundary-matrix reduction: persistent Betti numbers
/// rank(H1(r_i) -> H1(r_j)) come from dense elimination on cycle and
/// boundary spaces, and bar multiplicities from their inclusion-exclusion.
inline PersistenceDiagram brute_force_diagram_oracle(const PointCloud& cloud)
{
    if (cloud.size() > kOracleMaxPoints) {
        throw TooLarge("diagram oracle is limited to " + std::to_string(kOracleMaxPoints) + " points");
    }
    const FilteredComplex complex = cech_complex_brute_force(cloud, 2);
    const std::size_t n = cloud.size();

    std::vector<double> values;
    for (const auto& e : complex) {
        if (values.empty() || values.back() != e.value) {
            values.push_back(e.value);
        }
    }
    const std::size_t m = values.size();
    const auto level = [&](double v) {
        return static_cast<std::size_t>(std::lower_bound(values.begin(), values.end(), v) - values.begin());
    };

    struct Edge {
        std::size_t a, b, level;
    };
    struct Tri {
        std::size_t ab, ac, bc, level;
    };
    std::vector<Edge> edges;
    std::vector<std::vector<std::size_t>> edge_id(n, std::vector<std::size_t>(n, 0));
    for (const auto& e : complex) {
        if (e.simplex.dim() == 1) {
            edge_id[e.simplex[0]][e.simplex[1]] = edges.size();
            edges.push_back({e.simplex[0], e.simplex[1], level(e.value)});
        }
    }
    std::vector<Tri> tris;
    for (const auto& e : complex) {
        if (e.simplex.dim() == 2) {
            const auto& s = e.simplex;
            tris.push_back({edge_id[s[0]][s[1]], edge_id[s[0]][s[2]], edge_id[s[1]][s[2]], level(e.value)});
        }
    }
    const std::size_t ne = edges.size();
    const auto boundary = [&](const Tri& t) {
        gf2::BitVector v(ne);
        v.set(t.ab);
        v.set(t.ac);
        v.set(t.bc);
        return v;
    };

    // rank of the boundary space B(r_j) alone
    std::vector<std::size_t> boundary_rank(m, 0);
    {
        gf2::EchelonBasis basis(ne);
        std::size_t t = 0;
        std::vector<Tri> sorted = tris;
        std::stable_sort(sorted.begin(), sorted.end(), [](const Tri& x, const Tri& y) { return x.level < y.level; });
        for (std::size_t j = 0; j < m; ++j) {
            for (; t < sorted.size() && sorted[t].level <= j; ++t) {
                basis.insert(boundary(sorted[t]));
            }
            boundary_rank[j] = basis.rank();
        }
    }

    // persistent[i][j] = number of classes alive on all of [r_i, r_j]
    std::vector<std::vector<long>> persistent(m, std::vector<long>(m, 0));
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<gf2::BitVector> vertex_images;
        std::vector<std::size_t> present;
        for (std::size_t e = 0; e < ne; ++e) {
            if (edges[e].level <= i) {
                gf2::BitVector col(n);
                col.set(edges[e].a);
                col.set(edges[e].b);
                vertex_images.push_back(std::move(col));
                present.push_back(e);
            }
        }
        gf2::EchelonBasis sum(ne);
        for (const gf2::BitVector& z : gf2::kernel_basis(vertex_images, n)) {
            gf2::BitVector cycle(ne);
            for (std::size_t k = 0; k < present.size(); ++k) {
                if (z.test(k)) {
                    cycle.set(present[k]);
                }
            }
            sum.insert(std::move(cycle));
        }
        std::vector<Tri> sorted = tris;
        std::stable_sort(sorted.begin(), sorted.end(), [](const Tri& x, const Tri& y) { return x.level < y.level; });
        std::size_t t = 0;
        for (std::size_t j = 0; j < m; ++j) {
            for (; t < sorted.size() && sorted[t].level <= j; ++t) {
                sum.insert(boundary(sorted[t]));
            }
            if (j >= i) {
                // dim Z_i - dim(Z_i n B_j) = dim(Z_i + B_j) - dim B_j
                persistent[i][j] = static_cast<long>(sum.rank()) - static_cast<long>(boundary_rank[j]);
            }
        }
    }

    const auto beta = [&](long i, std::size_t j) { return i < 0 ? 0L : persistent[static_cast<std::size_t>(i)][j]; };
    PersistenceDiagram diagram{1, {}};
    for (std::size_t i = 0; i < m; ++i) {
        const long li = static_cast<long>(i);
        for (std::size_t j = i + 1; j < m; ++j) {
            const long mult = beta(li, j - 1) - beta(li - 1, j - 1) - beta(li, j) + beta(li - 1, j);
            for (long c = 0; c < mult; ++c) {
                PersistencePair p;
                p.birth = values[i];
                p.death = values[j];
                diagram.pairs.push_back(p);
            }
        }
        const long forever = beta(li, m - 1) - beta(li - 1, m - 1);
        for (long c = 0; c < forever; ++c) {
            PersistencePair p;
            p.birth = values[i];
            p.infinite = true;
            diagram.pairs.push_back(p);
        }
    }
    std::sort(diagram.pairs.begin(), diagram.pairs.end(), pair_less);
    return diagram;
}

}  // namespace branchtopo::testkit
