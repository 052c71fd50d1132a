#pragma once

// Planar primitives: points, deduplicated clouds, convex hulls, arc-length
// sampling of the hull boundary, circumcircles and minimum enclosing balls.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "error.hpp"

namespace branchtopo {

/// Points closer than this (in pixels) are merged at ingestion.
inline constexpr double kDedupTolerance = 1e-9;

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend constexpr bool operator==(const Point2&, const Point2&) = default;
    friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
};

inline constexpr double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline constexpr double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }
inline constexpr double squared_distance(Point2 a, Point2 b) { return dot(a - b, a - b); }

/// Twice the signed area of (a, b, c); positive when counterclockwise.
inline constexpr double orient(Point2 a, Point2 b, Point2 c) { return cross(b - a, c - a); }

namespace detail {

inline boost::multiprecision::cpp_rational exact_orient(Point2 a, Point2 b, Point2 c)
{
    using boost::multiprecision::cpp_rational;
    return (cpp_rational(a.x) - c.x) * (cpp_rational(b.y) - c.y) - (cpp_rational(a.y) - c.y) * (cpp_rational(b.x) - c.x);
}

}  // namespace detail

/// Exact sign of orient(a, b, c): a floating-point filter with a rational
/// fallback when the rounded determinant is within its error bound.
inline int orient_sign(Point2 a, Point2 b, Point2 c)
{
    const double left = (a.x - c.x) * (b.y - c.y);
    const double right = (a.y - c.y) * (b.x - c.x);
    const double det = left - right;
    constexpr double eps = std::numeric_limits<double>::epsilon() / 2;
    constexpr double bound = (3.0 + 16.0 * eps) * eps;
    if (std::abs(det) > bound * (std::abs(left) + std::abs(right))) {
        return det > 0.0 ? 1 : -1;
    }
    return detail::exact_orient(a, b, c).sign();
}

/// orient(a, b, c) with small relative error even for nearly flat triangles,
/// where the rounded determinant is mostly cancellation noise.
inline double accurate_orient(Point2 a, Point2 b, Point2 c)
{
    const double left = (a.x - c.x) * (b.y - c.y);
    const double right = (a.y - c.y) * (b.x - c.x);
    const double det = left - right;
    if (std::abs(det) > 1e-6 * (std::abs(left) + std::abs(right))) {
        return det;
    }
    return detail::exact_orient(a, b, c).convert_to<double>();
}

inline constexpr bool lex_less_xy(Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }
inline constexpr bool lex_less_yx(Point2 a, Point2 b) { return a.y < b.y || (a.y == b.y && a.x < b.x); }

inline bool is_finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

/// A finite set of planar points, ids implicit by index. Construction drops
/// non-finite input and every point within the dedup tolerance of an earlier
/// point, keeping the survivors in input order.
class PointCloud {
public:
    PointCloud() = default;

    explicit PointCloud(std::span<const Point2> points, double tolerance = kDedupTolerance)
    {
        // kept points indexed by x so a duplicate query is a narrow range scan
        std::multimap<double, std::size_t> by_x;
        points_.reserve(points.size());
        for (const Point2& p : points) {
            if (!is_finite(p)) {
                throw std::invalid_argument("point cloud coordinates must be finite");
            }
            bool duplicate = false;
            for (auto it = by_x.lower_bound(p.x - tolerance);
                 it != by_x.end() && it->first <= p.x + tolerance; ++it) {
                if (distance(points_[it->second], p) <= tolerance) {
                    duplicate = true;
                    break;
                }
            }
            if (!duplicate) {
                by_x.emplace(p.x, points_.size());
                points_.push_back(p);
            }
        }
    }

    explicit PointCloud(const std::vector<Point2>& points, double tolerance = kDedupTolerance)
        : PointCloud(std::span<const Point2>(points), tolerance) {}

    PointCloud(std::initializer_list<Point2> points)
        : PointCloud(std::span<const Point2>(points.begin(), points.size())) {}

    [[nodiscard]] std::size_t size() const { return points_.size(); }
    [[nodiscard]] bool empty() const { return points_.empty(); }
    [[nodiscard]] const Point2& operator[](std::size_t i) const { return points_[i]; }
    [[nodiscard]] const std::vector<Point2>& points() const { return points_; }
    [[nodiscard]] auto begin() const { return points_.begin(); }
    [[nodiscard]] auto end() const { return points_.end(); }

    /// This cloud followed by `extra`, deduplicated against everything before it.
    [[nodiscard]] PointCloud united_with(std::span<const Point2> extra) const
    {
        std::vector<Point2> all = points_;
        all.insert(all.end(), extra.begin(), extra.end());
        return PointCloud(all);
    }

    friend bool operator==(const PointCloud&, const PointCloud&) = default;

private:
    std::vector<Point2> points_;
};

/// Largest coordinate extent of a point set, used to scale tolerances.
inline double extent(std::span<const Point2> pts)
{
    if (pts.empty()) {
        return 0.0;
    }
    double xmin = pts[0].x, xmax = pts[0].x, ymin = pts[0].y, ymax = pts[0].y;
    for (const Point2& p : pts) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    return std::max(xmax - xmin, ymax - ymin);
}

struct ConvexHullPolygon {
    /// Counterclockwise, anchor (smallest y, then x) first.
    std::vector<Point2> vertices;
    std::size_t anchor_index = 0;

    [[nodiscard]] double perimeter() const
    {
        double total = 0.0;
        for (std::size_t i = 0; i < vertices.size(); ++i) {
            total += distance(vertices[i], vertices[(i + 1) % vertices.size()]);
        }
        return total;
    }

    [[nodiscard]] double area() const
    {
        double twice = 0.0;
        for (std::size_t i = 0; i < vertices.size(); ++i) {
            twice += cross(vertices[i], vertices[(i + 1) % vertices.size()]);
        }
        return 0.5 * twice;
    }

    /// Inside or on the boundary, with a scale-relative slack.
    [[nodiscard]] bool contains(Point2 p, double slack = 1e-9) const
    {
        const double scale = extent(vertices);
        for (std::size_t i = 0; i < vertices.size(); ++i) {
            if (orient(vertices[i], vertices[(i + 1) % vertices.size()], p) < -slack * scale * scale) {
                return false;
            }
        }
        return true;
    }
};

/// Andrew's monotone chain. Collinear boundary points are not hull vertices.
inline ConvexHullPolygon convex_hull(std::span<const Point2> pts)
{
    if (pts.size() < 3) {
        throw DegenerateHull();
    }
    std::vector<Point2> sorted(pts.begin(), pts.end());
    std::sort(sorted.begin(), sorted.end(), lex_less_xy);
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    std::vector<Point2> hull(2 * sorted.size());
    std::size_t k = 0;
    for (const Point2& p : sorted) {
        while (k >= 2 && orient_sign(hull[k - 2], hull[k - 1], p) <= 0) {
            --k;
        }
        hull[k++] = p;
    }
    for (std::size_t i = sorted.size() - 1, lower = k + 1; i-- > 0;) {
        const Point2& p = sorted[i];
        while (k >= lower && orient_sign(hull[k - 2], hull[k - 1], p) <= 0) {
            --k;
        }
        hull[k++] = p;
    }
    hull.resize(k > 0 ? k - 1 : 0);
    if (hull.size() < 3) {
        throw DegenerateHull();
    }

    ConvexHullPolygon polygon;
    const auto anchor = std::min_element(hull.begin(), hull.end(), lex_less_yx);
    std::rotate(hull.begin(), anchor, hull.end());
    polygon.vertices = std::move(hull);
    polygon.anchor_index = 0;

    const double scale = extent(polygon.vertices);
    if (polygon.area() <= 0.5e-12 * scale * scale) {
        throw DegenerateHull();
    }
    return polygon;
}

inline ConvexHullPolygon convex_hull(const PointCloud& cloud) { return convex_hull(std::span(cloud.points())); }

namespace detail {

/// Moves p by whole ulps towards the left of a->b until it is not strictly
/// right of the line. A rounded point just outside a hull edge would make the
/// triangle (a, p, b) an exterior sliver and open a spurious loop.
inline Point2 inside_edge(Point2 a, Point2 b, Point2 p)
{
    const double toward_x = b.y > a.y ? -std::numeric_limits<double>::infinity()
                                      : std::numeric_limits<double>::infinity();
    const double toward_y = b.x > a.x ? std::numeric_limits<double>::infinity()
                                      : -std::numeric_limits<double>::infinity();
    for (int step = 0; step < 64 && orient_sign(a, b, p) < 0; ++step) {
        if (b.y != a.y) {
            p.x = std::nextafter(p.x, toward_x);
        }
        if (b.x != a.x) {
            p.y = std::nextafter(p.y, toward_y);
        }
    }
    return orient_sign(a, b, p) < 0 ? a : p;
}

}  // namespace detail

/// Points at arc lengths 0, interval, 2*interval, ... along the closed hull
/// boundary, starting at the anchor and walking counterclockwise.
/// Count is max(1, floor(perimeter / interval)). No sample lies strictly
/// outside the polygon.
inline std::vector<Point2> sample_hull_boundary(const ConvexHullPolygon& hull, double interval)
{
    if (!(interval > 0.0) || !std::isfinite(interval)) {
        throw std::invalid_argument("hull sampling interval must be positive and finite");
    }
    const std::size_t n = hull.vertices.size();
    if (n < 3) {
        throw DegenerateHull();
    }
    std::vector<double> lengths(n);
    for (std::size_t i = 0; i < n; ++i) {
        lengths[i] = distance(hull.vertices[i], hull.vertices[(i + 1) % n]);
    }
    const double perimeter = hull.perimeter();
    const auto count = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(perimeter / interval)));

    std::vector<Point2> samples;
    samples.reserve(count);
    std::size_t edge = 0;
    double edge_start = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
        const double s = static_cast<double>(k) * interval;
        while (edge + 1 < n && s >= edge_start + lengths[edge]) {
            edge_start += lengths[edge];
            ++edge;
        }
        const Point2 a = hull.vertices[edge];
        const Point2 b = hull.vertices[(edge + 1) % n];
        const double t = std::min(1.0, (s - edge_start) / lengths[edge]);
        samples.push_back(t == 0.0 ? a : detail::inside_edge(a, b, a + t * (b - a)));
    }
    return samples;
}

struct Circle {
    Point2 center;
    double radius = 0.0;
};

/// Twice the triangle area below this multiple of scale^2 counts as collinear.
inline constexpr double kCollinearTolerance = 1e-12;

inline bool nearly_collinear(Point2 a, Point2 b, Point2 c)
{
    const double scale = std::max({distance(a, b), distance(b, c), distance(a, c)});
    return std::abs(orient(a, b, c)) <= kCollinearTolerance * scale * scale;
}

inline Circle circumcircle(Point2 a, Point2 b, Point2 c)
{
    if (nearly_collinear(a, b, c)) {
        throw CollinearInput();
    }
    const Point2 u = b - a;
    const Point2 v = c - a;
    const double d = 2.0 * cross(u, v);
    const double uu = dot(u, u);
    const double vv = dot(v, v);
    const Point2 offset{(v.y * uu - u.y * vv) / d, (u.x * vv - v.x * uu) / d};
    return {a + offset, norm(offset)};
}

/// Circumradius, or +infinity for an exactly flat triangle. Never throws.
inline double circumradius(Point2 a, Point2 b, Point2 c)
{
    const Point2 u = b - a;
    const Point2 v = c - a;
    const double d = 2.0 * cross(u, v);
    const double sides = std::abs(u.x * v.y) + std::abs(u.y * v.x);
    if (!(std::abs(d) > 2e-6 * sides)) {
        // nearly flat: abc / (2 |orient|) with the orientation evaluated exactly
        const double o = accurate_orient(a, b, c);
        return o == 0.0 ? std::numeric_limits<double>::infinity()
                        : distance(a, b) * distance(b, c) * distance(c, a) / (2.0 * std::abs(o));
    }
    const double uu = dot(u, u);
    const double vv = dot(v, v);
    return norm(Point2{(v.y * uu - u.y * vv) / d, (u.x * vv - v.x * uu) / d});
}

/// Radius of the smallest disc containing two or three points.
inline double min_enclosing_ball_radius(std::span<const Point2> pts)
{
    if (pts.size() == 2) {
        return 0.5 * distance(pts[0], pts[1]);
    }
    if (pts.size() != 3) {
        throw std::invalid_argument("min_enclosing_ball_radius expects 2 or 3 points");
    }
    const Point2 a = pts[0], b = pts[1], c = pts[2];
    // an obtuse (or flat) angle puts the circumcenter outside the triangle
    const bool obtuse = dot(b - a, c - a) < 0.0 || dot(a - b, c - b) < 0.0 || dot(a - c, b - c) < 0.0;
    if (obtuse || nearly_collinear(a, b, c)) {
        return 0.5 * std::max({distance(a, b), distance(b, c), distance(a, c)});
    }
    return circumradius(a, b, c);
}

inline double min_enclosing_ball_radius(std::initializer_list<Point2> pts)
{
    return min_enclosing_ball_radius(std::span<const Point2>(pts.begin(), pts.size()));
}

inline constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Deterministic per-index perturbation in [-magnitude, magnitude]^2.
inline PointCloud jitter(const PointCloud& cloud, double magnitude, std::uint64_t seed = 0)
{
    auto unit = [](std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
    std::vector<Point2> moved;
    moved.reserve(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const std::uint64_t h = splitmix64(seed ^ splitmix64(i));
        moved.push_back({cloud[i].x + magnitude * unit(h), cloud[i].y + magnitude * unit(splitmix64(h))});
    }
    return PointCloud(moved);
}

}  // namespace branchtopo
