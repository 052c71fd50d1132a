#pragma once

// Planar Delaunay triangulation by lexicographic sweep insertion followed by
// Lawson flips. Orientation and incircle tests are exact. Cocircular
// quadrilaterals take the diagonal whose lexicographically smallest endpoint is
// smallest, so the output depends only on the point set, not on input order.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "geometry.hpp"

namespace branchtopo {

using Triangle = std::array<std::size_t, 3>;

/// Relative tolerance below which the incircle determinant counts as zero when
/// grouping nearly cocircular triangles.
inline constexpr double kIncircleTolerance = 1e-12;

namespace detail {

struct IncircleResult {
    double det;
    double permanent;
};

/// Positive det when d lies inside the circle through counterclockwise (a, b, c).
inline IncircleResult incircle(Point2 a, Point2 b, Point2 c, Point2 d)
{
    const double adx = a.x - d.x, ady = a.y - d.y;
    const double bdx = b.x - d.x, bdy = b.y - d.y;
    const double cdx = c.x - d.x, cdy = c.y - d.y;
    const double alift = adx * adx + ady * ady;
    const double blift = bdx * bdx + bdy * bdy;
    const double clift = cdx * cdx + cdy * cdy;
    const double det = alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) +
                       clift * (adx * bdy - bdx * ady);
    const double permanent = alift * (std::abs(bdx * cdy) + std::abs(cdx * bdy)) +
                             blift * (std::abs(cdx * ady) + std::abs(adx * cdy)) +
                             clift * (std::abs(adx * bdy) + std::abs(bdx * ady));
    return {det, permanent};
}

/// Exact sign of the incircle determinant: the rounded value when it clears
/// the filter bound, otherwise a rational evaluation.
inline int incircle_sign(Point2 a, Point2 b, Point2 c, Point2 d)
{
    const auto [det, permanent] = incircle(a, b, c, d);
    constexpr double eps = std::numeric_limits<double>::epsilon() / 2;
    constexpr double bound = (10.0 + 96.0 * eps) * eps;
    if (std::abs(det) > bound * permanent) {
        return det > 0.0 ? 1 : -1;
    }
    // pixel clouds: integer coordinates below 2^15 fit the determinant in 128 bits
    const auto small_int = [](Point2 p) {
        return std::abs(p.x) < 32768.0 && std::abs(p.y) < 32768.0 && p.x == std::trunc(p.x) && p.y == std::trunc(p.y);
    };
    if (small_int(a) && small_int(b) && small_int(c) && small_int(d)) {
        __extension__ typedef __int128 i128;
        const auto v = [](double x) { return static_cast<i128>(x); };
        const i128 adx = v(a.x) - v(d.x), ady = v(a.y) - v(d.y);
        const i128 bdx = v(b.x) - v(d.x), bdy = v(b.y) - v(d.y);
        const i128 cdx = v(c.x) - v(d.x), cdy = v(c.y) - v(d.y);
        const i128 exact = (adx * adx + ady * ady) * (bdx * cdy - cdx * bdy) +
                           (bdx * bdx + bdy * bdy) * (cdx * ady - adx * cdy) +
                           (cdx * cdx + cdy * cdy) * (adx * bdy - bdx * ady);
        return exact > 0 ? 1 : (exact < 0 ? -1 : 0);
    }
    using boost::multiprecision::cpp_rational;
    const cpp_rational adx = cpp_rational(a.x) - d.x, ady = cpp_rational(a.y) - d.y;
    const cpp_rational bdx = cpp_rational(b.x) - d.x, bdy = cpp_rational(b.y) - d.y;
    const cpp_rational cdx = cpp_rational(c.x) - d.x, cdy = cpp_rational(c.y) - d.y;
    const cpp_rational exact = (adx * adx + ady * ady) * (bdx * cdy - cdx * bdy) +
                               (bdx * bdx + bdy * bdy) * (cdx * ady - adx * cdy) +
                               (cdx * cdx + cdy * cdy) * (adx * bdy - bdx * ady);
    return exact.sign();
}

class DelaunayBuilder {
public:
    static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

    explicit DelaunayBuilder(std::span<const Point2> pts) : pts_(pts)
    {
        const std::size_t n = pts.size();
        order_.resize(n);
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        std::sort(order_.begin(), order_.end(),
                  [&](std::size_t i, std::size_t j) { return lex_less_xy(pts_[i], pts_[j]); });
        rank_.resize(n);
        for (std::size_t r = 0; r < n; ++r) {
            rank_[order_[r]] = r;
        }
        hull_next_.assign(n, kNone);
        hull_prev_.assign(n, kNone);
        hull_edge_.assign(n, kNone);
    }

    std::vector<Triangle> run()
    {
        const std::size_t first_free = seed();
        std::size_t last = order_[first_free - 1];
        for (std::size_t k = first_free; k < order_.size(); ++k) {
            insert(order_[k], last);
            last = order_[k];
        }
        for (std::size_t e = 0; e < twin_.size(); ++e) {
            if (twin_[e] != kNone) {
                stack_.push_back(e);
            }
        }
        legalize();

        std::vector<Triangle> out;
        out.reserve(tri_.size() / 3);
        for (std::size_t t = 0; t < tri_.size(); t += 3) {
            Triangle tr{tri_[t], tri_[t + 1], tri_[t + 2]};
            std::sort(tr.begin(), tr.end());
            out.push_back(tr);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    static std::size_t next(std::size_t e) { return e % 3 == 2 ? e - 2 : e + 1; }
    static std::size_t prev(std::size_t e) { return e % 3 == 0 ? e + 2 : e - 1; }

    void link(std::size_t a, std::size_t b)
    {
        twin_[a] = b;
        if (b != kNone) {
            twin_[b] = a;
        }
    }

    std::size_t add_triangle(std::size_t a, std::size_t b, std::size_t c)
    {
        const std::size_t t = tri_.size();
        tri_.insert(tri_.end(), {a, b, c});
        twin_.insert(twin_.end(), {kNone, kNone, kNone});
        return t;
    }

    /// Fans the first non-collinear point over the collinear prefix. Returns the
    /// sorted position of the first point not yet inserted.
    std::size_t seed()
    {
        const std::size_t n = order_.size();
        if (n < 3) {
            throw DegenerateHull();
        }
        const Point2 c0 = pts_[order_[0]];
        const Point2 c1 = pts_[order_[1]];
        std::size_t m = 2;
        while (m < n && orient_sign(c0, c1, pts_[order_[m]]) == 0) {
            ++m;
        }
        if (m == n) {
            throw DegenerateHull();
        }
        const std::size_t apex = order_[m];
        const bool left = orient_sign(c0, c1, pts_[apex]) > 0;
        for (std::size_t i = 0; i + 1 < m; ++i) {
            const std::size_t u = order_[i], v = order_[i + 1];
            if (left) {
                add_triangle(u, v, apex);
            } else {
                add_triangle(v, u, apex);
            }
        }
        std::map<std::pair<std::size_t, std::size_t>, std::size_t> by_ends;
        for (std::size_t e = 0; e < tri_.size(); ++e) {
            by_ends[{tri_[e], tri_[next(e)]}] = e;
        }
        for (std::size_t e = 0; e < tri_.size(); ++e) {
            const auto it = by_ends.find({tri_[next(e)], tri_[e]});
            if (it != by_ends.end()) {
                twin_[e] = it->second;
            } else {
                hull_edge_[tri_[e]] = e;
                hull_next_[tri_[e]] = tri_[next(e)];
                hull_prev_[tri_[next(e)]] = tri_[e];
            }
        }
        return m + 1;
    }

    bool visible(std::size_t v, Point2 p) const { return orient_sign(pts_[v], pts_[hull_next_[v]], p) < 0; }

    void insert(std::size_t p, std::size_t last)
    {
        const Point2 pt = pts_[p];
        // The previously inserted point is lexicographically maximal so far, so
        // the visible part of the hull touches it; the scan is a safety net.
        std::size_t seen = kNone;
        if (visible(last, pt)) {
            seen = last;
        } else if (visible(hull_prev_[last], pt)) {
            seen = hull_prev_[last];
        } else {
            for (std::size_t v = hull_next_[last]; v != last; v = hull_next_[v]) {
                if (visible(v, pt)) {
                    seen = v;
                    break;
                }
            }
            if (seen == kNone) {
                throw std::logic_error("delaunay: inserted point sees no hull edge");
            }
        }
        std::size_t first = seen;
        while (visible(hull_prev_[first], pt)) {
            first = hull_prev_[first];
        }
        std::size_t stop = seen;
        while (visible(stop, pt)) {
            stop = hull_next_[stop];
        }

        std::size_t previous_out = kNone;
        std::size_t v = first;
        while (v != stop) {
            const std::size_t w = hull_next_[v];
            const std::size_t t = add_triangle(v, p, w);
            link(t + 2, hull_edge_[v]);
            stack_.push_back(t + 2);
            if (previous_out == kNone) {
                hull_edge_[v] = t;
            } else {
                link(t, previous_out);
            }
            previous_out = t + 1;
            if (v != first) {
                hull_next_[v] = kNone;
                hull_prev_[v] = kNone;
                hull_edge_[v] = kNone;
            }
            v = w;
        }
        hull_edge_[p] = previous_out;
        hull_next_[first] = p;
        hull_prev_[p] = first;
        hull_next_[p] = stop;
        hull_prev_[stop] = p;
        legalize();
    }

    bool should_flip(std::size_t e) const
    {
        const std::size_t f = twin_[e];
        if (f == kNone) {
            return false;
        }
        const std::size_t a = tri_[e], b = tri_[next(e)], c = tri_[prev(e)], d = tri_[prev(f)];
        const Point2 pa = pts_[a], pb = pts_[b], pc = pts_[c], pd = pts_[d];
        // the new diagonal c-d must separate a from b
        if (orient_sign(pc, pd, pa) * orient_sign(pc, pd, pb) >= 0) {
            return false;
        }
        const int side = incircle_sign(pa, pb, pc, pd);
        if (side != 0) {
            return side > 0;
        }
        return std::min(rank_[c], rank_[d]) < std::min(rank_[a], rank_[b]);
    }

    void flip(std::size_t e)
    {
        const std::size_t f = twin_[e];
        const std::size_t i = e - e % 3, j = f - f % 3;
        const std::size_t a = tri_[e], b = tri_[next(e)], c = tri_[prev(e)], d = tri_[prev(f)];
        const std::size_t t_bc = twin_[next(e)], t_ca = twin_[prev(e)];
        const std::size_t t_ad = twin_[next(f)], t_db = twin_[prev(f)];

        tri_[i] = a;
        tri_[i + 1] = d;
        tri_[i + 2] = c;
        tri_[j] = d;
        tri_[j + 1] = b;
        tri_[j + 2] = c;
        link(i, t_ad);
        link(i + 1, j + 2);
        link(i + 2, t_ca);
        link(j, t_db);
        link(j + 1, t_bc);

        for (const std::size_t slot : {i, i + 2, j, j + 1}) {
            if (twin_[slot] == kNone) {
                hull_edge_[tri_[slot]] = slot;
            }
            stack_.push_back(slot);
        }
    }

    void legalize()
    {
        while (!stack_.empty()) {
            const std::size_t e = stack_.back();
            stack_.pop_back();
            if (should_flip(e)) {
                if (++flips_ > flip_budget()) {
                    throw std::runtime_error("delaunay: edge flipping did not converge");
                }
                flip(e);
            }
        }
    }

    std::size_t flip_budget() const { return 64 * pts_.size() * pts_.size() + 1024; }

    std::span<const Point2> pts_;
    std::vector<std::size_t> order_;
    std::vector<std::size_t> rank_;
    std::vector<std::size_t> tri_;
    std::vector<std::size_t> twin_;
    std::vector<std::size_t> hull_next_;
    std::vector<std::size_t> hull_prev_;
    std::vector<std::size_t> hull_edge_;
    std::vector<std::size_t> stack_;
    std::size_t flips_ = 0;
};

}  // namespace detail

/// Delaunay triangles as ascending index triples, sorted.
/// Throws DegenerateHull for fewer than 3 points or an all-collinear input.
inline std::vector<Triangle> delaunay(std::span<const Point2> pts)
{
    return detail::DelaunayBuilder(pts).run();
}

inline std::vector<Triangle> delaunay(const PointCloud& cloud) { return delaunay(std::span(cloud.points())); }

}  // namespace branchtopo
