#pragma once

// Filtered simplicial complexes (dimension <= 2) over a point cloud. Values
// are radii in pixels.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "delaunay.hpp"
#include "error.hpp"
#include "geometry.hpp"

namespace branchtopo {

/// Sorted vertex ids; 1, 2 or 3 of them.
class Simplex {
public:
    Simplex() = default;
    Simplex(std::initializer_list<std::size_t> ids)
    {
        if (ids.size() < 1 || ids.size() > 3) {
            throw std::invalid_argument("simplex must have 1 to 3 vertices");
        }
        std::copy(ids.begin(), ids.end(), ids_.begin());
        size_ = static_cast<std::uint8_t>(ids.size());
        std::sort(ids_.begin(), ids_.begin() + size_);
    }

    static Simplex vertex(std::size_t a) { return {a}; }
    static Simplex edge(std::size_t a, std::size_t b) { return {a, b}; }
    static Simplex triangle(std::size_t a, std::size_t b, std::size_t c) { return {a, b, c}; }

    [[nodiscard]] int dim() const { return static_cast<int>(size_) - 1; }
    [[nodiscard]] std::size_t size() const { return size_; }
    [[nodiscard]] std::size_t operator[](std::size_t i) const { return ids_[i]; }
    [[nodiscard]] std::span<const std::size_t> ids() const { return {ids_.data(), size_}; }

    /// Codimension-one faces, in lexicographic order.
    [[nodiscard]] std::vector<Simplex> faces() const
    {
        if (size_ == 2) {
            return {vertex(ids_[0]), vertex(ids_[1])};
        }
        if (size_ == 3) {
            return {edge(ids_[0], ids_[1]), edge(ids_[0], ids_[2]), edge(ids_[1], ids_[2])};
        }
        return {};
    }

    friend bool operator==(const Simplex& a, const Simplex& b)
    {
        return a.size_ == b.size_ && std::equal(a.ids_.begin(), a.ids_.begin() + a.size_, b.ids_.begin());
    }
    friend bool operator<(const Simplex& a, const Simplex& b)
    {
        return std::lexicographical_compare(a.ids_.begin(), a.ids_.begin() + a.size_, b.ids_.begin(),
                                            b.ids_.begin() + b.size_);
    }

    [[nodiscard]] std::uint64_t key() const
    {
        std::uint64_t k = size_;
        for (std::size_t i = 0; i < size_; ++i) {
            k = k * 0x100000001B3ULL ^ (ids_[i] + 1);
        }
        return k;
    }

private:
    std::array<std::size_t, 3> ids_{};
    std::uint8_t size_ = 0;
};

struct SimplexHash {
    std::size_t operator()(const Simplex& s) const { return static_cast<std::size_t>(splitmix64(s.key())); }
};

struct FilteredSimplex {
    Simplex simplex;
    double value = 0.0;
};

/// Filtration order: value, then dimension, then vertex ids.
inline bool filtration_less(const FilteredSimplex& a, const FilteredSimplex& b)
{
    if (a.value != b.value) {
        return a.value < b.value;
    }
    if (a.simplex.dim() != b.simplex.dim()) {
        return a.simplex.dim() < b.simplex.dim();
    }
    return a.simplex < b.simplex;
}

class FilteredComplex {
public:
    FilteredComplex() = default;

    /// Sorts into filtration order. Does not validate; see validate().
    explicit FilteredComplex(std::vector<FilteredSimplex> entries) : entries_(std::move(entries))
    {
        std::sort(entries_.begin(), entries_.end(), filtration_less);
        index_.reserve(entries_.size());
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            index_.emplace(entries_[i].simplex, i);
        }
    }

    [[nodiscard]] std::size_t size() const { return entries_.size(); }
    [[nodiscard]] bool empty() const { return entries_.empty(); }
    [[nodiscard]] const FilteredSimplex& operator[](std::size_t i) const { return entries_[i]; }
    [[nodiscard]] const std::vector<FilteredSimplex>& entries() const { return entries_; }
    [[nodiscard]] auto begin() const { return entries_.begin(); }
    [[nodiscard]] auto end() const { return entries_.end(); }

    /// Position in filtration order, or size() when absent.
    [[nodiscard]] std::size_t index_of(const Simplex& s) const
    {
        const auto it = index_.find(s);
        return it == index_.end() ? entries_.size() : it->second;
    }
    [[nodiscard]] bool contains(const Simplex& s) const { return index_.contains(s); }
    [[nodiscard]] double value_of(const Simplex& s) const { return entries_.at(index_of(s)).value; }

    [[nodiscard]] std::size_t count(int dim) const
    {
        return static_cast<std::size_t>(std::count_if(entries_.begin(), entries_.end(),
                                                       [dim](const auto& e) { return e.simplex.dim() == dim; }));
    }

    /// Empty string when the complex is face-closed, monotone and has vertices
    /// at zero; otherwise a description of the first violation.
    [[nodiscard]] std::string validate() const
    {
        for (const auto& [simplex, value] : entries_) {
            if (simplex.dim() == 0 && value != 0.0) {
                return "vertex with nonzero value";
            }
            for (const Simplex& face : simplex.faces()) {
                const std::size_t i = index_of(face);
                if (i == entries_.size()) {
                    return "missing face";
                }
                if (entries_[i].value > value) {
                    return "face value exceeds coface value";
                }
            }
        }
        return {};
    }

    friend bool operator==(const FilteredComplex& a, const FilteredComplex& b)
    {
        return a.entries_.size() == b.entries_.size() &&
               std::equal(a.entries_.begin(), a.entries_.end(), b.entries_.begin(), [](const auto& x, const auto& y) {
                   return x.simplex == y.simplex && x.value == y.value;
               });
    }

private:
    std::vector<FilteredSimplex> entries_;
    std::unordered_map<Simplex, std::size_t, SimplexHash> index_;
};

namespace detail {

/// q strictly inside the open disc with diameter ab, up to a relative tolerance.
inline bool inside_diametral_disc(Point2 a, Point2 b, Point2 q)
{
    const Point2 qa = a - q;
    const Point2 qb = b - q;
    return dot(qa, qb) < -1e-12 * norm(qa) * norm(qb);
}

inline FilteredComplex collinear_alpha(const PointCloud& cloud)
{
    std::vector<FilteredSimplex> entries;
    std::vector<std::size_t> order(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        entries.push_back({Simplex::vertex(i), 0.0});
        order[i] = i;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return lex_less_xy(cloud[i], cloud[j]); });
    for (std::size_t k = 0; k + 1 < order.size(); ++k) {
        entries.push_back({Simplex::edge(order[k], order[k + 1]), 0.5 * distance(cloud[order[k]], cloud[order[k + 1]])});
    }
    return FilteredComplex(std::move(entries));
}

}  // namespace detail

/// Alpha complex: Delaunay triangles at their circumradius; a Delaunay edge at
/// half its length when no other point lies strictly inside its diametral
/// disc, otherwise at the smallest value of an incident triangle. Inputs with
/// fewer than three points or no two-dimensional extent give vertices and
/// Gabriel edges only.
inline FilteredComplex alpha_complex(const PointCloud& cloud)
{
    const std::size_t n = cloud.size();
    std::vector<Triangle> triangles;
    try {
        triangles = delaunay(cloud);
    } catch (const DegenerateHull&) {
        return detail::collinear_alpha(cloud);
    }

    struct EdgeInfo {
        std::size_t a, b;
        std::array<std::size_t, 2> opposite;
        std::array<std::size_t, 2> tri;
        int count = 0;
    };
    std::unordered_map<std::uint64_t, EdgeInfo> edges;
    edges.reserve(3 * triangles.size());
    auto key = [n](std::size_t a, std::size_t b) { return static_cast<std::uint64_t>(a) * n + b; };

    std::vector<double> tri_value(triangles.size());
    for (std::size_t t = 0; t < triangles.size(); ++t) {
        const auto [i, j, k] = triangles[t];
        tri_value[t] = circumradius(cloud[i], cloud[j], cloud[k]);
        for (const auto& [a, b, c] : {Triangle{i, j, k}, Triangle{i, k, j}, Triangle{j, k, i}}) {
            auto& info = edges[key(a, b)];
            info.a = a;
            info.b = b;
            info.opposite[info.count] = c;
            info.tri[info.count] = t;
            ++info.count;
        }
    }

    // Triangles sharing a circumcircle (within the incircle tolerance, with
    // radii equal up to rounding) take one common value, so rounding cannot
    // create spurious pairs of near-zero persistence inside cocircular
    // polygons. The radius check keeps flat slivers, whose incircle
    // determinant is always tiny, out of the groups.
    {
        std::vector<std::size_t> group(triangles.size());
        std::iota(group.begin(), group.end(), std::size_t{0});
        const auto find = [&group](std::size_t t) {
            while (group[t] != t) {
                t = group[t] = group[group[t]];
            }
            return t;
        };
        for (const auto& [k, info] : edges) {
            if (info.count != 2) {
                continue;
            }
            const auto [det, permanent] =
                detail::incircle(cloud[info.a], cloud[info.b], cloud[info.opposite[0]], cloud[info.opposite[1]]);
            const double r0 = tri_value[info.tri[0]], r1 = tri_value[info.tri[1]];
            if (std::abs(det) <= kIncircleTolerance * permanent && std::abs(r0 - r1) <= 1e-9 * std::max(r0, r1)) {
                const std::size_t x = find(info.tri[0]), y = find(info.tri[1]);
                group[std::max(x, y)] = std::min(x, y);
            }
        }
        std::vector<double> shared(triangles.size(), std::numeric_limits<double>::infinity());
        for (std::size_t t = 0; t < triangles.size(); ++t) {
            shared[find(t)] = std::min(shared[find(t)], tri_value[t]);
        }
        for (std::size_t t = 0; t < triangles.size(); ++t) {
            tri_value[t] = shared[find(t)];
        }
    }

    std::vector<FilteredSimplex> entries;
    entries.reserve(n + edges.size() + triangles.size());
    for (std::size_t i = 0; i < n; ++i) {
        entries.push_back({Simplex::vertex(i), 0.0});
    }
    std::unordered_map<std::uint64_t, double> edge_value;
    edge_value.reserve(edges.size());
    for (const auto& [k, info] : edges) {
        const Point2 pa = cloud[info.a], pb = cloud[info.b];
        bool gabriel = true;
        double attached = std::numeric_limits<double>::infinity();
        for (int s = 0; s < info.count; ++s) {
            attached = std::min(attached, tri_value[info.tri[s]]);
            if (detail::inside_diametral_disc(pa, pb, cloud[info.opposite[s]])) {
                gabriel = false;
            }
        }
        const double value = gabriel ? 0.5 * distance(pa, pb) : attached;
        edge_value[k] = value;
        entries.push_back({Simplex::edge(info.a, info.b), value});
    }
    for (std::size_t t = 0; t < triangles.size(); ++t) {
        const auto [i, j, k] = triangles[t];
        // rounding can put a right triangle's circumradius one ulp under its hypotenuse half
        const double value =
            std::max({tri_value[t], edge_value[key(i, j)], edge_value[key(i, k)], edge_value[key(j, k)]});
        entries.push_back({Simplex::triangle(i, j, k), value});
    }
    return FilteredComplex(std::move(entries));
}

inline constexpr std::size_t kCechMaxPoints = 25;

/// Every pair at half its distance and every triple at its minimum enclosing
/// ball radius. Exponential; capped at kCechMaxPoints points.
inline FilteredComplex cech_complex_brute_force(const PointCloud& cloud, int max_dim = 2)
{
    const std::size_t n = cloud.size();
    if (n > kCechMaxPoints) {
        throw TooLarge("Cech brute force is limited to " + std::to_string(kCechMaxPoints) + " points");
    }
    std::vector<FilteredSimplex> entries;
    for (std::size_t i = 0; i < n; ++i) {
        entries.push_back({Simplex::vertex(i), 0.0});
    }
    if (max_dim >= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                entries.push_back({Simplex::edge(i, j), min_enclosing_ball_radius({cloud[i], cloud[j]})});
            }
        }
    }
    if (max_dim >= 2) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                for (std::size_t k = j + 1; k < n; ++k) {
                    const double r = min_enclosing_ball_radius({cloud[i], cloud[j], cloud[k]});
                    const double faces = 0.5 * std::max({distance(cloud[i], cloud[j]), distance(cloud[i], cloud[k]),
                                                         distance(cloud[j], cloud[k])});
                    entries.push_back({Simplex::triangle(i, j, k), std::max(r, faces)});
                }
            }
        }
    }
    return FilteredComplex(std::move(entries));
}

}  // namespace branchtopo
