#pragma once

// Internal/external branch structures: a diagram point of the hull-augmented
// cloud X u U is internal when the plain cloud X has the same point, and
// external otherwise.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "error.hpp"
#include "filtration.hpp"
#include "geometry.hpp"
#include "image.hpp"
#include "persistence.hpp"

namespace branchtopo {

enum class Units { Radius, Radius2 };

/// Birth/death values in the requested units (squared radii for Radius2).
inline double in_units(double value, Units units) { return units == Units::Radius2 ? value * value : value; }

struct AnalysisParams {
    double hull_interval = 20.0;
    double match_tol = 1e-6;
    /// Both thresholds are in `units`.
    double persistence_min_internal = 0.0;
    double persistence_min_external = 0.0;
    Units units = Units::Radius;

    void validate() const
    {
        if (!(hull_interval > 0.0) || !std::isfinite(hull_interval)) {
            throw std::invalid_argument("hull interval must be positive");
        }
        if (!(match_tol >= 0.0) || !(persistence_min_internal >= 0.0) || !(persistence_min_external >= 0.0)) {
            throw std::invalid_argument("match tolerance and persistence thresholds must be non-negative");
        }
    }
};

struct Augmentation {
    PointCloud augmented;
    /// Every hull sample, including those that coincide with cloud points.
    std::vector<Point2> hull_points;
    ConvexHullPolygon hull;
};

inline Augmentation augment_with_hull(const PointCloud& cloud, double interval)
{
    Augmentation out;
    out.hull = convex_hull(cloud);
    out.hull_points = sample_hull_boundary(out.hull, interval);
    out.augmented = cloud.united_with(out.hull_points);
    return out;
}

/// Augmentation by an explicit set of hull points instead of a regular sampling.
inline Augmentation augment_with_points(const PointCloud& cloud, std::span<const Point2> hull_points)
{
    Augmentation out;
    out.hull = convex_hull(cloud);
    out.hull_points.assign(hull_points.begin(), hull_points.end());
    out.augmented = cloud.united_with(hull_points);
    return out;
}

struct DiagramMatching {
    /// (index in pdX, index in pdXU)
    std::vector<std::pair<std::size_t, std::size_t>> matched;
    std::vector<std::size_t> unmatched_x;
    std::vector<std::size_t> unmatched_xu;
};

/// L-infinity distance between diagram points; infinite deaths only match
/// each other.
inline double linf_distance(const PersistencePair& a, const PersistencePair& b)
{
    if (a.infinite != b.infinite) {
        return std::numeric_limits<double>::infinity();
    }
    const double db = std::abs(a.birth - b.birth);
    return a.infinite ? db : std::max(db, std::abs(a.death - b.death));
}

/// Greedy multiset matching. Both diagrams are visited in (birth, death)
/// order; each pdXU point takes the first unconsumed pdX point within tol.
/// Indices refer to the diagrams as given.
inline DiagramMatching match_diagrams(const PersistenceDiagram& pd_x, const PersistenceDiagram& pd_xu, double tol)
{
    const auto sorted_indices = [](const PersistenceDiagram& d) {
        std::vector<std::size_t> idx(d.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::stable_sort(idx.begin(), idx.end(),
                         [&d](std::size_t i, std::size_t j) { return pair_less(d.pairs[i], d.pairs[j]); });
        return idx;
    };
    const auto order_x = sorted_indices(pd_x);
    const auto order_xu = sorted_indices(pd_xu);
    std::vector<bool> used(pd_x.size(), false);

    DiagramMatching m;
    for (const std::size_t j : order_xu) {
        bool found = false;
        for (const std::size_t i : order_x) {
            if (!used[i] && linf_distance(pd_x.pairs[i], pd_xu.pairs[j]) <= tol) {
                used[i] = true;
                m.matched.emplace_back(i, j);
                found = true;
                break;
            }
        }
        if (!found) {
            m.unmatched_xu.push_back(j);
        }
    }
    for (const std::size_t i : order_x) {
        if (!used[i]) {
            m.unmatched_x.push_back(i);
        }
    }
    return m;
}

/// Circumcentre of the death triangle.
inline Point2 death_location(const PointCloud& cloud, const PersistencePair& pair)
{
    if (!pair.death_simplex) {
        throw NoDeathSimplex();
    }
    const Simplex& t = *pair.death_simplex;
    return circumcircle(cloud[t[0]], cloud[t[1]], cloud[t[2]]).center;
}

enum class FeatureClass { Internal, External, Vanished };

inline const char* to_string(FeatureClass c)
{
    switch (c) {
    case FeatureClass::Internal:
        return "internal";
    case FeatureClass::External:
        return "external";
    case FeatureClass::Vanished:
        return "vanished";
    }
    return "unknown";
}

struct ClassifiedFeature {
    PersistencePair pair;
    FeatureClass cls = FeatureClass::Internal;
    /// Absent only for infinite pairs.
    std::optional<Point2> location;
    /// Persistence in the analysis units.
    double persistence = 0.0;
    bool below_threshold = false;
};

struct StructureAnalysis {
    AnalysisParams params;
    Augmentation augmentation;
    PersistenceDiagram diagram_x;
    PersistenceDiagram diagram_xu;
    /// Internal and external features in diagram_xu order, then vanished ones
    /// in diagram_x order.
    std::vector<ClassifiedFeature> features;
};

inline double feature_persistence(const PersistencePair& p, Units units)
{
    if (p.infinite) {
        return std::numeric_limits<double>::infinity();
    }
    return in_units(p.death, units) - in_units(p.birth, units);
}

/// Classification against a given augmentation of `cloud`; params.hull_interval
/// is not used. Vanished points are thresholded like internal ones, the class
/// they would have had.
inline StructureAnalysis classify_augmented(const PointCloud& cloud, Augmentation augmentation,
                                            const AnalysisParams& params)
{
    params.validate();
    StructureAnalysis out;
    out.params = params;
    out.augmentation = std::move(augmentation);
    out.diagram_x = compute_persistence(alpha_complex(cloud));
    out.diagram_xu = compute_persistence(alpha_complex(out.augmentation.augmented));

    const DiagramMatching m = match_diagrams(out.diagram_x, out.diagram_xu, params.match_tol);
    std::vector<bool> internal(out.diagram_xu.size(), false);
    for (const auto& [i, j] : m.matched) {
        internal[j] = true;
    }

    const auto make = [&](const PointCloud& source, const PersistencePair& p, FeatureClass cls) {
        ClassifiedFeature f;
        f.pair = p;
        f.cls = cls;
        if (!p.infinite) {
            f.location = death_location(source, p);
        }
        f.persistence = feature_persistence(p, params.units);
        const double threshold =
            cls == FeatureClass::External ? params.persistence_min_external : params.persistence_min_internal;
        f.below_threshold = !(f.persistence > threshold);
        return f;
    };
    for (std::size_t j = 0; j < out.diagram_xu.size(); ++j) {
        out.features.push_back(make(out.augmentation.augmented, out.diagram_xu.pairs[j],
                                    internal[j] ? FeatureClass::Internal : FeatureClass::External));
    }
    for (const std::size_t i : m.unmatched_x) {
        out.features.push_back(make(cloud, out.diagram_x.pairs[i], FeatureClass::Vanished));
    }
    return out;
}

inline StructureAnalysis classify_structures(const PointCloud& cloud, const AnalysisParams& params)
{
    params.validate();
    return classify_augmented(cloud, augment_with_hull(cloud, params.hull_interval), params);
}

struct ClassCounts {
    std::size_t internal = 0;
    std::size_t external = 0;

    friend bool operator==(const ClassCounts&, const ClassCounts&) = default;
};

/// Internal/external features above their thresholds.
inline ClassCounts count_by_class(std::span<const ClassifiedFeature> features)
{
    ClassCounts c;
    for (const auto& f : features) {
        if (f.below_threshold) {
            continue;
        }
        if (f.cls == FeatureClass::Internal) {
            ++c.internal;
        } else if (f.cls == FeatureClass::External) {
            ++c.external;
        }
    }
    return c;
}

/// Multiset of (birth, death) of one class, sorted.
inline std::vector<std::pair<double, double>> class_points(std::span<const ClassifiedFeature> features,
                                                           FeatureClass cls)
{
    std::vector<std::pair<double, double>> pts;
    for (const auto& f : features) {
        if (f.cls == cls) {
            pts.emplace_back(f.pair.birth, f.pair.death);
        }
    }
    std::sort(pts.begin(), pts.end());
    return pts;
}

/// Foreground pixel count over the area of the convex hull of the foreground
/// pixel centres.
inline double area_ratio(const BinaryImage& image)
{
    const auto pts = image.foreground_points();
    return static_cast<double>(pts.size()) / convex_hull(pts).area();
}

}  // namespace branchtopo
