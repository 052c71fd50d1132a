#pragma once

// One-dimensional persistent homology over the two-element field.
//
// Triangle columns of the boundary matrix are reduced left to right in
// filtration order; the lowest edge of a nonzero reduced column is the birth
// edge of the class killed by that triangle. Edges are split into positive
// (cycle-creating) and negative ones with a union-find sweep, which is the
// dimension-0 reduction in closed form and serves as the clearing step for
// unpaired positive edges.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "error.hpp"
#include "filtration.hpp"
#include "gf2.hpp"

namespace branchtopo {

struct PersistencePair {
    double birth = 0.0;
    double death = std::numeric_limits<double>::infinity();
    bool infinite = false;
    int dim = 1;
    Simplex birth_simplex;
    std::optional<Simplex> death_simplex;

    [[nodiscard]] double persistence() const { return death - birth; }
};

/// Lexicographic (birth, death); infinite pairs sort after finite ones.
inline bool pair_less(const PersistencePair& a, const PersistencePair& b)
{
    if (a.birth != b.birth) {
        return a.birth < b.birth;
    }
    if (a.infinite != b.infinite) {
        return !a.infinite;
    }
    if (a.death != b.death) {
        return a.death < b.death;
    }
    return a.birth_simplex < b.birth_simplex;
}

struct PersistenceDiagram {
    int dim = 1;
    std::vector<PersistencePair> pairs;

    [[nodiscard]] std::size_t size() const { return pairs.size(); }
    [[nodiscard]] bool empty() const { return pairs.empty(); }

    static PersistenceDiagram from_points(const std::vector<std::pair<double, double>>& points, int dim = 1)
    {
        PersistenceDiagram d{dim, {}};
        for (const auto& [b, e] : points) {
            PersistencePair p;
            p.birth = b;
            p.death = e;
            p.dim = dim;
            d.pairs.push_back(p);
        }
        return d;
    }
};

namespace detail {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

    std::size_t find(std::size_t x)
    {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    bool unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a == b) {
            return false;
        }
        parent_[std::max(a, b)] = std::min(a, b);
        return true;
    }

private:
    std::vector<std::size_t> parent_;
};

/// Symmetric difference of two ascending index lists.
inline void add_column(std::vector<std::size_t>& target, const std::vector<std::size_t>& source,
                       std::vector<std::size_t>& scratch)
{
    scratch.clear();
    std::set_symmetric_difference(target.begin(), target.end(), source.begin(), source.end(),
                                  std::back_inserter(scratch));
    target.swap(scratch);
}

}  // namespace detail

/// Reduced triangle columns of a filtered complex. Columns hold complex
/// indices of edges, ascending.
class BoundaryReduction {
public:
    static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

    explicit BoundaryReduction(const FilteredComplex& complex) : complex_(&complex)
    {
        const std::size_t m = complex.size();
        pivot_owner_.assign(m, kNone);
        column_of_.assign(m, kNone);
        std::vector<std::size_t> scratch;
        for (std::size_t j = 0; j < m; ++j) {
            const Simplex& s = complex[j].simplex;
            if (s.dim() != 2) {
                continue;
            }
            std::vector<std::size_t> col;
            for (const Simplex& face : s.faces()) {
                const std::size_t i = complex.index_of(face);
                if (i == m) {
                    throw std::invalid_argument("filtered complex is not face-closed");
                }
                col.push_back(i);
            }
            std::sort(col.begin(), col.end());
            while (!col.empty() && pivot_owner_[col.back()] != kNone) {
                detail::add_column(col, columns_[column_of_[pivot_owner_[col.back()]]], scratch);
            }
            column_of_[j] = columns_.size();
            if (!col.empty()) {
                pivot_owner_[col.back()] = j;
            }
            columns_.push_back(std::move(col));
        }
    }

    /// Reduced column of the simplex at complex index j (empty for non-triangles).
    [[nodiscard]] const std::vector<std::size_t>& column(std::size_t j) const
    {
        static const std::vector<std::size_t> empty;
        return column_of_.at(j) == kNone ? empty : columns_[column_of_[j]];
    }

    /// Triangle index whose reduced column has edge i as lowest entry, or kNone.
    [[nodiscard]] std::size_t killer_of(std::size_t edge_index) const { return pivot_owner_.at(edge_index); }

    [[nodiscard]] const FilteredComplex& complex() const { return *complex_; }

private:
    const FilteredComplex* complex_;
    std::vector<std::size_t> pivot_owner_;
    std::vector<std::size_t> column_of_;
    std::vector<std::vector<std::size_t>> columns_;
};

/// Dimension-one persistence diagram of a filtered complex. Zero-persistence
/// pairs are dropped; unpaired cycles are reported with `infinite` set.
inline PersistenceDiagram compute_persistence(const FilteredComplex& complex, int dim = 1)
{
    if (dim != 1) {
        throw std::invalid_argument("only dimension-1 persistence is supported");
    }
    const BoundaryReduction reduction(complex);
    PersistenceDiagram diagram{1, {}};

    std::size_t vertex_bound = 0;
    for (const auto& e : complex) {
        if (e.simplex.dim() == 0) {
            vertex_bound = std::max(vertex_bound, e.simplex[0] + 1);
        }
    }
    detail::UnionFind components(vertex_bound);

    for (std::size_t i = 0; i < complex.size(); ++i) {
        const auto& [simplex, value] = complex[i];
        if (simplex.dim() != 1) {
            continue;
        }
        if (components.unite(simplex[0], simplex[1])) {
            continue;  // negative edge: merges two components
        }
        PersistencePair pair;
        pair.birth = value;
        pair.birth_simplex = simplex;
        const std::size_t killer = reduction.killer_of(i);
        if (killer == BoundaryReduction::kNone) {
            pair.infinite = true;
        } else {
            pair.death = complex[killer].value;
            pair.death_simplex = complex[killer].simplex;
            if (pair.death == pair.birth) {
                continue;
            }
        }
        diagram.pairs.push_back(std::move(pair));
    }
    std::sort(diagram.pairs.begin(), diagram.pairs.end(), pair_less);
    return diagram;
}

/// A 1-cycle (edges, filtration order) representing the class of `pair`: the
/// reduced column of its death triangle.
inline std::vector<Simplex> representative_cycle(const FilteredComplex& complex, const PersistencePair& pair)
{
    if (!pair.death_simplex) {
        throw NoDeathSimplex();
    }
    const std::size_t j = complex.index_of(*pair.death_simplex);
    if (j == complex.size()) {
        throw std::invalid_argument("death simplex is not in the complex");
    }
    const BoundaryReduction reduction(complex);
    std::vector<Simplex> cycle;
    for (const std::size_t i : reduction.column(j)) {
        cycle.push_back(complex[i].simplex);
    }
    return cycle;
}

/// Betti-1 as a right-continuous step function: betti[i] holds on
/// [radii[i], radii[i+1]) and the last value holds to infinity.
struct BettiCurve {
    std::vector<double> radii;
    std::vector<std::size_t> betti;

    [[nodiscard]] std::size_t at(double r) const
    {
        const auto it = std::upper_bound(radii.begin(), radii.end(), r);
        if (it == radii.begin()) {
            return 0;
        }
        return betti[static_cast<std::size_t>(it - radii.begin()) - 1];
    }
};

inline constexpr std::size_t kBettiCurveMaxSimplices = 2000;

/// beta_1 at every critical value by rank-nullity: #edges - rank d1 - rank d2,
/// each rank from a fresh dense elimination of the subcomplex.
inline BettiCurve betti_curve(const FilteredComplex& complex, int dim = 1)
{
    if (dim != 1) {
        throw std::invalid_argument("only dimension-1 Betti curves are supported");
    }
    if (complex.size() > kBettiCurveMaxSimplices) {
        throw TooLarge("Betti curve oracle is limited to " + std::to_string(kBettiCurveMaxSimplices) + " simplices");
    }
    std::size_t vertex_bound = 0;
    for (const auto& e : complex) {
        if (e.simplex.dim() == 0) {
            vertex_bound = std::max(vertex_bound, e.simplex[0] + 1);
        }
    }
    // edge ids in filtration order, for the boundary-of-triangle vectors
    std::vector<std::size_t> edge_slot(complex.size(), 0);
    std::size_t edge_count = 0;
    for (std::size_t i = 0; i < complex.size(); ++i) {
        if (complex[i].simplex.dim() == 1) {
            edge_slot[i] = edge_count++;
        }
    }

    BettiCurve curve;
    std::size_t i = 0;
    while (i < complex.size()) {
        const double r = complex[i].value;
        while (i < complex.size() && complex[i].value == r) {
            ++i;
        }
        std::vector<gf2::BitVector> d1;
        std::vector<gf2::BitVector> d2;
        for (std::size_t k = 0; k < i; ++k) {
            const Simplex& s = complex[k].simplex;
            if (s.dim() == 1) {
                gf2::BitVector col(vertex_bound);
                col.set(s[0]);
                col.set(s[1]);
                d1.push_back(std::move(col));
            } else if (s.dim() == 2) {
                gf2::BitVector col(edge_count);
                for (const Simplex& face : s.faces()) {
                    col.set(edge_slot[complex.index_of(face)]);
                }
                d2.push_back(std::move(col));
            }
        }
        const std::size_t cycles = d1.size() - gf2::rank(d1, vertex_bound);
        const std::size_t boundaries = gf2::rank(d2, edge_count);
        curve.radii.push_back(r);
        curve.betti.push_back(cycles - boundaries);
    }
    return curve;
}

}  // namespace branchtopo
