#pragma once

// Persistence landscapes as exact piecewise-linear functions, the
// generalized (theta, y) landscape with positive and negative level
// families, landscape algebra and norms, diagram recovery, and a secant
// harness for the differentiability of landscape distances.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "error.hpp"
#include "persistence.hpp"

namespace branchtopo {

using Bar = std::pair<double, double>;

struct Breakpoint {
    double t = 0.0;
    double v = 0.0;

    friend bool operator==(const Breakpoint&, const Breakpoint&) = default;
};

/// Linear between breakpoints (t strictly increasing), zero outside them.
class PiecewiseLinear {
public:
    PiecewiseLinear() = default;
    explicit PiecewiseLinear(std::vector<Breakpoint> points) : points_(std::move(points)) {}

    [[nodiscard]] const std::vector<Breakpoint>& breakpoints() const { return points_; }
    [[nodiscard]] bool is_zero() const
    {
        return std::all_of(points_.begin(), points_.end(), [](const Breakpoint& p) { return p.v == 0.0; });
    }

    [[nodiscard]] double operator()(double t) const
    {
        if (points_.empty() || t < points_.front().t || t > points_.back().t) {
            return 0.0;
        }
        const auto it =
            std::lower_bound(points_.begin(), points_.end(), t, [](const Breakpoint& p, double x) { return p.t < x; });
        if (it->t == t) {
            return it->v;
        }
        const Breakpoint& a = *(it - 1);
        const Breakpoint& b = *it;
        return a.v + (b.v - a.v) * ((t - a.t) / (b.t - a.t));
    }

    friend bool operator==(const PiecewiseLinear&, const PiecewiseLinear&) = default;

private:
    std::vector<Breakpoint> points_;
};

namespace detail {

/// Sorted union of the breakpoint abscissae of several functions.
inline std::vector<double> merged_grid(std::span<const PiecewiseLinear* const> fns)
{
    std::vector<double> grid;
    for (const PiecewiseLinear* f : fns) {
        for (const Breakpoint& p : f->breakpoints()) {
            grid.push_back(p.t);
        }
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

/// Integral of the square of the linear function running from f0 to f1 over width h.
inline double segment_square_integral(double h, double f0, double f1) { return h * (f0 * f0 + f0 * f1 + f1 * f1) / 3.0; }

/// Drops collinear interior breakpoints and redundant zero runs at the ends.
inline std::vector<Breakpoint> simplify(std::vector<Breakpoint> pts)
{
    std::vector<Breakpoint> out;
    for (const Breakpoint& p : pts) {
        while (out.size() >= 2) {
            const Breakpoint& a = out[out.size() - 2];
            const Breakpoint& b = out.back();
            const double interp = a.v + (p.v - a.v) * ((b.t - a.t) / (p.t - a.t));
            const double scale = std::max({1.0, std::abs(a.v), std::abs(b.v), std::abs(p.v)});
            if (std::abs(interp - b.v) > 1e-12 * scale) {
                break;
            }
            out.pop_back();
        }
        out.push_back(p);
    }
    while (out.size() >= 2 && out[0].v == 0.0 && out[1].v == 0.0) {
        out.erase(out.begin());
    }
    while (out.size() >= 2 && out[out.size() - 1].v == 0.0 && out[out.size() - 2].v == 0.0) {
        out.pop_back();
    }
    if (out.size() == 1 && out[0].v == 0.0) {
        out.clear();
    }
    return out;
}

inline bool bar_less(const Bar& a, const Bar& b)
{
    return a.first < b.first || (a.first == b.first && a.second > b.second);
}

}  // namespace detail

/// Levels lambda_1, lambda_2, ...; `raw` marks results of combinations with
/// negative coefficients, which need not be non-negative or nested.
struct Landscape {
    std::vector<PiecewiseLinear> levels;
    bool raw = false;

    [[nodiscard]] std::size_t size() const { return levels.size(); }
    [[nodiscard]] bool empty() const { return levels.empty(); }

    /// lambda_k(t) for k >= 1; zero beyond the last level.
    [[nodiscard]] double evaluate(std::size_t k, double t) const
    {
        return k >= 1 && k <= levels.size() ? levels[k - 1](t) : 0.0;
    }

    friend bool operator==(const Landscape&, const Landscape&) = default;
};

/// Sort-and-sweep construction. Bars with death <= birth contribute nothing
/// and are dropped.
inline Landscape build_landscape(std::span<const Bar> bars)
{
    std::vector<Bar> queue;
    for (const Bar& b : bars) {
        if (!std::isfinite(b.first) || !std::isfinite(b.second)) {
            throw InfinitePair();
        }
        if (b.second > b.first) {
            queue.push_back(b);
        }
    }
    std::sort(queue.begin(), queue.end(), detail::bar_less);

    Landscape out;
    while (!queue.empty()) {
        auto [b, d] = queue.front();
        queue.erase(queue.begin());
        std::vector<Breakpoint> level{{b, 0.0}, {(b + d) / 2, (d - b) / 2}};
        std::size_t p = 0;
        while (true) {
            std::size_t i = p;
            while (i < queue.size() && queue[i].second <= d) {
                ++i;
            }
            if (i == queue.size()) {
                level.push_back({d, 0.0});
                break;
            }
            const auto [b2, d2] = queue[i];
            queue.erase(queue.begin() + static_cast<std::ptrdiff_t>(i));
            p = i;
            if (b2 > d) {
                level.push_back({d, 0.0});
            }
            if (b2 >= d) {
                level.push_back({b2, 0.0});
            } else {
                level.push_back({(b2 + d) / 2, (d - b2) / 2});
                // the overlap [b2, d] continues on a lower level
                const Bar overlap{b2, d};
                const auto at = std::upper_bound(queue.begin(), queue.end(), overlap, detail::bar_less);
                if (static_cast<std::size_t>(at - queue.begin()) <= p) {
                    ++p;
                }
                queue.insert(at, overlap);
            }
            level.push_back({(b2 + d2) / 2, (d2 - b2) / 2});
            b = b2;
            d = d2;
        }
        out.levels.emplace_back(std::move(level));
    }
    return out;
}

inline std::vector<Bar> finite_bars(const PersistenceDiagram& diagram)
{
    std::vector<Bar> bars;
    for (const auto& p : diagram.pairs) {
        if (p.infinite) {
            throw InfinitePair();
        }
        bars.emplace_back(p.birth, p.death);
    }
    return bars;
}

inline Landscape build_landscape(const PersistenceDiagram& diagram) { return build_landscape(finite_bars(diagram)); }

/// sum_i c_i L_i level by level on the merged breakpoint grid; missing
/// levels count as zero.
inline Landscape linear_combination(std::span<const double> coeffs, std::span<const Landscape> landscapes)
{
    if (coeffs.size() != landscapes.size()) {
        throw std::invalid_argument("one coefficient per landscape is required");
    }
    Landscape out;
    std::size_t depth = 0;
    for (std::size_t i = 0; i < landscapes.size(); ++i) {
        depth = std::max(depth, landscapes[i].size());
        out.raw = out.raw || landscapes[i].raw || coeffs[i] < 0.0;
    }
    for (std::size_t k = 0; k < depth; ++k) {
        std::vector<const PiecewiseLinear*> fns;
        for (const Landscape& l : landscapes) {
            if (k < l.size()) {
                fns.push_back(&l.levels[k]);
            }
        }
        std::vector<Breakpoint> pts;
        for (const double t : detail::merged_grid(fns)) {
            double v = 0.0;
            for (std::size_t i = 0; i < landscapes.size(); ++i) {
                v += coeffs[i] * landscapes[i].evaluate(k + 1, t);
            }
            pts.push_back({t, v});
        }
        out.levels.emplace_back(detail::simplify(std::move(pts)));
    }
    return out;
}

inline Landscape average(std::span<const Landscape> landscapes)
{
    if (landscapes.empty()) {
        return {};
    }
    const std::vector<double> coeffs(landscapes.size(), 1.0 / static_cast<double>(landscapes.size()));
    return linear_combination(coeffs, landscapes);
}

/// Integral of (f - g)^2, exact on the merged grid.
inline double squared_l2_distance(const PiecewiseLinear& f, const PiecewiseLinear& g)
{
    const PiecewiseLinear* both[] = {&f, &g};
    const auto grid = detail::merged_grid(both);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double f0 = f(grid[i]) - g(grid[i]);
        const double f1 = f(grid[i + 1]) - g(grid[i + 1]);
        total += detail::segment_square_integral(grid[i + 1] - grid[i], f0, f1);
    }
    return total;
}

inline double squared_l2_distance(const Landscape& a, const Landscape& b)
{
    static const PiecewiseLinear zero;
    double total = 0.0;
    for (std::size_t k = 0; k < std::max(a.size(), b.size()); ++k) {
        total += squared_l2_distance(k < a.size() ? a.levels[k] : zero, k < b.size() ? b.levels[k] : zero);
    }
    return total;
}

inline double l2_distance(const Landscape& a, const Landscape& b) { return std::sqrt(squared_l2_distance(a, b)); }

/// Integral of lambda_1 squared; zero for an empty landscape.
inline double integral_of_square(const Landscape& landscape)
{
    return landscape.empty() ? 0.0 : squared_l2_distance(landscape.levels[0], PiecewiseLinear{});
}

/// Inverts build_landscape. Corners are the strict local maxima of every
/// level; the multiplicity of a corner (b, d) is the second difference of the
/// rank function n(b, d) = #{k : lambda_k((b+d)/2) >= (d-b)/2} with offset
/// 1e-9 times the diagram diameter.
inline std::vector<Bar> recover_bars(const Landscape& landscape)
{
    std::vector<Bar> corners;
    for (const PiecewiseLinear& level : landscape.levels) {
        const auto& pts = level.breakpoints();
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double left = i > 0 ? pts[i - 1].v : 0.0;
            const double right = i + 1 < pts.size() ? pts[i + 1].v : 0.0;
            if (pts[i].v > 0.0 && pts[i].v > left && pts[i].v > right) {
                corners.emplace_back(pts[i].t - pts[i].v, pts[i].t + pts[i].v);
            }
        }
    }
    if (corners.empty()) {
        return {};
    }
    double lo = corners[0].first, hi = corners[0].second;
    for (const Bar& c : corners) {
        lo = std::min(lo, c.first);
        hi = std::max(hi, c.second);
    }
    const double eps = 1e-9 * std::max(hi - lo, std::numeric_limits<double>::min());
    const double tol = 1e-3 * eps;

    std::sort(corners.begin(), corners.end());
    std::vector<Bar> distinct;
    for (const Bar& c : corners) {
        bool merged = false;
        for (const Bar& e : distinct) {
            const double gap = std::max(std::abs(c.first - e.first), std::abs(c.second - e.second));
            if (gap <= tol) {
                merged = true;
                break;
            }
            if (gap <= 10 * eps) {
                throw SeparationTooSmall("landscape corners closer than the recovery probe allows");
            }
        }
        if (!merged) {
            distinct.push_back(c);
        }
    }

    const auto rank = [&](double b, double d) {
        const double mid = (b + d) / 2, half = (d - b) / 2;
        long k = 0;
        while (static_cast<std::size_t>(k) < landscape.size() &&
               landscape.levels[static_cast<std::size_t>(k)](mid) >= half - tol) {
            ++k;
        }
        return k;
    };
    std::vector<Bar> bars;
    for (const auto& [b, d] : distinct) {
        const long mult = rank(b, d) - rank(b - eps, d) - rank(b, d + eps) + rank(b - eps, d + eps);
        for (long i = 0; i < mult; ++i) {
            bars.emplace_back(b, d);
        }
    }
    return bars;
}

inline PersistenceDiagram recover_diagram(const Landscape& landscape)
{
    return PersistenceDiagram::from_points(recover_bars(landscape));
}

// Generalized landscapes

/// T(-y) then R(pi/4 - theta): translate by -y along the y-axis, rotate about
/// the origin.
inline Bar rebaseline(const Bar& p, double theta, double y)
{
    const double phi = std::numbers::pi / 4 - theta;
    const double c = std::cos(phi), s = std::sin(phi);
    const double px = p.first, py = p.second - y;
    return {c * px - s * py, s * px + c * py};
}

inline Bar rebaseline_inverse(const Bar& q, double theta, double y)
{
    const double phi = std::numbers::pi / 4 - theta;
    const double c = std::cos(phi), s = std::sin(phi);
    return {c * q.first + s * q.second, -s * q.first + c * q.second + y};
}

struct GeneralizedLandscape {
    double theta = std::numbers::pi / 4;
    double y = 0.0;
    /// Points on or above the new baseline (x <= y).
    Landscape positive;
    /// Points below it, coordinates swapped.
    Landscape negative;

    /// Signed level index: k > 0 reads positive[k], k < 0 reads negative[-k].
    [[nodiscard]] double evaluate(long k, double t) const
    {
        if (k > 0) {
            return positive.evaluate(static_cast<std::size_t>(k), t);
        }
        if (k < 0) {
            return negative.evaluate(static_cast<std::size_t>(-k), t);
        }
        return 0.0;
    }

    friend bool operator==(const GeneralizedLandscape&, const GeneralizedLandscape&) = default;
};

inline GeneralizedLandscape build_generalized_landscape(std::span<const Bar> points, double theta, double y)
{
    std::vector<Bar> above, below;
    for (const Bar& p : points) {
        if (!std::isfinite(p.first) || !std::isfinite(p.second)) {
            throw InfinitePair();
        }
        const Bar q = rebaseline(p, theta, y);
        if (q.first <= q.second) {
            above.push_back(q);
        } else {
            below.emplace_back(q.second, q.first);
        }
    }
    return {theta, y, build_landscape(above), build_landscape(below)};
}

inline GeneralizedLandscape build_generalized_landscape(const PersistenceDiagram& diagram, double theta, double y)
{
    return build_generalized_landscape(finite_bars(diagram), theta, y);
}

/// Diagram points (in original coordinates) of a generalized landscape.
inline std::vector<Bar> recover_points(const GeneralizedLandscape& g)
{
    std::vector<Bar> out;
    for (const Bar& q : recover_bars(g.positive)) {
        out.push_back(rebaseline_inverse(q, g.theta, g.y));
    }
    for (const Bar& q : recover_bars(g.negative)) {
        out.push_back(rebaseline_inverse({q.second, q.first}, g.theta, g.y));
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace detail {

inline void require_same_parameters(const GeneralizedLandscape& a, const GeneralizedLandscape& b)
{
    if (a.theta != b.theta || a.y != b.y) {
        throw ParameterMismatch("generalized landscapes have different (theta, y)");
    }
}

}  // namespace detail

inline GeneralizedLandscape average(std::span<const GeneralizedLandscape> landscapes)
{
    if (landscapes.empty()) {
        return {};
    }
    std::vector<Landscape> pos, neg;
    for (const auto& g : landscapes) {
        detail::require_same_parameters(landscapes[0], g);
        pos.push_back(g.positive);
        neg.push_back(g.negative);
    }
    return {landscapes[0].theta, landscapes[0].y, average(pos), average(neg)};
}

/// Sum over both families of the squared L2 distances, square-rooted.
inline double l2_distance(const GeneralizedLandscape& a, const GeneralizedLandscape& b)
{
    detail::require_same_parameters(a, b);
    return std::sqrt(squared_l2_distance(a.positive, b.positive) + squared_l2_distance(a.negative, b.negative));
}

/// Index of the closest average; ties go to the lowest index.
template <class L>
std::size_t classify_by_nearest_average(const L& input, std::span<const L> averages)
{
    if (averages.empty()) {
        throw std::invalid_argument("at least one group average is required");
    }
    std::size_t best = 0;
    double best_distance = l2_distance(input, averages[0]);
    for (std::size_t g = 1; g < averages.size(); ++g) {
        const double dist = l2_distance(input, averages[g]);
        if (dist < best_distance) {
            best = g;
            best_distance = dist;
        }
    }
    return best;
}

// Differentiability harness

struct PointVelocity {
    double alpha = 0.0;
    double beta = 0.0;
};

enum class DerivativeMode { Points, Theta, Y };

/// d(e) is the distance from G[theta, y] of D to the average of G[theta, y]
/// of the group diagrams. Points mode moves every point p by
/// (alpha e, beta e); Theta and Y modes perturb the parameter by e.
struct DerivativeScenario {
    DerivativeMode mode = DerivativeMode::Points;
    std::vector<Bar> diagram;
    std::vector<std::vector<Bar>> groups;
    /// One per diagram point; empty means all zero.
    std::vector<PointVelocity> velocities;
    /// One list per group; empty lists mean all zero.
    std::vector<std::vector<PointVelocity>> group_velocities;
    double theta = std::numbers::pi / 4;
    double y = 0.0;
    double scale = 1.0;
};

struct DerivativeReport {
    std::vector<double> eps;
    std::vector<double> forward_slopes;
    std::vector<double> backward_slopes;
    double d0 = 0.0;
    double limit_estimate = 0.0;
    bool converged = false;
    /// Some point lies on the baseline at e = 0.
    bool baseline_contact = false;
};

inline constexpr double kSlopeAgreement = 1e-4;

namespace detail {

inline std::vector<Bar> moved(const std::vector<Bar>& pts, const std::vector<PointVelocity>& v, double e)
{
    if (!v.empty() && v.size() != pts.size()) {
        throw std::invalid_argument("velocity count must match the diagram size");
    }
    std::vector<Bar> out = pts;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i].first += v[i].alpha * e;
        out[i].second += v[i].beta * e;
    }
    return out;
}

inline double scenario_distance(const DerivativeScenario& s, double e)
{
    double theta = s.theta, y = s.y, move = 0.0;
    switch (s.mode) {
    case DerivativeMode::Points:
        move = e;
        break;
    case DerivativeMode::Theta:
        theta += e;
        break;
    case DerivativeMode::Y:
        y += e;
        break;
    }
    static const std::vector<PointVelocity> none;
    const GeneralizedLandscape g = build_generalized_landscape(moved(s.diagram, s.velocities, move), theta, y);
    std::vector<GeneralizedLandscape> members;
    for (std::size_t j = 0; j < s.groups.size(); ++j) {
        const auto& v = j < s.group_velocities.size() ? s.group_velocities[j] : none;
        members.push_back(build_generalized_landscape(moved(s.groups[j], v, move), theta, y));
    }
    return l2_distance(g, average(std::span<const GeneralizedLandscape>(members)));
}

}  // namespace detail

/// Secant slopes (d(e) - d(0)) / e for e = +-2^-5 ... +-2^-15 times scale.
/// Converged when the forward and backward slopes at the finest e agree to
/// kSlopeAgreement relative.
inline DerivativeReport derivative_check(const DerivativeScenario& s)
{
    if (s.groups.empty()) {
        throw std::invalid_argument("derivative check needs at least one group diagram");
    }
    if (!(s.scale > 0.0)) {
        throw std::invalid_argument("scale must be positive");
    }
    DerivativeReport r;
    r.d0 = detail::scenario_distance(s, 0.0);

    const auto touches = [&](const std::vector<Bar>& pts) {
        for (const Bar& p : pts) {
            const Bar q = rebaseline(p, s.theta, s.y);
            if (std::abs(q.first - q.second) <= 1e-12 * std::max({1.0, std::abs(q.first), std::abs(q.second)})) {
                return true;
            }
        }
        return false;
    };
    r.baseline_contact = touches(s.diagram);
    for (const auto& g : s.groups) {
        r.baseline_contact = r.baseline_contact || touches(g);
    }

    for (int k = 5; k <= 15; ++k) {
        const double e = std::ldexp(s.scale, -k);
        r.eps.push_back(e);
        r.forward_slopes.push_back((detail::scenario_distance(s, e) - r.d0) / e);
        r.backward_slopes.push_back((detail::scenario_distance(s, -e) - r.d0) / -e);
    }
    const double f = r.forward_slopes.back(), b = r.backward_slopes.back();
    r.limit_estimate = 0.5 * (f + b);
    r.converged = std::abs(f - b) <= kSlopeAgreement * std::max(std::abs(f), std::abs(b));
    return r;
}

}  // namespace branchtopo
