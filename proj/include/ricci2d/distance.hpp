#pragma once

// Riemannian distance, length and area for y-independent conformal metrics
// u(x) (dx^2 + dy^2), via shortest paths on a weighted lattice graph.

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <queue>
#include <random>
#include <vector>

#include "ricci2d/evolve.hpp"

namespace ricci2d {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline double euclidean(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// u at an arbitrary x inside the grid: 4-point Lagrange interpolation of
/// log u, exponentiated. Keeps u positive across sharp peaks.
inline double interpolate_u(const ScalarField& u, double x) {
    const Grid1D& g = u.grid();
    if (x < g.x_min() || x > g.x_max()) throw InvalidArgument("interpolate_u: x outside grid");
    const double s = (x - g.x_min()) / g.spacing();
    const auto n = static_cast<long long>(g.size());
    auto i0 = static_cast<long long>(std::floor(s)) - 1;
    i0 = std::clamp<long long>(i0, 0, n - 4);
    double acc = 0.0;
    for (long long a = 0; a < 4; ++a) {
        double w = 1.0;
        for (long long b = 0; b < 4; ++b)
            if (b != a) w *= (s - static_cast<double>(i0 + b)) / static_cast<double>(a - b);
        acc += w * std::log(u[static_cast<std::size_t>(i0 + a)]);
    }
    return std::exp(acc);
}

/// Length of the horizontal segment from (x1, 0) to (x2, 0): composite
/// Simpson quadrature of sqrt(u), with at least two panels per grid cell.
inline double straight_line_length(const ConformalFlowState& state, double x1, double x2) {
    const Grid1D& g = state.grid();
    if (x1 < g.x_min() || x1 > g.x_max() || x2 < g.x_min() || x2 > g.x_max())
        throw InvalidArgument("straight_line_length: endpoint outside the grid");
    if (x1 == x2) return 0.0;
    const double lo = std::min(x1, x2), hi = std::max(x1, x2);
    auto m = static_cast<long long>(std::ceil(2.0 * (hi - lo) / g.spacing()));
    m = std::max<long long>(2, m + (m % 2));
    const double dx = (hi - lo) / static_cast<double>(m);
    double s = 0.0;
    for (long long k = 0; k <= m; ++k) {
        const double x = k == m ? hi : lo + static_cast<double>(k) * dx;
        const double c = (k == 0 || k == m) ? 1.0 : (k % 2 ? 4.0 : 2.0);
        s += c * std::sqrt(interpolate_u(state.field(), x));
    }
    return s * dx / 3.0;
}

struct DistanceWindow {
    double x_min = -1.25;
    double x_max = 1.25;
    double y_min = -1.25;
    double y_max = 1.25;
    double spacing = 0.02;
    int stencil_order = 2;  // 1: 8 neighbours, 2: 16 neighbours
};

struct NodeIndex {
    std::size_t i = 0;
    std::size_t j = 0;
};

/// Lattice over a rectangular window with node weights u(x). An edge of
/// Euclidean length l between nodes a, b weighs l * sqrt((u_a + u_b) / 2).
class PathMetricGraph {
public:
    PathMetricGraph(const ConformalFlowState& state, const DistanceWindow& win)
        : grid_(make_axis(win.x_min, win.x_max, win.spacing), make_axis(win.y_min, win.y_max, win.spacing)),
          order_(win.stencil_order) {
        if (order_ != 1 && order_ != 2) throw InvalidArgument("PathMetricGraph: stencil order must be 1 or 2");
        const Grid1D& sg = state.grid();
        if (win.x_min < sg.x_min() || win.x_max > sg.x_max())
            throw InvalidArgument("PathMetricGraph: window exceeds the state's x range");
        u_.resize(grid_.nx());
        for (std::size_t i = 0; i < grid_.nx(); ++i) u_[i] = interpolate_u(state.field(), grid_.x().node(i));
        build_offsets();
    }

    const Grid2D& grid() const { return grid_; }
    int stencil_order() const { return order_; }
    double u_at_column(std::size_t i) const { return u_[i]; }

    Point2 position(NodeIndex n) const { return {grid_.x().node(n.i), grid_.y().node(n.j)}; }

    NodeIndex nearest(Point2 p) const {
        auto snap = [](const Grid1D& g, double v) {
            const double s = std::round((v - g.x_min()) / g.spacing());
            return static_cast<std::size_t>(std::clamp(s, 0.0, static_cast<double>(g.size() - 1)));
        };
        return {snap(grid_.x(), p.x), snap(grid_.y(), p.y)};
    }

    /// Dijkstra from `source`; stops early once `target` (if given) is settled.
    /// Ties in the queue break by node index.
    std::vector<double> distances_from(NodeIndex source, const NodeIndex* target = nullptr) const {
        const std::size_t N = grid_.size();
        std::vector<double> dist(N, std::numeric_limits<double>::infinity());
        std::vector<char> done(N, 0);
        using Item = std::pair<double, std::size_t>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        const std::size_t s = grid_.index(source.i, source.j);
        const std::size_t tgt = target ? grid_.index(target->i, target->j) : N;
        dist[s] = 0.0;
        pq.push({0.0, s});
        const auto nx = static_cast<long long>(grid_.nx()), ny = static_cast<long long>(grid_.ny());
        while (!pq.empty()) {
            const auto [d, k] = pq.top();
            pq.pop();
            if (done[k]) continue;
            done[k] = 1;
            if (k == tgt) break;
            const auto i = static_cast<long long>(k / grid_.ny()), j = static_cast<long long>(k % grid_.ny());
            for (const Offset& o : offsets_) {
                const long long i2 = i + o.di, j2 = j + o.dj;
                if (i2 < 0 || i2 >= nx || j2 < 0 || j2 >= ny) continue;
                const std::size_t k2 = static_cast<std::size_t>(i2) * grid_.ny() + static_cast<std::size_t>(j2);
                if (done[k2]) continue;
                const double w = o.length * std::sqrt(0.5 * (u_[static_cast<std::size_t>(i)] + u_[static_cast<std::size_t>(i2)]));
                const double nd = d + w;
                if (nd < dist[k2]) {
                    dist[k2] = nd;
                    pq.push({nd, k2});
                }
            }
        }
        return dist;
    }

private:
    struct Offset {
        int di;
        int dj;
        double length;
    };

    static Grid1D make_axis(double lo, double hi, double h) {
        if (!(h > 0.0) || !(hi > lo)) throw InvalidArgument("DistanceWindow: bad extent or spacing");
        const auto cells = static_cast<std::size_t>(std::llround((hi - lo) / h));
        if (std::abs(static_cast<double>(cells) * h - (hi - lo)) > 1e-9 * (hi - lo))
            throw InvalidArgument("DistanceWindow: extent is not a multiple of the spacing");
        return Grid1D(lo, hi, cells + 1);
    }

    void build_offsets() {
        const double h = grid_.x().spacing();
        std::vector<std::array<int, 2>> base = {{1, 0}, {0, 1}, {1, 1}, {1, -1}};
        if (order_ == 2) {
            base.push_back({2, 1});
            base.push_back({1, 2});
            base.push_back({2, -1});
            base.push_back({1, -2});
        }
        for (auto [a, b] : base) {
            const double len = h * std::hypot(a, b);
            offsets_.push_back({a, b, len});
            offsets_.push_back({-a, -b, len});
        }
    }

    Grid2D grid_;
    int order_;
    std::vector<double> u_;
    std::vector<Offset> offsets_;
};

inline double grid_distance(const PathMetricGraph& g, NodeIndex p, NodeIndex q) {
    const std::vector<double> d = g.distances_from(p, &q);
    const double v = d[g.grid().index(q.i, q.j)];
    if (!std::isfinite(v)) throw std::runtime_error("grid_distance: nodes are disconnected");
    return v;
}

using PointPair = std::pair<Point2, Point2>;
using ReferenceDistance = std::function<double(Point2, Point2)>;

struct AttainmentRow {
    double time = 0.0;
    double sup_deviation = 0.0;  // sup over pairs of |d_g(t) - d0|
    double sup_relative = 0.0;   // sup over pairs of |d_g(t) - d0| / d0
    double max_interior_K = 0.0;
};

/// Pairs must sit at least 10% of the window size away from its edges.
inline void require_window_margin(const DistanceWindow& win, const std::vector<PointPair>& pairs) {
    const double mx = 0.1 * (win.x_max - win.x_min), my = 0.1 * (win.y_max - win.y_min);
    auto ok = [&](Point2 p) {
        return p.x >= win.x_min + mx && p.x <= win.x_max - mx && p.y >= win.y_min + my && p.y <= win.y_max - my;
    };
    for (const auto& [a, b] : pairs)
        if (!ok(a) || !ok(b)) throw InvalidArgument("attainment_report: pair violates the 10% window margin");
}

inline std::vector<AttainmentRow> attainment_report(const std::vector<ConformalFlowState>& states,
                                                    const std::vector<PointPair>& pairs, const DistanceWindow& win,
                                                    const ReferenceDistance& d0 = euclidean) {
    require_window_margin(win, pairs);
    std::vector<AttainmentRow> rows;
    for (const auto& s : states) {
        PathMetricGraph g(s, win);
        AttainmentRow row;
        row.time = s.time();
        for (const auto& [a, b] : pairs) {
            const NodeIndex na = g.nearest(a), nb = g.nearest(b);
            const double d = grid_distance(g, na, nb);
            const double ref = d0(g.position(na), g.position(nb));
            const double dev = std::abs(d - ref);
            row.sup_deviation = std::max(row.sup_deviation, dev);
            if (ref > 0.0) row.sup_relative = std::max(row.sup_relative, dev / ref);
        }
        const CurvatureField K = gauss_curvature_1d(s);
        row.max_interior_K = interior_extrema(K.field, interior_range(s.grid())).max;
        rows.push_back(row);
    }
    return rows;
}

inline std::vector<AttainmentRow> attainment_report(const Trajectory& traj, const std::vector<PointPair>& pairs,
                                                    const DistanceWindow& win,
                                                    const ReferenceDistance& d0 = euclidean) {
    return attainment_report(traj.states, pairs, win, d0);
}

class BallTruncated : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Riemannian area of the graph-distance ball B(p, r), divided by pi r^2.
inline double volume_ratio(const PathMetricGraph& g, NodeIndex p, double r) {
    if (!(r > 0.0)) throw InvalidArgument("volume_ratio: r must be > 0");
    const std::vector<double> d = g.distances_from(p);
    const Grid2D& gr = g.grid();
    const double cell = gr.x().spacing() * gr.y().spacing();
    double area = 0.0;
    for (std::size_t i = 0; i < gr.nx(); ++i) {
        for (std::size_t j = 0; j < gr.ny(); ++j) {
            if (d[gr.index(i, j)] > r) continue;
            if (i == 0 || j == 0 || i + 1 == gr.nx() || j + 1 == gr.ny())
                throw BallTruncated("volume_ratio: metric ball touches the window boundary");
            area += g.u_at_column(i) * cell;
        }
    }
    return area / (std::numbers::pi * r * r);
}

inline double volume_ratio(const ConformalFlowState& state, const DistanceWindow& win, Point2 p, double r) {
    PathMetricGraph g(state, win);
    return volume_ratio(g, g.nearest(p), r);
}

}  // namespace ricci2d

namespace ricci2d {

// Seeded endpoints uniform in [-box, box]^2.
inline std::vector<PointPair> random_pairs(int count, double box, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-box, box);
    std::vector<PointPair> pairs;
    pairs.reserve(static_cast<std::size_t>(std::max(0, count)));
    for (int k = 0; k < count; ++k) {
        const double ax = U(rng), ay = U(rng), bx = U(rng), by = U(rng);
        pairs.push_back({{ax, ay}, {bx, by}});
    }
    return pairs;
}

// Largest distance between any two endpoints in the pair set.
inline double pair_set_diameter(const std::vector<PointPair>& pairs) {
    std::vector<Point2> pts;
    for (const auto& [a, b] : pairs) {
        pts.push_back(a);
        pts.push_back(b);
    }
    double d = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, euclidean(pts[i], pts[j]));
    return d;
}

}  // namespace ricci2d
