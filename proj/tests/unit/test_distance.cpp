#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ricci2d/distance.hpp"

using namespace ricci2d;

namespace {

ConformalFlowState constant_state(double c, double L = 3, long long n = 301) {
    const Grid1D g(-L, L, n);
    return ConformalFlowState(ScalarField(g, std::vector<double>(g.size(), c)), 1.0);
}

ConformalFlowState soliton_state(double t, double L = 3, long long n = 601) {
    const Grid1D g(-L, L, n);
    return ConformalFlowState(ScalarField::sample(g, [t](double x) { return 2 * t / (t * t + x * x); }), t);
}

ConformalFlowState bump_state(double amp) {
    const Grid1D g(-3, 3, 601);
    return ConformalFlowState(
        ScalarField::sample(g, [amp](double x) { return 1 + amp * std::exp(-8 * x * x) + 0.3 * std::sin(2 * x) * std::sin(2 * x); }),
        1.0);
}

DistanceWindow window(double lo, double hi, double spacing, int order = 2) {
    DistanceWindow w;
    w.x_min = w.y_min = lo;
    w.x_max = w.y_max = hi;
    w.spacing = spacing;
    w.stencil_order = order;
    return w;
}

}  // namespace

TEST(StraightLine, FlatAndScaled) {
    EXPECT_NEAR(straight_line_length(constant_state(1.0, 5), 0, 3), 3.0, 1e-12);
    EXPECT_NEAR(straight_line_length(constant_state(4.0, 5), 0, 3), 6.0, 1e-12);
    EXPECT_EQ(straight_line_length(constant_state(1.0, 5), 1, 1), 0.0);
}

TEST(StraightLine, SolitonAntiderivative) {
    const double t = 0.5;
    const double exact = std::sqrt(2 * t) * (std::asinh(1 / t) - std::asinh(0.0));
    EXPECT_NEAR(exact, 1.44364, 1e-5);
    EXPECT_NEAR(straight_line_length(soliton_state(t, 3, 3001), 0, 1), exact, 1e-6);
}

TEST(StraightLine, OutOfDomain) {
    EXPECT_THROW(straight_line_length(constant_state(1.0), 0, 3.5), InvalidArgument);
}

TEST(GridDistance, FlatOverestimateWithinStencilBudget) {
    const ConformalFlowState s = constant_state(1.0, 5, 501);
    const PathMetricGraph g(s, [] {
        DistanceWindow w;
        w.x_min = -1, w.x_max = 4, w.y_min = -1, w.y_max = 5, w.spacing = 0.05;
        return w;
    }());
    const double d = grid_distance(g, g.nearest({0, 0}), g.nearest({3, 4}));
    EXPECT_GE(d, 5.0 - 1e-12);
    EXPECT_LE(d, 5.0 * 1.03);
    EXPECT_EQ(grid_distance(g, g.nearest({1, 1}), g.nearest({1, 1})), 0.0);
}

TEST(GridDistance, SolitonAxisPathBound) {
    const double t = 0.5, h = 0.02;
    const ConformalFlowState s = soliton_state(t);
    const PathMetricGraph g(s, window(-1.5, 1.5, h));
    const double d = grid_distance(g, g.nearest({0, 0}), g.nearest({1, 0}));
    EXPECT_LE(d, straight_line_length(s, 0, 1) + 2 * h * 2.0);
}

TEST(GridDistance, MetricAxioms) {
    const ConformalFlowState s = bump_state(3.0);
    const PathMetricGraph g(s, window(-1.5, 1.5, 0.05));
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::size_t> I(0, g.grid().nx() - 1), J(0, g.grid().ny() - 1);
    for (int k = 0; k < 100; ++k) {
        const NodeIndex p{I(rng), J(rng)}, q{I(rng), J(rng)}, r{I(rng), J(rng)};
        const double pq = grid_distance(g, p, q), qp = grid_distance(g, q, p);
        EXPECT_NEAR(pq, qp, 1e-12 * pq);
        EXPECT_LE(pq, grid_distance(g, p, r) + grid_distance(g, r, q) + 1e-12);
    }
}

TEST(GridDistance, MonotoneInTheConformalFactor) {
    const PathMetricGraph ga(bump_state(3.0), window(-1.5, 1.5, 0.05)), gb(bump_state(1.0), window(-1.5, 1.5, 0.05));
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<std::size_t> I(0, ga.grid().nx() - 1);
    for (int k = 0; k < 30; ++k) {
        const NodeIndex p{I(rng), I(rng)}, q{I(rng), I(rng)};
        EXPECT_GE(grid_distance(ga, p, q), grid_distance(gb, p, q));
    }
}

TEST(GridDistance, StencilSandwich) {
    const ConformalFlowState s = bump_state(3.0);
    const PathMetricGraph g1(s, window(-1.5, 1.5, 0.05, 1)), g2(s, window(-1.5, 1.5, 0.05, 2));
    double umin = 1e300;
    for (std::size_t i = 0; i < g1.grid().nx(); ++i) umin = std::min(umin, g1.u_at_column(i));
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<std::size_t> I(0, g1.grid().nx() - 1);
    for (int k = 0; k < 30; ++k) {
        const NodeIndex p{I(rng), I(rng)}, q{I(rng), I(rng)};
        const double d1 = grid_distance(g1, p, q), d2 = grid_distance(g2, p, q);
        EXPECT_LE(d2, d1 + 1e-12);
        // flat comparison metric umin (dx^2 + dy^2) lies below u everywhere
        EXPECT_GE(d2, std::sqrt(umin) * euclidean(g2.position(p), g2.position(q)) - 1e-12);
    }
}

TEST(GridDistance, FlatPairsWithinFactor) {
    const PathMetricGraph g(constant_state(1.0), window(-1.25, 1.25, 0.02));
    for (const auto& [a, b] : random_pairs(40, 1.0, 3)) {
        const NodeIndex na = g.nearest(a), nb = g.nearest(b);
        const double e = euclidean(g.position(na), g.position(nb));
        const double d = grid_distance(g, na, nb);
        EXPECT_GE(d, e - 1e-12);
        EXPECT_LE(d, 1.0 / std::cos(std::atan(0.5) / 2) * e + 1e-12);  // worst angle half-way between stencil directions
    }
}

TEST(Attainment, StaticTrajectory) {
    const std::vector<ConformalFlowState> states{constant_state(1.0), constant_state(1.0)};
    const auto pairs = random_pairs(20, 1.0, 7);
    const auto rows = attainment_report(states, pairs, window(-1.25, 1.25, 0.02));
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].sup_deviation, rows[1].sup_deviation);
    EXPECT_LE(rows[0].sup_deviation, 0.0275 * pair_set_diameter(pairs));
    EXPECT_EQ(rows[0].max_interior_K, 0.0);
}

TEST(Attainment, SolitonDistancesCollapse) {
    // horizontal distance 2 sqrt(2t) asinh(1/t) between (-1,0) and (1,0) tends to 0,
    // so the soliton flow cannot attain Euclidean data
    DistanceWindow w = window(-1.25, 1.25, 0.0025);
    w.y_min = -0.25;
    w.y_max = 0.25;
    double prev = 1e300;
    for (double t : {0.1, 0.05, 0.02, 0.01}) {
        const PathMetricGraph g(soliton_state(t, 3, 6001), w);
        const double d = grid_distance(g, g.nearest({-1, 0}), g.nearest({1, 0}));
        const double exact = 2 * std::sqrt(2 * t) * std::asinh(1 / t);
        EXPECT_NEAR(d, exact, 0.02 * exact) << "t=" << t;
        EXPECT_LT(d, prev);
        prev = d;
    }
    EXPECT_LT(prev, 1.6);
}

TEST(Attainment, WindowMarginEnforced) {
    const std::vector<ConformalFlowState> states{constant_state(1.0)};
    const std::vector<PointPair> pairs{{{-1.2, 0}, {0, 0}}};
    EXPECT_THROW(attainment_report(states, pairs, window(-1.25, 1.25, 0.02)), InvalidArgument);
}

TEST(VolumeRatio, FlatAndScaledFlat) {
    const DistanceWindow w = window(-1.25, 1.25, 0.02);
    EXPECT_NEAR(volume_ratio(constant_state(1.0), w, {0, 0}, 1.0), 1.0, 0.03);
    EXPECT_NEAR(volume_ratio(constant_state(1.0), w, {0.3, -0.1}, 0.5), 1.0, 0.03);
    EXPECT_NEAR(volume_ratio(constant_state(4.0), w, {0, 0}, 1.0), 1.0, 0.03);
}

TEST(VolumeRatio, SolitonHasPositiveLowerBound) {
    const ConformalFlowState s = soliton_state(0.5);
    for (double r : {0.25, 0.5, 1.0}) EXPECT_GE(volume_ratio(s, window(-1.25, 1.25, 0.02), {0, 0}, r), 0.2);
}

TEST(VolumeRatio, TruncatedBall) {
    EXPECT_THROW(volume_ratio(constant_state(1.0), window(-1.25, 1.25, 0.02), {0, 0}, 1.3), BallTruncated);
}

TEST(RandomPairs, SeededAndBoxed) {
    const auto a = random_pairs(50, 1.0, 42), b = random_pairs(50, 1.0, 42), c = random_pairs(50, 1.0, 43);
    ASSERT_EQ(a.size(), 50u);
    for (std::size_t k = 0; k < a.size(); ++k) {
        EXPECT_EQ(a[k].first.x, b[k].first.x);
        EXPECT_EQ(a[k].second.y, b[k].second.y);
        EXPECT_LE(std::abs(a[k].first.x), 1.0);
        EXPECT_LE(std::abs(a[k].second.y), 1.0);
    }
    EXPECT_NE(a[0].first.x, c[0].first.x);
    EXPECT_LE(pair_set_diameter(a), 2 * std::sqrt(2.0));
}
