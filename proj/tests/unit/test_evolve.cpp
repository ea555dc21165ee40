#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "ricci2d/evolve.hpp"
#include "ricci2d/pressure.hpp"

using namespace ricci2d;

namespace {

ScalarField constant_field(const Grid1D& g, double c) { return ScalarField(g, std::vector<double>(g.size(), c)); }

double max_rel_soliton_error(const ConformalFlowState& s) {
    double e = 0;
    for (std::size_t i = 0; i < s.field().size(); ++i) {
        const double x = s.grid().node(i), t = s.time();
        const double exact = 2 * t / (t * t + x * x);
        e = std::max(e, std::abs(s.field()[i] - exact) / exact);
    }
    return e;
}

EvolutionConfig soliton_config(long long n, double t0, double t1, double L = 20) {
    const Grid1D g(-L, L, n);
    EvolutionConfig c{g};
    c.t_start = t0;
    c.t_end = t1;
    c.dt = g.spacing() * g.spacing() / 4;
    c.boundary_mode = boundary::ExactSoliton{};
    return c;
}

EvolutionConfig measure_config(double L, long long n, double t_end, std::vector<double> outs) {
    const Grid1D g(-L, L, n);
    EvolutionConfig c{g};
    c.t_start = 0;
    c.t_end = t_end;
    c.dt = g.spacing() * g.spacing() / 4;
    c.boundary_mode = boundary::ConstantFarfield{1.0};
    c.output_times = std::move(outs);
    return c;
}

std::vector<double> linspace_outputs(double t_end, int k) {
    std::vector<double> t;
    for (int i = 1; i <= k; ++i) t.push_back(t_end * i / k);
    return t;
}

}  // namespace

TEST(Mollifier, ZeroLineMassIsBackground) {
    const Grid1D g(-10, 10, 1201);
    const ScalarField u = mollify_initial_data({2.5, 0.0, 0.05, MollifierKind::gaussian}, g);
    for (double v : u.values()) EXPECT_EQ(v, 2.5);
}

TEST(Mollifier, GaussianPeak) {
    const Grid1D g(-10, 10, 1201);
    const ScalarField u = mollify_initial_data({1.0, 1.0, 0.1, MollifierKind::gaussian}, g);
    EXPECT_NEAR(u[600], 1 + 1 / (0.1 * std::sqrt(2 * std::numbers::pi)), 1e-12);
    EXPECT_NEAR(u[600], 4.9894, 1e-4);
}

TEST(Mollifier, UnitMassOnTheGrid) {
    const Grid1D g(-10, 10, 1201);
    for (MollifierKind k : {MollifierKind::gaussian, MollifierKind::bump})
        for (double eps : {0.05, 0.1, 0.5}) {
            const ScalarField u = mollify_initial_data({1.0, 1.0, eps, k}, g);
            std::vector<double> e(g.size());
            for (std::size_t i = 0; i < g.size(); ++i) e[i] = u[i] - 1.0;
            EXPECT_NEAR(trapezoid(ScalarField(g, e)), 1.0, 1e-8);
        }
}

TEST(Mollifier, RejectsUnderResolvedWidth) {
    const Grid1D g(-10, 10, 201);  // h = 0.1
    EXPECT_THROW(mollify_initial_data({1.0, 1.0, 0.29, MollifierKind::gaussian}, g), UnderResolved);
    EXPECT_NO_THROW(mollify_initial_data({1.0, 1.0, 0.3, MollifierKind::gaussian}, g));
}

TEST(Tridiagonal, MatchesDenseElimination) {
    const std::vector<double> lo{0, -1, -0.5, -2, -1}, di{4, 5, 3, 6, 4}, up{-1, -2, -1, -1, 0}, b{1, 2, 3, 4, 5};
    const std::vector<double> x = detail::solve_tridiagonal(lo, di, up, b);
    for (std::size_t i = 0; i < 5; ++i) {
        double r = di[i] * x[i];
        if (i > 0) r += lo[i] * x[i - 1];
        if (i < 4) r += up[i] * x[i + 1];
        EXPECT_NEAR(r, b[i], 1e-14);
    }
}

TEST(ImplicitStep, ConstantIsExactWithoutIterations) {
    const Grid1D g(-5, 5, 51);
    for (BoundaryMode mode : {BoundaryMode{boundary::ConstantFarfield{1.0}}, BoundaryMode{boundary::ZeroFlux{}}}) {
        EvolutionConfig c{g};
        c.boundary_mode = mode;
        NewtonStats ns;
        const ConformalFlowState next = implicit_step(ConformalFlowState(constant_field(g, 1.0), 0.3), 0.7, c, &ns);
        EXPECT_EQ(ns.iterations, 0);
        for (double v : next.field().values()) EXPECT_EQ(v, 1.0);
        EXPECT_DOUBLE_EQ(next.time(), 1.0);
    }
}

TEST(ImplicitStep, ZeroValueIsAPositivityError) {
    const Grid1D g(-1, 1, 5);
    EXPECT_THROW(ConformalFlowState(ScalarField(g, {1, 1, 0, 1, 1}), 0.0), PositivityError);
}

TEST(ImplicitStep, OneSolitonStep) {
    // The n = 801 resolution leaves ~1e-4 spatial truncation error at the peak
    // (width t = 0.1 spans only two cells); the 1e-5 match needs n = 3201.
    for (long long n : {801, 3201}) {
        EvolutionConfig c = soliton_config(n, 0.1, 0.1001);
        const ConformalFlowState s0(ScalarField::sample(c.grid, [](double x) { return soliton::u(x, 0.1); }), 0.1);
        const ConformalFlowState s1 = implicit_step(s0, 1e-4, c);
        const double err = max_rel_soliton_error(s1);
        EXPECT_LE(err, n == 801 ? 2e-4 : 1e-5);
    }
}

TEST(ImplicitStep, ZeroFluxConservesMass) {
    const Grid1D g(-3, 3, 121);
    EvolutionConfig c{g};
    c.boundary_mode = boundary::ZeroFlux{};
    const ScalarField u0 = ScalarField::sample(g, [](double x) { return 1 + 3 * std::exp(-4 * x * x) + 0.2 * x; });
    ConformalFlowState s(u0, 0.0);
    const double m0 = trapezoid(u0);
    for (int k = 0; k < 20; ++k) s = implicit_step(s, 0.01, c);
    EXPECT_NEAR(trapezoid(s.field()), m0, 1e-10 * m0);
}

TEST(Evolve, ConstantDataStaysBitIdentical) {
    const Grid1D g(-10, 10, 201);
    EvolutionConfig c{g};
    c.t_end = 2.0;
    c.dt = 0.05;
    c.boundary_mode = boundary::ConstantFarfield{3.0};
    c.output_times = {0.5, 1.0, 2.0};
    const Trajectory tr = evolve(constant_field(g, 3.0), c);
    ASSERT_EQ(tr.states.size(), 3u);
    for (const auto& s : tr.states)
        for (double v : s.field().values()) EXPECT_EQ(v, 3.0);
    EXPECT_EQ(tr.states[2].time(), 2.0);
}

TEST(Evolve, LandsExactlyOnOutputTimes) {
    const Grid1D g(-10, 10, 201);
    EvolutionConfig c{g};
    c.t_end = 0.3;
    c.dt = 0.007;
    c.output_times = {0.0, 0.1, 0.25, 0.3};
    const Trajectory tr = evolve(mollify_initial_data({1, 1, 0.5, MollifierKind::gaussian}, g), c);
    ASSERT_EQ(tr.states.size(), 4u);
    for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(tr.states[k].time(), c.output_times[k]);
}

TEST(Evolve, SolitonConvergence) {
    // wider profile than the acceptance run, so errors sit in the asymptotic range
    std::vector<double> err;
    for (long long n : {201, 401, 801}) {
        EvolutionConfig c = soliton_config(n, 0.5, 0.6);
        const Trajectory tr = evolve(ScalarField::sample(c.grid, [](double x) { return soliton::u(x, 0.5); }), c);
        err.push_back(max_rel_soliton_error(tr.states.back()));
    }
    EXPECT_GE(std::log2(err[0] / err[1]), 1.5);
    EXPECT_GE(std::log2(err[1] / err[2]), 1.5);
    EXPECT_LE(err[2], 1e-3);
}

TEST(Evolve, MollifiedMeasureRun) {
    const double eps = 0.05;
    EvolutionConfig c = measure_config(10, 1201, 0.1, linspace_outputs(0.1, 20));
    const MeasureInitialData data{1.0, 1.0, eps, MollifierKind::gaussian};
    const ScalarField u0 = mollify_initial_data(data, c.grid);
    const Trajectory tr = evolve(u0, c);
    double prev_max = *std::max_element(u0.values().begin(), u0.values().end());
    for (const auto& s : tr.states) {
        const double mx = *std::max_element(s.field().values().begin(), s.field().values().end());
        EXPECT_LT(mx, prev_max);
        prev_max = mx;
        EXPECT_NEAR(excess_mass(s, 1.0), 1.0, 0.01);
        EXPECT_LT(outer_deviation(s, 1.0), 1e-6);
        const double el = s.time();
        if (el >= eps * eps) {
            const CurvatureBoundReports kb = check_curvature_bounds(s, 0.05 / el);
            EXPECT_TRUE(kb.upper.pass) << "t=" << el << " margin " << kb.upper.margin;
            EXPECT_TRUE(kb.lower.pass) << "t=" << el << " margin " << kb.lower.margin;
        }
    }

    // a run on half the domain with the same spacing sees the same flow near the line
    EvolutionConfig half = measure_config(5, 601, 0.1, {0.1});
    const Trajectory th = evolve(mollify_initial_data(data, half.grid), half);
    const ConformalFlowState& full = tr.states.back();
    const ConformalFlowState& small = th.states.back();
    for (std::size_t i = 0; i < small.field().size(); ++i) {
        ASSERT_NEAR(small.grid().node(i), full.grid().node(i + 300), 1e-12);
        EXPECT_NEAR(small.field()[i], full.field()[i + 300], 1e-6);
    }
}

TEST(Evolve, ComparisonPrinciple) {
    EvolutionConfig c = measure_config(6, 361, 0.05, {0.01, 0.03, 0.05});
    const ScalarField ub = mollify_initial_data({1, 1, 0.1, MollifierKind::gaussian}, c.grid);
    std::vector<double> va(ub.values().begin(), ub.values().end());
    for (std::size_t i = 0; i < va.size(); ++i) va[i] += 0.5 * std::exp(-std::pow(c.grid.node(i) - 0.7, 2) / 0.02);
    const Trajectory ta = evolve(ScalarField(c.grid, va), c), tb = evolve(ub, c);
    for (std::size_t k = 0; k < ta.states.size(); ++k)
        for (std::size_t i = 0; i < c.grid.size(); ++i)
            EXPECT_GE(ta.states[k].field()[i], tb.states[k].field()[i] - 10 * c.newton_tol);
}

TEST(Evolve, NewtonFailureReportsTime) {
    const Grid1D g(-2, 2, 21);
    EvolutionConfig c{g};
    c.t_start = 0.0;
    c.t_end = 0.1;
    c.dt = 0.1;
    c.boundary_mode = boundary::ConstantFarfield{1.0};
    c.newton_tol = 1e-300;
    c.newton_max_iter = 3;
    try {
        evolve(mollify_initial_data({1, 1, 0.6, MollifierKind::gaussian}, g), c);
        FAIL() << "expected NewtonFailure";
    } catch (const NewtonFailure& e) {
        EXPECT_GT(e.time(), 0.0);
        EXPECT_LE(e.time(), 0.1);
    }
}

TEST(EvolutionConfig, Validation) {
    EvolutionConfig c{Grid1D(-1, 1, 11)};
    c.t_end = 1;
    c.output_times = {0.5, 0.2};
    EXPECT_THROW(c.validate(), InvalidArgument);
    c.output_times = {0.5, 1.5};
    EXPECT_THROW(c.validate(), InvalidArgument);
    c.output_times = {};
    c.dt = 0;
    EXPECT_THROW(c.validate(), InvalidArgument);
    c.dt = 0.1;
    c.boundary_mode = boundary::ConstantFarfield{0.0};
    EXPECT_THROW(c.validate(), InvalidArgument);
}
