#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "ricci2d/soliton.hpp"

using namespace ricci2d;

namespace {

// Finite-difference oracles built from u alone (h = 1e-4, fourth-order
// five-point stencils), independent of the hand-differentiated formulas.
double d2(const std::function<double(double)>& f, double x, double h = 1e-3) {
    return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h);
}
double d1(const std::function<double(double)>& f, double x, double h = 1e-4) {
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

}  // namespace

TEST(Soliton, ClosedFormValues) {
    EXPECT_EQ(soliton::u(0, 1), 2.0);
    EXPECT_EQ(soliton::u(1, 1), 1.0);
    EXPECT_EQ(soliton::u(0, 0.5), 4.0);
}

TEST(Soliton, RejectsNonPositiveTime) {
    EXPECT_THROW(soliton::u(0, 0), InvalidArgument);
    EXPECT_THROW(soliton::curvature(0, -1), InvalidArgument);
    EXPECT_THROW(soliton::fields(Grid1D(-1, 1, 5), 0.0), InvalidArgument);
    EXPECT_THROW(soliton::pde_residual(1, 0, 2), InvalidArgument);
}

TEST(Soliton, HandFormulasAgreeWithFiniteDifferences) {
    for (double t : {0.2, 0.5, 1.3}) {
        for (double x : {-2.0, -0.3, 0.0, 0.17, 1.0, 4.0}) {
            auto u = [t](double y) { return soliton::u(y, t); };
            auto logu = [t](double y) { return std::log(soliton::u(y, t)); };
            auto w = [t](double y) { return 1.0 / soliton::u(y, t); };
            const double K_fd = -d2(logu, x) / (2 * u(x));
            EXPECT_NEAR(soliton::curvature(x, t), K_fd, 1e-6 * (1 + std::abs(K_fd)));
            EXPECT_NEAR(soliton::pressure(x, t), w(x), 1e-14 * w(x));
            EXPECT_NEAR(soliton::pressure_xx(x, t), d2(w, x), 1e-6 * (1 + d2(w, x)));
            EXPECT_NEAR(soliton::log_u_x(x, t), d1(logu, x), 1e-7 * (1 + std::abs(d1(logu, x))));
        }
    }
}

TEST(Soliton, FieldExamples) {
    EXPECT_DOUBLE_EQ(soliton::curvature(0, 0.5), 1.0);
    for (double t : {0.1, 0.7, 3.0}) EXPECT_EQ(soliton::curvature(t, t), 0.0);
    const soliton::Fields f = soliton::fields(Grid1D(-3, 3, 31), 0.25);
    for (std::size_t i = 0; i < 31; ++i) EXPECT_EQ(f.q[i], 4.0);
}

TEST(Soliton, ResidualExamples) {
    EXPECT_LE(soliton::pde_residual(1, 0, 1e-4), 1e-6);
    EXPECT_LE(soliton::pde_residual(0.5, 2, 1e-4), 1e-6);
}

TEST(Soliton, ResidualIsSecondOrder) {
    // order of the max residual over the sample; single points can sit near a
    // zero of the leading error term
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> T(0.1, 2.0), X(-5, 5);
    std::vector<std::pair<double, double>> pts;
    for (int k = 0; k < 20; ++k) {
        const double t = T(rng);
        pts.push_back({t, X(rng)});
    }
    std::vector<double> worst;
    for (double h : {1e-3, 5e-4, 2.5e-4}) {
        double m = 0;
        for (auto [t, x] : pts) m = std::max(m, soliton::pde_residual(t, x, h));
        worst.push_back(m);
    }
    EXPECT_GE(std::log2(worst[0] / worst[1]), 1.9);
    EXPECT_GE(std::log2(worst[1] / worst[2]), 1.9);
}

TEST(Soliton, Sharpness) {
    for (double t : {0.1, 0.5, 2.0}) {
        const Grid1D g(-40 * t, 40 * t, 801);
        const soliton::Fields f = soliton::fields(g, t);
        double mx = -1e300;
        for (std::size_t i = 0; i < g.size(); ++i) {
            mx = std::max(mx, 2 * t * f.K[i]);
            if (std::abs(g.node(i)) >= 15 * t) {
                EXPECT_LE(2 * t * f.K[i], -0.99);
            }
            EXPECT_NEAR(f.q[i] * t, 1.0, 1e-12);
        }
        EXPECT_NEAR(mx, 1.0, 1e-12);
        EXPECT_EQ(2 * t * f.K[400], 1.0);
    }
}

TEST(Soliton, IdentityHoldsAnalytically) {
    for (double t : {0.3, 1.0})
        for (double x = -5; x <= 5; x += 0.25) {
            const double u = soliton::u(x, t), lx = soliton::log_u_x(x, t);
            EXPECT_NEAR(2 * soliton::curvature(x, t) + lx * lx / u - soliton::pressure_xx(x, t), 0.0, 1e-13 / t);
        }
}

TEST(Soliton, MassTendsToTwoPi) {
    const double t = 0.5;
    double prev_gap = 1e300;
    for (double R : {10.0, 100.0, 1000.0}) {
        // composite Simpson on u over [-R, R], independent of the closed form
        const int m = 200000;
        const double dx = 2 * R / m;
        double s = soliton::u(-R, t) + soliton::u(R, t);
        for (int k = 1; k < m; ++k) s += (k % 2 ? 4 : 2) * soliton::u(-R + k * dx, t);
        const double mass = s * dx / 3;
        EXPECT_NEAR(mass, soliton::mass_closed_form(R, t), 1e-6);
        const double gap = 2 * std::numbers::pi - mass;
        EXPECT_GT(gap, 0);
        EXPECT_LT(gap, prev_gap);
        prev_gap = gap;
    }
    EXPECT_LT(prev_gap, 2e-3);
}
