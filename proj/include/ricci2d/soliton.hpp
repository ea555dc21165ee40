#pragma once

// The explicit expanding soliton u(x, t) = 2t / (t^2 + x^2) and its exact
// curvature and pressure fields. These are the truth the solver and the
// stencil diagnostics are measured against.

#include <cmath>

#include "ricci2d/grid_fd.hpp"

namespace ricci2d::soliton {

namespace detail {
inline void require_positive_time(double t, const char* who) {
    if (!(t > 0.0)) throw InvalidArgument(std::string(who) + ": t must be > 0");
}
}  // namespace detail

inline double u(double x, double t) {
    detail::require_positive_time(t, "soliton::u");
    return 2.0 * t / (t * t + x * x);
}

inline double curvature(double x, double t) {
    detail::require_positive_time(t, "soliton::curvature");
    return (t * t - x * x) / (2.0 * t * (t * t + x * x));
}

inline double pressure(double x, double t) {
    detail::require_positive_time(t, "soliton::pressure");
    return (t * t + x * x) / (2.0 * t);
}

// q = w_xx = 1/t for every x.
inline double pressure_xx(double /*x*/, double t) {
    detail::require_positive_time(t, "soliton::pressure_xx");
    return 1.0 / t;
}

// (log u)_x
inline double log_u_x(double x, double t) {
    detail::require_positive_time(t, "soliton::log_u_x");
    return -2.0 * x / (t * t + x * x);
}

struct Fields {
    ScalarField u;
    ScalarField K;
    ScalarField w;
    ScalarField q;
};

inline Fields fields(const Grid1D& grid, double t) {
    detail::require_positive_time(t, "soliton::fields");
    return {
        ScalarField::sample(grid, [t](double x) { return u(x, t); }),
        ScalarField::sample(grid, [t](double x) { return curvature(x, t); }),
        ScalarField::sample(grid, [t](double x) { return pressure(x, t); }),
        ScalarField::sample(grid, [t](double x) { return pressure_xx(x, t); }),
    };
}

/// |u_t - (log u)_xx| at (x, t), both sides by central differences of step h
/// on the closed form. Pure truncation error since the closed form is exact.
inline double pde_residual(double t, double x, double h) {
    if (!(h > 0.0) || !(h < t)) throw InvalidArgument("pde_residual: need 0 < h < t");
    const double ut = (u(x, t + h) - u(x, t - h)) / (2.0 * h);
    const double lxx = (std::log(u(x + h, t)) - 2.0 * std::log(u(x, t)) + std::log(u(x - h, t))) / (h * h);
    return std::abs(ut - lxx);
}

// Total mass of u over [-R, R]: 4 atan(R/t), tending to 2*pi.
inline double mass_closed_form(double R, double t) {
    detail::require_positive_time(t, "soliton::mass_closed_form");
    return 4.0 * std::atan(R / t);
}

}  // namespace ricci2d::soliton
