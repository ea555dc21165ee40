#pragma once

// Conformal metrics u (dx^2 + dy^2) and their Gauss curvature.

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ricci2d/grid_fd.hpp"

namespace ricci2d {

namespace detail {

inline void require_positive(std::span<const double> u, const char* who) {
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!(u[i] > 0.0)) {
            std::ostringstream os;
            os << who << ": conformal factor not positive at node " << i << " (u = " << u[i] << ")";
            throw PositivityError(os.str());
        }
    }
}

}  // namespace detail

/// A y-independent conformal factor u > 0 on a 1D grid at time t.
///
/// Time may be 0 for initial data; the curvature bound checks require a
/// positive elapsed time and reject t <= t_start themselves.
class ConformalFlowState {
public:
    ConformalFlowState(ScalarField u, double time) : u_(std::move(u)), time_(time) {
        detail::require_positive(u_.values(), "ConformalFlowState");
        if (!std::isfinite(time_) || time_ < 0.0) throw InvalidArgument("ConformalFlowState: time must be >= 0");
    }

    const ScalarField& field() const { return u_; }
    const Grid1D& grid() const { return u_.grid(); }
    double time() const { return time_; }

private:
    ScalarField u_;
    double time_;
};

struct CurvatureField {
    ScalarField field;
    double time;
};

inline ScalarField log_field(const ScalarField& u) {
    std::vector<double> v(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) v[i] = std::log(u[i]);
    return ScalarField(u.grid(), std::move(v));
}

/// K = -(1/(2u)) (log u)_xx with the three-point stencil on log u.
/// Endpoint entries are stencil sentinels; reports read interior_range() only.
inline CurvatureField gauss_curvature_1d(const ConformalFlowState& state) {
    const ScalarField& u = state.field();
    ScalarField lxx = second_derivative(log_field(u));
    std::vector<double> k(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) k[i] = -lxx[i] / (2.0 * u[i]);
    return {ScalarField(u.grid(), std::move(k)), state.time()};
}

/// 5-point Laplacian of log u scaled by -1/(2u). Boundary rows/columns carry
/// copies of the nearest interior value.
inline Field2D gauss_curvature_2d(const Field2D& u) {
    detail::require_positive(u.values(), "gauss_curvature_2d");
    const Grid2D& g = u.grid();
    const std::size_t nx = g.nx(), ny = g.ny();
    const double hx2 = g.x().spacing() * g.x().spacing();
    const double hy2 = g.y().spacing() * g.y().spacing();

    Field2D lu(g);
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < ny; ++j) lu.at(i, j) = std::log(u.at(i, j));

    Field2D k(g);
    for (std::size_t i = 1; i + 1 < nx; ++i) {
        for (std::size_t j = 1; j + 1 < ny; ++j) {
            const double dxx = (lu.at(i + 1, j) - 2.0 * lu.at(i, j) + lu.at(i - 1, j)) / hx2;
            const double dyy = (lu.at(i, j + 1) - 2.0 * lu.at(i, j) + lu.at(i, j - 1)) / hy2;
            k.at(i, j) = -(dxx + dyy) / (2.0 * u.at(i, j));
        }
    }
    for (std::size_t i = 1; i + 1 < nx; ++i) {
        k.at(i, 0) = k.at(i, 1);
        k.at(i, ny - 1) = k.at(i, ny - 2);
    }
    for (std::size_t j = 0; j < ny; ++j) {
        k.at(0, j) = k.at(1, std::clamp<std::size_t>(j, 1, ny - 2));
        k.at(nx - 1, j) = k.at(nx - 2, std::clamp<std::size_t>(j, 1, ny - 2));
    }
    return k;
}

struct Extrema {
    double max = -std::numeric_limits<double>::infinity();
    double min = std::numeric_limits<double>::infinity();
    std::size_t argmax = 0;
    std::size_t argmin = 0;
};

inline Extrema interior_extrema(const ScalarField& f, const InteriorRange& r) {
    Extrema e;
    for (std::size_t i = r.first; i < r.last; ++i) {
        if (f[i] > e.max) { e.max = f[i]; e.argmax = i; }
        if (f[i] < e.min) { e.min = f[i]; e.argmin = i; }
    }
    return e;
}

}  // namespace ricci2d
