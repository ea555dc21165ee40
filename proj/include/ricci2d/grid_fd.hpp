#pragma once

// Uniform grids, sampled fields and second-order finite differences.

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ricci2d/errors.hpp"

namespace ricci2d {

class Grid1D {
public:
    Grid1D(double x_min, double x_max, std::size_t n) : x_min_(x_min), x_max_(x_max), n_(n) {
        if (n < 3) throw InvalidArgument("Grid1D: need at least 3 nodes, got " + std::to_string(n));
        if (!(x_min < x_max)) throw InvalidArgument("Grid1D: x_min must be < x_max");
        h_ = (x_max - x_min) / static_cast<double>(n - 1);
    }

    double x_min() const { return x_min_; }
    double x_max() const { return x_max_; }
    std::size_t size() const { return n_; }
    double spacing() const { return h_; }

    // Nodes are x_min + i*h (multiplication, no accumulation); the last node is x_max.
    double node(std::size_t i) const {
        return i + 1 == n_ ? x_max_ : x_min_ + static_cast<double>(i) * h_;
    }

    std::vector<double> nodes() const {
        std::vector<double> xs(n_);
        for (std::size_t i = 0; i < n_; ++i) xs[i] = node(i);
        return xs;
    }

    bool operator==(const Grid1D&) const = default;

private:
    double x_min_;
    double x_max_;
    std::size_t n_;
    double h_;
};

inline Grid1D make_uniform_grid(double x_min, double x_max, long long n) {
    if (n < 3) throw InvalidArgument("make_uniform_grid: n must be >= 3");
    return Grid1D(x_min, x_max, static_cast<std::size_t>(n));
}

class ScalarField {
public:
    explicit ScalarField(Grid1D grid) : grid_(grid), values_(grid.size(), 0.0) {}

    ScalarField(Grid1D grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
        if (values_.size() != grid_.size())
            throw InvalidArgument("ScalarField: value count does not match grid");
        for (double v : values_)
            if (!std::isfinite(v)) throw InvalidArgument("ScalarField: non-finite value");
    }

    static ScalarField sample(const Grid1D& grid, const std::function<double(double)>& f) {
        std::vector<double> v(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) v[i] = f(grid.node(i));
        return ScalarField(grid, std::move(v));
    }

    const Grid1D& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }
    std::vector<double>& mutable_values() { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }

private:
    Grid1D grid_;
    std::vector<double> values_;
};

// Central differences inside; second-order one-sided at the two ends.
inline ScalarField first_derivative(const ScalarField& f) {
    const std::size_t n = f.size();
    const double h = f.grid().spacing();
    std::vector<double> d(n);
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    return ScalarField(f.grid(), std::move(d));
}

// Three-point Laplacian inside. Endpoint values are copies of the adjacent
// interior value; no consumer reads them as data.
inline ScalarField second_derivative(const ScalarField& f) {
    const std::size_t n = f.size();
    const double h2 = f.grid().spacing() * f.grid().spacing();
    std::vector<double> d(n);
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / h2;
    d[0] = d[1];
    d[n - 1] = d[n - 2];
    return ScalarField(f.grid(), std::move(d));
}

// Index range [first, last) of nodes at distance >= margin*h from both ends.
struct InteriorRange {
    std::size_t first;
    std::size_t last;
    std::size_t excluded;
};

inline InteriorRange interior_range(const Grid1D& grid, std::size_t margin = 2) {
    const std::size_t n = grid.size();
    if (n <= 2 * margin) return {0, 0, n};
    return {margin, n - margin, 2 * margin};
}

inline double trapezoid(const ScalarField& f) {
    const double h = f.grid().spacing();
    double s = 0.5 * (f[0] + f[f.size() - 1]);
    for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
    return s * h;
}

// Rectangular uniform grid; node (i, j) is (x_i, y_j), stored row-major in i.
class Grid2D {
public:
    Grid2D(Grid1D x, Grid1D y) : x_(x), y_(y) {}

    const Grid1D& x() const { return x_; }
    const Grid1D& y() const { return y_; }
    std::size_t nx() const { return x_.size(); }
    std::size_t ny() const { return y_.size(); }
    std::size_t size() const { return nx() * ny(); }
    std::size_t index(std::size_t i, std::size_t j) const { return i * ny() + j; }

private:
    Grid1D x_;
    Grid1D y_;
};

class Field2D {
public:
    explicit Field2D(Grid2D grid) : grid_(grid), values_(grid.size(), 0.0) {}

    static Field2D sample(const Grid2D& grid, const std::function<double(double, double)>& f) {
        Field2D out(grid);
        for (std::size_t i = 0; i < grid.nx(); ++i)
            for (std::size_t j = 0; j < grid.ny(); ++j)
                out.at(i, j) = f(grid.x().node(i), grid.y().node(j));
        return out;
    }

    // u(x, y) = u(x) on the given y grid.
    static Field2D extrude(const ScalarField& u, const Grid1D& y) {
        Field2D out(Grid2D(u.grid(), y));
        for (std::size_t i = 0; i < u.size(); ++i)
            for (std::size_t j = 0; j < y.size(); ++j) out.at(i, j) = u[i];
        return out;
    }

    const Grid2D& grid() const { return grid_; }
    double at(std::size_t i, std::size_t j) const { return values_[grid_.index(i, j)]; }
    double& at(std::size_t i, std::size_t j) { return values_[grid_.index(i, j)]; }
    std::span<const double> values() const { return values_; }

private:
    Grid2D grid_;
    std::vector<double> values_;
};

}  // namespace ricci2d
