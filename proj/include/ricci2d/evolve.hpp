#pragma once

// Backward-Euler/Newton solver for u_t = (log u)_xx and mollified
// measure initial data.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <variant>
#include <vector>

#include "ricci2d/flow_state.hpp"
#include "ricci2d/soliton.hpp"

namespace ricci2d {

namespace boundary {
// Dirichlet data from the closed-form soliton at the new time level.
struct ExactSoliton {};
// Dirichlet data u = value at both ends.
struct ConstantFarfield {
    double value = 1.0;
};
// Homogeneous Neumann: (log u)_x = 0 at both ends via mirrored ghost nodes.
struct ZeroFlux {};
}  // namespace boundary

using BoundaryMode = std::variant<boundary::ExactSoliton, boundary::ConstantFarfield, boundary::ZeroFlux>;

inline bool is_dirichlet(const BoundaryMode& mode) {
    return !std::holds_alternative<boundary::ZeroFlux>(mode);
}

struct EvolutionConfig {
    Grid1D grid;
    double t_start = 0.0;
    double t_end = 1.0;
    double dt = 1e-3;
    BoundaryMode boundary_mode = boundary::ZeroFlux{};
    double newton_tol = 1e-12;
    int newton_max_iter = 50;
    std::vector<double> output_times{};

    void validate() const {
        if (!(t_start >= 0.0)) throw InvalidArgument("EvolutionConfig: t_start must be >= 0");
        if (!(t_end > t_start)) throw InvalidArgument("EvolutionConfig: t_end must be > t_start");
        if (!(dt > 0.0)) throw InvalidArgument("EvolutionConfig: dt must be > 0");
        if (!(newton_tol > 0.0)) throw InvalidArgument("EvolutionConfig: newton_tol must be > 0");
        if (newton_max_iter < 1) throw InvalidArgument("EvolutionConfig: newton_max_iter must be >= 1");
        if (auto* ff = std::get_if<boundary::ConstantFarfield>(&boundary_mode); ff && !(ff->value > 0.0))
            throw InvalidArgument("EvolutionConfig: constant_farfield value must be > 0");
        if (std::holds_alternative<boundary::ExactSoliton>(boundary_mode) && !(t_start > 0.0))
            throw InvalidArgument("EvolutionConfig: exact_soliton boundary needs t_start > 0");
        for (std::size_t i = 0; i < output_times.size(); ++i) {
            const double t = output_times[i];
            if (t < t_start || t > t_end) throw InvalidArgument("EvolutionConfig: output time outside [t_start, t_end]");
            if (i > 0 && !(t > output_times[i - 1]))
                throw InvalidArgument("EvolutionConfig: output_times must be strictly ascending");
        }
    }
};

enum class MollifierKind { gaussian, bump };

struct MeasureInitialData {
    double background = 1.0;
    double line_mass = 1.0;
    double width = 0.05;
    MollifierKind kind = MollifierKind::gaussian;
};

// Unit-mass mollifier profile centred at 0 (before any grid normalization).
inline double mollifier_profile(MollifierKind kind, double width, double x) {
    const double s = x / width;
    if (kind == MollifierKind::gaussian)
        return std::exp(-0.5 * s * s) / (width * std::sqrt(2.0 * std::numbers::pi));
    if (std::abs(s) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - s * s));
}

/// u0 = background + c * phi_eps. The bump is rescaled so its grid trapezoid
/// sum is exactly one; the gaussian uses its analytic constant.
inline ScalarField mollify_initial_data(const MeasureInitialData& data, const Grid1D& grid) {
    if (!(data.background > 0.0)) throw InvalidArgument("mollify_initial_data: background must be > 0");
    if (!(data.line_mass >= 0.0)) throw InvalidArgument("mollify_initial_data: line mass must be >= 0");
    if (!(data.width >= 3.0 * grid.spacing() * (1.0 - 1e-12))) {
        std::ostringstream os;
        os << "mollify_initial_data: width " << data.width << " < 3h = " << 3.0 * grid.spacing();
        throw UnderResolved(os.str());
    }
    ScalarField phi = ScalarField::sample(grid, [&](double x) { return mollifier_profile(data.kind, data.width, x); });
    double scale = 1.0;
    if (data.kind == MollifierKind::bump) scale = 1.0 / trapezoid(phi);
    std::vector<double> u0(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) u0[i] = data.background + data.line_mass * scale * phi[i];
    return ScalarField(grid, std::move(u0));
}

namespace detail {

// Thomas algorithm. lower[i] multiplies x[i-1], upper[i] multiplies x[i+1].
// The Newton Jacobians here are column diagonally dominant, so no pivoting.
inline std::vector<double> solve_tridiagonal(std::vector<double> lower, std::vector<double> diag,
                                             std::vector<double> upper, std::vector<double> rhs) {
    const std::size_t m = diag.size();
    for (std::size_t i = 1; i < m; ++i) {
        const double f = lower[i] / diag[i - 1];
        diag[i] -= f * upper[i - 1];
        rhs[i] -= f * rhs[i - 1];
    }
    std::vector<double> x(m);
    x[m - 1] = rhs[m - 1] / diag[m - 1];
    for (std::size_t i = m - 1; i-- > 0;) x[i] = (rhs[i] - upper[i] * x[i + 1]) / diag[i];
    return x;
}

}  // namespace detail

struct NewtonStats {
    int iterations = 0;
    double final_residual = 0.0;
    int damping_halvings = 0;
};

/// Advance one backward-Euler step to t + dt by damped Newton on the u values.
///
/// Interior residual F_i = u_i - u_old_i - dt * D2(log u)_i. The Jacobian
/// I - dt * D2 * diag(1/u) is tridiagonal. Newton updates are halved until
/// u stays positive. Dirichlet modes fix the end values at the new time;
/// zero_flux treats every node as unknown with mirrored ghosts.
inline ConformalFlowState implicit_step(const ConformalFlowState& state, double dt, const EvolutionConfig& config,
                                        NewtonStats* stats = nullptr) {
    if (!(dt > 0.0)) throw InvalidArgument("implicit_step: dt must be > 0");
    const ScalarField& old = state.field();
    const std::size_t n = old.size();
    const double h = old.grid().spacing();
    const double a = dt / (h * h);
    const double t_new = state.time() + dt;

    std::vector<double> v(old.values().begin(), old.values().end());
    const bool dirichlet = is_dirichlet(config.boundary_mode);
    if (std::holds_alternative<boundary::ExactSoliton>(config.boundary_mode)) {
        v.front() = soliton::u(old.grid().node(0), t_new);
        v.back() = soliton::u(old.grid().node(n - 1), t_new);
    } else if (auto* ff = std::get_if<boundary::ConstantFarfield>(&config.boundary_mode)) {
        v.front() = ff->value;
        v.back() = ff->value;
    }

    const std::size_t first = dirichlet ? 1 : 0;
    const std::size_t last = dirichlet ? n - 1 : n;  // exclusive
    const std::size_t m = last - first;

    std::vector<double> L(n), F(m), lower(m), diag(m), upper(m);
    auto residual = [&]() {
        for (std::size_t i = 0; i < n; ++i) L[i] = std::log(v[i]);
        double rmax = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            const std::size_t i = first + k;
            double lap;
            if (i == 0)
                lap = 2.0 * (L[1] - L[0]);
            else if (i == n - 1)
                lap = 2.0 * (L[n - 2] - L[n - 1]);
            else
                lap = L[i + 1] - 2.0 * L[i] + L[i - 1];
            F[k] = v[i] - old[i] - a * lap;
            rmax = std::max(rmax, std::abs(F[k]));
        }
        return std::isfinite(rmax) ? rmax : std::numeric_limits<double>::infinity();
    };

    NewtonStats local;
    double rmax = residual();
    for (int iter = 0;; ++iter) {
        if (rmax <= config.newton_tol) {
            local.iterations = iter;
            local.final_residual = rmax;
            if (stats) *stats = local;
            return ConformalFlowState(ScalarField(old.grid(), std::move(v)), t_new);
        }
        if (iter >= config.newton_max_iter) {
            std::ostringstream os;
            os << "implicit_step: Newton did not converge in " << config.newton_max_iter
               << " iterations (residual " << rmax << ") at t = " << t_new;
            throw NewtonFailure(os.str(), t_new);
        }
        for (std::size_t k = 0; k < m; ++k) {
            const std::size_t i = first + k;
            diag[k] = 1.0 + 2.0 * a / v[i];
            lower[k] = 0.0;
            upper[k] = 0.0;
            if (k > 0) lower[k] = (i == n - 1 ? -2.0 : -1.0) * a / v[i - 1];
            if (k + 1 < m) upper[k] = (i == 0 ? -2.0 : -1.0) * a / v[i + 1];
        }
        std::vector<double> rhs(m);
        for (std::size_t k = 0; k < m; ++k) rhs[k] = -F[k];
        const std::vector<double> d = detail::solve_tridiagonal(lower, diag, upper, std::move(rhs));

        double lam = 1.0;
        for (;;) {
            bool positive = true;
            for (std::size_t k = 0; k < m && positive; ++k) positive = v[first + k] + lam * d[k] > 0.0;
            if (positive) break;
            lam *= 0.5;
            ++local.damping_halvings;
            if (lam < 1e-12) {
                std::ostringstream os;
                os << "implicit_step: damping cannot keep u > 0 at t = " << t_new;
                throw PositivityError(os.str());
            }
        }
        for (std::size_t k = 0; k < m; ++k) v[first + k] += lam * d[k];
        rmax = residual();
    }
}

struct EvolveStats {
    long long steps = 0;
    long long newton_iterations = 0;
    int max_halving_depth = 0;
};

struct Trajectory {
    std::vector<ConformalFlowState> states;
    EvolutionConfig config;
    EvolveStats stats;
};

namespace detail {

// One step to t_new; on Newton/positivity failure the interval is split in
// two, recursively, at most max_depth times.
inline ConformalFlowState advance(const ConformalFlowState& s, double t_new, const EvolutionConfig& config,
                                  EvolveStats& stats, int depth, int max_depth = 10) {
    try {
        NewtonStats ns;
        ConformalFlowState next = implicit_step(s, t_new - s.time(), config, &ns);
        ++stats.steps;
        stats.newton_iterations += ns.iterations;
        return ConformalFlowState(next.field(), t_new);
    } catch (const NewtonFailure& e) {
        if (depth >= max_depth) throw NewtonFailure(std::string(e.what()) + " (dt halving exhausted)", t_new);
    } catch (const PositivityError& e) {
        if (depth >= max_depth) throw NewtonFailure(std::string(e.what()) + " (dt halving exhausted)", t_new);
    }
    stats.max_halving_depth = std::max(stats.max_halving_depth, depth + 1);
    const double t_mid = s.time() + 0.5 * (t_new - s.time());
    ConformalFlowState mid = advance(s, t_mid, config, stats, depth + 1, max_depth);
    return advance(mid, t_new, config, stats, depth + 1, max_depth);
}

}  // namespace detail

/// Repeated implicit steps from t_start to t_end. Each segment between
/// recorded times is split into equal steps no longer than dt so the solver
/// lands exactly on every output time. With no output times, t_end is recorded.
inline Trajectory evolve(const ScalarField& u0, const EvolutionConfig& config) {
    config.validate();
    if (!(u0.grid() == config.grid)) throw InvalidArgument("evolve: initial data grid differs from config grid");

    std::vector<double> outs = config.output_times;
    if (outs.empty()) outs.push_back(config.t_end);

    Trajectory traj{{}, config, {}};
    ConformalFlowState state(u0, config.t_start);
    for (double target : outs) {
        if (target == state.time()) {
            traj.states.push_back(state);
            continue;
        }
        const double span = target - state.time();
        const auto steps = static_cast<long long>(std::ceil(span / config.dt * (1.0 - 1e-12)));
        const double t0 = state.time();
        for (long long k = 1; k <= steps; ++k) {
            const double t_next = k == steps ? target : t0 + span * static_cast<double>(k) / static_cast<double>(steps);
            state = detail::advance(state, t_next, config, traj.stats, 0);
        }
        traj.states.push_back(state);
    }
    return traj;
}

/// True once the disturbance reaches the outer `fraction` of nodes on either
/// side, i.e. max |u - background| there exceeds the threshold.
inline bool boundary_contact(const ConformalFlowState& s, double background, double fraction = 0.1,
                             double threshold = 1e-4) {
    const std::size_t n = s.field().size();
    const auto outer = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n)));
    for (std::size_t i = 0; i < outer && i < n; ++i) {
        if (std::abs(s.field()[i] - background) > threshold) return true;
        if (std::abs(s.field()[n - 1 - i] - background) > threshold) return true;
    }
    return false;
}

inline double outer_deviation(const ConformalFlowState& s, double background, double fraction = 0.1) {
    const std::size_t n = s.field().size();
    const auto outer = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n)));
    double d = 0.0;
    for (std::size_t i = 0; i < outer && i < n; ++i) {
        d = std::max(d, std::abs(s.field()[i] - background));
        d = std::max(d, std::abs(s.field()[n - 1 - i] - background));
    }
    return d;
}

// Trapezoid quadrature of (u - background): the line mass carried by the flow.
inline double excess_mass(const ConformalFlowState& s, double background) {
    std::vector<double> e(s.field().size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = s.field()[i] - background;
    return trapezoid(ScalarField(s.grid(), std::move(e)));
}

}  // namespace ricci2d
