#pragma once

// Pressure w = 1/u, q = w_xx, and the bound/identity checks built on them.

#include <string>

#include "ricci2d/evolve.hpp"

namespace ricci2d {

struct PressureDiagnostics {
    ScalarField w;
    ScalarField q;  // endpoint entries are sentinels
    double time;
};

inline PressureDiagnostics compute_pressure(const ConformalFlowState& state) {
    const ScalarField& u = state.field();
    detail::require_positive(u.values(), "compute_pressure");
    std::vector<double> w(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) w[i] = 1.0 / u[i];
    ScalarField wf(u.grid(), std::move(w));
    ScalarField q = second_derivative(wf);
    return {std::move(wf), std::move(q), state.time()};
}

/// margin is the signed slack: positive when the bound holds.
/// pass iff margin >= -tolerance.
struct BoundReport {
    std::string quantity;
    double sup = 0.0;
    double inf = 0.0;
    double bound = 0.0;
    double margin = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    double time = 0.0;
    double elapsed = 0.0;
    std::size_t excluded_nodes = 0;
};

namespace detail {
inline double elapsed_time(double time, double t_origin, const char* who) {
    const double e = time - t_origin;
    if (!(e > 0.0)) throw InvalidArgument(std::string(who) + ": need time > t_origin");
    return e;
}
}  // namespace detail

/// Maximum-principle bound q <= 1/(alpha * (t - t_origin)) over interior nodes.
inline BoundReport check_q_bound(const PressureDiagnostics& diag, double alpha, double tol, double t_origin = 0.0) {
    if (!(alpha > 0.0)) throw InvalidArgument("check_q_bound: alpha must be > 0");
    const double e = detail::elapsed_time(diag.time, t_origin, "check_q_bound");
    const InteriorRange r = interior_range(diag.q.grid());
    const Extrema ex = interior_extrema(diag.q, r);
    BoundReport rep;
    rep.quantity = "q";
    rep.sup = ex.max;
    rep.inf = ex.min;
    rep.bound = 1.0 / (alpha * e);
    rep.margin = rep.bound - ex.max;
    rep.tolerance = tol;
    rep.pass = rep.margin >= -tol;
    rep.time = diag.time;
    rep.elapsed = e;
    rep.excluded_nodes = r.excluded;
    return rep;
}

struct CurvatureBoundReports {
    BoundReport upper;
    BoundReport lower;
};

/// -1/(2t) <= K <= 1/(2t) with t measured from t_origin.
inline CurvatureBoundReports check_curvature_bounds(const ConformalFlowState& state, double tol, double t_origin = 0.0) {
    const double e = detail::elapsed_time(state.time(), t_origin, "check_curvature_bounds");
    const CurvatureField K = gauss_curvature_1d(state);
    const InteriorRange r = interior_range(state.grid());
    const Extrema ex = interior_extrema(K.field, r);

    CurvatureBoundReports out;
    for (BoundReport* rep : {&out.upper, &out.lower}) {
        rep->sup = ex.max;
        rep->inf = ex.min;
        rep->tolerance = tol;
        rep->time = state.time();
        rep->elapsed = e;
        rep->excluded_nodes = r.excluded;
    }
    out.upper.quantity = "K_upper";
    out.upper.bound = 1.0 / (2.0 * e);
    out.upper.margin = out.upper.bound - ex.max;
    out.upper.pass = out.upper.margin >= -tol;

    out.lower.quantity = "K_lower";
    out.lower.bound = -1.0 / (2.0 * e);
    out.lower.margin = ex.min - out.lower.bound;
    out.lower.pass = out.lower.margin >= -tol;
    return out;
}

/// max over interior nodes of |2K + (1/u) (log u)_x^2 - q| for given fields.
inline double identity_residual(const ScalarField& u, const ScalarField& K, const ScalarField& log_u_x,
                                const ScalarField& q) {
    const InteriorRange r = interior_range(u.grid());
    double worst = 0.0;
    for (std::size_t i = r.first; i < r.last; ++i) {
        const double res = 2.0 * K[i] + log_u_x[i] * log_u_x[i] / u[i] - q[i];
        worst = std::max(worst, std::abs(res));
    }
    return worst;
}

// Same residual, each term from the standard stencils on the sampled state.
inline double check_curvature_identity(const ConformalFlowState& state) {
    const CurvatureField K = gauss_curvature_1d(state);
    const ScalarField lx = first_derivative(log_field(state.field()));
    const PressureDiagnostics p = compute_pressure(state);
    return identity_residual(state.field(), K.field, lx, p.q);
}

/// max |q_t - (w q_xx - q^2)| over interior nodes of every inner state, with
/// q_t from the three-point (possibly non-uniform) time difference across
/// neighbouring states.
inline double check_q_evolution(const std::vector<ConformalFlowState>& states) {
    if (states.size() < 3) throw InvalidArgument("check_q_evolution: need at least 3 states");
    std::vector<PressureDiagnostics> p;
    p.reserve(states.size());
    for (const auto& s : states) p.push_back(compute_pressure(s));

    const InteriorRange r = interior_range(states.front().grid(), 3);
    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < states.size(); ++k) {
        const double t0 = states[k - 1].time(), t1 = states[k].time(), t2 = states[k + 1].time();
        const double h0 = t1 - t0, h1 = t2 - t1;
        if (!(h0 > 0.0 && h1 > 0.0)) throw InvalidArgument("check_q_evolution: times must increase");
        const double c0 = -h1 / (h0 * (h0 + h1));
        const double c1 = (h1 - h0) / (h0 * h1);
        const double c2 = h0 / (h1 * (h0 + h1));
        const ScalarField qxx = second_derivative(p[k].q);
        for (std::size_t i = r.first; i < r.last; ++i) {
            const double qt = c0 * p[k - 1].q[i] + c1 * p[k].q[i] + c2 * p[k + 1].q[i];
            const double rhs = p[k].w[i] * qxx[i] - p[k].q[i] * p[k].q[i];
            worst = std::max(worst, std::abs(qt - rhs));
        }
    }
    return worst;
}

inline double check_q_evolution(const Trajectory& traj) { return check_q_evolution(traj.states); }

}  // namespace ricci2d
