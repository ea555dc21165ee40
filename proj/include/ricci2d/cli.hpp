#pragma once

// Command-line front end: soliton, evolve, diagnose, distance, pic1.
//
// Exit codes: 0 success, 1 a bound or invariant check failed (reports are
// still written), 2 input or configuration error, 3 numerical failure.

#include <chrono>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ricci2d/distance.hpp"
#include "ricci2d/io.hpp"

namespace ricci2d::cli {

using io::json;

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kInputError = 2, kNumericalFailure = 3 };

enum class InitialKind { constant, soliton, measure };

struct ExperimentConfig {
    std::uint64_t seed = 0;
    EvolutionConfig evolution{Grid1D(-10.0, 10.0, 1201), 0.0, 0.1, 1e-3, boundary::ConstantFarfield{1.0}, 1e-12, 50, {}};
    InitialKind initial_kind = InitialKind::measure;
    double initial_value = 1.0;
    MeasureInitialData measure;
    double tol_factor = 0.05;
    double window_factor = 1.0;
    std::optional<double> t_origin;
    double alpha = 1.0;
    DistanceWindow window;
    int pair_count = 50;
    double pair_box = 1.0;
    std::vector<double> volume_radii{0.25, 0.5, 1.0};
    Point2 volume_center{0.0, 0.0};
    pic1::MinIC1Options pic1;
    double pic1_tol = 1e-9;
    std::string out_trajectory, out_summary, out_attainment, out_volume;
    json echo;

    double origin() const {
        if (t_origin) return *t_origin;
        return initial_kind == InitialKind::soliton ? 0.0 : evolution.t_start;
    }
    // Bound checks only start once this much time has elapsed since origin().
    double check_window() const {
        return initial_kind == InitialKind::measure ? window_factor * measure.width * measure.width : 0.0;
    }
};

inline constexpr const char* kConfigHelp = R"(Experiment configuration (JSON; unknown keys are errors):
  seed                         global seed (default 0)
  grid.x_min, grid.x_max       domain (default -10, 10)
  grid.n                       node count (default 1201)
  evolution.t_start            default 0
  evolution.t_end              default 0.1
  evolution.dt | dt_over_h2    time step, absolute or as a multiple of h^2 (default dt_over_h2 = 0.25)
  evolution.boundary           "exact_soliton" | "zero_flux" | {"constant_farfield": value} (default {"constant_farfield": 1})
  evolution.newton_tol         default 1e-12
  evolution.newton_max_iter    default 50
  evolution.output_times       explicit ascending list, or
  evolution.output_count       k evenly spaced outputs after t_start (default 10)
  initial_data.kind            "measure" | "soliton" | "constant" (default "measure")
  initial_data.value           constant kind only (default 1)
  initial_data.background      measure kind (default 1)
  initial_data.line_mass       measure kind (default 1)
  initial_data.width           mollifier width eps (default 0.05)
  initial_data.mollifier       "gaussian" | "bump" (default "gaussian")
  checks.tol_factor            bound tolerance = tol_factor / (t - origin) (default 0.05)
  checks.window_factor         measure runs check only t - origin >= window_factor * eps^2 (default 1)
  checks.t_origin              time the bounds count from (default t_start; 0 for soliton data)
  checks.alpha                 q <= 1/(alpha t) (default 1)
  distance.window              {x_min, x_max, y_min, y_max, spacing, stencil_order} (default +-1.25, 0.02, 2)
  distance.pairs               number of seeded pairs (default 50)
  distance.pair_box            pairs uniform in [-box, box]^2 (default 1)
  distance.volume_radii        metric radii for volume ratios (default [0.25, 0.5, 1])
  distance.volume_center       [x, y] (default [0, 0])
  pic1.samples, pic1.refine_iters, pic1.restarts, pic1.tol   (default 2000, 10, 200, 1e-9)
  output.trajectory, output.summary, output.attainment, output.volume   file paths)";

inline ExperimentConfig parse_experiment_config(const json& doc) {
    using io::detail::get_or;
    using io::detail::reject_unknown_keys;
    ExperimentConfig c;
    reject_unknown_keys(doc, {"seed", "grid", "evolution", "initial_data", "checks", "distance", "pic1", "output"}, "config");
    c.echo = doc;
    c.seed = get_or<std::uint64_t>(doc, "seed", 0, "config");
    c.pic1.seed = c.seed;

    const json grid = doc.value("grid", json::object());
    reject_unknown_keys(grid, {"x_min", "x_max", "n"}, "grid");
    const Grid1D g = make_uniform_grid(get_or<double>(grid, "x_min", -10.0, "grid"), get_or<double>(grid, "x_max", 10.0, "grid"),
                                       get_or<long long>(grid, "n", 1201, "grid"));
    c.evolution.grid = g;

    const json ev = doc.value("evolution", json::object());
    reject_unknown_keys(ev, {"t_start", "t_end", "dt", "dt_over_h2", "boundary", "newton_tol", "newton_max_iter", "output_times", "output_count"}, "evolution");
    c.evolution.t_start = get_or<double>(ev, "t_start", 0.0, "evolution");
    c.evolution.t_end = get_or<double>(ev, "t_end", 0.1, "evolution");
    if (ev.contains("dt") && ev.contains("dt_over_h2")) throw InputError("evolution: give dt or dt_over_h2, not both");
    c.evolution.dt = ev.contains("dt") ? get_or<double>(ev, "dt", 0.0, "evolution")
                                       : get_or<double>(ev, "dt_over_h2", 0.25, "evolution") * g.spacing() * g.spacing();
    c.evolution.newton_tol = get_or<double>(ev, "newton_tol", 1e-12, "evolution");
    c.evolution.newton_max_iter = get_or<int>(ev, "newton_max_iter", 50, "evolution");
    const json bnd = ev.value("boundary", json{{"constant_farfield", 1.0}});
    if (bnd.is_string() && bnd == "exact_soliton") {
        c.evolution.boundary_mode = boundary::ExactSoliton{};
    } else if (bnd.is_string() && bnd == "zero_flux") {
        c.evolution.boundary_mode = boundary::ZeroFlux{};
    } else if (bnd.is_object()) {
        reject_unknown_keys(bnd, {"constant_farfield"}, "evolution.boundary");
        c.evolution.boundary_mode = boundary::ConstantFarfield{io::detail::require<double>(bnd, "constant_farfield", "evolution.boundary")};
    } else {
        throw InputError("evolution.boundary: expected \"exact_soliton\", \"zero_flux\" or {\"constant_farfield\": v}");
    }
    if (ev.contains("output_times") && ev.contains("output_count"))
        throw InputError("evolution: give output_times or output_count, not both");
    if (ev.contains("output_times")) {
        c.evolution.output_times = get_or<std::vector<double>>(ev, "output_times", {}, "evolution");
    } else {
        const int k = get_or<int>(ev, "output_count", 10, "evolution");
        if (k < 1) throw InputError("evolution.output_count must be >= 1");
        for (int i = 1; i <= k; ++i)
            c.evolution.output_times.push_back(i == k ? c.evolution.t_end
                                                      : c.evolution.t_start + (c.evolution.t_end - c.evolution.t_start) * i / k);
    }

    const json init = doc.value("initial_data", json::object());
    reject_unknown_keys(init, {"kind", "value", "background", "line_mass", "width", "mollifier"}, "initial_data");
    const std::string kind = get_or<std::string>(init, "kind", "measure", "initial_data");
    if (kind == "measure") c.initial_kind = InitialKind::measure;
    else if (kind == "soliton") c.initial_kind = InitialKind::soliton;
    else if (kind == "constant") c.initial_kind = InitialKind::constant;
    else throw InputError("initial_data.kind: unknown kind '" + kind + "'");
    c.initial_value = get_or<double>(init, "value", 1.0, "initial_data");
    c.measure.background = get_or<double>(init, "background", 1.0, "initial_data");
    c.measure.line_mass = get_or<double>(init, "line_mass", 1.0, "initial_data");
    c.measure.width = get_or<double>(init, "width", 0.05, "initial_data");
    const std::string moll = get_or<std::string>(init, "mollifier", "gaussian", "initial_data");
    if (moll == "gaussian") c.measure.kind = MollifierKind::gaussian;
    else if (moll == "bump") c.measure.kind = MollifierKind::bump;
    else throw InputError("initial_data.mollifier: unknown kind '" + moll + "'");

    const json chk = doc.value("checks", json::object());
    reject_unknown_keys(chk, {"tol_factor", "window_factor", "t_origin", "alpha"}, "checks");
    c.tol_factor = get_or<double>(chk, "tol_factor", 0.05, "checks");
    c.window_factor = get_or<double>(chk, "window_factor", 1.0, "checks");
    if (chk.contains("t_origin")) c.t_origin = get_or<double>(chk, "t_origin", 0.0, "checks");
    c.alpha = get_or<double>(chk, "alpha", 1.0, "checks");

    const json dist = doc.value("distance", json::object());
    reject_unknown_keys(dist, {"window", "pairs", "pair_box", "volume_radii", "volume_center"}, "distance");
    const json win = dist.value("window", json::object());
    reject_unknown_keys(win, {"x_min", "x_max", "y_min", "y_max", "spacing", "stencil_order"}, "distance.window");
    c.window.x_min = get_or<double>(win, "x_min", -1.25, "distance.window");
    c.window.x_max = get_or<double>(win, "x_max", 1.25, "distance.window");
    c.window.y_min = get_or<double>(win, "y_min", -1.25, "distance.window");
    c.window.y_max = get_or<double>(win, "y_max", 1.25, "distance.window");
    c.window.spacing = get_or<double>(win, "spacing", 0.02, "distance.window");
    c.window.stencil_order = get_or<int>(win, "stencil_order", 2, "distance.window");
    c.pair_count = get_or<int>(dist, "pairs", 50, "distance");
    c.pair_box = get_or<double>(dist, "pair_box", 1.0, "distance");
    c.volume_radii = get_or<std::vector<double>>(dist, "volume_radii", c.volume_radii, "distance");
    const auto center = get_or<std::vector<double>>(dist, "volume_center", {0.0, 0.0}, "distance");
    if (center.size() != 2) throw InputError("distance.volume_center must be [x, y]");
    c.volume_center = {center[0], center[1]};

    const json pc = doc.value("pic1", json::object());
    reject_unknown_keys(pc, {"samples", "refine_iters", "restarts", "tol"}, "pic1");
    c.pic1.samples = get_or<int>(pc, "samples", 2000, "pic1");
    c.pic1.refine_iters = get_or<int>(pc, "refine_iters", 10, "pic1");
    c.pic1.restarts = get_or<int>(pc, "restarts", 200, "pic1");
    c.pic1_tol = get_or<double>(pc, "tol", 1e-9, "pic1");

    const json out = doc.value("output", json::object());
    reject_unknown_keys(out, {"trajectory", "summary", "attainment", "volume"}, "output");
    c.out_trajectory = get_or<std::string>(out, "trajectory", "", "output");
    c.out_summary = get_or<std::string>(out, "summary", "", "output");
    c.out_attainment = get_or<std::string>(out, "attainment", "", "output");
    c.out_volume = get_or<std::string>(out, "volume", "", "output");

    try {
        c.evolution.validate();
    } catch (const InvalidArgument& e) {
        throw InputError(std::string("config: ") + e.what());
    }
    return c;
}

inline ScalarField initial_field(const ExperimentConfig& c) {
    const Grid1D& g = c.evolution.grid;
    switch (c.initial_kind) {
        case InitialKind::constant:
            if (!(c.initial_value > 0.0)) throw InputError("initial_data.value must be > 0");
            return ScalarField(g, std::vector<double>(g.size(), c.initial_value));
        case InitialKind::soliton: {
            if (!(c.evolution.t_start > 0.0)) throw InputError("soliton initial data needs evolution.t_start > 0");
            return ScalarField::sample(g, [t = c.evolution.t_start](double x) { return soliton::u(x, t); });
        }
        case InitialKind::measure:
            return mollify_initial_data(c.measure, g);
    }
    throw InputError("unreachable initial data kind");
}

inline double farfield_value(const ExperimentConfig& c) {
    if (c.initial_kind == InitialKind::measure) return c.measure.background;
    if (c.initial_kind == InitialKind::constant) return c.initial_value;
    return 0.0;
}

struct StateCheck {
    json report;
    bool pass = true;
};

// Curvature and q bounds for one state, or the reason they were skipped.
inline StateCheck check_state(const ConformalFlowState& s, double origin, double window, double tol_factor, double alpha,
                              std::optional<double> farfield) {
    StateCheck out;
    const double elapsed = s.time() - origin;
    const CurvatureField K = gauss_curvature_1d(s);
    const Extrema kx = interior_extrema(K.field, interior_range(s.grid()));
    out.report = {{"t", s.time()}, {"max_u", *std::max_element(s.field().values().begin(), s.field().values().end())},
                  {"min_u", *std::min_element(s.field().values().begin(), s.field().values().end())},
                  {"max_interior_K", kx.max}, {"min_interior_K", kx.min}};
    if (farfield) {
        const bool contact = boundary_contact(s, *farfield);
        out.report["excess_mass"] = excess_mass(s, *farfield);
        out.report["boundary_contact"] = contact;
        if (contact) {
            out.report["checks"] = "skipped: disturbance reached the outer 10% of the domain";
            return out;
        }
    }
    if (!(elapsed > 0.0) || elapsed < window) {
        out.report["checks"] = "skipped: outside the time window";
        return out;
    }
    const double tol = tol_factor / elapsed;
    const CurvatureBoundReports kb = check_curvature_bounds(s, tol, origin);
    const BoundReport qb = check_q_bound(compute_pressure(s), alpha, tol, origin);
    out.report["checks"] = json::array({io::bound_report_json(kb.upper), io::bound_report_json(kb.lower), io::bound_report_json(qb)});
    out.pass = kb.upper.pass && kb.lower.pass && qb.pass;
    return out;
}

inline void emit(const std::string& path, const std::string& text, std::ostream& fallback) {
    if (path.empty()) fallback << text;
    else io::write_file(path, text);
}

struct RunContext {
    std::ostream& out;
    std::ostream& err;
    bool timing = false;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    void finish(json& summary, const std::string& cmd) const {
        const double s = seconds();
        if (timing) summary["timing_seconds"] = s;
        err << "ricci2d " << cmd << ": " << s << " s\n";
    }
};

// ---------------------------------------------------------------------------

struct SolitonArgs {
    double t = 0.5;
    double xmax = 5.0;
    long long n = 401;
    double residual_h = 1e-4;
    std::string output, summary;
};

inline int cmd_soliton(const SolitonArgs& a, RunContext& ctx) {
    if (!(a.t > 0.0)) throw InputError("soliton: --t must be > 0");
    if (!(a.xmax > 0.0)) throw InputError("soliton: --xmax must be > 0");
    const Grid1D g = make_uniform_grid(-a.xmax, a.xmax, a.n);
    const soliton::Fields f = soliton::fields(g, a.t);

    std::ostringstream csv;
    csv << "x,u,K,w,q\n";
    for (std::size_t i = 0; i < g.size(); ++i)
        csv << io::format_real(g.node(i)) << ',' << io::format_real(f.u[i]) << ',' << io::format_real(f.K[i]) << ','
            << io::format_real(f.w[i]) << ',' << io::format_real(f.q[i]) << '\n';
    emit(a.output, csv.str(), ctx.out);

    double max_res = 0.0, max_2tK = -1e300, max_qt_dev = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        max_res = std::max(max_res, soliton::pde_residual(a.t, g.node(i), a.residual_h));
        max_2tK = std::max(max_2tK, 2.0 * a.t * f.K[i]);
        max_qt_dev = std::max(max_qt_dev, std::abs(f.q[i] * a.t - 1.0));
    }
    const ScalarField lx = ScalarField::sample(g, [t = a.t](double x) { return soliton::log_u_x(x, t); });
    json summary = {{"command", "soliton"},
                    {"t", a.t},
                    {"xmax", a.xmax},
                    {"n", a.n},
                    {"residual_h", a.residual_h},
                    {"max_pde_residual", max_res},
                    {"max_2tK", max_2tK},
                    {"max_abs_qt_minus_1", max_qt_dev},
                    {"identity_residual_analytic", identity_residual(f.u, f.K, lx, f.q)},
                    {"mass_closed_form_R_xmax", soliton::mass_closed_form(a.xmax, a.t)}};
    ctx.finish(summary, "soliton");
    if (!a.summary.empty()) io::write_file(a.summary, summary.dump(2) + "\n");
    else ctx.err << summary.dump(2) << '\n';
    return kOk;
}

struct EvolveArgs {
    std::string config, trajectory, summary;
};

inline int cmd_evolve(const EvolveArgs& a, RunContext& ctx) {
    const ExperimentConfig c = parse_experiment_config(io::parse_json(io::read_file(a.config), a.config));
    const ScalarField u0 = initial_field(c);
    const Trajectory traj = evolve(u0, c.evolution);

    std::ostringstream csv;
    io::write_trajectory_csv(csv, traj.states);
    const std::string traj_path = a.trajectory.empty() ? c.out_trajectory : a.trajectory;
    if (!traj_path.empty()) io::write_file(traj_path, csv.str());

    std::optional<double> farfield;
    if (c.initial_kind != InitialKind::soliton) farfield = farfield_value(c);
    bool pass = true;
    json states = json::array();
    for (const auto& s : traj.states) {
        StateCheck sc = check_state(s, c.origin(), c.check_window(), c.tol_factor, c.alpha, farfield);
        if (c.initial_kind == InitialKind::soliton) {
            double err = 0.0;
            for (std::size_t i = 0; i < s.field().size(); ++i) {
                const double ex = soliton::u(s.grid().node(i), s.time());
                err = std::max(err, std::abs(s.field()[i] - ex) / ex);
            }
            sc.report["max_relative_error_vs_soliton"] = err;
        }
        pass = pass && sc.pass;
        states.push_back(std::move(sc.report));
    }
    json summary = {{"command", "evolve"},
                    {"config", c.echo},
                    {"run", {{"steps", traj.stats.steps}, {"newton_iterations", traj.stats.newton_iterations},
                             {"max_halving_depth", traj.stats.max_halving_depth}}},
                    {"check_origin", c.origin()},
                    {"check_window", c.check_window()},
                    {"states", states},
                    {"verdict", pass ? "pass" : "fail"}};
    ctx.finish(summary, "evolve");
    emit(a.summary.empty() ? c.out_summary : a.summary, summary.dump(2) + "\n", ctx.out);
    return pass ? kOk : kCheckFailed;
}

struct DiagnoseArgs {
    std::string trajectory, summary;
    double t_origin = 0.0;
    double tol_factor = 0.05;
    double min_elapsed = 0.0;
    double alpha = 1.0;
    double column_tol = 1e-9;
};

inline int cmd_diagnose(const DiagnoseArgs& a, RunContext& ctx) {
    std::istringstream is(io::read_file(a.trajectory));
    const io::TrajectoryFile tf = io::read_trajectory_csv(is);

    bool pass = true;
    json states = json::array();
    for (const auto& s : tf.states) {
        StateCheck sc = check_state(s, a.t_origin, a.min_elapsed, a.tol_factor, a.alpha, std::nullopt);
        sc.report["identity_residual"] = check_curvature_identity(s);
        pass = pass && sc.pass;
        states.push_back(std::move(sc.report));
    }
    const bool columns_ok = tf.column_mismatch <= a.column_tol;
    json summary = {{"command", "diagnose"},
                    {"trajectory", a.trajectory},
                    {"t_origin", a.t_origin},
                    {"tol_factor", a.tol_factor},
                    {"states", states},
                    {"column_consistency", {{"max_relative_mismatch", tf.column_mismatch}, {"tolerance", a.column_tol},
                                            {"verdict", columns_ok ? "pass" : "fail"}}}};
    if (tf.states.size() >= 3) {
        double min_dt = 1e300;
        for (std::size_t k = 1; k < tf.states.size(); ++k)
            min_dt = std::min(min_dt, tf.states[k].time() - tf.states[k - 1].time());
        const double h = tf.states.front().grid().spacing();
        summary["q_evolution"] = {{"max_residual", check_q_evolution(tf.states)}, {"expected_scale_dt_plus_h2", min_dt + h * h}};
    }
    pass = pass && columns_ok;
    summary["verdict"] = pass ? "pass" : "fail";
    ctx.finish(summary, "diagnose");
    emit(a.summary, summary.dump(2) + "\n", ctx.out);
    return pass ? kOk : kCheckFailed;
}

struct DistanceArgs {
    std::string config, summary, attainment, volume;
};

inline int cmd_distance(const DistanceArgs& a, RunContext& ctx) {
    const ExperimentConfig c = parse_experiment_config(io::parse_json(io::read_file(a.config), a.config));
    const Trajectory traj = evolve(initial_field(c), c.evolution);
    std::vector<ConformalFlowState> states;
    for (const auto& s : traj.states)
        if (s.time() > c.evolution.t_start) states.push_back(s);

    const std::vector<PointPair> pairs = random_pairs(c.pair_count, c.pair_box, c.seed);
    std::vector<AttainmentRow> rows;
    try {
        rows = attainment_report(states, pairs, c.window);
    } catch (const InvalidArgument& e) {
        throw InputError(std::string("distance: ") + e.what());
    }

    std::ostringstream att;
    att << "t,sup_deviation,sup_relative,max_interior_K\n";
    json att_json = json::array();
    for (const auto& r : rows) {
        att << io::format_real(r.time) << ',' << io::format_real(r.sup_deviation) << ',' << io::format_real(r.sup_relative)
            << ',' << io::format_real(r.max_interior_K) << '\n';
        att_json.push_back({{"t", r.time}, {"sup_deviation", r.sup_deviation}, {"sup_relative", r.sup_relative},
                            {"max_interior_K", r.max_interior_K}});
    }
    std::ostringstream vol;
    vol << "t,r,volume_ratio\n";
    json vol_json = json::array();
    for (const auto& s : states) {
        PathMetricGraph g(s, c.window);
        for (double r : c.volume_radii) {
            try {
                const double v = volume_ratio(g, g.nearest(c.volume_center), r);
                vol << io::format_real(s.time()) << ',' << io::format_real(r) << ',' << io::format_real(v) << '\n';
                vol_json.push_back({{"t", s.time()}, {"r", r}, {"volume_ratio", v}});
            } catch (const BallTruncated&) {
                vol << io::format_real(s.time()) << ',' << io::format_real(r) << ",truncated\n";
                vol_json.push_back({{"t", s.time()}, {"r", r}, {"volume_ratio", "truncated"}});
            }
        }
    }
    const std::string att_path = a.attainment.empty() ? c.out_attainment : a.attainment;
    const std::string vol_path = a.volume.empty() ? c.out_volume : a.volume;
    if (!att_path.empty()) io::write_file(att_path, att.str());
    if (!vol_path.empty()) io::write_file(vol_path, vol.str());

    json summary = {{"command", "distance"},
                    {"config", c.echo},
                    {"pair_set_diameter", pair_set_diameter(pairs)},
                    {"attainment", att_json},
                    {"volume", vol_json}};
    ctx.finish(summary, "distance");
    emit(a.summary.empty() ? c.out_summary : a.summary, summary.dump(2) + "\n", ctx.out);
    return kOk;
}

struct Pic1Args {
    std::string input, summary;
    int samples = 2000;
    int refine_iters = 10;
    int restarts = 200;
    std::uint64_t seed = 0;
    double tol = 1e-9;
};

inline int cmd_pic1(const Pic1Args& a, RunContext& ctx) {
    const pic1::CurvatureTensor R = io::tensor_from_json(io::parse_json(io::read_file(a.input), a.input));
    pic1::MinIC1Options opt;
    opt.samples = a.samples;
    opt.refine_iters = a.refine_iters;
    opt.restarts = a.restarts;
    opt.seed = a.seed;
    if (opt.samples < 1) throw InputError("pic1: --samples must be >= 1");
    const pic1::WPIC1Verdict v = pic1::is_wpic1(R, a.tol, opt);
    const Eigen::VectorXd spec = pic1::ricci_spectrum(R);
    json ric = json::array();
    for (Eigen::Index i = 0; i < spec.size(); ++i) ric.push_back(spec(i));
    const auto defects = R.symmetry_defects();
    json summary = {{"command", "pic1"},
                    {"input", a.input},
                    {"dimension", R.dimension()},
                    {"seed", a.seed},
                    {"samples", a.samples},
                    {"refine_iters", a.refine_iters},
                    {"restarts", a.restarts},
                    {"min_ic1", v.min_ic1},
                    {"ricci_spectrum", ric},
                    {"symmetry_defects", {{"antisymmetry", defects.antisymmetry}, {"pair", defects.pair}, {"bianchi", defects.bianchi}}},
                    {"wpic1", {{"tolerance", a.tol}, {"verdict", v.pass ? "pass" : "fail"}}},
                    {"witness", {{"v", io::complex_vector_json(v.witness.v)},
                                 {"w", io::complex_vector_json(v.witness.w)},
                                 {"plane_curvature", pic1::plane_curvature(R, v.witness)}}}};
    ctx.finish(summary, "pic1");
    emit(a.summary, summary.dump(2) + "\n", ctx.out);
    return v.pass ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------------------

/// Parses argv (program name first) and runs one subcommand.
inline int run(const std::vector<std::string>& argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Translation-invariant Ricci flow on the plane and IC1 curvature tools"};
    app.require_subcommand(1);
    app.footer(kConfigHelp);
    bool timing = false;
    app.add_flag("--timing", timing, "embed wall-clock timing in summaries (breaks byte-identical output)");

    SolitonArgs sa;
    auto* sol = app.add_subcommand("soliton", "closed-form soliton table (x,u,K,w,q) and PDE-residual summary");
    sol->add_option("--t", sa.t, "time t > 0")->capture_default_str();
    sol->add_option("--xmax", sa.xmax, "half-width of the x range")->capture_default_str();
    sol->add_option("--n", sa.n, "node count")->capture_default_str();
    sol->add_option("--residual-h", sa.residual_h, "finite-difference step for the PDE residual")->capture_default_str();
    sol->add_option("--output", sa.output, "CSV path (default stdout)");
    sol->add_option("--summary", sa.summary, "summary JSON path (default stderr)");

    EvolveArgs ea;
    auto* evo = app.add_subcommand("evolve", "run the solver from a JSON config; writes trajectory CSV and summary");
    evo->add_option("--config", ea.config, "experiment config (JSON)")->required();
    evo->add_option("--trajectory", ea.trajectory, "trajectory CSV path (overrides output.trajectory)");
    evo->add_option("--summary", ea.summary, "summary JSON path (overrides output.summary; default stdout)");

    DiagnoseArgs da;
    auto* dia = app.add_subcommand("diagnose", "pressure/curvature checks on a trajectory CSV");
    dia->add_option("--traj", da.trajectory, "trajectory CSV (t,x,u,K,w,q)")->required();
    dia->add_option("--summary", da.summary, "summary JSON path (default stdout)");
    dia->add_option("--t-origin", da.t_origin, "time the 1/t bounds count from")->capture_default_str();
    dia->add_option("--tol-factor", da.tol_factor, "tolerance = factor / (t - origin)")->capture_default_str();
    dia->add_option("--min-elapsed", da.min_elapsed, "skip states with t - origin below this")->capture_default_str();
    dia->add_option("--alpha", da.alpha, "q <= 1/(alpha t)")->capture_default_str();
    dia->add_option("--column-tol", da.column_tol, "allowed mismatch of stored K,w,q vs recomputed")->capture_default_str();

    DistanceArgs xa;
    auto* dis = app.add_subcommand("distance", "distance attainment and volume-ratio tables for a config");
    dis->add_option("--config", xa.config, "experiment config (JSON)")->required();
    dis->add_option("--summary", xa.summary, "summary JSON path (default stdout)");
    dis->add_option("--attainment", xa.attainment, "attainment CSV path");
    dis->add_option("--volume", xa.volume, "volume-ratio CSV path");

    Pic1Args pa;
    auto* pic = app.add_subcommand("pic1", "IC1 curvature minimum, Ricci spectrum and WPIC1 verdict for a tensor");
    pic->add_option("--input", pa.input, "tensor JSON {dimension, components:[[i,j,k,l,value],...]}")->required();
    pic->add_option("--samples", pa.samples, "random degenerate planes")->capture_default_str();
    pic->add_option("--seed", pa.seed, "seed")->capture_default_str();
    pic->add_option("--refine", pa.refine_iters, "step-halving refinement rounds")->capture_default_str();
    pic->add_option("--restarts", pa.restarts, "candidates refined")->capture_default_str();
    pic->add_option("--tol", pa.tol, "WPIC1 tolerance")->capture_default_str();
    pic->add_option("--summary", pa.summary, "summary JSON path (default stdout)");

    std::vector<std::string> args(argv.begin() + (argv.empty() ? 0 : 1), argv.end());
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kOk;
        }
        err << "error: " << e.what() << '\n';
        return kInputError;
    }

    RunContext ctx{out, err, timing};
    try {
        if (sol->parsed()) return cmd_soliton(sa, ctx);
        if (evo->parsed()) return cmd_evolve(ea, ctx);
        if (dia->parsed()) return cmd_diagnose(da, ctx);
        if (dis->parsed()) return cmd_distance(xa, ctx);
        if (pic->parsed()) return cmd_pic1(pa, ctx);
    } catch (const NewtonFailure& e) {
        err << "numerical failure at t = " << e.time() << ": " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const PositivityError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::invalid_argument& e) {
        err << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const io::json::exception& e) {
        err << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::exception& e) {
        err << "failure: " << e.what() << '\n';
        return kNumericalFailure;
    }
    return kInputError;
}

}  // namespace ricci2d::cli
