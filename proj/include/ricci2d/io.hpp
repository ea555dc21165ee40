#pragma once

// File formats: trajectory CSV, experiment configuration and curvature
// tensor documents (JSON).

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <system_error>

#include "json.hpp"

#include "ricci2d/pic1.hpp"
#include "ricci2d/pressure.hpp"

namespace ricci2d::io {

using nlohmann::json;

// 17 significant digits, '.' separator regardless of locale.
inline std::string format_real(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

inline double parse_real(std::string_view s, const std::string& what) {
    double v = 0.0;
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw InputError("cannot parse number '" + std::string(s) + "' in " + what);
    return v;
}

// ---------------------------------------------------------------------------
// Trajectory CSV: header t,x,u,K,w,q; rows sorted by (t, x).

inline constexpr std::string_view kTrajectoryHeader = "t,x,u,K,w,q";

inline void write_trajectory_csv(std::ostream& os, const std::vector<ConformalFlowState>& states) {
    os << kTrajectoryHeader << '\n';
    for (const auto& s : states) {
        const CurvatureField K = gauss_curvature_1d(s);
        const PressureDiagnostics p = compute_pressure(s);
        const std::string t = format_real(s.time());
        for (std::size_t i = 0; i < s.field().size(); ++i) {
            os << t << ',' << format_real(s.grid().node(i)) << ',' << format_real(s.field()[i]) << ','
               << format_real(K.field[i]) << ',' << format_real(p.w[i]) << ',' << format_real(p.q[i]) << '\n';
        }
    }
}

struct TrajectoryFile {
    std::vector<ConformalFlowState> states;
    // Largest relative mismatch between the stored K, w, q columns and the
    // values recomputed from u (interior nodes).
    double column_mismatch = 0.0;
};

inline TrajectoryFile read_trajectory_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw InputError("trajectory CSV: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kTrajectoryHeader) throw InputError("trajectory CSV: header must be '" + std::string(kTrajectoryHeader) + "'");

    struct Group {
        double t;
        std::vector<double> x, u, K, w, q;
    };
    std::vector<Group> groups;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::array<double, 6> v{};
        std::size_t start = 0;
        for (int c = 0; c < 6; ++c) {
            const std::size_t end = c < 5 ? line.find(',', start) : line.size();
            if (end == std::string::npos) throw InputError("trajectory CSV: too few columns on line " + std::to_string(lineno));
            v[c] = parse_real(std::string_view(line).substr(start, end - start), "line " + std::to_string(lineno));
            start = end + 1;
        }
        if (groups.empty() || groups.back().t != v[0]) {
            if (!groups.empty() && !(v[0] > groups.back().t))
                throw InputError("trajectory CSV: times must be strictly increasing (line " + std::to_string(lineno) + ")");
            groups.push_back({v[0], {}, {}, {}, {}, {}});
        }
        Group& g = groups.back();
        if (!g.x.empty() && !(v[1] > g.x.back()))
            throw InputError("trajectory CSV: x must increase within a time slice (line " + std::to_string(lineno) + ")");
        g.x.push_back(v[1]);
        g.u.push_back(v[2]);
        g.K.push_back(v[3]);
        g.w.push_back(v[4]);
        g.q.push_back(v[5]);
    }
    if (groups.empty()) throw InputError("trajectory CSV: no data rows");

    TrajectoryFile out;
    for (const Group& g : groups) {
        if (g.x.size() < 3) throw InputError("trajectory CSV: a time slice has fewer than 3 nodes");
        const Grid1D grid(g.x.front(), g.x.back(), g.x.size());
        for (std::size_t i = 0; i < g.x.size(); ++i)
            if (std::abs(grid.node(i) - g.x[i]) > 1e-12 * std::max(1.0, std::abs(g.x[i])))
                throw InputError("trajectory CSV: x values are not a uniform grid");
        if (!out.states.empty() && !(out.states.front().grid() == grid))
            throw InputError("trajectory CSV: time slices use different grids");
        std::optional<ConformalFlowState> slice;
        try {
            slice.emplace(ScalarField(grid, g.u), g.t);
        } catch (const PositivityError& e) {
            throw InputError(std::string("trajectory CSV: ") + e.what());
        }
        const ConformalFlowState& s = *slice;
        const CurvatureField K = gauss_curvature_1d(s);
        const PressureDiagnostics p = compute_pressure(s);
        const InteriorRange r = interior_range(grid);
        auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
        for (std::size_t i = r.first; i < r.last; ++i) {
            out.column_mismatch = std::max({out.column_mismatch, rel(g.K[i], K.field[i]), rel(g.w[i], p.w[i]),
                                            rel(g.q[i], p.q[i])});
        }
        out.states.push_back(s);
    }
    return out;
}

inline void write_file(const std::string& path, const std::string& contents) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot open '" + path + "' for writing");
    f << contents;
    if (!f) throw InputError("failed writing '" + path + "'");
}

inline std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline json parse_json(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(what + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Curvature tensor documents: {"dimension": n, "components": [[i,j,k,l,value], ...]}, 1-based.

namespace detail {
inline void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
    if (!obj.is_object()) throw InputError(where + ": expected an object");
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (auto a : allowed) ok = ok || key == a;
        if (!ok) throw InputError(where + ": unknown key '" + key + "'");
    }
}

template <class T>
T get_or(const json& obj, const char* key, T fallback, const std::string& where) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw InputError(where + "." + key + ": " + e.what());
    }
}

template <class T>
T require(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) throw InputError(where + ": missing key '" + key + "'");
    return get_or<T>(obj, key, T{}, where);
}
}  // namespace detail

inline pic1::CurvatureTensor tensor_from_json(const json& doc) {
    detail::reject_unknown_keys(doc, {"dimension", "components"}, "tensor");
    const int n = detail::require<int>(doc, "dimension", "tensor");
    if (n < 3) throw InputError("tensor: dimension must be >= 3");
    if (!doc.contains("components") || !doc.at("components").is_array())
        throw InputError("tensor: 'components' must be an array");
    std::vector<pic1::CurvatureTensor::Component> comps;
    for (const auto& e : doc.at("components")) {
        if (!e.is_array() || e.size() != 5) throw InputError("tensor: each component is [i,j,k,l,value]");
        std::array<int, 4> idx{};
        for (int c = 0; c < 4; ++c) {
            if (!e[c].is_number_integer()) throw InputError("tensor: indices must be integers");
            idx[c] = e[c].get<int>() - 1;
        }
        if (!e[4].is_number()) throw InputError("tensor: component value must be a number");
        comps.push_back({idx[0], idx[1], idx[2], idx[3], e[4].get<double>()});
    }
    pic1::CurvatureTensor R = pic1::CurvatureTensor::from_components(n, comps);
    if (R.symmetry_defects().bianchi > 1e-10) throw InputError("tensor: components violate the first Bianchi identity");
    return R;
}

// Generating set: i < j, k < l, (i,j) <= (k,l) lexicographically; zeros omitted.
inline json tensor_to_json(const pic1::CurvatureTensor& R) {
    json comps = json::array();
    const int n = R.dimension();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = k + 1; l < n; ++l) {
                    if (std::make_pair(k, l) < std::make_pair(i, j)) continue;
                    const double v = R(i, j, k, l);
                    if (v != 0.0) comps.push_back({i + 1, j + 1, k + 1, l + 1, v});
                }
    return {{"dimension", n}, {"components", comps}};
}

inline json complex_vector_json(const Eigen::VectorXcd& v) {
    json re = json::array(), im = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        re.push_back(v(i).real());
        im.push_back(v(i).imag());
    }
    return {{"re", re}, {"im", im}};
}

inline json bound_report_json(const BoundReport& r) {
    return {{"quantity", r.quantity}, {"time", r.time},         {"elapsed", r.elapsed},
            {"sup", r.sup},           {"inf", r.inf},           {"bound", r.bound},
            {"margin", r.margin},     {"tolerance", r.tolerance}, {"verdict", r.pass ? "pass" : "fail"},
            {"excluded_nodes", r.excluded_nodes}};
}

}  // namespace ricci2d::io
