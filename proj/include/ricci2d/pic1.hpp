#pragma once

// Algebraic curvature tensors and the IC1 curvature: complex sectional
// curvature R(v, w, conj v, conj w) minimized over degenerate complex
// 2-planes.
//
// Convention: R_ijij is the sectional curvature of span{e_i, e_j}, so the
// space form of curvature kappa is kappa (d_ik d_jl - d_il d_jk). A complex
// 2-plane is degenerate when the complex-bilinear metric restricted to it
// has a kernel: some v != 0 in the plane has v.v = 0 and v.w = 0 for all w
// in the plane. Planes are spanned by Hermitian-orthonormal (v, w) with v
// the kernel vector, which normalizes space forms to kappa.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "ricci2d/errors.hpp"

namespace ricci2d::pic1 {

using cplx = std::complex<double>;

class CurvatureTensor {
public:
    explicit CurvatureTensor(int n) : n_(n) {
        if (n < 3) throw InvalidArgument("CurvatureTensor: dimension must be >= 3");
        c_.assign(static_cast<std::size_t>(n) * n * n * n, 0.0);
    }

    struct Component {
        int i, j, k, l;  // 0-based
        double value;
    };

    /// Completes a generating set by antisymmetry and pair symmetry.
    /// Conflicting duplicates and nonzero entries on i == j or k == l are errors.
    static CurvatureTensor from_components(int n, const std::vector<Component>& comps, double rel_tol = 1e-12) {
        CurvatureTensor R(n);
        std::vector<char> set(R.c_.size(), 0);
        double scale = 0.0;
        for (const auto& c : comps) scale = std::max(scale, std::abs(c.value));
        const double tol = rel_tol * std::max(scale, 1.0);
        for (const auto& c : comps) {
            for (int idx : {c.i, c.j, c.k, c.l})
                if (idx < 0 || idx >= n) throw InputError("curvature component index out of range");
            if (c.i == c.j || c.k == c.l) {
                if (std::abs(c.value) > tol) throw InputError("curvature component with repeated antisymmetric index must be 0");
                continue;
            }
            const std::array<std::tuple<int, int, int, int, double>, 8> images = {{
                {c.i, c.j, c.k, c.l, 1.0}, {c.j, c.i, c.k, c.l, -1.0}, {c.i, c.j, c.l, c.k, -1.0}, {c.j, c.i, c.l, c.k, 1.0},
                {c.k, c.l, c.i, c.j, 1.0}, {c.l, c.k, c.i, c.j, -1.0}, {c.k, c.l, c.j, c.i, -1.0}, {c.l, c.k, c.j, c.i, 1.0},
            }};
            for (const auto& [a, b, d, e, sign] : images) {
                const std::size_t pos = R.offset(a, b, d, e);
                const double v = sign * c.value;
                if (set[pos] && std::abs(R.c_[pos] - v) > tol)
                    throw InputError("contradictory curvature components at (" + std::to_string(a + 1) + "," +
                                     std::to_string(b + 1) + "," + std::to_string(d + 1) + "," +
                                     std::to_string(e + 1) + ")");
                R.c_[pos] = v;
                set[pos] = 1;
            }
        }
        return R;
    }

    int dimension() const { return n_; }
    double operator()(int i, int j, int k, int l) const { return c_[offset(i, j, k, l)]; }
    double& operator()(int i, int j, int k, int l) { return c_[offset(i, j, k, l)]; }
    const std::vector<double>& data() const { return c_; }

    double max_abs() const {
        double m = 0.0;
        for (double v : c_) m = std::max(m, std::abs(v));
        return m;
    }

    CurvatureTensor& operator+=(const CurvatureTensor& o) {
        require_same(o);
        for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
        return *this;
    }
    CurvatureTensor& operator*=(double s) {
        for (double& v : c_) v *= s;
        return *this;
    }
    friend CurvatureTensor operator+(CurvatureTensor a, const CurvatureTensor& b) { return a += b; }
    friend CurvatureTensor operator*(double s, CurvatureTensor a) { return a *= s; }

    struct SymmetryDefects {
        double antisymmetry = 0.0;
        double pair = 0.0;
        double bianchi = 0.0;
    };

    /// Largest violation of each identity, relative to max |R| (absolute when R = 0).
    SymmetryDefects symmetry_defects() const {
        SymmetryDefects d;
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                for (int k = 0; k < n_; ++k)
                    for (int l = 0; l < n_; ++l) {
                        const double r = (*this)(i, j, k, l);
                        d.antisymmetry = std::max({d.antisymmetry, std::abs(r + (*this)(j, i, k, l)),
                                                   std::abs(r + (*this)(i, j, l, k))});
                        d.pair = std::max(d.pair, std::abs(r - (*this)(k, l, i, j)));
                        d.bianchi = std::max(d.bianchi, std::abs(r + (*this)(i, k, l, j) + (*this)(i, l, j, k)));
                    }
        const double s = std::max(max_abs(), 1e-300);
        if (max_abs() > 0.0) {
            d.antisymmetry /= s;
            d.pair /= s;
            d.bianchi /= s;
        }
        return d;
    }

    bool operator==(const CurvatureTensor&) const = default;

private:
    std::size_t offset(int i, int j, int k, int l) const {
        return ((static_cast<std::size_t>(i) * n_ + j) * n_ + k) * n_ + l;
    }
    void require_same(const CurvatureTensor& o) const {
        if (o.n_ != n_) throw InvalidArgument("CurvatureTensor: dimension mismatch");
    }

    int n_;
    std::vector<double> c_;
};

inline CurvatureTensor make_space_form(int n, double kappa) {
    CurvatureTensor R(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    R(i, j, k, l) = kappa * ((i == k && j == l ? 1.0 : 0.0) - (i == l && j == k ? 1.0 : 0.0));
    return R;
}

/// Removes the totally antisymmetric part, which for a tensor with the
/// antisymmetry and pair symmetries is (R_ijkl + R_iklj + R_iljk) / 3.
inline CurvatureTensor bianchi_projection(const CurvatureTensor& R) {
    const int n = R.dimension();
    CurvatureTensor out(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    out(i, j, k, l) = R(i, j, k, l) - (R(i, j, k, l) + R(i, k, l, j) + R(i, l, j, k)) / 3.0;
    return out;
}

/// Symmetric operator on 2-forms with N(0, scale^2) entries (symmetrized),
/// read as a 4-tensor and projected onto the first Bianchi identity.
inline CurvatureTensor random_bianchi_tensor(int n, std::uint64_t seed, double scale = 1.0, bool project = true) {
    if (n < 3) throw InvalidArgument("random_bianchi_tensor: dimension must be >= 3");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, scale);
    std::vector<std::pair<int, int>> forms;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) forms.emplace_back(i, j);
    std::vector<CurvatureTensor::Component> comps;
    for (std::size_t a = 0; a < forms.size(); ++a) {
        for (std::size_t b = a; b < forms.size(); ++b) {
            const double v = normal(rng);
            comps.push_back({forms[a].first, forms[a].second, forms[b].first, forms[b].second, v});
        }
    }
    CurvatureTensor R = CurvatureTensor::from_components(n, comps);
    return project ? bianchi_projection(R) : R;
}

/// R'_ijkl = sum Q_ai Q_bj Q_ck Q_dl R_abcd: components in the basis given by
/// the columns of the orthogonal matrix Q.
inline CurvatureTensor change_basis(const CurvatureTensor& R, const Eigen::MatrixXd& Q) {
    const int n = R.dimension();
    CurvatureTensor a(n), b(n);
    // contract one slot at a time
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double s = 0.0;
                    for (int m = 0; m < n; ++m) s += Q(m, l) * R(i, j, k, m);
                    a(i, j, k, l) = s;
                }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double s = 0.0;
                    for (int m = 0; m < n; ++m) s += Q(m, k) * a(i, j, m, l);
                    b(i, j, k, l) = s;
                }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double s = 0.0;
                    for (int m = 0; m < n; ++m) s += Q(m, j) * b(i, m, k, l);
                    a(i, j, k, l) = s;
                }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double s = 0.0;
                    for (int m = 0; m < n; ++m) s += Q(m, i) * a(m, j, k, l);
                    b(i, j, k, l) = s;
                }
    return b;
}

// Ric_jl = sum_i R_ijil
inline Eigen::MatrixXd ricci(const CurvatureTensor& R) {
    const int n = R.dimension();
    Eigen::MatrixXd Ric = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l)
            for (int i = 0; i < n; ++i) Ric(j, l) += R(i, j, i, l);
    return Ric;
}

inline Eigen::VectorXd ricci_spectrum(const CurvatureTensor& R) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ricci(R), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

inline double ricci_min_eigenvalue(const CurvatureTensor& R) { return ricci_spectrum(R)(0); }

struct DegeneratePlane {
    Eigen::VectorXcd v;  // isotropic kernel vector
    Eigen::VectorXcd w;

    struct Defects {
        double norm_v, norm_w, hermitian_dot, isotropy, bilinear_dot;
        double max() const { return std::max({norm_v, norm_w, hermitian_dot, isotropy, bilinear_dot}); }
    };

    Defects defects() const {
        return {std::abs(v.norm() - 1.0), std::abs(w.norm() - 1.0), std::abs(v.dot(w)),
                std::abs((v.transpose() * v)(0)), std::abs((v.transpose() * w)(0))};
    }

    bool valid(double tol = 1e-10) const { return v.size() == w.size() && defects().max() <= tol; }
};

// sum R_ijkl a_i b_j c_k d_l over complex vectors
inline cplx contract(const CurvatureTensor& R, const Eigen::VectorXcd& a, const Eigen::VectorXcd& b,
                     const Eigen::VectorXcd& c, const Eigen::VectorXcd& d) {
    const int n = R.dimension();
    cplx s = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const cplx ab = a(i) * b(j);
            if (ab == cplx(0.0)) continue;
            for (int k = 0; k < n; ++k) {
                const cplx abc = ab * c(k);
                for (int l = 0; l < n; ++l) s += R(i, j, k, l) * abc * d(l);
            }
        }
    return s;
}

/// Complex sectional curvature R(v, w, conj v, conj w); real by the tensor symmetries.
inline double plane_curvature(const CurvatureTensor& R, const DegeneratePlane& plane) {
    if (plane.v.size() != R.dimension() || plane.w.size() != R.dimension())
        throw InvalidArgument("plane_curvature: plane dimension differs from tensor");
    if (!plane.valid()) throw InvalidArgument("plane_curvature: not a Hermitian-orthonormal degenerate plane");
    return contract(R, plane.v, plane.w, plane.v.conjugate(), plane.w.conjugate()).real();
}

/// Orthonormal real frame (e1..e4 as columns) and lambda in [0, 1].
struct FrameConfiguration {
    Eigen::MatrixXd frame;
    double lambda = 0.0;

    bool valid(double tol = 1e-10) const {
        if (frame.cols() != 4 || frame.rows() < 4) return false;
        if (lambda < 0.0 || lambda > 1.0) return false;
        return ((frame.transpose() * frame) - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() <= tol;
    }
};

// The plane on which ic1_frame_value is the complex sectional curvature:
// v = (e1 + i e2)/sqrt 2, w = (e3 + i lambda e4)/sqrt(1 + lambda^2).
inline DegeneratePlane frame_plane(const FrameConfiguration& fc) {
    const cplx I(0.0, 1.0);
    DegeneratePlane p;
    p.v = (fc.frame.col(0).cast<cplx>() + I * fc.frame.col(1).cast<cplx>()) / std::sqrt(2.0);
    p.w = (fc.frame.col(2).cast<cplx>() + I * fc.lambda * fc.frame.col(3).cast<cplx>()) /
          std::sqrt(1.0 + fc.lambda * fc.lambda);
    return p;
}

namespace detail {
inline double real_contract(const CurvatureTensor& R, const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                            const Eigen::VectorXd& c, const Eigen::VectorXd& d) {
    const int n = R.dimension();
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const double abc = a(i) * b(j) * c(k);
                if (abc == 0.0) continue;
                for (int l = 0; l < n; ++l) s += R(i, j, k, l) * abc * d(l);
            }
    return s;
}
}  // namespace detail

/// [R1313 + l^2 R1414 + R2323 + l^2 R2424 - 2 l R1234] / (2 (1 + l^2)) on the frame.
inline double ic1_frame_value(const CurvatureTensor& R, const FrameConfiguration& fc) {
    if (R.dimension() < 4) throw InvalidArgument("ic1_frame_value: needs dimension >= 4");
    if (fc.frame.rows() != R.dimension() || !fc.valid())
        throw InvalidArgument("ic1_frame_value: frame is not an orthonormal 4-frame with lambda in [0,1]");
    const Eigen::VectorXd e1 = fc.frame.col(0), e2 = fc.frame.col(1), e3 = fc.frame.col(2), e4 = fc.frame.col(3);
    const double l = fc.lambda;
    using detail::real_contract;
    const double num = real_contract(R, e1, e3, e1, e3) + l * l * real_contract(R, e1, e4, e1, e4) +
                       real_contract(R, e2, e3, e2, e3) + l * l * real_contract(R, e2, e4, e2, e4) -
                       2.0 * l * real_contract(R, e1, e2, e3, e4);
    return num / (2.0 * (1.0 + l * l));
}

// ---------------------------------------------------------------------------
// Sampling and minimization

namespace detail {

// Independent stream per (seed, stream index); results never depend on the
// order in which streams run.
inline std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32), 0x1c1u};
    return std::mt19937_64(seq);
}

inline Eigen::MatrixXd gaussian_matrix(std::mt19937_64& rng, int rows, int cols) {
    std::normal_distribution<double> nd(0.0, 1.0);
    Eigen::MatrixXd m(rows, cols);
    for (int c = 0; c < cols; ++c)
        for (int r = 0; r < rows; ++r) m(r, c) = nd(rng);
    return m;
}

// Modified Gram-Schmidt on the columns.
inline Eigen::MatrixXd orthonormalize(Eigen::MatrixXd m) {
    for (int c = 0; c < m.cols(); ++c) {
        for (int p = 0; p < c; ++p) m.col(c) -= m.col(p).dot(m.col(c)) * m.col(p);
        m.col(c).normalize();
    }
    return m;
}

inline Eigen::VectorXcd isotropic_vector(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return (a.cast<cplx>() + cplx(0.0, 1.0) * b.cast<cplx>()) / std::sqrt(2.0);
}

// Orthonormal basis of span{a, b}^perp as columns.
inline Eigen::MatrixXd complement_basis(const Eigen::MatrixXd& ab) {
    const int n = static_cast<int>(ab.rows());
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(ab);
    const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
    return Q.rightCols(n - 2);
}

struct LegMinimum {
    double value;
    DegeneratePlane plane;
};

/// For fixed isotropic v = (a + i b)/sqrt 2, K(v, w) is the Hermitian form
/// conj(w)^H A conj(w) with A_jl = R(v, e_j, conj v, e_l); admissible w lie in
/// the complexification of span{a, b}^perp. Its minimum is an eigenvalue.
inline LegMinimum minimize_second_leg(const CurvatureTensor& R, const Eigen::MatrixXd& ab) {
    const int n = R.dimension();
    const Eigen::VectorXcd v = isotropic_vector(ab.col(0), ab.col(1));
    const Eigen::VectorXcd vb = v.conjugate();
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const cplx c = v(i) * vb(k);
            for (int j = 0; j < n; ++j)
                for (int l = 0; l < n; ++l) A(j, l) += R(i, j, k, l) * c;
        }
    const Eigen::MatrixXd P = complement_basis(ab);
    Eigen::MatrixXcd M = P.transpose().cast<cplx>() * A * P.cast<cplx>();
    M = 0.5 * (M + M.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M);
    const Eigen::VectorXcd d = es.eigenvectors().col(0);
    DegeneratePlane plane{v, (P.cast<cplx>() * d.conjugate()).normalized()};
    return {es.eigenvalues()(0), std::move(plane)};
}

// Real orthonormal (a, b) with v = (a + i b)/sqrt 2 recovered from an isotropic unit v.
inline Eigen::MatrixXd isotropic_legs(const Eigen::VectorXcd& v) {
    Eigen::MatrixXd ab(v.size(), 2);
    ab.col(0) = std::sqrt(2.0) * v.real();
    ab.col(1) = std::sqrt(2.0) * v.imag();
    return orthonormalize(ab);
}

}  // namespace detail

/// Random degenerate plane: isotropic v from a random orthonormal pair, w a
/// random complex vector with the v and conj v components removed.
inline DegeneratePlane random_degenerate_plane(int n, std::mt19937_64& rng) {
    const Eigen::MatrixXd ab = detail::orthonormalize(detail::gaussian_matrix(rng, n, 2));
    const Eigen::VectorXcd v = detail::isotropic_vector(ab.col(0), ab.col(1));
    const Eigen::MatrixXd g = detail::gaussian_matrix(rng, n, 2);
    Eigen::VectorXcd w = g.col(0).cast<cplx>() + cplx(0.0, 1.0) * g.col(1).cast<cplx>();
    for (int pass = 0; pass < 2; ++pass) {
        w -= v.dot(w) * v;
        const Eigen::VectorXcd vb = v.conjugate();
        w -= vb.dot(w) * vb;
    }
    w.normalize();
    return {v, w};
}

inline FrameConfiguration random_frame(int n, std::mt19937_64& rng, double lambda) {
    return {detail::orthonormalize(detail::gaussian_matrix(rng, n, 4)), lambda};
}

/// Canonical frame form of a degenerate plane (n >= 4): the plane equals
/// frame_plane(result) as a subspace.
inline FrameConfiguration plane_to_frame(const DegeneratePlane& plane) {
    const int n = static_cast<int>(plane.v.size());
    if (n < 4) throw InvalidArgument("plane_to_frame: needs dimension >= 4");
    const Eigen::MatrixXd ab = detail::isotropic_legs(plane.v);
    Eigen::VectorXd x = plane.w.real(), y = plane.w.imag();
    // rotate the phase of w so its real and imaginary parts are orthogonal
    const double theta = 0.5 * std::atan2(-2.0 * x.dot(y), x.squaredNorm() - y.squaredNorm());
    Eigen::VectorXd xr = std::cos(theta) * x - std::sin(theta) * y;
    Eigen::VectorXd yr = std::sin(theta) * x + std::cos(theta) * y;
    if (yr.norm() > xr.norm()) std::tie(xr, yr) = std::make_tuple(Eigen::VectorXd(yr), Eigen::VectorXd(-xr));
    FrameConfiguration fc;
    fc.frame.resize(n, 4);
    fc.frame.col(0) = ab.col(0);
    fc.frame.col(1) = ab.col(1);
    fc.frame.col(2) = xr.normalized();
    fc.lambda = std::min(1.0, yr.norm() / xr.norm());
    if (yr.norm() > 1e-14 * xr.norm()) {
        fc.frame.col(3) = yr.normalized();
    } else {
        // any unit vector orthogonal to e1, e2, e3
        Eigen::MatrixXd m(n, n);
        m.leftCols(3) = fc.frame.leftCols(3);
        m.rightCols(n - 3) = Eigen::MatrixXd::Identity(n, n).leftCols(n - 3);
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
        fc.frame.col(3) = (qr.householderQ() * Eigen::MatrixXd::Identity(n, n)).col(3);
        fc.lambda = 0.0;
    }
    fc.frame = detail::orthonormalize(fc.frame);
    return fc;
}

struct MinIC1Options {
    int samples = 2000;        // direct plane draws (and frames, for n >= 4)
    int refine_iters = 10;     // step-halving rounds
    int restarts = 200;        // best candidates carried into refinement
    int trials_per_round = 0;  // 0: 4 * (2n - 3), the dimension of the isotropic-leg manifold
    double initial_step = 0.5;
    std::uint64_t seed = 0;
    int lambda_grid = 101;
    bool direct_family = true;  // seed refinement from direct plane draws
    bool frame_family = true;   // and from frame/lambda draws (n >= 4)
    int polish = 5;             // best refined candidates finished by compass search
    double polish_step = 1e-9;  // compass search stops below this step
};

struct IC1Minimum {
    double value;
    DegeneratePlane witness;
    double best_direct_sample;  // min over the direct plane sampler alone
    double best_frame_sample;   // min over the frame/lambda sampler (NaN for n = 3)
};

/// Estimated minimum of plane_curvature over degenerate planes.
///
/// Candidates come from the direct plane sampler and, for n >= 4, random
/// frames across a lambda grid. The best `restarts` candidates are refined by
/// small random rotations of their isotropic leg, halving the step after each
/// round; the second leg is minimized exactly at every trial.
inline IC1Minimum min_ic1(const CurvatureTensor& R, const MinIC1Options& opt = {}) {
    if (opt.samples < 1) throw InvalidArgument("min_ic1: samples must be >= 1");
    const int n = R.dimension();
    const bool frames_on = opt.frame_family && n >= 4;
    if (!opt.direct_family && !frames_on) throw InvalidArgument("min_ic1: no candidate family enabled");

    struct Candidate {
        double value;
        std::size_t index;
        Eigen::MatrixXd ab;
    };
    std::vector<Candidate> cands;
    cands.reserve(static_cast<std::size_t>(opt.samples) * (n >= 4 ? 2 : 1));

    double best_direct = std::numeric_limits<double>::infinity();
    for (int s = 0; s < opt.samples; ++s) {
        auto rng = detail::stream_rng(opt.seed, static_cast<std::uint64_t>(s));
        const DegeneratePlane p = random_degenerate_plane(n, rng);
        const double val = plane_curvature(R, p);
        best_direct = std::min(best_direct, val);
        if (opt.direct_family) cands.push_back({val, cands.size(), detail::isotropic_legs(p.v)});
    }
    double best_frame = std::numeric_limits<double>::quiet_NaN();
    if (frames_on) {
        best_frame = std::numeric_limits<double>::infinity();
        const int frames = std::max(1, opt.samples / std::max(1, opt.lambda_grid));
        for (int s = 0; s < frames; ++s) {
            auto rng = detail::stream_rng(opt.seed, (1ull << 40) + static_cast<std::uint64_t>(s));
            FrameConfiguration fc = random_frame(n, rng, 0.0);
            double best_here = std::numeric_limits<double>::infinity();
            for (int k = 0; k < opt.lambda_grid; ++k) {
                fc.lambda = opt.lambda_grid > 1 ? static_cast<double>(k) / (opt.lambda_grid - 1) : 0.0;
                best_here = std::min(best_here, ic1_frame_value(R, fc));
            }
            best_frame = std::min(best_frame, best_here);
            cands.push_back({best_here, cands.size(), fc.frame.leftCols(2)});
        }
    }

    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
        return a.value < b.value || (a.value == b.value && a.index < b.index);
    });
    const std::size_t keep = std::min(cands.size(), static_cast<std::size_t>(std::max(1, opt.restarts)));
    const int trials = opt.trials_per_round > 0 ? opt.trials_per_round : 4 * (2 * n - 3);

    struct Refined {
        double value;
        std::size_t index;
        Eigen::MatrixXd ab;
        DegeneratePlane plane;
    };
    std::vector<Refined> refined;
    refined.reserve(keep);
    for (std::size_t c = 0; c < keep; ++c) {
        auto rng = detail::stream_rng(opt.seed, (2ull << 40) + c);
        Eigen::MatrixXd ab = cands[c].ab;
        detail::LegMinimum cur = detail::minimize_second_leg(R, ab);
        double step = opt.initial_step;
        for (int round = 0; round < opt.refine_iters; ++round) {
            for (int t = 0; t < trials; ++t) {
                const Eigen::MatrixXd trial = detail::orthonormalize(ab + step * detail::gaussian_matrix(rng, n, 2));
                detail::LegMinimum m = detail::minimize_second_leg(R, trial);
                if (m.value < cur.value) {
                    cur = std::move(m);
                    ab = trial;
                }
            }
            step *= 0.5;
        }
        refined.push_back({cur.value, c, std::move(ab), std::move(cur.plane)});
    }
    std::sort(refined.begin(), refined.end(), [](const Refined& a, const Refined& b) {
        return a.value < b.value || (a.value == b.value && a.index < b.index);
    });

    // Compass search on the entries of (a, b): random rotations stall around
    // the last step size, this takes the value down to rounding level.
    const std::size_t polish = std::min(refined.size(), static_cast<std::size_t>(std::max(0, opt.polish)));
    for (std::size_t c = 0; c < polish; ++c) {
        Refined& r = refined[c];
        double step = opt.initial_step / std::ldexp(1.0, opt.refine_iters);
        while (step >= opt.polish_step) {
            bool moved = false;
            for (int e = 0; e < 2 * n; ++e) {
                for (double sign : {1.0, -1.0}) {
                    Eigen::MatrixXd trial = r.ab;
                    trial(e % n, e / n) += sign * step;
                    trial = detail::orthonormalize(trial);
                    detail::LegMinimum m = detail::minimize_second_leg(R, trial);
                    if (m.value < r.value) {
                        r.value = m.value;
                        r.ab = std::move(trial);
                        r.plane = std::move(m.plane);
                        moved = true;
                    }
                }
            }
            if (!moved) step *= 0.5;
        }
    }

    IC1Minimum best{std::numeric_limits<double>::infinity(), {}, best_direct, best_frame};
    for (const Refined& r : refined) {
        if (r.value < best.value) {
            best.value = r.value;
            best.witness = r.plane;
        }
    }
    return best;
}

struct WPIC1Verdict {
    bool pass;
    double min_ic1;
    DegeneratePlane witness;
};

// WPIC1: IC1 curvature >= 0, up to tol.
inline WPIC1Verdict is_wpic1(const CurvatureTensor& R, double tol, const MinIC1Options& opt = {}) {
    IC1Minimum m = min_ic1(R, opt);
    return {m.value >= -tol, m.value, std::move(m.witness)};
}

}  // namespace ricci2d::pic1
