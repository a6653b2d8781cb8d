#pragma once

// Full-rank lattices L = { m_0 Q_0 + ... + m_n Q_n } in R^{n+1}: Gram data,
// dual lattice, integrality predicates, half-coset representatives, and exact
// enumeration of the points inside a squared-norm ball (Fincke-Pohst-style
// interval refinement in coefficient space).

#include "slice.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace sliceth {

struct LatticePoint {
    Eigen::VectorXd coords;  // ambient coordinates q = sum m_i Q_i
    Eigen::VectorXi coeffs;  // the integers m_i
    double norm_sq;          // |q - center|^2 of the enumeration call
};

/// Representative of the quotient (1/2)L / L with coefficients in {0, 1/2},
/// encoded by the bit vector of doubled coefficients.
struct CosetRep {
    Eigen::VectorXi bits;   // each entry 0 or 1; the rep is (1/2) sum bits_i Q_i
    Eigen::VectorXd point;  // ambient coordinates
};

class Lattice {
public:
    /// Rows of `rows` are the generators. Throws on singular input.
    static Lattice from_generators(const Eigen::MatrixXd& rows) {
        if (rows.rows() != rows.cols())
            throw std::invalid_argument("Lattice: generator matrix must be square");
        if (rows.rows() < 1 || rows.rows() > kMaxGenerators + 1)
            throw std::invalid_argument("Lattice: unsupported dimension");
        Lattice l;
        l.gens_ = rows;
        const double det = rows.determinant();
        if (std::abs(det) <= 1e-12)
            throw std::invalid_argument("Lattice: generators are (numerically) linearly dependent");
        l.gram_ = rows * rows.transpose();
        l.gram_det_ = l.gram_.determinant();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(l.gram_);
        l.lambda_min_ = es.eigenvalues().minCoeff();
        return l;
    }

    static Lattice integer(int dim) {
        return from_generators(Eigen::MatrixXd::Identity(dim, dim));
    }

    /// The D4 checkerboard lattice (even, Gram determinant 4).
    static Lattice d4() {
        Eigen::MatrixXd g(4, 4);
        g << 1, -1, 0, 0,
             0, 1, -1, 0,
             0, 0, 1, -1,
             0, 0, 1, 1;
        return from_generators(g);
    }

    int dim() const { return int(gens_.rows()); }
    const Eigen::MatrixXd& generators() const { return gens_; }
    const Eigen::MatrixXd& gram() const { return gram_; }
    double gram_det() const { return gram_det_; }
    /// Covolume vol(R^{n+1}/L) = sqrt of the Gram determinant.
    double volume() const { return std::sqrt(gram_det_); }
    double lambda_min() const { return lambda_min_; }

    Eigen::VectorXd point(const Eigen::VectorXi& coeffs) const {
        return gens_.transpose() * coeffs.cast<double>();
    }

    /// Lattice scaled by a real factor (generators scaled; (1/2)L has s=0.5).
    Lattice scaled(double s) const { return from_generators(s * gens_); }

    bool is_unimodular(double tol = 1e-9) const { return std::abs(gram_det_ - 1.0) <= tol; }

private:
    Eigen::MatrixXd gens_;
    Eigen::MatrixXd gram_;
    double gram_det_ = 0;
    double lambda_min_ = 0;
};

/// Dual (reciprocal) lattice: generators are the inverse transpose, so that
/// every dual point has integer inner product with every generator and
/// det(dual) * det(L) = 1.
inline Lattice dual(const Lattice& l) {
    return Lattice::from_generators(l.generators().inverse().transpose());
}

/// True iff |q|^2 is an integer for every q in L. Exact criterion on the
/// Gram matrix: integer diagonal and half-integer off-diagonal entries
/// (m^T G m = sum G_ii m_i^2 + 2 sum_{i<j} G_ij m_i m_j).
inline bool is_integral_norms(const Lattice& l, double tol = 1e-9) {
    const auto& g = l.gram();
    for (int i = 0; i < l.dim(); ++i) {
        if (std::abs(g(i, i) - std::round(g(i, i))) > tol) return false;
        for (int j = i + 1; j < l.dim(); ++j) {
            const double twice = 2.0 * g(i, j);
            if (std::abs(twice - std::round(twice)) > tol) return false;
        }
    }
    return true;
}

/// True iff |q|^2 is even for every q in L (even diagonal, integer Gram).
inline bool is_even_lattice(const Lattice& l, double tol = 1e-9) {
    if (!is_integral_norms(l, tol)) return false;
    const auto& g = l.gram();
    for (int i = 0; i < l.dim(); ++i) {
        const long long d = llround(g(i, i));
        if (d % 2 != 0) return false;
        for (int j = i + 1; j < l.dim(); ++j)
            if (std::abs(g(i, j) - std::round(g(i, j))) > tol) return false;
    }
    return true;
}

/// The 2^{n+1} representatives of (1/2)L / L with coefficients in {0, 1/2}.
inline std::vector<CosetRep> half_coset_reps(const Lattice& l) {
    const int d = l.dim();
    std::vector<CosetRep> reps;
    reps.reserve(std::size_t(1) << d);
    for (std::uint32_t mask = 0; mask < (std::uint32_t(1) << d); ++mask) {
        CosetRep rep;
        rep.bits = Eigen::VectorXi::Zero(d);
        for (int i = 0; i < d; ++i) rep.bits[i] = int((mask >> i) & 1u);
        rep.point = 0.5 * (l.generators().transpose() * rep.bits.cast<double>());
        reps.push_back(std::move(rep));
    }
    return reps;
}

/// The coset representative with all coefficients 1/2 (the "all-halves" shift
/// that realizes the character chi on Z^{n+1}-like lattices).
inline CosetRep all_halves_rep(const Lattice& l) {
    CosetRep rep;
    rep.bits = Eigen::VectorXi::Ones(l.dim());
    rep.point = 0.5 * (l.generators().transpose() * rep.bits.cast<double>());
    return rep;
}

/// The zero representative.
inline CosetRep zero_rep(const Lattice& l) {
    CosetRep rep;
    rep.bits = Eigen::VectorXi::Zero(l.dim());
    rep.point = Eigen::VectorXd::Zero(l.dim());
    return rep;
}

/// C_omega-valued bilinear form <q, w> = sum_i q_i w_i (not Hermitian).
inline CPlaneValued bilinear_form(const Eigen::VectorXd& q, const Characteristicd& w) {
    if (q.size() != w.u.size())
        throw std::invalid_argument("bilinear_form: dimension mismatch");
    return {q.dot(w.u), q.dot(w.v)};
}

inline CPlaneValued bilinear_form(const LatticePoint& q, const Characteristicd& w) {
    return bilinear_form(q.coords, w);
}

namespace detail {

// Tolerance so that boundary points |q|^2 == R^2 are kept.
inline bool within_ball(double norm_sq, double radius_sq) {
    return norm_sq <= radius_sq * (1.0 + 1e-12) + 1e-9;
}

} // namespace detail

/// All lattice points with |q - center|^2 <= radius_sq, each exactly once,
/// sorted by squared distance then lexicographic coefficients. norm_sq holds
/// the squared distance to the center.
inline std::vector<LatticePoint> enumerate_ball_around(const Lattice& l,
                                                       const Eigen::VectorXd& center,
                                                       double radius_sq) {
    if (radius_sq < 0) throw std::invalid_argument("enumerate_ball: negative radius_sq");
    const int d = l.dim();
    if (center.size() != d) throw std::invalid_argument("enumerate_ball: center dimension mismatch");

    // Work in coefficient space: |B^T m - y|^2 = (m - c)^T G (m - c) with
    // c = B^{-T} y. Cholesky G = R^T R turns the ball into a box recursion.
    const Eigen::VectorXd c = l.generators().transpose().fullPivLu().solve(center);
    Eigen::LLT<Eigen::MatrixXd> llt(l.gram());
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("enumerate_ball: Gram matrix not positive definite");
    const Eigen::MatrixXd R = llt.matrixU();

    std::vector<LatticePoint> out;
    Eigen::VectorXi m = Eigen::VectorXi::Zero(d);
    const double budget = radius_sq * (1.0 + 1e-12) + 1e-9;

    std::function<void(int, double)> descend = [&](int i, double remaining) {
        if (i < 0) {
            Eigen::VectorXd md = m.cast<double>() - c;
            const double nsq = md.dot(l.gram() * md);
            if (detail::within_ball(nsq, radius_sq)) {
                LatticePoint p;
                p.coeffs = m;
                p.coords = l.point(m);
                p.norm_sq = nsq;
                out.push_back(std::move(p));
            }
            return;
        }
        double shift = 0;
        for (int j = i + 1; j < d; ++j) shift += R(i, j) * (double(m[j]) - c[j]);
        const double rii = R(i, i);
        const double half_width = std::sqrt(std::max(remaining, 0.0)) / rii;
        const double center_i = c[i] - shift / rii;
        const long lo = long(std::ceil(center_i - half_width - 1e-9));
        const long hi = long(std::floor(center_i + half_width + 1e-9));
        for (long k = lo; k <= hi; ++k) {
            m[i] = int(k);
            const double level = rii * (double(k) - center_i);
            const double used = level * level;
            if (used <= remaining + 1e-9) descend(i - 1, remaining - used);
        }
    };
    descend(d - 1, budget);

    std::sort(out.begin(), out.end(), [](const LatticePoint& a, const LatticePoint& b) {
        if (a.norm_sq != b.norm_sq) return a.norm_sq < b.norm_sq;
        return std::lexicographical_compare(a.coeffs.data(), a.coeffs.data() + a.coeffs.size(),
                                            b.coeffs.data(), b.coeffs.data() + b.coeffs.size());
    });
    return out;
}

inline std::vector<LatticePoint> enumerate_ball(const Lattice& l, double radius_sq) {
    return enumerate_ball_around(l, Eigen::VectorXd::Zero(l.dim()), radius_sq);
}

} // namespace sliceth
