#pragma once

// Slice functions as (alpha, beta) evaluators, the star product, star powers,
// and the star exponential, together with finite-difference slice-regularity
// utilities.
//
// A slice function evaluates f(u + omega v) = alpha(u,v) + omega beta(u,v)
// with Clifford-valued alpha, beta. Values whose coefficients lie in the
// slice plane C_omega = span{1, omega} form a commutative complex line; those
// are represented by the lightweight CPlaneValue.

#include "clifford.hpp"

#include <complex>
#include <functional>
#include <stdexcept>
#include <utility>

namespace sliceth {

/// Non-convergence of a truncated series (term norm still above tolerance at
/// the iteration cap).
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// CPlaneValue: an element re + im*omega of the slice plane, for whatever
// omega the evaluation point supplies. Arithmetic is ordinary complex
// arithmetic since omega^2 = -1.
// ---------------------------------------------------------------------------

template <typename Scalar = double>
struct CPlaneValue {
    Scalar re{0};
    Scalar im{0};

    CPlaneValue() = default;
    CPlaneValue(Scalar r, Scalar i) : re(r), im(i) {}
    explicit CPlaneValue(const std::complex<Scalar>& z) : re(z.real()), im(z.imag()) {}

    std::complex<Scalar> to_complex() const { return {re, im}; }
    Scalar abs() const { return std::hypot(re, im); }

    friend CPlaneValue operator+(CPlaneValue a, CPlaneValue b) { return {a.re + b.re, a.im + b.im}; }
    friend CPlaneValue operator-(CPlaneValue a, CPlaneValue b) { return {a.re - b.re, a.im - b.im}; }
    friend CPlaneValue operator*(CPlaneValue a, CPlaneValue b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend CPlaneValue operator*(Scalar s, CPlaneValue a) { return {s * a.re, s * a.im}; }
    friend CPlaneValue operator-(CPlaneValue a) { return {-a.re, -a.im}; }
};

using CPlaneValued = CPlaneValue<double>;

/// Fast-path star exponential: for arguments with coefficients in C_omega the
/// star exponential is the scalar complex exponential on the slice
/// (Euler formula), exp(re)(cos im + omega sin im).
template <typename Scalar>
CPlaneValue<Scalar> star_exp_cplane(const CPlaneValue<Scalar>& z) {
    const Scalar m = std::exp(z.re);
    return {m * std::cos(z.im), m * std::sin(z.im)};
}

/// Embed re + im*omega into the Clifford algebra.
template <typename Scalar>
Multivector<Scalar> embed_cplane(const CPlaneValue<Scalar>& z, const UnitVector<Scalar>& omega) {
    Multivector<Scalar> m = omega.as_multivector();
    m *= z.im;
    m.at(0) += z.re;
    return m;
}

/// Project a multivector from span{1, omega} back to the slice plane.
template <typename Scalar>
CPlaneValue<Scalar> project_cplane(const Multivector<Scalar>& m, const UnitVector<Scalar>& omega) {
    Scalar im = 0;
    for (int i = 0; i < omega.dim(); ++i) im += omega.components()[i] * m.at(BladeMask(1) << i);
    return {m.scalar_part(), im};
}

// ---------------------------------------------------------------------------
// SlicePoint: x = x0 + r omega with r >= 0. For r = 0 the point is real and
// the omega stored here is the caller's explicit convention; H-model
// operations reject such points, Hr-model operations use the supplied omega.
// ---------------------------------------------------------------------------

template <typename Scalar = double>
struct SlicePoint {
    Scalar x0;
    Scalar r;
    UnitVector<Scalar> omega;

    SlicePoint(Scalar x0_, Scalar r_, UnitVector<Scalar> omega_)
        : x0(x0_), r(r_), omega(std::move(omega_)) {
        if (r < Scalar(0)) throw std::invalid_argument("SlicePoint: r must be >= 0");
    }

    bool in_h() const { return r > Scalar(0); }
    bool in_hr() const { return x0 > Scalar(0); }

    /// The point as a complex number u + i v of the slice plane.
    std::complex<Scalar> slice_complex() const { return {x0, r}; }

    Paravector<Scalar> as_paravector() const {
        return Paravector<Scalar>(x0, omega.components() * r);
    }
};

using SlicePointd = SlicePoint<double>;

// ---------------------------------------------------------------------------
// SliceValue and the star product.
// ---------------------------------------------------------------------------

/// Value f(u + omega v) = alpha + omega beta at one (u,v). No even-odd
/// constraint is imposed pointwise.
template <typename Scalar = double>
struct SliceValue {
    Multivector<Scalar> alpha;
    Multivector<Scalar> beta;

    SliceValue(Multivector<Scalar> a, Multivector<Scalar> b)
        : alpha(std::move(a)), beta(std::move(b)) {
        alpha.require_same_dim(beta);
    }

    static SliceValue one(int dim) {
        return SliceValue(Multivector<Scalar>::scalar(dim, Scalar(1)), Multivector<Scalar>(dim));
    }

    static SliceValue from_cplane(const CPlaneValue<Scalar>& z, int dim) {
        return SliceValue(Multivector<Scalar>::scalar(dim, z.re),
                          Multivector<Scalar>::scalar(dim, z.im));
    }

    int dim() const { return alpha.dim(); }

    /// Norm of the (alpha, beta) pair.
    Scalar pair_norm() const { return std::hypot(norm(alpha), norm(beta)); }

    /// The actual Clifford value alpha + omega beta.
    Multivector<Scalar> assemble(const UnitVector<Scalar>& omega) const {
        return alpha + mul(omega.as_multivector(), beta);
    }

    friend SliceValue operator+(const SliceValue& a, const SliceValue& b) {
        return SliceValue(a.alpha + b.alpha, a.beta + b.beta);
    }
    friend SliceValue operator-(const SliceValue& a, const SliceValue& b) {
        return SliceValue(a.alpha - b.alpha, a.beta - b.beta);
    }
    friend SliceValue operator*(Scalar s, const SliceValue& a) {
        return SliceValue(s * a.alpha, s * a.beta);
    }
};

using SliceValued = SliceValue<double>;

/// Star product of two slice values at the same point:
/// (alpha gamma - beta delta) + omega (beta gamma + alpha delta).
template <typename Scalar>
SliceValue<Scalar> star_product(const SliceValue<Scalar>& f, const SliceValue<Scalar>& g) {
    return SliceValue<Scalar>(mul(f.alpha, g.alpha) - mul(f.beta, g.beta),
                              mul(f.beta, g.alpha) + mul(f.alpha, g.beta));
}

/// k-fold star power; k = 0 gives the constant 1.
template <typename Scalar>
SliceValue<Scalar> star_power(const SliceValue<Scalar>& f, int k) {
    if (k < 0) throw std::invalid_argument("star_power: negative exponent");
    SliceValue<Scalar> acc = SliceValue<Scalar>::one(f.dim());
    for (int i = 0; i < k; ++i) acc = star_product(acc, f);
    return acc;
}

// ---------------------------------------------------------------------------
// SliceFunction: an evaluator (u,v) -> SliceValue. Evaluators must be pure.
// ---------------------------------------------------------------------------

template <typename Scalar = double>
struct SliceFunction {
    int dim;
    std::function<SliceValue<Scalar>(Scalar, Scalar)> eval;

    SliceValue<Scalar> operator()(Scalar u, Scalar v) const { return eval(u, v); }

    static SliceFunction identity(int dim) {
        return {dim, [dim](Scalar u, Scalar v) {
                    return SliceValue<Scalar>(Multivector<Scalar>::scalar(dim, u),
                                              Multivector<Scalar>::scalar(dim, v));
                }};
    }

    static SliceFunction constant(SliceValue<Scalar> value) {
        const int d = value.dim();
        return {d, [value = std::move(value)](Scalar, Scalar) { return value; }};
    }
};

using SliceFunctiond = SliceFunction<double>;

template <typename Scalar>
SliceFunction<Scalar> star_power(const SliceFunction<Scalar>& f, int k) {
    if (k < 0) throw std::invalid_argument("star_power: negative exponent");
    return {f.dim, [f, k](Scalar u, Scalar v) { return star_power(f(u, v), k); }};
}

struct StarExpOptions {
    double tol = 1e-14;
    int kmax = 200;
};

/// Result of a truncated star-exponential sum; last_term_norm is the error
/// estimate attached to the partial sum.
template <typename Scalar>
struct StarExpResult {
    SliceValue<Scalar> value;
    Scalar last_term_norm;
    int terms;
};

/// Generic star exponential sum_{k<=K} f^{*k} / k!, truncated at the first
/// term whose pair norm drops below tol while the terms are already
/// decreasing (once the terms decay monotonically the tail is bounded by
/// twice the next term). Throws ConvergenceError if kmax is hit first.
template <typename Scalar>
StarExpResult<Scalar> star_exp_value(const SliceValue<Scalar>& f, const StarExpOptions& opt = {}) {
    if (!(opt.tol > 0)) throw std::invalid_argument("star_exp: tol must be positive");
    if (opt.kmax < 1) throw std::invalid_argument("star_exp: kmax must be >= 1");
    SliceValue<Scalar> term = SliceValue<Scalar>::one(f.dim());
    SliceValue<Scalar> sum = term;
    Scalar prev_norm = term.pair_norm();
    for (int k = 1; k <= opt.kmax; ++k) {
        term = star_product(term, f);
        term = (Scalar(1) / Scalar(k)) * term;
        sum = sum + term;
        const Scalar tn = term.pair_norm();
        if (tn < opt.tol && tn <= prev_norm) return {sum, tn, k + 1};
        prev_norm = tn;
    }
    throw ConvergenceError("star_exp: term norm did not drop below tol within kmax terms");
}

template <typename Scalar>
StarExpResult<Scalar> star_exp(const SliceFunction<Scalar>& f, Scalar u, Scalar v,
                               const StarExpOptions& opt = {}) {
    return star_exp_value(f(u, v), opt);
}

// ---------------------------------------------------------------------------
// Finite-difference utilities on slice functions.
// ---------------------------------------------------------------------------

/// Max of the Cauchy-Riemann residual norms ||d_u alpha - d_v beta|| and
/// ||d_u beta + d_v alpha||, central differences with step h.
template <typename Scalar>
Scalar slice_cr_residual(const SliceFunction<Scalar>& f, Scalar u, Scalar v, Scalar h) {
    if (!(h > 0)) throw std::invalid_argument("slice_cr_residual: h must be positive");
    const SliceValue<Scalar> fu_p = f(u + h, v), fu_m = f(u - h, v);
    const SliceValue<Scalar> fv_p = f(u, v + h), fv_m = f(u, v - h);
    const Scalar inv2h = Scalar(1) / (2 * h);
    const Multivector<Scalar> du_alpha = inv2h * (fu_p.alpha - fu_m.alpha);
    const Multivector<Scalar> du_beta = inv2h * (fu_p.beta - fu_m.beta);
    const Multivector<Scalar> dv_alpha = inv2h * (fv_p.alpha - fv_m.alpha);
    const Multivector<Scalar> dv_beta = inv2h * (fv_p.beta - fv_m.beta);
    return std::max(norm(du_alpha - dv_beta), norm(du_beta + dv_alpha));
}

/// Slice derivative as the d/du central difference. For slice monogenic f
/// this equals the slice derivative by the Cauchy-Riemann system; callers
/// should gate on slice_cr_residual when in doubt.
template <typename Scalar>
SliceValue<Scalar> slice_derivative_fd(const SliceFunction<Scalar>& f, Scalar u, Scalar v, Scalar h) {
    if (!(h > 0)) throw std::invalid_argument("slice_derivative_fd: h must be positive");
    const SliceValue<Scalar> p = f(u + h, v), m = f(u - h, v);
    return (Scalar(1) / (2 * h)) * (p - m);
}

// ---------------------------------------------------------------------------
// Characteristic w = sum_i e_i (u_i + v_i omega) of the theta series, stored
// as the two real coefficient vectors.
// ---------------------------------------------------------------------------

template <typename Scalar = double>
struct Characteristic {
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    Vector u;
    Vector v;

    Characteristic(Vector u_, Vector v_) : u(std::move(u_)), v(std::move(v_)) {
        if (u.size() != v.size())
            throw std::invalid_argument("Characteristic: u and v must have equal length");
    }

    static Characteristic zero(int dim) {
        return Characteristic(Vector::Zero(dim), Vector::Zero(dim));
    }

    int dim() const { return int(u.size()); }

    /// Component w_i as a slice-plane value.
    CPlaneValue<Scalar> component(int i) const { return {u[i], v[i]}; }
};

using Characteristicd = Characteristic<double>;

} // namespace sliceth
