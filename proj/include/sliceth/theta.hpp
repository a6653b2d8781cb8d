#pragma once

// Slice monogenic theta series over (n+1)-dimensional lattices, in both the
// punctured-space model H (decay driven by the radial part r) and the right
// half-space model Hr (decay driven by x0), together with the conjugated
// theta functions, the eta triple product and the modular discriminant.
//
// Every summand of these series has coefficients in the slice plane C_omega,
// so the sums are accumulated as slice-plane complex numbers; the omega is
// carried by the evaluation point. Series are truncated at a squared radius
// with a certified geometric tail bound attached to each value.

#include "lattice.hpp"

#include <complex>
#include <iostream>
#include <limits>
#include <numbers>
#include <vector>

namespace sliceth {

/// Interpretation of the lattice determinant appearing in transformation
/// normalizations: the Gram determinant itself or its square root (the
/// covolume).
enum class Normalization { GramDet, SqrtGramDet };

inline double det_interpretation(const Lattice& l, Normalization n) {
    return n == Normalization::GramDet ? l.gram_det() : l.volume();
}

/// Transformation normalization: the constant multiplying the dual-lattice
/// theta in the transformation formulas. Poisson summation produces the
/// reciprocal covolume 1/vol(L) = vol(dual L); the switch selects whether the
/// determinant is read as the Gram determinant or as its square root (the
/// covolume, default). For unimodular lattices every reading equals 1.
inline double transformation_norm_factor(const Lattice& l, Normalization n) {
    return 1.0 / det_interpretation(l, n);
}

enum class Model { H, Hr };

struct ThetaParams {
    Lattice lattice;
    double truncation_radius_sq = -1.0; // < 0: derive from tail_tol
    double tail_tol = 1e-12;
    Normalization normalization = Normalization::SqrtGramDet;
    bool warn_non_integral = true;

    explicit ThetaParams(Lattice l) : lattice(std::move(l)) {}

    void warn_if_not_integral(const char* who) const {
        if (warn_non_integral && !is_integral_norms(lattice))
            std::cerr << "warning: " << who
                      << ": lattice norms are not all integers; identities relying on"
                         " exp(2*pi*<q,q>*omega) = 1 may not hold\n";
    }
};

struct ThetaValue {
    CPlaneValued value;
    double tail_bound = 0;
    long terms_used = 0;
};

// ---------------------------------------------------------------------------
// Certified tail machinery.
// ---------------------------------------------------------------------------

namespace detail {

// 1 + sum_{k>=1} e^{-gamma k^2} <= 1 + e^{-gamma}/(1 - e^{-gamma}).
inline double theta_comparison(double gamma) {
    const double e = std::exp(-gamma);
    return 1.0 + e / (1.0 - e);
}

struct NeumaierSum {
    double s = 0, comp = 0;
    void add(double x) {
        const double t = s + x;
        if (std::abs(s) >= std::abs(x))
            comp += (s - t) + x;
        else
            comp += (x - t) + s;
        s = t;
    }
    double total() const { return s + comp; }
};

struct ComplexSum {
    NeumaierSum re, im;
    void add(std::complex<double> z) {
        re.add(z.real());
        im.add(z.imag());
    }
    std::complex<double> total() const { return {re.total(), im.total()}; }
};

} // namespace detail

/// Upper bound on sum over lattice points with |q - center|^2 > radius_sq of
/// e^{-c |q - center|^2}, valid for any center. Derivation: splitting
/// e^{-c t^2} <= e^{-c(1-s) R^2} e^{-c s t^2} for t > R and bounding the full
/// sum in coefficient space through the smallest Gram eigenvalue gives
///   tail <= e^{-c(1-s)R^2} * (2 * (1 + e^-g/(1-e^-g)))^d,  g = c s lambda_min,
/// for every s in (0,1); the reported bound minimizes over a fixed grid of s.
inline double gaussian_tail_bound(const Lattice& l, double c, double radius_sq) {
    if (!(c > 0)) throw std::invalid_argument("gaussian_tail_bound: decay constant must be positive");
    static constexpr double kSplits[] = {0.5, 0.25, 0.1, 0.05, 0.02, 0.01};
    double best = std::numeric_limits<double>::infinity();
    for (double s : kSplits) {
        const double g = c * s * l.lambda_min();
        const double factor = std::pow(2.0 * detail::theta_comparison(g), l.dim());
        best = std::min(best, std::exp(-c * (1.0 - s) * radius_sq) * factor);
    }
    return best;
}

/// Smallest integer R^2 with gaussian_tail_bound(l, decay_c, R^2) < tol.
inline double truncation_radius_for_tol(double decay_c, double tol, const Lattice& l) {
    if (!(decay_c > 0)) throw std::invalid_argument("truncation_radius_for_tol: decay_c must be positive");
    if (!(tol > 0)) throw std::invalid_argument("truncation_radius_for_tol: tol must be positive");
    double rsq = 1.0;
    // Closed-form start from the s = 1/2 split, then settle on the exact
    // integer threshold of the minimized bound.
    const double g = 0.5 * decay_c * l.lambda_min();
    const double k = std::pow(2.0 * detail::theta_comparison(g), l.dim());
    rsq = std::max(1.0, std::ceil(2.0 / decay_c * std::log(k / tol)));
    while (rsq > 1.0 && gaussian_tail_bound(l, decay_c, rsq - 1.0) < tol) rsq -= 1.0;
    while (gaussian_tail_bound(l, decay_c, rsq) >= tol) {
        rsq += 1.0;
        if (rsq > 1e6)
            throw ConvergenceError("truncation_radius_for_tol: required radius is impractically large");
    }
    return rsq;
}

namespace detail {

struct DecayPlan {
    double c;             // certified decay constant of the tail
    double min_radius_sq; // radius floor making that constant valid
};

// Summand moduli are e^{-pi*scale*|q|^2 - 2*pi*<q,v>}; beyond |q| >=
// 4*||v||/scale the characteristic term eats at most half the decay.
inline DecayPlan decay_plan(double scale, double v_norm) {
    constexpr double pi = std::numbers::pi;
    if (v_norm == 0.0) return {pi * scale, 0.0};
    const double m = 4.0 * v_norm / scale;
    return {0.5 * pi * scale, m * m};
}

inline double pick_radius_sq(const ThetaParams& p, const DecayPlan& plan) {
    double rsq = p.truncation_radius_sq >= 0.0
                     ? p.truncation_radius_sq
                     : truncation_radius_for_tol(plan.c, p.tail_tol, p.lattice);
    return std::max(rsq, plan.min_radius_sq);
}

} // namespace detail

// ---------------------------------------------------------------------------
// Core slice-plane sums. z (model H) is the slice complex x0 + i r with
// r > 0; zeta (model Hr) is x0 + i r with x0 > 0. The characteristic enters
// as <q, w> = q.u + i q.v.
// ---------------------------------------------------------------------------

namespace detail {

constexpr double pi = std::numbers::pi;

inline std::complex<double> char_pairing(const Eigen::VectorXd& q, const Characteristicd& w) {
    return {q.dot(w.u), q.dot(w.v)};
}

} // namespace detail

/// H-model theta at the slice-plane point z = x0 + i r, Im z > 0:
/// sum over q in L of e^{i pi (|q|^2 z + 2 <q,w>)}.
inline ThetaValue theta_h_complex(const std::complex<double>& z, const Characteristicd& w,
                                  const ThetaParams& p) {
    if (!(z.imag() > 0)) throw std::domain_error("theta_h: slice point has Im z <= 0 (not in H)");
    if (w.dim() != p.lattice.dim())
        throw std::invalid_argument("theta_h: characteristic dimension mismatch");
    const auto plan = detail::decay_plan(z.imag(), w.v.norm());
    const double rsq = detail::pick_radius_sq(p, plan);
    const std::complex<double> iw(0.0, 1.0);

    detail::ComplexSum acc;
    const auto pts = enumerate_ball(p.lattice, rsq);
    for (const auto& q : pts)
        acc.add(std::exp(iw * detail::pi * (q.norm_sq * z + 2.0 * detail::char_pairing(q.coords, w))));
    return {CPlaneValued(acc.total()), gaussian_tail_bound(p.lattice, plan.c, rsq), long(pts.size())};
}

/// Hr-model theta at the slice-plane point zeta, Re zeta > 0 (either sign of
/// Im zeta; negative imaginary parts arise at inverted points):
/// sum of e^{-pi |q|^2 zeta + 2 pi i <q,w>}.
inline ThetaValue theta_hr_complex(const std::complex<double>& zeta, const Characteristicd& w,
                                   const ThetaParams& p) {
    if (!(zeta.real() > 0)) throw std::domain_error("theta_hr: slice point has Re zeta <= 0 (not in Hr)");
    if (w.dim() != p.lattice.dim())
        throw std::invalid_argument("theta_hr: characteristic dimension mismatch");
    const auto plan = detail::decay_plan(zeta.real(), w.v.norm());
    const double rsq = detail::pick_radius_sq(p, plan);
    const std::complex<double> iw(0.0, 1.0);

    detail::ComplexSum acc;
    const auto pts = enumerate_ball(p.lattice, rsq);
    for (const auto& q : pts)
        acc.add(std::exp(-detail::pi * q.norm_sq * zeta +
                         iw * 2.0 * detail::pi * detail::char_pairing(q.coords, w)));
    return {CPlaneValued(acc.total()), gaussian_tail_bound(p.lattice, plan.c, rsq), long(pts.size())};
}

/// Theta series of the H model: sum over q in L of
/// exp_*((pi |q|^2 x + 2 pi <q,w>) omega), evaluated on the slice.
inline ThetaValue theta_h(const SlicePointd& x, const Characteristicd& w, const ThetaParams& p) {
    if (!x.in_h()) throw std::domain_error("theta_h: point has r = 0 (not in H)");
    return theta_h_complex(x.slice_complex(), w, p);
}

/// Theta series of the Hr model: sum of exp_*(-pi |q|^2 x + 2 pi <q,w> omega).
/// For r = 0 the point's stored omega is the caller's convention.
inline ThetaValue theta_hr(const SlicePointd& x, const Characteristicd& w, const ThetaParams& p) {
    if (!x.in_hr()) throw std::domain_error("theta_hr: point has x0 <= 0 (not in Hr)");
    return theta_hr_complex(x.slice_complex(), w, p);
}

/// Theta-null: the series with characteristic w = 0.
inline ThetaValue theta_null(const SlicePointd& x, const ThetaParams& p, Model model) {
    const Characteristicd w0 = Characteristicd::zero(p.lattice.dim());
    return model == Model::H ? theta_h(x, w0, p) : theta_hr(x, w0, p);
}

/// First conjugated theta function: sum of exp_*(pi |q|^2 x omega) times the
/// literal phase e^{2 pi <q, qtilde> omega}.
inline ThetaValue theta_tilde(const SlicePointd& x, const CosetRep& qtilde, const ThetaParams& p) {
    if (!x.in_h()) throw std::domain_error("theta_tilde: point not in H");
    p.warn_if_not_integral("theta_tilde");
    const auto plan = detail::decay_plan(x.r, 0.0);
    const double rsq = detail::pick_radius_sq(p, plan);
    const std::complex<double> z = x.slice_complex();
    const std::complex<double> iw(0.0, 1.0);

    detail::ComplexSum acc;
    const auto pts = enumerate_ball(p.lattice, rsq);
    for (const auto& q : pts) {
        const double pairing = q.coords.dot(qtilde.point);
        acc.add(std::exp(iw * detail::pi * (q.norm_sq * z)) *
                std::exp(iw * 2.0 * detail::pi * pairing));
    }
    return {CPlaneValued(acc.total()), gaussian_tail_bound(p.lattice, plan.c, rsq), long(pts.size())};
}

/// Second conjugated theta function: the shifted sum over q in L of
/// e^{pi |q + qtilde|^2 x omega}.
inline ThetaValue theta_tilde_tilde(const SlicePointd& x, const CosetRep& qtilde,
                                    const ThetaParams& p) {
    if (!x.in_h()) throw std::domain_error("theta_tilde_tilde: point not in H");
    const auto plan = detail::decay_plan(x.r, 0.0);
    const double rsq = detail::pick_radius_sq(p, plan);
    const std::complex<double> z = x.slice_complex();
    const std::complex<double> iw(0.0, 1.0);

    // q + qtilde ranges over the coset qtilde + L; enumerate L around the
    // center -qtilde so norm_sq is exactly |q + qtilde|^2.
    detail::ComplexSum acc;
    const auto pts = enumerate_ball_around(p.lattice, -qtilde.point, rsq);
    for (const auto& q : pts) acc.add(std::exp(iw * detail::pi * q.norm_sq * z));
    return {CPlaneValued(acc.total()), gaussian_tail_bound(p.lattice, plan.c, rsq), long(pts.size())};
}

enum class GeneralVariant { Tilde, TildeTilde };

/// chi(q) = +1 for even |q|^2, -1 for odd. Requires integer norms.
inline int chi_character(double norm_sq) {
    const long long k = llround(norm_sq);
    if (std::abs(norm_sq - double(k)) > 1e-6)
        throw std::domain_error("chi_character: |q|^2 is not an integer");
    return (k % 2 == 0) ? +1 : -1;
}

/// Generalized conjugated theta functions with characteristic w: the
/// chi-twisted sum over L, or the sum over (1/2)L minus L (coefficient
/// parity filter, no floating-point membership test).
inline ThetaValue theta_general(const SlicePointd& x, const Characteristicd& w,
                                const ThetaParams& p, GeneralVariant variant) {
    if (!x.in_h()) throw std::domain_error("theta_general: point not in H");
    if (w.dim() != p.lattice.dim())
        throw std::invalid_argument("theta_general: characteristic dimension mismatch");
    const std::complex<double> z = x.slice_complex();
    const std::complex<double> iw(0.0, 1.0);
    const auto plan = detail::decay_plan(x.r, w.v.norm());

    detail::ComplexSum acc;
    long terms = 0;
    double tail = 0;
    if (variant == GeneralVariant::Tilde) {
        p.warn_if_not_integral("theta_general(tilde)");
        const double rsq = detail::pick_radius_sq(p, plan);
        for (const auto& q : enumerate_ball(p.lattice, rsq)) {
            const double sign = chi_character(q.norm_sq);
            acc.add(sign * std::exp(iw * detail::pi *
                                    (q.norm_sq * z + 2.0 * detail::char_pairing(q.coords, w))));
            ++terms;
        }
        tail = gaussian_tail_bound(p.lattice, plan.c, rsq);
    } else {
        const Lattice half = p.lattice.scaled(0.5);
        ThetaParams ph = p;
        ph.lattice = half;
        const double rsq = detail::pick_radius_sq(ph, plan);
        for (const auto& q : enumerate_ball(half, rsq)) {
            bool in_l = true;
            for (int i = 0; i < q.coeffs.size(); ++i)
                if (q.coeffs[i] % 2 != 0) { in_l = false; break; }
            if (in_l) continue;
            acc.add(std::exp(iw * detail::pi *
                             (q.norm_sq * z + 2.0 * detail::char_pairing(q.coords, w))));
            ++terms;
        }
        tail = gaussian_tail_bound(half, plan.c, rsq);
    }
    return {CPlaneValued(acc.total()), tail, terms};
}

// ---------------------------------------------------------------------------
// Eta triple product and the modular discriminant. All three theta factors
// live in C_omega, so the star products reduce to complex products on the
// slice.
// ---------------------------------------------------------------------------

inline ThetaValue eta_tilde_full(const SlicePointd& x, const CosetRep& qtilde,
                                 const ThetaParams& p) {
    if (!x.in_h()) throw std::domain_error("eta_tilde: point not in H");
    if (p.warn_non_integral && !p.lattice.is_unimodular())
        std::cerr << "warning: eta_tilde: lattice is not unimodular\n";
    const ThetaValue a = theta_null(x, p, Model::H);
    const ThetaValue b = theta_tilde(x, qtilde, p);
    const ThetaValue c = theta_tilde_tilde(x, qtilde, p);
    const std::complex<double> v =
        a.value.to_complex() * b.value.to_complex() * c.value.to_complex();
    const double ma = a.value.abs(), mb = b.value.abs(), mc = c.value.abs();
    const double bound =
        (ma + a.tail_bound) * (mb + b.tail_bound) * (mc + c.tail_bound) - ma * mb * mc;
    return {CPlaneValued(v), bound, a.terms_used + b.terms_used + c.terms_used};
}

/// eta = theta * theta_tilde * theta_tilde_tilde (star product; commutative
/// complex product on the slice).
inline CPlaneValued eta_tilde(const SlicePointd& x, const CosetRep& qtilde, const ThetaParams& p) {
    return eta_tilde_full(x, qtilde, p).value;
}

inline ThetaValue discriminant_full(const SlicePointd& x, const CosetRep& qtilde,
                                    const ThetaParams& p) {
    const ThetaValue e = eta_tilde_full(x, qtilde, p);
    std::complex<double> v = std::complex<double>(1.0, 0.0);
    const std::complex<double> base = e.value.to_complex();
    for (int i = 0; i < 8; ++i) v *= base;
    const double m = e.value.abs();
    const double bound = std::pow(m + e.tail_bound, 8) - std::pow(m, 8);
    return {CPlaneValued(v), bound, e.terms_used};
}

/// Eighth star power of eta.
inline CPlaneValued discriminant(const SlicePointd& x, const CosetRep& qtilde,
                                 const ThetaParams& p) {
    return discriminant_full(x, qtilde, p).value;
}

} // namespace sliceth
