#pragma once

// Numerical verification harness for the transformation and differential
// identities of the theta family: both theta transformation formulas, the
// conjugated-theta pair, the eta and discriminant transformation laws, and
// the slice heat equation. Each check returns a structured residual report
// with the certified truncation tails of both sides folded into the pass
// threshold.

#include "theta.hpp"

#include <complex>
#include <cstdio>
#include <optional>
#include <string>

namespace sliceth {

struct ResidualReport {
    std::string identity;
    double x0 = 0;
    double r = 0;
    Eigen::VectorXd omega;
    Eigen::VectorXd w_u, w_v;
    CPlaneValued lhs, rhs;
    double abs_residual = 0;
    double rel_residual = 0;
    double tail_budget = 0;
    bool passed = false;
};

/// Principal-branch power of the slice-complex automorphy base:
/// model H uses x omega^{-1} = r - x0 omega, model Hr uses x itself. Both
/// bases have strictly positive real part inside their domains, so the
/// principal power is single-valued.
inline CPlaneValued automorphy_power(const SlicePointd& x, double exponent, Model model) {
    const std::complex<double> base = model == Model::H
                                          ? std::complex<double>(x.r, -x.x0)
                                          : std::complex<double>(x.x0, x.r);
    if (!(base.real() > 0))
        throw std::domain_error("automorphy_power: base has non-positive real part");
    return CPlaneValued(std::pow(base, exponent));
}

namespace detail {

// Margin radius beyond which the cross terms of a complex shift eat at most
// half of the quadratic decay: |q+u| >= max(8*|b|*||v||/a, 2*||v||), where a
// is the decay scale (r or x0) and b the conjugate coordinate (x0 or r).
inline DecayPlan quad_shift_plan(double a, double b, double v_norm) {
    constexpr double pi = std::numbers::pi;
    if (v_norm == 0.0) return {pi * a, 0.0};
    const double t0 = std::max(8.0 * std::abs(b) * v_norm / a, 2.0 * v_norm);
    return {0.5 * pi * a, t0 * t0};
}

// sum over q in L of e^{i pi <q+w, q+w> z}  (model H, Im z > 0), the
// quadratic extension with the complex shift inside the form.
inline ThetaValue quadratic_shift_sum_h(const std::complex<double>& z, const Characteristicd& w,
                                        const ThetaParams& p) {
    const auto plan = quad_shift_plan(z.imag(), z.real(), w.v.norm());
    const double rsq = pick_radius_sq(p, plan);
    const std::complex<double> iw(0.0, 1.0);
    ComplexSum acc;
    const auto pts = enumerate_ball_around(p.lattice, -w.u, rsq);
    for (const auto& q : pts) {
        std::complex<double> form(0.0, 0.0);
        for (int i = 0; i < q.coords.size(); ++i) {
            const std::complex<double> t(q.coords[i] + w.u[i], w.v[i]);
            form += t * t;
        }
        acc.add(std::exp(iw * pi * form * z));
    }
    return {CPlaneValued(acc.total()), gaussian_tail_bound(p.lattice, plan.c, rsq), long(pts.size())};
}

// sum over q in L of e^{-pi <q+w, q+w> zeta}  (model Hr, Re zeta > 0).
inline ThetaValue quadratic_shift_sum_hr(const std::complex<double>& zeta, const Characteristicd& w,
                                         const ThetaParams& p) {
    const auto plan = quad_shift_plan(zeta.real(), zeta.imag(), w.v.norm());
    const double rsq = pick_radius_sq(p, plan);
    ComplexSum acc;
    const auto pts = enumerate_ball_around(p.lattice, -w.u, rsq);
    for (const auto& q : pts) {
        std::complex<double> form(0.0, 0.0);
        for (int i = 0; i < q.coords.size(); ++i) {
            const std::complex<double> t(q.coords[i] + w.u[i], w.v[i]);
            form += t * t;
        }
        acc.add(std::exp(-pi * form * zeta));
    }
    return {CPlaneValued(acc.total()), gaussian_tail_bound(p.lattice, plan.c, rsq), long(pts.size())};
}

inline ResidualReport make_report(std::string identity, const SlicePointd& x,
                                  const Characteristicd& w, CPlaneValued lhs, CPlaneValued rhs,
                                  double tail_budget, double tol) {
    ResidualReport rep;
    rep.identity = std::move(identity);
    rep.x0 = x.x0;
    rep.r = x.r;
    rep.omega = x.omega.components();
    rep.w_u = w.u;
    rep.w_v = w.v;
    rep.lhs = lhs;
    rep.rhs = rhs;
    rep.abs_residual = (lhs - rhs).abs();
    const double scale = std::max(lhs.abs(), rhs.abs());
    rep.rel_residual = scale > 0 ? rep.abs_residual / scale : rep.abs_residual;
    rep.tail_budget = tail_budget;
    rep.passed = rep.abs_residual <= tol + tail_budget;
    return rep;
}

} // namespace detail

/// The point -x^{-1} (stays in H), computed through the paravector inverse.
inline SlicePointd negated_inverse_h(const SlicePointd& x) {
    if (!x.in_h()) throw std::domain_error("negated_inverse_h: point not in H");
    const Paravectord inv = paravector_inverse(x.as_paravector());
    const Paravectord m = -inv;
    return SlicePointd(m.x0(), m.vec().norm(), UnitVectord(m.vec()));
}

/// Theta transformation formula, model H:
/// sum_{q in L} exp_*(pi <q+w,q+w> x omega)
///   = (x omega^{-1})^{-m/2} * norm(L) * Theta_{dual L}(-x^{-1}, w).
inline ResidualReport verify_theta_trafo_h(const SlicePointd& x, const Characteristicd& w,
                                           const ThetaParams& p, double tol = 1e-8) {
    if (!x.in_h()) throw std::domain_error("verify_theta_trafo_h: point not in H");
    p.warn_if_not_integral("verify_theta_trafo_h");
    const int m = p.lattice.dim();

    const ThetaValue lhs = detail::quadratic_shift_sum_h(x.slice_complex(), w, p);

    const SlicePointd xi = negated_inverse_h(x);
    ThetaParams pd = p;
    pd.lattice = dual(p.lattice);
    pd.truncation_radius_sq = -1.0;
    pd.warn_non_integral = false;
    const ThetaValue dual_theta = theta_h(xi, w, pd);

    const CPlaneValued autom = automorphy_power(x, -0.5 * m, Model::H);
    const double factor = transformation_norm_factor(p.lattice, p.normalization);
    const CPlaneValued rhs = autom * (factor * dual_theta.value);

    const double budget = lhs.tail_bound + autom.abs() * factor * dual_theta.tail_bound;
    return detail::make_report("theta-H", x, w, lhs.value, rhs, budget, tol);
}

/// Theta transformation formula, model Hr, with the modified inversion
/// x -> x^{-1} (the Kelvin inversion -x^{-1} does not preserve Hr):
/// sum exp_*(-pi <q+w,q+w> x) = x^{-m/2} * norm(L) * Theta^r_{dual L}(x^{-1}, w).
inline ResidualReport verify_theta_trafo_hr(const SlicePointd& x, const Characteristicd& w,
                                            const ThetaParams& p, double tol = 1e-8) {
    if (!x.in_hr()) throw std::domain_error("verify_theta_trafo_hr: point not in Hr");
    p.warn_if_not_integral("verify_theta_trafo_hr");
    const int m = p.lattice.dim();
    const std::complex<double> zeta = x.slice_complex();

    const ThetaValue lhs = detail::quadratic_shift_sum_hr(zeta, w, p);

    ThetaParams pd = p;
    pd.lattice = dual(p.lattice);
    pd.truncation_radius_sq = -1.0;
    pd.warn_non_integral = false;
    const ThetaValue dual_theta = theta_hr_complex(1.0 / zeta, w, pd);

    const CPlaneValued autom = automorphy_power(x, -0.5 * m, Model::Hr);
    const double factor = transformation_norm_factor(p.lattice, p.normalization);
    const CPlaneValued rhs = autom * (factor * dual_theta.value);

    const double budget = lhs.tail_bound + autom.abs() * factor * dual_theta.tail_bound;
    return detail::make_report("theta-Hr", x, w, lhs.value, rhs, budget, tol);
}

enum class ConjugatedWhich { First, Second };

namespace detail {

inline Characteristicd coset_as_characteristic(const CosetRep& qtilde) {
    return Characteristicd(qtilde.point, Eigen::VectorXd::Zero(qtilde.point.size()));
}

} // namespace detail

/// First relation: theta_tilde_tilde(x) = (x omega^{-1})^{-m/2} norm(L)
/// theta_tilde(-x^{-1}); second relation: the same with the reciprocal
/// normalization and the roles of the two conjugated functions swapped.
inline ResidualReport verify_conjugated_trafo(const SlicePointd& x, const CosetRep& qtilde,
                                              const ThetaParams& p, ConjugatedWhich which,
                                              double tol = 1e-8) {
    if (!x.in_h()) throw std::domain_error("verify_conjugated_trafo: point not in H");
    if (!p.lattice.is_unimodular())
        std::cerr << "warning: verify_conjugated_trafo: lattice is not unimodular\n";
    const int m = p.lattice.dim();
    const SlicePointd xi = negated_inverse_h(x);
    const CPlaneValued autom = automorphy_power(x, -0.5 * m, Model::H);
    const double factor = transformation_norm_factor(p.lattice, p.normalization);

    ThetaValue lhs, other;
    double f = 0;
    const char* name = nullptr;
    if (which == ConjugatedWhich::First) {
        lhs = theta_tilde_tilde(x, qtilde, p);
        other = theta_tilde(xi, qtilde, p);
        f = factor;
        name = "conjugated-first";
    } else {
        lhs = theta_tilde(x, qtilde, p);
        other = theta_tilde_tilde(xi, qtilde, p);
        f = 1.0 / factor;
        name = "conjugated-second";
    }
    const CPlaneValued rhs = autom * (f * other.value);
    const double budget = lhs.tail_bound + autom.abs() * f * other.tail_bound;
    return detail::make_report(name, x, detail::coset_as_characteristic(qtilde), lhs.value, rhs,
                               budget, tol);
}

/// eta(x) = (x omega^{-1})^{-3m/2} norm(L) eta(-x^{-1}).
inline ResidualReport verify_eta_trafo(const SlicePointd& x, const CosetRep& qtilde,
                                       const ThetaParams& p, double tol = 1e-8) {
    if (!x.in_h()) throw std::domain_error("verify_eta_trafo: point not in H");
    const int m = p.lattice.dim();
    const SlicePointd xi = negated_inverse_h(x);
    const ThetaValue lhs = eta_tilde_full(x, qtilde, p);
    const ThetaValue other = eta_tilde_full(xi, qtilde, p);
    const CPlaneValued autom = automorphy_power(x, -1.5 * m, Model::H);
    const double factor = transformation_norm_factor(p.lattice, p.normalization);
    const CPlaneValued rhs = autom * (factor * other.value);
    const double budget = lhs.tail_bound + autom.abs() * factor * other.tail_bound;
    return detail::make_report("eta", x, detail::coset_as_characteristic(qtilde), lhs.value, rhs,
                               budget, tol);
}

/// discriminant(x) = (x omega^{-1})^{-12m} norm(L)^4 discriminant(-x^{-1}).
inline ResidualReport verify_discriminant_trafo(const SlicePointd& x, const CosetRep& qtilde,
                                                const ThetaParams& p, double tol = 1e-7) {
    if (!x.in_h()) throw std::domain_error("verify_discriminant_trafo: point not in H");
    const int m = p.lattice.dim();
    const SlicePointd xi = negated_inverse_h(x);
    const ThetaValue lhs = discriminant_full(x, qtilde, p);
    const ThetaValue other = discriminant_full(xi, qtilde, p);
    const CPlaneValued autom = automorphy_power(x, -12.0 * m, Model::H);
    const double factor = std::pow(transformation_norm_factor(p.lattice, p.normalization), 4);
    const CPlaneValued rhs = autom * (factor * other.value);
    const double budget = lhs.tail_bound + autom.abs() * factor * other.tail_bound;
    return detail::make_report("discriminant", x, detail::coset_as_characteristic(qtilde),
                               lhs.value, rhs, budget, tol);
}

/// Residual of the slice heat equation [Delta_w - 4 pi omega d_s] Theta = 0,
/// with Delta_w as second central differences in the u_i directions
/// (holomorphy in w_i makes d/dw_i = d/du_i) and the slice derivative as the
/// d/dx0 central difference.
inline double heat_residual(const SlicePointd& x, const Characteristicd& w, const ThetaParams& p,
                            double h) {
    if (!x.in_h()) throw std::domain_error("heat_residual: point not in H");
    if (!(h > 0)) throw std::invalid_argument("heat_residual: h must be positive");
    const std::complex<double> z = x.slice_complex();
    const std::complex<double> center = theta_h_complex(z, w, p).value.to_complex();

    std::complex<double> lap(0.0, 0.0);
    for (int i = 0; i < w.dim(); ++i) {
        Characteristicd wp = w, wm = w;
        wp.u[i] += h;
        wm.u[i] -= h;
        const std::complex<double> fp = theta_h_complex(z, wp, p).value.to_complex();
        const std::complex<double> fm = theta_h_complex(z, wm, p).value.to_complex();
        lap += (fp - 2.0 * center + fm) / (h * h);
    }

    const std::complex<double> dp = theta_h_complex(z + h, w, p).value.to_complex();
    const std::complex<double> dm = theta_h_complex(z - h, w, p).value.to_complex();
    const std::complex<double> ds = (dp - dm) / (2.0 * h);

    const std::complex<double> iw(0.0, 1.0);
    return std::abs(lap - 4.0 * detail::pi * iw * ds);
}

// ---------------------------------------------------------------------------
// Report serialization (17 significant digits for round-trip exactness).
// ---------------------------------------------------------------------------

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string fmt_vector(const Eigen::VectorXd& v) {
    std::string s = "[";
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += fmt_double(v[i]);
    }
    return s + "]";
}

inline std::string to_json(const ResidualReport& r) {
    Eigen::VectorXd xcoords(r.omega.size() + 1);
    xcoords[0] = r.x0;
    xcoords.tail(r.omega.size()) = r.r * r.omega;
    std::string s = "{";
    s += "\"identity\":\"" + r.identity + "\",";
    s += "\"x\":" + fmt_vector(xcoords) + ",";
    s += "\"omega\":" + fmt_vector(r.omega) + ",";
    s += "\"w\":{\"u\":" + fmt_vector(r.w_u) + ",\"v\":" + fmt_vector(r.w_v) + "},";
    s += "\"lhs\":[" + fmt_double(r.lhs.re) + "," + fmt_double(r.lhs.im) + "],";
    s += "\"rhs\":[" + fmt_double(r.rhs.re) + "," + fmt_double(r.rhs.im) + "],";
    s += "\"abs_residual\":" + fmt_double(r.abs_residual) + ",";
    s += "\"tail_budget\":" + fmt_double(r.tail_budget) + ",";
    s += std::string("\"passed\":") + (r.passed ? "true" : "false");
    return s + "}";
}

} // namespace sliceth
