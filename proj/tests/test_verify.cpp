#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"

#include <sliceth/verify.hpp>

#include <nlohmann/json.hpp>

using namespace sliceth;

namespace {

ThetaParams params(Lattice l, double tail_tol = 1e-12) {
    ThetaParams p(std::move(l));
    p.tail_tol = tail_tol;
    p.warn_non_integral = false;
    return p;
}

SlicePointd pt(double x0, double r, int n = 1) {
    return SlicePointd(x0, r, UnitVectord::axis(n));
}

} // namespace

TEST_CASE("automorphy power basics") {
    // x = omega, exponent -1 (model H): base r - i*x0 = 1
    const auto a = automorphy_power(pt(0.0, 1.0), -1.0, Model::H);
    CHECK(a.re == doctest::Approx(1.0));
    CHECK(a.im == doctest::Approx(0.0));

    // x = 2 omega, exponent -1: base 2, result 1/2
    const auto b = automorphy_power(pt(0.0, 2.0), -1.0, Model::H);
    CHECK(b.re == doctest::Approx(0.5));

    // Hr model base is x itself
    const auto c = automorphy_power(pt(4.0, 0.0), -0.5, Model::Hr);
    CHECK(c.re == doctest::Approx(0.5));

    // power addition on the same branch
    oracle::Rng rng(311);
    for (int i = 0; i < 20; ++i) {
        const auto x = pt(rng.uniform(-2, 2), rng.uniform(0.2, 2.5));
        const double e1 = rng.uniform(-3, 3), e2 = rng.uniform(-3, 3);
        const auto p1 = automorphy_power(x, e1, Model::H);
        const auto p2 = automorphy_power(x, e2, Model::H);
        const auto p12 = automorphy_power(x, e1 + e2, Model::H);
        CHECK((p1 * p2 - p12).abs() < 1e-12 * (1.0 + p12.abs()));
    }

    // no branch jump along a slice arc x0 in [-3,3], r = 1
    std::complex<double> prev = automorphy_power(pt(-3.0, 1.0), -1.5, Model::H).to_complex();
    for (double x0 = -3.0 + 0.05; x0 <= 3.0; x0 += 0.05) {
        const std::complex<double> cur = automorphy_power(pt(x0, 1.0), -1.5, Model::H).to_complex();
        CHECK(std::abs(cur - prev) < 0.2 * std::abs(prev));
        prev = cur;
    }
}

TEST_CASE("inversion maps preserve the domains") {
    oracle::Rng rng(313);
    for (int i = 0; i < 25; ++i) {
        const int n = rng.uniform_int(1, 4);
        const SlicePointd x(rng.uniform(-2, 2), rng.uniform(0.1, 2.0), rng.unit_vector(n));
        const auto mi = negated_inverse_h(x);
        CHECK(mi.in_h());
        // -x^{-1} keeps the slice direction
        CHECK((mi.omega.components() - x.omega.components()).norm() < 1e-12);

        // x^{-1} of a point with x0 > 0 keeps x0 > 0 (paravector level)
        const SlicePointd y(rng.uniform(0.1, 2.0), rng.uniform(0.0, 2.0), rng.unit_vector(n));
        const auto yi = paravector_inverse(y.as_paravector());
        CHECK(yi.x0() > 0.0);
    }
}

TEST_CASE("theta transformation, model H: classical oracle on both sides") {
    const auto p = params(Lattice::integer(2), 1e-13);
    oracle::Rng rng(317);
    for (int i = 0; i < 6; ++i) {
        const double x0 = rng.uniform(-0.8, 0.8), r = rng.uniform(0.7, 1.5);
        Characteristicd w(rng.vector(2, -0.3, 0.3), rng.vector(2, -0.2, 0.2));
        const auto rep = verify_theta_trafo_h(pt(x0, r), w, p, 1e-9);
        CHECK(rep.passed);
        CHECK(rep.abs_residual < 1e-9);

        // both report sides against directly-summed classical series
        const std::complex<double> z(x0, r);
        std::complex<double> lhs_ref = 0;
        for (const auto& m : oracle::box_scan_ball(p.lattice, 1e18, 8)) {
            std::complex<double> form = 0;
            for (int k = 0; k < 2; ++k) {
                const std::complex<double> t(double(m[k]) + w.u[k], w.v[k]);
                form += t * t;
            }
            lhs_ref += std::exp(oracle::kI * std::numbers::pi * form * z);
        }
        CHECK(std::abs(rep.lhs.to_complex() - lhs_ref) < 1e-10);

        Eigen::VectorXcd wc(2);
        for (int k = 0; k < 2; ++k) wc[k] = std::complex<double>(w.u[k], w.v[k]);
        const std::complex<double> rhs_ref =
            std::pow(-oracle::kI * z, -1.0) *
            oracle::theta_h_classical(p.lattice, -1.0 / z, wc, 8);
        CHECK(std::abs(rep.rhs.to_complex() - rhs_ref) < 1e-10);
    }
}

TEST_CASE("theta transformation, model H: w = 0 reduces to the theta-null law") {
    const auto p = params(Lattice::integer(2), 1e-13);
    const auto x = pt(0.2, 1.1);
    const auto rep = verify_theta_trafo_h(x, Characteristicd::zero(2), p, 1e-10);
    CHECK(rep.passed);
    // LHS with w = 0 is exactly the theta-null value
    const auto nullv = theta_null(x, p, Model::H);
    CHECK((rep.lhs - nullv.value).abs() < 1e-12);
}

TEST_CASE("theta transformation, model H: Z^4 and D4 with random slices") {
    oracle::Rng rng(331);
    for (const Lattice& l : {Lattice::integer(4), Lattice::d4()}) {
        const auto p = params(l, 1e-12);
        for (int i = 0; i < 5; ++i) {
            const SlicePointd x(rng.uniform(-0.8, 0.8), rng.uniform(0.7, 1.5),
                                rng.unit_vector(3));
            Characteristicd w(rng.vector(4, -0.25, 0.25), rng.vector(4, -0.15, 0.15));
            const auto rep = verify_theta_trafo_h(x, w, p, 1e-8);
            CHECK(rep.passed);
            CHECK(rep.abs_residual < 1e-8);
        }
    }
}

TEST_CASE("normalization: the n=1 oracle pins the reciprocal covolume") {
    // Non-unimodular diag(2,1): the empirical factor of the transformation is
    // 1/vol(L) = 1/2; the sqrt reading of the switch yields it, the plain
    // Gram-determinant reading does not.
    Eigen::MatrixXd g(2, 2);
    g << 2, 0, 0, 1;
    auto p = params(Lattice::from_generators(g), 1e-13);

    const auto x = pt(0.0, 1.0);
    const auto w0 = Characteristicd::zero(2);

    // empirical factor from the two independently summed sides
    const auto lhs = theta_null(x, p, Model::H); // w=0: the quadratic LHS is theta itself
    ThetaParams pd = params(dual(p.lattice), 1e-13);
    const auto rhs_theta = theta_h(negated_inverse_h(x), w0, pd);
    const auto autom = automorphy_power(x, -1.0, Model::H);
    const double empirical =
        (lhs.value.to_complex() / (autom.to_complex() * rhs_theta.value.to_complex())).real();
    CHECK(empirical == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(empirical == doctest::Approx(1.0 / p.lattice.volume()).epsilon(1e-10));

    p.normalization = Normalization::SqrtGramDet;
    CHECK(verify_theta_trafo_h(x, w0, p, 1e-9).passed);
    p.normalization = Normalization::GramDet;
    CHECK(!verify_theta_trafo_h(x, w0, p, 1e-9).passed);
}

TEST_CASE("theta transformation, model Hr: scalar Poisson and hypercomplex points") {
    const auto p1 = params(Lattice::integer(1), 1e-14);
    for (double t : {0.5, 1.0, 2.0}) {
        const auto rep = verify_theta_trafo_hr(pt(t, 0.0), Characteristicd::zero(1), p1, 1e-12);
        CHECK(rep.passed);
        CHECK(rep.abs_residual < 1e-12);
        // classical scalar identity as an absolute reference
        const double lhs_ref = oracle::poisson_scalar(t, 10);
        const double rhs_ref = std::pow(t, -0.5) * oracle::poisson_scalar(1.0 / t, 10);
        CHECK(rep.lhs.re == doctest::Approx(lhs_ref).epsilon(1e-13));
        CHECK(rep.rhs.re == doctest::Approx(rhs_ref).epsilon(1e-13));
    }

    const auto p2 = params(Lattice::integer(2), 1e-13);
    const auto repr = verify_theta_trafo_hr(pt(2.0, 0.0), Characteristicd::zero(2), p2, 1e-10);
    CHECK(repr.passed);

    // genuinely hypercomplex: x = 1 + omega
    const auto reph = verify_theta_trafo_hr(pt(1.0, 1.0), Characteristicd::zero(2), p2, 1e-8);
    CHECK(reph.passed);

    oracle::Rng rng(337);
    for (int i = 0; i < 5; ++i) {
        const SlicePointd x(rng.uniform(0.7, 1.6), rng.uniform(0.0, 1.2), rng.unit_vector(3));
        Characteristicd w(rng.vector(4, -0.25, 0.25), rng.vector(4, -0.15, 0.15));
        const auto rep = verify_theta_trafo_hr(x, w, params(Lattice::integer(4), 1e-12), 1e-8);
        CHECK(rep.passed);
    }
}

TEST_CASE("conjugated transformation pair") {
    const auto p1 = params(Lattice::integer(1), 1e-13);
    const auto half1 = all_halves_rep(p1.lattice);

    // q~ = 0: both relations reduce to the theta-null law
    for (auto which : {ConjugatedWhich::First, ConjugatedWhich::Second}) {
        const auto rep = verify_conjugated_trafo(pt(0.3, 1.0), zero_rep(p1.lattice), p1, which, 1e-9);
        CHECK(rep.passed);
    }

    // n=1, L=Z, q~=1/2, x = omega
    const auto repf = verify_conjugated_trafo(pt(0.0, 1.0), half1, p1, ConjugatedWhich::First, 1e-9);
    CHECK(repf.passed);
    CHECK(repf.abs_residual < 1e-9);
    const auto reps = verify_conjugated_trafo(pt(0.0, 1.0), half1, p1, ConjugatedWhich::Second, 1e-9);
    CHECK(reps.passed);

    // the two relations are mutual inverses: automorphy factors at x and at
    // -x^{-1} cancel on the same branch
    oracle::Rng rng(347);
    for (int i = 0; i < 15; ++i) {
        const auto x = pt(rng.uniform(-1.5, 1.5), rng.uniform(0.3, 2.0));
        const auto xi = negated_inverse_h(x);
        const double e = -0.5 * rng.uniform_int(1, 6);
        const auto prod = automorphy_power(x, e, Model::H) * automorphy_power(xi, e, Model::H);
        CHECK(std::abs(prod.to_complex() - 1.0) < 1e-12);
    }

    // hypercomplex samples on Z^2
    const auto p2 = params(Lattice::integer(2), 1e-13);
    const auto half2 = all_halves_rep(p2.lattice);
    for (int i = 0; i < 5; ++i) {
        const auto x = pt(rng.uniform(-0.8, 0.8), rng.uniform(0.7, 1.5));
        CHECK(verify_conjugated_trafo(x, half2, p2, ConjugatedWhich::First, 1e-8).passed);
        CHECK(verify_conjugated_trafo(x, half2, p2, ConjugatedWhich::Second, 1e-8).passed);
    }
}

TEST_CASE("eta transformation: classical eta-cubed law and slices") {
    // n=1 slice reduction of eta^3(z) = (-zi)^{-3/2} eta^3(-1/z): the library
    // triple product equals 2 eta^3, the constant cancels in the relation.
    const auto p1 = params(Lattice::integer(1), 1e-13);
    const auto half1 = all_halves_rep(p1.lattice);
    const auto rep1 = verify_eta_trafo(pt(0.0, 1.0), half1, p1, 1e-8);
    CHECK(rep1.passed);
    CHECK(rep1.abs_residual < 1e-8);
    const auto rep2 = verify_eta_trafo(pt(0.4, 0.9), half1, p1, 1e-8);
    CHECK(rep2.passed);

    // q~ = 0 consistency with cubing the theta-null law
    const auto rep0 = verify_eta_trafo(pt(0.3, 1.2), zero_rep(p1.lattice), p1, 1e-9);
    CHECK(rep0.passed);

    // random omega on Z^2 at x = 0.2 + 1.3 omega
    oracle::Rng rng(353);
    const auto p2 = params(Lattice::integer(2), 1e-13);
    const auto half2 = all_halves_rep(p2.lattice);
    for (int i = 0; i < 5; ++i) {
        const SlicePointd x(0.2, 1.3, rng.unit_vector(rng.uniform_int(1, 3)));
        const auto rep = verify_eta_trafo(x, half2, p2, 1e-8);
        CHECK(rep.passed);
        CHECK(rep.abs_residual < 1e-8);
    }
}

TEST_CASE("discriminant transformation") {
    const auto p1 = params(Lattice::integer(1), 1e-14);
    const auto half1 = all_halves_rep(p1.lattice);

    // classical Delta(z) = z^{-12} Delta(-1/z) slice reduction
    const auto rep = verify_discriminant_trafo(pt(0.0, 1.0), half1, p1, 1e-7);
    CHECK(rep.passed);
    CHECK(rep.abs_residual < 1e-7);
    const auto rep2 = verify_discriminant_trafo(pt(0.35, 1.05), half1, p1, 1e-7);
    CHECK(rep2.passed);

    // q~ = 0: 24th power of the theta-null law
    CHECK(verify_discriminant_trafo(pt(0.2, 1.2), zero_rep(p1.lattice), p1, 1e-7).passed);

    // eighth-power consistency with the eta report, within conditioning
    const auto x = pt(0.15, 1.1);
    const auto disc_rep = verify_discriminant_trafo(x, half1, p1, 1e-7);
    const auto eta_rep = verify_eta_trafo(x, half1, p1, 1e-8);
    const auto eta_pow = std::pow(eta_rep.lhs.to_complex(), 8);
    CHECK(std::abs(disc_rep.lhs.to_complex() - eta_pow) < 1e-10);
    // |d(eta^8)| ~ 8 |eta|^7 |d eta|: the discriminant residual is controlled
    // by the eta residual through the power law
    const double cond = 8.0 * std::pow(eta_rep.lhs.abs(), 7);
    CHECK(disc_rep.abs_residual <= 4.0 * (cond * eta_rep.abs_residual + 1e-9));
}

TEST_CASE("heat equation residual") {
    auto p = params(Lattice::integer(2), 1e-14);

    // lattice truncated to the origin: theta is constant 1, residual 0
    auto p0 = p;
    p0.truncation_radius_sq = 0.0;
    CHECK(heat_residual(pt(0.1, 1.0), Characteristicd::zero(2), p0, 1e-3) < 1e-12);

    // single shell |q|^2 = 1: the FD w-Laplacian matches the analytic
    // (2 pi i q_i)^2 factors to O(h^2)
    auto ps = p;
    ps.truncation_radius_sq = 1.0;
    const double h = 1e-3;
    {
        const std::complex<double> z(0.1, 1.0);
        Characteristicd w(Eigen::VectorXd::Constant(2, 0.1), Eigen::VectorXd::Constant(2, 0.05));
        std::complex<double> lap_analytic = 0;
        for (const auto& q : enumerate_ball(ps.lattice, 1.0)) {
            const std::complex<double> summand =
                std::exp(oracle::kI * std::numbers::pi *
                         (q.norm_sq * z + 2.0 * std::complex<double>(q.coords.dot(w.u),
                                                                     q.coords.dot(w.v))));
            lap_analytic += std::pow(2.0 * std::numbers::pi * oracle::kI, 2) * q.norm_sq * summand;
        }
        std::complex<double> lap_fd = 0;
        const std::complex<double> center = theta_h_complex(z, w, ps).value.to_complex();
        for (int i = 0; i < 2; ++i) {
            Characteristicd wp = w, wm = w;
            wp.u[i] += h;
            wm.u[i] -= h;
            lap_fd += (theta_h_complex(z, wp, ps).value.to_complex() - 2.0 * center +
                       theta_h_complex(z, wm, ps).value.to_complex()) /
                      (h * h);
        }
        CHECK(std::abs(lap_fd - lap_analytic) < 100.0 * h * h);
    }

    // full Z^2: residual < 1e-4 at h = 1e-3, O(h^2) convergence
    oracle::Rng rng(359);
    for (int i = 0; i < 4; ++i) {
        const auto x = pt(rng.uniform(-0.5, 0.5), rng.uniform(0.8, 1.4));
        Characteristicd w(rng.vector(2, -0.2, 0.2), rng.vector(2, -0.1, 0.1));
        const double r1 = heat_residual(x, w, p, 1e-3);
        CHECK(r1 < 1e-4);
        const double r2 = heat_residual(x, w, p, 5e-4);
        if (r1 > 1e-9) {
            const double ratio = r1 / r2;
            CHECK(ratio > 3.0);
            CHECK(ratio < 5.0);
        }
    }
}

TEST_CASE("residuals refine monotonically with the tail tolerance") {
    const auto x = pt(0.25, 1.05);
    Characteristicd w(Eigen::VectorXd::Constant(2, 0.2), Eigen::VectorXd::Constant(2, 0.1));
    double prev = 1e9;
    for (double tol : {1e-6, 1e-9, 1e-12}) {
        const auto rep = verify_theta_trafo_h(x, w, params(Lattice::integer(2), tol), 1e-6);
        CHECK(rep.abs_residual <= prev + 1e-12);
        prev = rep.abs_residual;
    }
    CHECK(prev < 1e-10);
}

TEST_CASE("report JSON is well-formed and carries 17-digit floats") {
    const auto p = params(Lattice::integer(2), 1e-12);
    const auto rep = verify_theta_trafo_h(pt(1.0 / 3.0, 1.0), Characteristicd::zero(2), p, 1e-8);
    const std::string json = to_json(rep);
    const auto parsed = nlohmann::json::parse(json);
    CHECK(parsed.at("identity") == "theta-H");
    CHECK(parsed.at("passed").is_boolean());
    CHECK(parsed.at("x").size() == 2);
    CHECK(parsed.at("omega").size() == 1);
    CHECK(parsed.at("lhs").size() == 2);
    // x0 = 1/3 round-trips exactly through the 17-digit formatting
    CHECK(parsed.at("x").at(0).get<double>() == 1.0 / 3.0);
    CHECK(parsed.at("abs_residual").get<double>() == rep.abs_residual);
}
