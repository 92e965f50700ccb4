#include "doctest.h"

#include "cgoscat/cauchy.hpp"
#include "cgoscat/cgo.hpp"
#include "cgoscat/faddeev.hpp"
#include "cgoscat/quadrature.hpp"

using namespace cgoscat;

namespace {

CoefficientSet magnetic_set(const Grid& g, double a_amp, double v_amp) {
    GeneratorSpec spec;
    spec.kind = "solenoidal";
    spec.a_amplitude = a_amp;
    spec.v_amplitude = v_amp;
    spec.width = 1.5;
    return make_test_coefficients(g, 2.0, spec);
}

}  // namespace

TEST_SUITE("cgo") {

TEST_CASE("apply_K_rho trivial cases and two-path composition") {
    Grid g = make_grid(32, 10.0);
    ComplexFrequency rho = make_rho(0.3, 1.0, Vec3{1, 0, 0}, Vec3{0, 1, 0});

    GeneratorSpec zero;
    zero.kind = "zero";
    CoefficientSet zs = make_test_coefficients(g, 2.0, zero);
    ScalarField w(g);
    for (std::size_t s = 0; s < w.size(); ++s) w.samples[s] = std::sin(0.1 * s);
    CHECK(sup_norm(apply_K_rho(w, zs, rho)) == 0.0);

    CoefficientSet cs = magnetic_set(g, 0.5, 0.4);
    ScalarField zero_w(g);
    CHECK(sup_norm(apply_K_rho(zero_w, cs, rho)) == 0.0);

    // Composition of the standalone operators.
    ScalarField kw = apply_K_rho(w, cs, rho);
    ScalarField gw = apply_G_rho(w, rho);
    VectorField dgw = shifted_gradient(gw, rho);
    ScalarField manual(g);
    const Complex mi(0.0, -1.0);
    for (std::size_t s = 0; s < manual.size(); ++s) {
        Complex acc = cs.Vtilde.samples[s] * gw.samples[s];
        for (int c = 0; c < 3; ++c)
            acc += 2.0 * cs.A[c].samples[s] *
                   (mi * dgw[c].samples[s] + rho.rho[c] * gw.samples[s]);
        manual.samples[s] = acc;
    }
    double num = 0.0, den = 0.0;
    for (std::size_t s = 0; s < kw.size(); ++s) {
        num += std::norm(kw.samples[s] - manual.samples[s]);
        den += std::norm(manual.samples[s]);
    }
    CHECK(std::sqrt(num / den) <= 1e-12);
}

TEST_CASE("free solve returns the trivial solution") {
    Grid g = make_grid(32, 10.0);
    GeneratorSpec zero;
    zero.kind = "zero";
    CoefficientSet zs = make_test_coefficients(g, 2.0, zero);
    ComplexFrequency rho = make_rho(0.3, 1.0, Vec3{1, 0, 0}, Vec3{0, 1, 0});
    CgoSolution sol = solve_cgo(zs, rho);
    CHECK(sol.iterations == 0);
    CHECK(sup_norm(sol.v) == 0.0);
    CHECK(sup_norm(sol.r) == 0.0);
    double amax = 0.0;
    for (const auto& s : sol.a.samples) amax = std::max(amax, std::abs(s - 1.0));
    CHECK(amax == 0.0);
}

TEST_CASE("converged solves satisfy the conjugated equation") {
    Grid g = make_grid(32, 10.0);
    CoefficientSet cs = magnetic_set(g, 0.4, 0.3);
    ComplexFrequency rho = make_rho(0.25, 1.0, Vec3{1, 0, 0}, Vec3{0, 1, 0});
    CgoOptions opts;
    CgoSolution sol = solve_cgo(cs, rho, opts);
    CHECK(sol.residual <= opts.tol);
    // Independent residual at most 10 x solver tolerance.
    CHECK(conjugated_residual(sol, cs) <= 10.0 * opts.tol);
    // r = 1 - a + v holds identically.
    double max_identity = 0.0;
    for (std::size_t s = 0; s < sol.r.size(); ++s)
        max_identity = std::max(max_identity,
                                std::abs(sol.r.samples[s] -
                                         (1.0 - sol.a.samples[s] + sol.v.samples[s])));
    CHECK(max_identity == 0.0);
    CHECK(sol.asymptotics_built);
}

TEST_CASE("Neumann consistency for weak coefficients") {
    Grid g = make_grid(32, 10.0);
    ComplexFrequency rho = make_rho(0.25, 1.0, Vec3{1, 0, 0}, Vec3{0, 1, 0});
    CoefficientSet base = magnetic_set(g, 0.5, 0.5);
    WeightSpec wd{-0.6};
    std::vector<double> eps = {0.02, 0.04, 0.08}, first_dev;
    for (double e : eps) {
        CoefficientSet cs = scale_coefficients(base, e, e);
        CgoOptions opts;
        opts.with_asymptotics = false;
        CgoSolution sol = solve_cgo(cs, rho, opts);
        ScalarField born = apply_G_rho(cgo_rhs(cs, rho), rho);
        ScalarField diff = sol.v;
        axpy(-1.0, born, diff);
        first_dev.push_back(weighted_norm(diff, wd));
    }
    double slope = loglog_slope(eps, first_dev);
    CHECK(slope == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("weak-potential remainder decays like 1/|rho|") {
    Grid g = make_grid(32, 10.0);
    GeneratorSpec spec;
    spec.kind = "zero";
    spec.v_amplitude = 0.3;
    spec.width_v = 1.4;
    CoefficientSet cs = make_test_coefficients(g, 2.0, spec);
    WeightSpec wd{-0.6};
    std::vector<double> mags, norms;
    for (double target : {8.0, 16.0, 32.0}) {
        double h = std::sqrt(2.0 / (target * target + 1.0));
        ComplexFrequency rho = make_rho(h, 1.0, Vec3{1, 0, 0}, Vec3{0, 1, 0});
        CgoOptions opts;
        opts.with_asymptotics = false;
        CgoSolution sol = solve_cgo(cs, rho, opts);
        mags.push_back(rho.magnitude());
        norms.push_back(sol.norm_v);
    }
    double slope = loglog_slope(mags, norms);
    CHECK(std::abs(slope + 1.0) <= 0.15);
}

TEST_CASE("uniform bound on the amplitude factor over the h sweep") {
    // Half-width 8 keeps the h = 0.1 mollifier above one grid spacing here.
    Grid g = make_grid(32, 8.0);
    CoefficientSet cs = magnetic_set(g, 0.4, 0.2);
    double bound = 0.0, amax_all = 0.0;
    for (double h : {0.4, 0.2, 0.1}) {
        ComplexFrequency rho = make_rho(h, 1.0, Vec3{1, 0, 0}, Vec3{0, 1, 0});
        CgoSolution sol = solve_cgo(cs, rho);
        REQUIRE(sol.asymptotics_built);
        MollifierParams mp;
        mp.h = h;
        auto [sharp, flat] = mollify(cs.A, mp);
        PhaseFunction phis = phase_phi(sharp, rho.nu1, rho.nu2);
        double im_sup = 0.0;
        for (const auto& s : phis.phi.samples) im_sup = std::max(im_sup, std::abs(s.imag()));
        bound = std::max(bound, std::exp(im_sup) + 0.1);
        double amax = 0.0;
        for (const auto& s : sol.a.samples) amax = std::max(amax, std::abs(s));
        amax_all = std::max(amax_all, amax);
    }
    CHECK(amax_all <= bound);
}

TEST_CASE("divergence reports the residual history") {
    Grid g = make_grid(32, 10.0);
    CoefficientSet cs = magnetic_set(g, 30.0, 30.0);  // far outside the smallness regime
    ComplexFrequency rho = make_rho(0.45, 1.0, Vec3{1, 0, 0}, Vec3{0, 1, 0});
    CgoOptions opts;
    opts.max_iter = 30;
    opts.with_asymptotics = false;
    try {
        solve_cgo(cs, rho, opts);
        FAIL("expected divergence");
    } catch (const CgoDivergenceError& e) {
        CHECK_FALSE(e.residual_history.empty());
        CHECK(e.residual_history.back() > opts.tol);
    }
}

}  // TEST_SUITE
