#include "doctest.h"

#include "cgoscat/cauchy.hpp"
#include "cgoscat/quadrature.hpp"
#include "cgoscat/recon.hpp"

using namespace cgoscat;

namespace {

CoefficientSet solenoidal_set(const Grid& g, double amp) {
    GeneratorSpec spec;
    spec.kind = "solenoidal";
    spec.a_amplitude = amp;
    spec.width = 1.5;
    spec.center = Vec3{0.3, 0.2, -0.4};
    return make_test_coefficients(g, 2.0, spec);
}

}  // namespace

TEST_SUITE("recon") {

TEST_CASE("frame construction on the shell") {
    auto [lo, hi] = shell_bounds(1.0, 2.0);
    CHECK(lo == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(hi == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-15));

    ReconFrame f = make_frame(Vec3{2.5, 0, 0}, 1.0, 2.0);
    CHECK(std::abs(f.mu.x) <= 1e-14);
    CHECK(std::abs(f.nu.x) <= 1e-14);
    CHECK(std::abs(dot(f.mu, f.nu)) <= 1e-14);
    CHECK(std::abs(norm(f.mu) - 1.0) <= 1e-14);
    CHECK(std::abs(norm(f.nu) - 1.0) <= 1e-14);

    CHECK_THROWS_WITH_AS(make_frame(Vec3{2.0, 0, 0}, 1.0, 2.0), doctest::Contains("off shell"),
                         std::runtime_error);
    CHECK_THROWS_AS(make_frame(Vec3{2.0 * std::sqrt(2.0), 0, 0}, 1.0, 2.0), std::runtime_error);
    CHECK_THROWS_AS(make_frame(Vec3{}, 1.0, 2.0), std::runtime_error);
}

TEST_CASE("rho pairs live on the variety") {
    ReconFrame f = make_frame(Vec3{2.5, 0, 0}, 1.0, 2.0);
    auto [rho, rhop] = rho_pair(2.0, f);
    CHECK(std::abs(bdot(rho.rho, rho.rho) - 1.0) <= 1e-12);
    CHECK(std::abs(bdot(rhop.rho, rhop.rho) - 1.0) <= 1e-12);
    for (int c = 0; c < 3; ++c)
        CHECK(std::abs((rho.rho[c] - rhop.rho[c]).real() - f.xi[c]) <= 1e-12);

    double tmin = std::sqrt(0.25 * dot(f.xi, f.xi) - 1.0);
    CHECK_THROWS_AS(rho_pair(tmin, f), std::invalid_argument);
    CHECK_THROWS_AS(rho_pair(tmin - 0.1, f), std::invalid_argument);
}

TEST_CASE("nft reduces to the linear transform and is genuinely nonlinear") {
    Grid g = make_grid(64, 12.0);
    CoefficientSet cs = solenoidal_set(g, 0.5);
    const VectorField zero(g);
    const double ds = g.dual_spacing();
    ReconFrame frame = make_frame(Vec3{0, 0, 9.0 * ds}, 1.0, 2.0);

    SUBCASE("equal potentials vanish") {
        CHECK(std::abs(nft(cs.A, cs.A, frame)) <= 1e-14);
    }

    SUBCASE("Eskin-Ralston identity") {
        Complex lin = transverse_ft(cs.A, zero, frame);
        REQUIRE(std::abs(lin) > 1e-6);
        Complex nl = nft(cs.A, zero, frame);
        CHECK(std::abs(nl - lin) <= 1e-2 * std::abs(lin));
    }

    SUBCASE("amplitude sweep: nonlinear integrand, second-order defect") {
        Complex lin_unit = transverse_ft(cs.A, zero, frame);
        std::vector<double> eps = {0.25, 0.5, 1.0}, devs;
        for (double e : eps) {
            CoefficientSet scaled = scale_coefficients(cs, e, 1.0);
            Complex nl = nft(scaled.A, zero, frame);
            devs.push_back(std::abs(nl - e * lin_unit));
        }
        // The reduction identity makes the deviation from homogeneity second
        // order in the amplitude...
        double slope = loglog_slope(eps, devs);
        CHECK(slope == doctest::Approx(2.0).epsilon(0.25));
        // ...while the integrand itself bends nonlinearly through exp(i Phi):
        PhaseFunction Phi = phase_Phi(cs.A, zero, frame.mu, frame.nu);
        double bend = 0.0;
        for (const auto& s : Phi.phi.samples)
            bend = std::max(bend, std::abs(std::exp(Complex(0, 1) * s) - 1.0));
        CHECK(bend > 0.01);
    }
}

TEST_CASE("recovered dA is frame-orientation independent") {
    Grid g = make_grid(64, 12.0);
    CoefficientSet cs = solenoidal_set(g, 0.5);
    const double ds = g.dual_spacing();
    Vec3 xi{0, 0, 9.0 * ds};
    std::vector<Vec3> sample = {xi};
    auto rows = recover_dA(cs, 1.0, 2.0, sample);

    // The same recovery with both frame vectors rotated in-plane: the
    // measurement picks up a unimodular factor, the output must not.
    // rotate_quarter swaps the roles of the two orientations used inside
    // recover_dA, so compare against an independent call on the rotated xi
    // bookkeeping path by rebuilding with swapped orientation by hand.
    ReconFrame frame = make_frame(xi, 1.0, 2.0);
    ReconFrame rot = rotate_quarter(frame);
    const VectorField zero(g);
    Complex m1 = nft(cs.A, zero, rot);
    Complex m2 = nft(cs.A, zero, swap_orientation(rot));
    const Complex iu(0.0, 1.0);
    Complex t_mu = 0.5 * (m1 - iu * m2);
    Complex t_nu = 0.5 * (m2 - iu * m1);
    CVec3 T{};
    for (int c = 0; c < 3; ++c) T[c] = t_mu * rot.mu[c] + t_nu * rot.nu[c];
    double scale_ref = 0.0;
    for (const auto& row : rows) scale_ref = std::max(scale_ref, std::abs(row.reference));
    const std::array<std::pair<int, int>, 3> pairs = {{{0, 1}, {0, 2}, {1, 2}}};
    for (int c = 0; c < 3; ++c) {
        auto [j, k] = pairs[c];
        Complex rec_rot = -iu * (xi[j] * T[k] - xi[k] * T[j]);
        CHECK(std::abs(rec_rot - rows[c].recovered) <= 1e-3 * scale_ref);
    }
}

TEST_CASE("recover_dA trivial cases") {
    Grid g = make_grid(32, 12.0);
    GeneratorSpec zero;
    zero.kind = "zero";
    CoefficientSet zs = make_test_coefficients(g, 2.0, zero);
    auto rows = recover_dA(zs, 1.0, 2.0, default_shell_samples(1.0, 2.0, 2));
    for (const auto& row : rows) {
        CHECK(std::abs(row.recovered) <= 1e-14);
        CHECK(std::abs(row.reference) <= 1e-14);
    }
}

TEST_CASE("recovered dA is insensitive to an added gauge term") {
    Grid g = make_grid(32, 12.0);
    CoefficientSet base = solenoidal_set(g, 0.4);
    GeneratorSpec gauge;
    gauge.kind = "gradient";
    gauge.a_amplitude = 0.4;
    gauge.width = 1.4;
    gauge.center = Vec3{0.5, -0.3, 0.2};
    CoefficientSet grad_set = make_test_coefficients(g, 2.0, gauge);
    CoefficientSet shifted = base;
    for (int c = 0; c < 3; ++c) axpy(1.0, grad_set.A[c], shifted.A[c]);
    shifted.Vtilde = assemble_vtilde(shifted.A, shifted.V);

    std::vector<Vec3> samples = default_shell_samples(1.0, 2.0, 2);
    auto rows0 = recover_dA(base, 1.0, 2.0, samples);
    auto rows1 = recover_dA(shifted, 1.0, 2.0, samples);
    double scale = 0.0;
    for (const auto& row : rows0) scale = std::max(scale, std::abs(row.reference));
    for (std::size_t i = 0; i < rows0.size(); ++i)
        CHECK(std::abs(rows1[i].recovered - rows0[i].recovered) <= 1e-3 * scale);
}

TEST_CASE("pairing functional: zeros, equal-data cancellation, large-t limit") {
    Grid g = make_grid(32, 12.0);
    const double ds = g.dual_spacing();
    ReconFrame frame = make_frame(Vec3{9.0 * ds, 0, 0}, 1.0, 2.0);

    GeneratorSpec zero;
    zero.kind = "zero";
    CoefficientSet zs = make_test_coefficients(g, 2.0, zero);
    CHECK(std::abs(pairing_I(8.0, frame, zs, zs)) == 0.0);

    GeneratorSpec mag;
    mag.kind = "solenoidal";
    mag.a_amplitude = 0.3;
    mag.v_amplitude = 0.2;
    mag.width = 1.5;
    CoefficientSet cs = make_test_coefficients(g, 2.0, mag);

    // Equal coefficient sets: the pairing cancels against its own data
    // (measured ~2e-5 of the distinct-data pairing at this resolution).
    Complex equal_val = pairing_I(8.0, frame, cs, cs);
    Complex data_val = pairing_I(8.0, frame, cs, zs);
    CHECK(std::abs(equal_val) <= 1e-4 * std::abs(data_val));
}

TEST_CASE("pairing limit recovers the nonlinear Fourier transform") {
    Grid g = make_grid(64, 12.0);
    const double ds = g.dual_spacing();
    ReconFrame frame = make_frame(Vec3{9.0 * ds, 0, 0}, 1.0, 2.0);
    // Weak potential: the finite-t remainder of I(t)/t scales with the
    // coefficient strength (measured ~0.6 amp at t = 32).
    GeneratorSpec mag;
    mag.kind = "solenoidal";
    mag.a_amplitude = 0.06;
    mag.width = 1.5;
    mag.center = Vec3{0.3, 0.2, -0.4};
    CoefficientSet cs = make_test_coefficients(g, 2.0, mag);
    GeneratorSpec zero;
    zero.kind = "zero";
    CoefficientSet zs = make_test_coefficients(g, 2.0, zero);

    PairingCurve curve = pairing_curve(frame, cs, zs, {8.0, 16.0, 32.0});
    // I(t)/t is Cauchy along the doubling sweep...
    CHECK(std::abs(curve.I_over_t[2] - curve.I_over_t[1]) <
          std::abs(curve.I_over_t[1] - curve.I_over_t[0]));
    // ...and lands on 2x the nonlinear Fourier transform.
    Complex limit = 2.0 * nft(cs.A, zs.A, frame);
    CHECK(std::abs(curve.I_over_t[2] - limit) <= 0.05 * std::abs(limit));
}

TEST_CASE("recover_V guards and trivial recovery") {
    Grid g = make_grid(32, 12.0);
    GeneratorSpec spec;
    spec.kind = "zero";
    spec.v_amplitude = 0.4;
    spec.width_v = 1.3;
    CoefficientSet va = make_test_coefficients(g, 2.0, spec);

    SUBCASE("mismatched magnetic potentials are rejected") {
        GeneratorSpec other;
        other.kind = "solenoidal";
        other.a_amplitude = 0.2;
        other.width = 1.5;
        CoefficientSet vb = make_test_coefficients(g, 2.0, other);
        CHECK_THROWS_WITH_AS(
            recover_V(vb, va, 1.0, {Vec3{2.3, 0, 0}}, {8.0, 16.0, 32.0}),
            doctest::Contains("gauge-reduce first"), std::runtime_error);
    }

    SUBCASE("t sweep must be a doubling triple") {
        CHECK_THROWS_AS(recover_V(va, va, 1.0, {Vec3{2.3, 0, 0}}, {8.0, 12.0, 16.0}),
                        std::invalid_argument);
    }

    SUBCASE("equal potentials recover zero") {
        auto rows = recover_V(va, va, 1.0, {Vec3{2.3, 0, 0}}, {8.0, 16.0, 32.0});
        REQUIRE(rows.size() == 1);
        CHECK(std::abs(rows[0].recovered) <= 1e-14);
        CHECK(std::abs(rows[0].reference) <= 1e-14);
    }
}

TEST_CASE("default shell samples sit strictly inside the shell") {
    auto samples = default_shell_samples(1.0, 2.0, 8);
    CHECK(samples.size() == 48);
    auto [lo, hi] = shell_bounds(1.0, 2.0);
    for (const auto& xi : samples) {
        double r = norm(xi);
        CHECK(r > lo);
        CHECK(r < hi);
        int nonzero = (xi.x != 0) + (xi.y != 0) + (xi.z != 0);
        CHECK(nonzero == 1);  // axis-aligned, cauchy-compatible frames
    }
}

}  // TEST_SUITE
