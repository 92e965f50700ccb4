#include "doctest.h"

#include <random>

#include "cgoscat/coeffs.hpp"
#include "cgoscat/grid.hpp"

using namespace cgoscat;

namespace {

double rel_l2_diff(const ScalarField& a, const ScalarField& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t s = 0; s < a.size(); ++s) {
        num += std::norm(a.samples[s] - b.samples[s]);
        den += std::norm(b.samples[s]);
    }
    return std::sqrt(num / (den > 0 ? den : 1.0));
}

}  // namespace

TEST_SUITE("coeffs") {

TEST_CASE("zero amplitudes give vanishing coefficients") {
    Grid g = make_grid(16, 8.0);
    GeneratorSpec spec;
    spec.kind = "gaussian";
    spec.a_amplitude = 0.0;
    spec.v_amplitude = 0.0;
    CoefficientSet cs = make_test_coefficients(g, 2.0, spec);
    for (int c = 0; c < 3; ++c) CHECK(sup_norm(cs.A[c]) == 0.0);
    CHECK(sup_norm(cs.V) == 0.0);
    CHECK(sup_norm(cs.Vtilde) == 0.0);
}

TEST_CASE("electric-only set has Vtilde = V exactly") {
    Grid g = make_grid(32, 10.0);
    GeneratorSpec spec;
    spec.kind = "zero";
    spec.v_amplitude = 0.7;
    spec.width_v = 1.4;
    CoefficientSet cs = make_test_coefficients(g, 2.0, spec);
    double max_diff = 0.0;
    for (std::size_t s = 0; s < cs.V.size(); ++s)
        max_diff = std::max(max_diff, std::abs(cs.Vtilde.samples[s] - cs.V.samples[s]));
    CHECK(max_diff <= 1e-14);
}

TEST_CASE("divergence-free bump gives Vtilde = A^2 + V") {
    Grid g = make_grid(32, 10.0);
    GeneratorSpec spec;
    spec.kind = "solenoidal";
    spec.a_amplitude = 0.8;
    spec.v_amplitude = 0.3;
    spec.width = 1.6;
    CoefficientSet cs = make_test_coefficients(g, 2.0, spec);

    // Spectral divergence oracle: D.A should vanish for the analytic curl.
    ScalarField div = divergence(cs.A);
    CHECK(sup_norm(div) <= 1e-8);

    double max_diff = 0.0, scale = 0.0;
    for (std::size_t s = 0; s < cs.V.size(); ++s) {
        Complex a2 = 0.0;
        for (int c = 0; c < 3; ++c) a2 += cs.A[c].samples[s] * cs.A[c].samples[s];
        max_diff = std::max(max_diff, std::abs(cs.Vtilde.samples[s] - a2 - cs.V.samples[s]));
        scale = std::max(scale, std::abs(cs.Vtilde.samples[s]));
    }
    CHECK(max_diff <= 1e-8 * std::max(scale, 1.0));
}

TEST_CASE("assemble_vtilde against independent derivative oracles") {
    Grid g = make_grid(32, 10.0);
    const int n = g.n_per_axis;

    SUBCASE("grid mismatch is rejected") {
        VectorField a(make_grid(16, 10.0));
        ScalarField v(g);
        CHECK_THROWS_AS(assemble_vtilde(a, v), std::invalid_argument);
    }

    SUBCASE("windowed first component against 4th-order finite differences") {
        VectorField a(g);
        ScalarField v(g);
        std::size_t idx = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k, ++idx) {
                    Vec3 x = g.point(i, j, k);
                    a[0].samples[idx] = std::exp(-dot(x, x) / (2.0 * 1.6 * 1.6));
                }
        ScalarField vt = assemble_vtilde(a, v);
        // D.A = -i dA1/dx1 via centered 4th-order differences.
        const double h = g.spacing();
        double num = 0.0, den = 0.0;
        auto wrap = [n](int i) { return (i % n + n) % n; };
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    Complex d1 = (-a[0].at(wrap(i + 2), j, k) + 8.0 * a[0].at(wrap(i + 1), j, k) -
                                  8.0 * a[0].at(wrap(i - 1), j, k) + a[0].at(wrap(i - 2), j, k)) /
                                 (12.0 * h);
                    Complex expect = a[0].at(i, j, k) * a[0].at(i, j, k) + Complex(0, -1) * d1;
                    num += std::norm(vt.at(i, j, k) - expect);
                    den += std::norm(expect);
                }
        CHECK(std::sqrt(num / den) <= 2e-2);
    }

    SUBCASE("gradient field against the closed-form Laplacian") {
        const double w = 1.5;
        VectorField a(g);
        ScalarField v(g);
        ScalarField lap_oracle(g);
        std::size_t idx = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k, ++idx) {
                    Vec3 x = g.point(i, j, k);
                    double gv = std::exp(-dot(x, x) / (2.0 * w * w));
                    for (int c = 0; c < 3; ++c) a[c].samples[idx] = -x[c] / (w * w) * gv;
                    lap_oracle.samples[idx] = (dot(x, x) / (w * w * w * w) - 3.0 / (w * w)) * gv;
                }
        ScalarField vt = assemble_vtilde(a, v);
        double num = 0.0, den = 0.0;
        for (std::size_t s = 0; s < vt.size(); ++s) {
            Complex a2 = 0.0;
            for (int c = 0; c < 3; ++c) a2 += a[c].samples[s] * a[c].samples[s];
            Complex expect = a2 + Complex(0, -1) * lap_oracle.samples[s];
            num += std::norm(vt.samples[s] - expect);
            den += std::norm(expect);
        }
        CHECK(std::sqrt(num / den) <= 1e-8);
    }

    SUBCASE("polarization in A and additivity in V") {
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        VectorField a(g), b(g), apb(g);
        ScalarField zero(g), v1(g), v2(g), v12(g);
        for (int c = 0; c < 3; ++c)
            for (std::size_t s = 0; s < a[c].size(); ++s) {
                a[c].samples[s] = dist(rng);
                b[c].samples[s] = dist(rng);
                apb[c].samples[s] = a[c].samples[s] + b[c].samples[s];
            }
        for (std::size_t s = 0; s < v1.size(); ++s) {
            v1.samples[s] = dist(rng);
            v2.samples[s] = dist(rng);
            v12.samples[s] = v1.samples[s] + v2.samples[s];
        }
        // The linear D.A part cancels in Vt(A+B) - Vt(A) - Vt(B), leaving
        // exactly the quadratic cross term 2 A.B.
        ScalarField lhs = assemble_vtilde(apb, zero);
        ScalarField ra = assemble_vtilde(a, zero);
        ScalarField rb = assemble_vtilde(b, zero);
        double num = 0.0, den = 0.0;
        for (std::size_t s = 0; s < lhs.size(); ++s) {
            Complex cross = 0.0;
            for (int c = 0; c < 3; ++c) cross += 2.0 * a[c].samples[s] * b[c].samples[s];
            Complex l = lhs.samples[s] - ra.samples[s] - rb.samples[s];
            num += std::norm(l - cross);
            den += std::norm(cross);
        }
        CHECK(std::sqrt(num / den) <= 1e-11);

        ScalarField s1 = assemble_vtilde(a, v12);
        ScalarField s2 = assemble_vtilde(a, v1);
        double max_add = 0.0;
        for (std::size_t s = 0; s < s1.size(); ++s)
            max_add = std::max(max_add,
                               std::abs(s1.samples[s] - s2.samples[s] - v2.samples[s]));
        CHECK(max_add <= 1e-12);
    }
}

TEST_CASE("mollify basics, mass conservation, under-resolution") {
    Grid g = make_grid(32, 8.0);
    GeneratorSpec spec;
    spec.kind = "gaussian";
    spec.a_amplitude = 1.0;
    spec.width = 1.5;
    CoefficientSet cs = make_test_coefficients(g, 2.0, spec);

    MollifierParams p;
    p.h = 1.0;  // delta = 1
    auto [sharp, flat] = mollify(cs.A, p);
    double flat_sup = 0.0;
    for (int c = 0; c < 3; ++c) flat_sup = std::max(flat_sup, sup_norm(flat[c]));
    CHECK(flat_sup > 0.0);

    // chi has unit discrete mass, so componentwise sums are conserved.
    for (int c = 0; c < 3; ++c) {
        Complex s0 = 0.0, s1 = 0.0;
        for (std::size_t s = 0; s < cs.A[c].size(); ++s) {
            s0 += cs.A[c].samples[s];
            s1 += sharp[c].samples[s];
        }
        CHECK(std::abs(s1 - s0) <= 1e-10 * std::abs(s0));
    }

    // h -> 0: the weighted remainder shrinks monotonically.
    std::vector<double> sups;
    for (double h : {0.5, 0.25, 0.125}) {
        MollifierParams q;
        q.h = h;
        auto [sh, fl] = mollify(cs.A, q);
        double m = 0.0;
        const int n = g.n_per_axis;
        for (int c = 0; c < 3; ++c) {
            std::size_t idx = 0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k, ++idx)
                        m = std::max(m, std::abs(fl[c].samples[idx]) *
                                            std::pow(jbracket(g.point(i, j, k)), 1.05));
        }
        sups.push_back(m);
    }
    CHECK(sups[1] < sups[0]);
    CHECK(sups[2] < sups[1]);

    MollifierParams bad;
    bad.h = 0.01;  // delta = 0.316 < spacing 0.5
    CHECK_THROWS_WITH_AS(mollify(cs.A, bad), doctest::Contains("under-resolved"),
                         std::runtime_error);
    MollifierParams bad_sigma;
    bad_sigma.sigma0 = 0.4;
    CHECK_THROWS_AS(mollify(cs.A, bad_sigma), std::invalid_argument);
}

TEST_CASE("cutoff and bump profiles") {
    CHECK(bump_profile(0.0) == doctest::Approx(std::exp(-1.0)));
    CHECK(bump_profile(1.0) == 0.0);
    CHECK(bump_profile(2.0) == 0.0);
    CHECK(cutoff_profile(0.3) == 1.0);
    CHECK(cutoff_profile(1.1) == 0.0);
    double prev = 1.0;
    for (double r = 0.55; r < 1.0; r += 0.05) {
        double v = cutoff_profile(r);
        CHECK(v <= prev + 1e-12);
        CHECK(v >= 0.0);
        prev = v;
    }
}

TEST_CASE("curl identities") {
    Grid g = make_grid(32, 10.0);
    const int n = g.n_per_axis;

    SUBCASE("curl of a gradient vanishes") {
        // Fine grid: the gate sits below the sampling-alias floor of 32^3.
        Grid fine = make_grid(64, 10.0);
        GeneratorSpec spec;
        spec.kind = "gradient";
        spec.a_amplitude = 1.0;
        spec.width = 1.3;
        CoefficientSet cs = make_test_coefficients(fine, 2.0, spec);
        auto da = curl(cs.A);
        for (const auto& comp : da) CHECK(sup_norm(comp) <= 1e-10);
    }

    SUBCASE("windowed rotation field against the analytic curl") {
        const double w = 1.4;
        VectorField a(g);
        ScalarField oracle(g);
        std::size_t idx = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k, ++idx) {
                    Vec3 x = g.point(i, j, k);
                    double win = std::exp(-dot(x, x) / (2.0 * w * w));
                    a[0].samples[idx] = -x.y * win;
                    a[1].samples[idx] = x.x * win;
                    // d1 A2 - d2 A1 = 2 win + (x.x d1 + x.y d2) win
                    oracle.samples[idx] =
                        2.0 * win + (x.x * (-x.x / (w * w)) + x.y * (-x.y / (w * w))) * win;
                }
        auto da = curl(a);
        CHECK(rel_l2_diff(da[0], oracle) <= 1e-8);
        CHECK(std::abs(da[0].at(n / 2, n / 2, n / 2) - 2.0) <= 1e-6);
        CHECK(sup_norm(da[1]) > 0.0);  // (1,3) component carries the z-window slope
    }

    SUBCASE("curl of zero is zero") {
        VectorField a(g);
        for (const auto& comp : curl(a)) CHECK(sup_norm(comp) == 0.0);
    }
}

TEST_CASE("gauge primitive recovers the generating scalar") {
    SUBCASE("zero potential") {
        Grid g = make_grid(16, 8.0);
        VectorField a(g);
        GaugeFunction gf = gauge_primitive(a);
        CHECK(sup_norm(gf.alpha) == 0.0);
    }

    SUBCASE("gradient of exp(-|x|^2) on the acceptance grid") {
        Grid g = make_grid(64, 12.0);
        const int n = g.n_per_axis;
        VectorField a(g);
        ScalarField expect(g);
        std::size_t idx = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k, ++idx) {
                    Vec3 x = g.point(i, j, k);
                    double gv = std::exp(-dot(x, x));
                    expect.samples[idx] = gv;
                    for (int c = 0; c < 3; ++c) a[c].samples[idx] = -2.0 * x[c] * gv;
                }
        GaugeFunction gf = gauge_primitive(a);
        double max_err = 0.0;
        for (std::size_t s = 0; s < expect.size(); ++s)
            max_err = std::max(max_err, std::abs(gf.alpha.samples[s] - expect.samples[s]));
        CHECK(max_err <= 1e-4);

        // grad(alpha) returns A within 1e-3 relative.
        VectorField ga = gradient(gf.alpha);
        double num = 0.0, den = 0.0;
        for (int c = 0; c < 3; ++c)
            for (std::size_t s = 0; s < ga[c].size(); ++s) {
                num += std::norm(ga[c].samples[s] - a[c].samples[s]);
                den += std::norm(a[c].samples[s]);
            }
        CHECK(std::sqrt(num / den) <= 1e-3);
    }

    SUBCASE("non-curl-free input is rejected") {
        Grid g = make_grid(16, 8.0);
        GeneratorSpec spec;
        spec.kind = "solenoidal";
        spec.a_amplitude = 1.0;
        spec.width = 2.0;
        CoefficientSet cs = make_test_coefficients(g, 2.0, spec);
        CHECK_THROWS_WITH_AS(gauge_primitive(cs.A), doctest::Contains("not curl-free"),
                             std::runtime_error);
    }
}

TEST_CASE("generator audit records decay and boundary behavior") {
    Grid g = make_grid(16, 3.0);  // tight box: boundary leakage expected
    GeneratorSpec spec;
    spec.kind = "gaussian";
    spec.a_amplitude = 1.0;
    spec.width = 1.5;
    CoefficientSet tight = make_test_coefficients(g, 2.0, spec);
    CHECK(tight.boundary_warning);

    Grid wide = make_grid(32, 12.0);
    CoefficientSet ok = make_test_coefficients(wide, 2.0, spec);
    CHECK_FALSE(ok.boundary_warning);
    CHECK(ok.decay_constant > 0.0);

    CHECK_THROWS_AS(make_test_coefficients(wide, -1.0, spec), std::invalid_argument);
    GeneratorSpec bad = spec;
    bad.kind = "unknown";
    CHECK_THROWS_AS(make_test_coefficients(wide, 2.0, bad), std::invalid_argument);
}

}  // TEST_SUITE
