#include "cgoscat/acceptance.hpp"

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>

#include "cgoscat/cauchy.hpp"
#include "cgoscat/cgo.hpp"
#include "cgoscat/coeffs.hpp"
#include "cgoscat/direct.hpp"
#include "cgoscat/faddeev.hpp"
#include "cgoscat/grid.hpp"
#include "cgoscat/quadrature.hpp"
#include "cgoscat/recon.hpp"

namespace cgoscat {

namespace {

struct Ctx {
    AcceptanceOptions opts;
    Grid grid;
    double lambda = 1.0;
    double gamma0 = 2.0;
    std::mt19937_64 rng;

    double tol(double nominal) const { return nominal * opts.tol_scale; }
};

std::string fmt(const char* pattern, ...) {
    char buf[512];
    va_list args;
    va_start(args, pattern);
    std::vsnprintf(buf, sizeof(buf), pattern, args);
    va_end(args);
    return buf;
}

double rel_l2(const ScalarField& a, const ScalarField& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t s = 0; s < a.size(); ++s) {
        num += std::norm(a.samples[s] - b.samples[s]);
        den += std::norm(b.samples[s]);
    }
    return std::sqrt(num / den);
}

bool strictly_decreasing(const std::vector<double>& v) {
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
        if (!(v[i + 1] < v[i])) return false;
    return true;
}

// Random sum of two Gaussian bumps with complex amplitudes. Widths scale
// with the grid so the finite-difference residual measure stays resolved
// (2.4..4 cells; the nominal 64^3 run gives the 0.9..1.5 range).
ScalarField random_decaying_source(Ctx& ctx) {
    const double dx = ctx.grid.spacing();
    std::uniform_real_distribution<double> amp(-1.0, 1.0), cen(-2.0, 2.0),
        wid(2.4 * dx, 4.0 * dx);
    ScalarField f(ctx.grid);
    for (int b = 0; b < 2; ++b) {
        Complex a(amp(ctx.rng), amp(ctx.rng));
        Vec3 c{cen(ctx.rng), cen(ctx.rng), cen(ctx.rng)};
        double w = wid(ctx.rng);
        const int n = ctx.grid.n_per_axis;
        std::size_t idx = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k, ++idx) {
                    Vec3 x = ctx.grid.point(i, j, k);
                    Vec3 d = x - c;
                    f.samples[idx] += a * std::exp(-dot(d, d) / (2.0 * w * w));
                }
    }
    return f;
}

double weighted_sup(const ScalarField& f, double p) {
    const int n = f.grid.n_per_axis;
    double m = 0.0;
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k, ++idx)
                m = std::max(m, std::abs(f.samples[idx]) *
                                    std::pow(jbracket(f.grid.point(i, j, k)), p));
    return m;
}

double masked_ball_l2(const ScalarField& f, double radius) {
    const int n = f.grid.n_per_axis;
    double acc = 0.0;
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k, ++idx)
                if (norm(f.grid.point(i, j, k)) <= radius) acc += std::norm(f.samples[idx]);
    return std::sqrt(acc * f.grid.cell_volume());
}

// ---------------------------------------------------------------------------
// C1: d-bar solver residuals and round trip
// ---------------------------------------------------------------------------

CriterionResult c1(Ctx& ctx) {
    const std::array<std::pair<Vec3, Vec3>, 4> planes = {{{Vec3{1, 0, 0}, Vec3{0, 1, 0}},
                                                          {Vec3{0, 1, 0}, Vec3{0, 0, 1}},
                                                          {Vec3{0, 0, 1}, Vec3{1, 0, 0}},
                                                          {Vec3{0, -1, 0}, Vec3{1, 0, 0}}}};
    double max_res = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        ScalarField f = random_decaying_source(ctx);
        auto [g1, g2] = planes[trial % planes.size()];
        PhaseFunction phi = cauchy_transform(f, make_plane(g1, g2));
        max_res = std::max(max_res, phi.residual);
    }

    // Round trip: f = (g1 + i g2).grad(g) for an analytic Gaussian g.
    const Vec3 c{0.5, -0.3, 0.2};
    const double w = 3.2 * ctx.grid.spacing();
    ScalarField g(ctx.grid), f(ctx.grid);
    const Vec3 g1{1, 0, 0}, g2{0, 1, 0};
    const int n = ctx.grid.n_per_axis;
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k, ++idx) {
                Vec3 x = ctx.grid.point(i, j, k);
                Vec3 d = x - c;
                double gv = std::exp(-dot(d, d) / (2.0 * w * w));
                g.samples[idx] = gv;
                Complex grad_dir = Complex(d.x, d.y) * (-gv / (w * w));
                f.samples[idx] = grad_dir;
            }
    PhaseFunction phi = cauchy_transform(f, make_plane(g1, g2));
    double rt = rel_l2(phi.phi, g);

    CriterionResult r;
    r.id = 1;
    r.name = "dbar solver";
    r.passed = max_res <= ctx.tol(1e-3) && rt <= ctx.tol(1e-3);
    r.detail = fmt("max PDE residual %.3g (tol %.3g), round trip %.3g (tol %.3g)", max_res,
                   ctx.tol(1e-3), rt, ctx.tol(1e-3));
    return r;
}

// ---------------------------------------------------------------------------
// C2: Faddeev norm scaling
// ---------------------------------------------------------------------------

CriterionResult c2(Ctx& ctx) {
    const std::vector<double> rho_targets = {8.0, 16.0, 32.0, 64.0};
    const WeightSpec wdelta{-0.6}, wdelta1{0.4};
    ScalarField f(ctx.grid);
    {
        const int n = ctx.grid.n_per_axis;
        std::size_t idx = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k, ++idx) {
                    Vec3 x = ctx.grid.point(i, j, k);
                    f.samples[idx] = std::exp(-0.5 * dot(x, x));
                }
    }
    const double fnorm = weighted_norm(f, wdelta1);

    // Transversally uniform oscillating profile, carried on the offset
    // lattice (the e^{i b.x} factor matches the half-cell shift along nu2 =
    // e2): P_rho acts on it through the x3 line where the symbol stays O(1),
    // so gradients do not decay in rho.
    ScalarField gosc(ctx.grid);
    {
        // Three-eighths of the axis Nyquist: 24 dual cells on the 64^3 grid.
        const double ktilda = (3 * ctx.grid.n_per_axis / 8) * ctx.grid.dual_spacing();
        const double beta = 0.5 * ctx.grid.dual_spacing();
        const int n = ctx.grid.n_per_axis;
        std::size_t idx = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k, ++idx) {
                    double x2 = ctx.grid.coord(j), x3 = ctx.grid.coord(k);
                    gosc.samples[idx] = std::polar(std::exp(-x3 * x3 / (2.0 * 1.5 * 1.5)),
                                                   ktilda * x3 + beta * x2);
                }
    }

    std::vector<double> mags, unorms, gnorms_fixed, gnorms_osc;
    for (double target : rho_targets) {
        double h = std::sqrt(2.0 / (target * target + ctx.lambda));
        ComplexFrequency rho = make_rho(h, ctx.lambda, Vec3{1, 0, 0}, Vec3{0, 1, 0});
        mags.push_back(rho.magnitude());

        ScalarField u = apply_G_rho(f, rho);
        unorms.push_back(weighted_norm(u, wdelta) / fnorm);
        VectorField gu = shifted_gradient(u, rho);
        gnorms_fixed.push_back(weighted_norm(gu, wdelta) / fnorm);

        ScalarField frho = apply_P_rho(gosc, rho);
        ScalarField uo = apply_G_rho(frho, rho);
        VectorField guo = shifted_gradient(uo, rho);
        gnorms_osc.push_back(weighted_norm(guo, wdelta) / weighted_norm(frho, wdelta1));
    }
    double slope_u = loglog_slope(mags, unorms);
    double slope_g_fixed = loglog_slope(mags, gnorms_fixed);
    double slope_g_osc = loglog_slope(mags, gnorms_osc);

    CriterionResult r;
    r.id = 2;
    r.name = "Faddeev scaling";
    bool ok_u = std::abs(slope_u + 1.0) <= ctx.tol(0.15);
    // Prop-type bounds are one-sided; the oscillatory family saturates the
    // gradient exponent while a fixed smooth source stays under it.
    bool ok_g = slope_g_fixed <= ctx.tol(0.15) && std::abs(slope_g_osc) <= ctx.tol(0.15);
    r.passed = ok_u && ok_g;
    r.detail = fmt("u slope %.3f (want -1 +- %.2f); grad slopes: fixed %.3f (<= %.2f), "
                   "saturating %.3f (0 +- %.2f)",
                   slope_u, ctx.tol(0.15), slope_g_fixed, ctx.tol(0.15), slope_g_osc,
                   ctx.tol(0.15));
    return r;
}

// ---------------------------------------------------------------------------
// C3: CGO residual and Born comparison
// ---------------------------------------------------------------------------

CriterionResult c3(Ctx& ctx) {
    GeneratorSpec magnetic;
    magnetic.kind = "solenoidal";
    magnetic.a_amplitude = 0.4;
    magnetic.v_amplitude = 0.3;
    magnetic.width = 1.5;
    CoefficientSet cs = make_test_coefficients(ctx.grid, ctx.gamma0, magnetic);
    ComplexFrequency rho = make_rho(0.2, ctx.lambda, Vec3{1, 0, 0}, Vec3{0, 1, 0});
    CgoOptions copts;
    copts.with_asymptotics = false;  // criterion 4 owns the asymptotic split
    CgoSolution sol = solve_cgo(cs, rho, copts);
    double res = conjugated_residual(sol, cs);

    GeneratorSpec weak;
    weak.kind = "zero";
    weak.v_amplitude = 0.01;
    weak.width_v = 1.2;
    CoefficientSet vw = make_test_coefficients(ctx.grid, ctx.gamma0, weak);
    double h16 = std::sqrt(2.0 / (16.0 * 16.0 + ctx.lambda));
    ComplexFrequency rho16 = make_rho(h16, ctx.lambda, Vec3{1, 0, 0}, Vec3{0, 1, 0});
    CgoSolution sol16 = solve_cgo(vw, rho16, copts);
    ScalarField born = apply_G_rho(cgo_rhs(vw, rho16), rho16);
    WeightSpec wd{-0.6};
    ScalarField diff = sol16.v;
    axpy(-1.0, born, diff);
    double born_rel = weighted_norm(diff, wd) / weighted_norm(born, wd);

    CriterionResult r;
    r.id = 3;
    r.name = "CGO residual";
    r.passed = res <= ctx.tol(1e-7) && born_rel <= ctx.tol(0.05);
    r.detail = fmt("conjugated residual %.3g (tol %.3g), Born deviation %.3g (tol %.3g) at |rho|=16",
                   res, ctx.tol(1e-7), born_rel, ctx.tol(0.05));
    return r;
}

// ---------------------------------------------------------------------------
// C4: CGO asymptotics over the h sweep
// ---------------------------------------------------------------------------

CriterionResult c4(Ctx& ctx) {
    GeneratorSpec magnetic;
    magnetic.kind = "solenoidal";
    magnetic.a_amplitude = 0.3;
    magnetic.v_amplitude = 0.2;
    magnetic.width = 1.5;
    CoefficientSet cs = make_test_coefficients(ctx.grid, ctx.gamma0, magnetic);
    PhaseFunction phi = phase_phi(cs.A, Vec3{1, 0, 0}, Vec3{0, 1, 0});
    ScalarField eiphi(ctx.grid);
    for (std::size_t s = 0; s < eiphi.size(); ++s)
        eiphi.samples[s] = std::exp(Complex(0.0, 1.0) * phi.phi.samples[s]);

    std::vector<double> rnorms, anorms;
    const double ball = 0.5 * ctx.grid.half_width;
    // Nominal sweep; coarser grids fall back to the smallest sweep whose
    // mollifier stays resolved (delta = h^sigma0 above one grid spacing).
    std::vector<double> hsweep = {0.4, 0.2, 0.1};
    const double h_floor = std::pow(1.05 * ctx.grid.spacing(), 4.0);
    if (hsweep.back() < h_floor) hsweep = {0.9, 0.64, std::max(0.45, h_floor)};
    for (double h : hsweep) {
        ComplexFrequency rho = make_rho(h, ctx.lambda, Vec3{1, 0, 0}, Vec3{0, 1, 0});
        CgoSolution sol = solve_cgo(cs, rho);
        rnorms.push_back(sol.norm_r + sol.norm_hgrad_r);
        ScalarField diff = sol.a;
        axpy(-1.0, eiphi, diff);
        anorms.push_back(masked_ball_l2(diff, ball));
    }

    CriterionResult r;
    r.id = 4;
    r.name = "CGO asymptotics";
    r.passed = strictly_decreasing(rnorms) && strictly_decreasing(anorms);
    r.detail = fmt("||r||+h||grad r|| = {%.4g, %.4g, %.4g}; ||a-e^{i phi}||(ball) = "
                   "{%.4g, %.4g, %.4g}",
                   rnorms[0], rnorms[1], rnorms[2], anorms[0], anorms[1], anorms[2]);
    return r;
}

// ---------------------------------------------------------------------------
// C5: mollifier rates
// ---------------------------------------------------------------------------

CriterionResult c5(Ctx& ctx) {
    GeneratorSpec spec;
    spec.kind = "solenoidal";
    spec.a_amplitude = 1.0;
    spec.width = 2.2;
    CoefficientSet cs = make_test_coefficients(ctx.grid, ctx.gamma0, spec);
    const double eps = 0.1, eps0 = 0.05, sigma0 = 0.25;
    // Geometric sweep from h = 0.64 down to the resolution floor; the
    // nominal 64^3 grid gives {0.64, 0.32, 0.16, 0.08, 0.04}.
    std::vector<double> hs;
    {
        const double h_hi = 0.64;
        const double h_lo = std::max(0.04, std::pow(1.05 * ctx.grid.spacing(), 4.0));
        const double ratio = std::pow(h_lo / h_hi, 0.25);
        double h = h_hi;
        for (int i = 0; i < 5; ++i, h *= ratio) hs.push_back(h);
    }

    std::vector<double> n1, n2, nflat;
    for (double h : hs) {
        MollifierParams p;
        p.sigma0 = sigma0;
        p.h = h;
        auto [sharp, flat] = mollify(cs.A, p);
        double m1 = 0.0, m2 = 0.0, mf = 0.0;
        for (int c = 0; c < 3; ++c) {
            mf = std::max(mf, weighted_sup(flat[c], 1.0 + eps0));
            for (int a = 0; a < 3; ++a) {
                ScalarField d1 = derivative(sharp[c], a);
                m1 = std::max(m1, weighted_sup(d1, 1.0 + eps));
                for (int b = a; b < 3; ++b)
                    m2 = std::max(m2, weighted_sup(derivative(d1, b), 1.0 + eps));
            }
        }
        n1.push_back(m1);
        n2.push_back(m2);
        nflat.push_back(mf);
    }
    // Growth exponents: norm ~ h^{-e} means e = -dlog(norm)/dlog(h).
    double e1 = -loglog_slope(hs, n1);
    double e2 = -loglog_slope(hs, n2);
    double a_scale = 0.0;
    for (int c = 0; c < 3; ++c) a_scale = std::max(a_scale, weighted_sup(cs.A[c], 1.0 + eps0));
    bool flat_ok = strictly_decreasing(nflat) && nflat.back() < ctx.tol(1e-2) * a_scale;

    CriterionResult r;
    r.id = 5;
    r.name = "mollifier rates";
    r.passed = e1 <= ctx.tol(sigma0 + 0.1) && e2 <= ctx.tol(2 * sigma0 + 0.1) && flat_ok;
    r.detail = fmt("growth exponents %.3f (<= %.2f), %.3f (<= %.2f); A-flat sup %.3g -> %.3g "
                   "(floor %.3g)",
                   e1, ctx.tol(sigma0 + 0.1), e2, ctx.tol(2 * sigma0 + 0.1), nflat.front(),
                   nflat.back(), ctx.tol(1e-2) * a_scale);
    return r;
}

// ---------------------------------------------------------------------------
// C6: direct scattering
// ---------------------------------------------------------------------------

CriterionResult c6(Ctx& ctx) {
    // Zero coefficients: identity matrix to roundoff.
    GeneratorSpec zero;
    zero.kind = "zero";
    CoefficientSet zs = make_test_coefficients(ctx.grid, ctx.gamma0, zero);
    SphereGrid base = make_sphere_grid(ctx.lambda, 6, 12);
    ScatteringMatrixSamples sz = sigma_matrix(zs, ctx.lambda, base, {}, ctx.opts.threads);
    double id_dev = 0.0;
    for (int p = 0; p < base.size(); ++p)
        for (int q = 0; q < base.size(); ++q)
            id_dev = std::max(id_dev,
                              std::abs(sz.matrix[p][q] - (p == q ? Complex(1.0) : Complex(0.0))));

    // Weak magnetic set, off center: the defect stays quadrature-limited
    // there and shrinks under sphere refinement. (A purely electric real
    // potential gives a discretely *exact* unitary matrix at any rule, so it
    // cannot exhibit the refinement trend.)
    GeneratorSpec weak;
    weak.kind = "solenoidal";
    weak.a_amplitude = 0.15;
    weak.v_amplitude = 0.1;
    weak.width = 1.5;
    weak.center = Vec3{1.0, 0.5, -0.7};
    CoefficientSet ws = make_test_coefficients(ctx.grid, ctx.gamma0, weak);
    std::vector<double> defects;
    for (auto [np, na] : {std::pair{6, 12}, std::pair{7, 14}, std::pair{8, 16}}) {
        SphereGrid s = make_sphere_grid(ctx.lambda, np, na);
        defects.push_back(sigma_matrix(ws, ctx.lambda, s, {}, ctx.opts.threads).unitarity_defect);
    }

    // Born far field at amplitude 1e-2.
    GeneratorSpec born_spec;
    born_spec.kind = "zero";
    born_spec.v_amplitude = 0.01;
    born_spec.width_v = 1.0;
    born_spec.center_v = Vec3{1.2, 0.6, -0.8};
    CoefficientSet bs = make_test_coefficients(ctx.grid, ctx.gamma0, born_spec);
    std::vector<Complex> g(base.size(), Complex(1.0));
    ScatteringSolution sol = solve_scattering(bs, ctx.lambda, g, base, {});
    FarFieldResult ff = far_field(sol, bs);
    FieldWithGradient inc = herglotz_with_gradient(g, base, ctx.grid);
    ScalarField v_inc = multiply_potential(bs, inc.u, inc.grad);
    const double k = std::sqrt(ctx.lambda);
    double num = 0.0, den = 0.0;
    for (int q = 0; q < base.size(); ++q) {
        Complex born_sc = -fourier_at(v_inc, k * base.directions[q]);
        Complex sc = ff.sigma_g[q] - g[q];
        num += base.weights[q] * std::norm(sc - born_sc);
        den += base.weights[q] * std::norm(born_sc);
    }
    double born_rel = std::sqrt(num / den);

    CriterionResult r;
    r.id = 6;
    r.name = "direct scattering";
    r.passed = id_dev <= 1e-12 && defects[0] <= ctx.tol(1e-2) && strictly_decreasing(defects) &&
               born_rel <= ctx.tol(0.05);
    r.detail = fmt("|S-I| (V=0) %.2g; defects {%.3g, %.3g, %.3g} (first tol %.3g, decreasing); "
                   "Born far-field dev %.3g (tol %.3g)",
                   id_dev, defects[0], defects[1], defects[2], ctx.tol(1e-2), born_rel,
                   ctx.tol(0.05));
    return r;
}

// ---------------------------------------------------------------------------
// C7: boundary pairing
// ---------------------------------------------------------------------------

CriterionResult c7(Ctx& ctx) {
    SphereGrid sphere = make_sphere_grid(ctx.lambda, 8, 16);
    const int nq = sphere.size();

    // Free-free pair: both sides vanish.
    std::vector<Complex> g1(nq, Complex(1.0)), g2(nq);
    for (int q = 0; q < nq; ++q) g2[q] = sphere.directions[q].z;  // degree-1 harmonic
    PairingWave u_free = herglotz_pairing_wave(g1, sphere, ctx.grid);
    PairingWave v_free = herglotz_pairing_wave(g2, sphere, ctx.grid);
    PairingCheck pc0 = boundary_pairing_check(u_free, v_free, sphere, ctx.lambda,
                                              0.7 * ctx.grid.half_width);
    double free_scale = 2.0 * std::sqrt(ctx.lambda) * c_lambda_constant() * c_lambda_constant() *
                        4.0 * M_PI;  // crude pairing magnitude scale
    double free_err = std::max(std::abs(pc0.volume_side), std::abs(pc0.sphere_side)) / free_scale;

    // Outgoing-free pair: broad source so the ball integral converges
    // visibly within the box.
    ScalarField f(ctx.grid);
    {
        const int n = ctx.grid.n_per_axis;
        const double w = 2.4;
        std::size_t idx = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k, ++idx) {
                    Vec3 x = ctx.grid.point(i, j, k);
                    f.samples[idx] = std::exp(-dot(x, x) / (2.0 * w * w));
                }
    }
    PairingWave u_out = outgoing_pairing_wave(f, ctx.lambda, sphere);
    // The ball-truncated remainder oscillates in R at the wave period, so the
    // decay is measured on window maxima spanning at least half a period.
    auto window_max = [&](std::initializer_list<double> fracs) {
        double m = 0.0;
        for (double frac : fracs) {
            PairingCheck pc = boundary_pairing_check(u_out, u_free, sphere, ctx.lambda,
                                                     frac * ctx.grid.half_width);
            m = std::max(m, pc.discrepancy);
        }
        return m;
    };
    std::vector<double> discs = {window_max({0.38, 0.43, 0.48}),
                                 window_max({0.54, 0.59, 0.64}),
                                 window_max({0.70, 0.75, 0.80})};
    PairingCheck pc07 = boundary_pairing_check(u_out, u_free, sphere, ctx.lambda,
                                               0.7 * ctx.grid.half_width);
    double rel07 = pc07.discrepancy / std::abs(pc07.sphere_side);

    CriterionResult r;
    r.id = 7;
    r.name = "boundary pairing";
    r.passed = free_err <= ctx.tol(1e-8) && rel07 <= ctx.tol(0.02) && strictly_decreasing(discs);
    r.detail = fmt("free pair residual %.3g (tol %.3g); outgoing pair rel %.3g at R=0.7L "
                   "(tol %.3g), window maxima {%.3g, %.3g, %.3g} decreasing",
                   free_err, ctx.tol(1e-8), rel07, ctx.tol(0.02), discs[0], discs[1], discs[2]);
    return r;
}

// ---------------------------------------------------------------------------
// C8: gauge invariance
// ---------------------------------------------------------------------------

CriterionResult c8(Ctx& ctx) {
    GeneratorSpec base;
    base.kind = "solenoidal";
    base.a_amplitude = 0.3;
    base.v_amplitude = 0.25;
    base.width = 1.5;
    CoefficientSet cs = make_test_coefficients(ctx.grid, ctx.gamma0, base);

    GeneratorSpec gauge;
    gauge.kind = "gradient";
    gauge.a_amplitude = 0.3;
    gauge.width = 1.3;
    gauge.center = Vec3{0.4, -0.2, 0.3};
    CoefficientSet grad_set = make_test_coefficients(ctx.grid, ctx.gamma0, gauge);

    CoefficientSet gauged = cs;
    for (int c = 0; c < 3; ++c) axpy(1.0, grad_set.A[c], gauged.A[c]);
    gauged.Vtilde = assemble_vtilde(gauged.A, gauged.V);

    SphereGrid sphere = make_sphere_grid(ctx.lambda, 6, 12);
    std::vector<Complex> g(sphere.size(), Complex(1.0));
    FarFieldResult ff1 = far_field(solve_scattering(cs, ctx.lambda, g, sphere, {}), cs);
    FarFieldResult ff2 = far_field(solve_scattering(gauged, ctx.lambda, g, sphere, {}), gauged);
    double num = 0.0, den = 0.0;
    for (int q = 0; q < sphere.size(); ++q) {
        num += sphere.weights[q] * std::norm(ff1.sigma_g[q] - ff2.sigma_g[q]);
        den += sphere.weights[q] * std::norm(ff1.sigma_g[q] - g[q]);
    }
    double far_rel = std::sqrt(num / den);

    GeneratorSpec pot;
    pot.kind = "gradient";
    pot.a_amplitude = 0.5;
    pot.width = 1.6;
    CoefficientSet gs = make_test_coefficients(ctx.grid, ctx.gamma0, pot);
    GaugeFunction alpha = gauge_primitive(gs.A);
    VectorField ga = gradient(alpha.alpha);
    double gnum = 0.0, gden = 0.0;
    for (int c = 0; c < 3; ++c)
        for (std::size_t s = 0; s < ga[c].size(); ++s) {
            gnum += std::norm(ga[c].samples[s] - gs.A[c].samples[s]);
            gden += std::norm(gs.A[c].samples[s]);
        }
    double grad_rel = std::sqrt(gnum / gden);

    CriterionResult r;
    r.id = 8;
    r.name = "gauge invariance";
    r.passed = far_rel <= ctx.tol(1e-2) && grad_rel <= ctx.tol(1e-3);
    r.detail = fmt("far-field gauge deviation %.3g (tol %.3g); ||grad alpha - A||/||A|| %.3g "
                   "(tol %.3g)",
                   far_rel, ctx.tol(1e-2), grad_rel, ctx.tol(1e-3));
    return r;
}

// ---------------------------------------------------------------------------
// C9: Eskin-Ralston reduction
// ---------------------------------------------------------------------------

CriterionResult c9(Ctx& ctx) {
    std::vector<CoefficientSet> sets;
    {
        GeneratorSpec s1;
        s1.kind = "solenoidal";
        s1.a_amplitude = 0.5;
        s1.width = 1.5;
        s1.center = Vec3{0.3, 0.2, -0.4};
        sets.push_back(make_test_coefficients(ctx.grid, ctx.gamma0, s1));
        GeneratorSpec s2;
        s2.kind = "gaussian";
        s2.a_amplitude = 0.4;
        s2.width = 1.3;
        s2.center = Vec3{-0.5, 0.4, 0.1};
        sets.push_back(make_test_coefficients(ctx.grid, ctx.gamma0, s2));
    }
    const VectorField zero(ctx.grid);
    const double ds = ctx.grid.dual_spacing();
    int measured = 0;
    double max_rel = 0.0;
    for (const auto& cs : sets) {
        for (int m : {8, 9, 10})
            for (int axis = 0; axis < 3; ++axis)
                for (double sgn : {1.0, -1.0}) {
                    Vec3 xi{};
                    xi[axis] = sgn * m * ds;
                    ReconFrame frame = make_frame(xi, ctx.lambda, ctx.gamma0);
                    for (int orient = 0; orient < 2; ++orient) {
                        ReconFrame fr = orient ? swap_orientation(frame) : frame;
                        Complex lin = transverse_ft(cs.A, zero, fr);
                        if (std::abs(lin) < 1e-6) continue;
                        Complex nl = nft(cs.A, zero, fr);
                        max_rel = std::max(max_rel, std::abs(nl - lin) / std::abs(lin));
                        ++measured;
                    }
                }
    }

    CriterionResult r;
    r.id = 9;
    r.name = "Eskin-Ralston reduction";
    r.passed = measured >= 20 && max_rel <= ctx.tol(1e-2);
    r.detail = fmt("%d frames measured, max |nft-FT|/|FT| %.3g (tol %.3g)", measured, max_rel,
                   ctx.tol(1e-2));
    return r;
}

// ---------------------------------------------------------------------------
// C10: end-to-end reconstruction
// ---------------------------------------------------------------------------

CriterionResult c10(Ctx& ctx) {
    // (a) generic magnetic dA.
    GeneratorSpec mag;
    mag.kind = "solenoidal";
    mag.a_amplitude = 0.5;
    mag.width = 1.5;
    mag.center = Vec3{0.3, 0.2, -0.4};
    CoefficientSet cs = make_test_coefficients(ctx.grid, ctx.gamma0, mag);
    std::vector<Vec3> samples = default_shell_samples(ctx.lambda, ctx.gamma0, 8);
    std::vector<ShellRow> rows = recover_dA(cs, ctx.lambda, ctx.gamma0, samples, ctx.opts.threads);
    double max_sample_err = 0.0;
    for (std::size_t s = 0; s < samples.size(); ++s) {
        double num = 0.0, den = 0.0;
        for (int c = 0; c < 3; ++c) {
            num += std::norm(rows[3 * s + c].recovered - rows[3 * s + c].reference);
            den += std::norm(rows[3 * s + c].reference);
        }
        max_sample_err = std::max(max_sample_err, std::sqrt(num / den));
    }

    // (b) pure gauge: recovered dA must vanish against the transform scale.
    GeneratorSpec pure;
    pure.kind = "gradient";
    pure.a_amplitude = 0.5;
    pure.width = 1.6;
    CoefficientSet ps = make_test_coefficients(ctx.grid, ctx.gamma0, pure);
    std::vector<ShellRow> prows = recover_dA(ps, ctx.lambda, ctx.gamma0, samples, ctx.opts.threads);
    double gauge_scale = 0.0;
    for (std::size_t s = 0; s < samples.size(); ++s) {
        double tnorm = 0.0;
        for (int c = 0; c < 3; ++c) tnorm += std::norm(fourier_at(ps.A[c], -samples[s]));
        gauge_scale = std::max(gauge_scale, norm(samples[s]) * std::sqrt(tnorm));
    }
    double gauge_leak = 0.0;
    for (const auto& row : prows) gauge_leak = std::max(gauge_leak, std::abs(row.recovered));

    // (c) V recovery with A = 0 and (d) with a shared magnetic potential.
    const std::vector<double> tsweep = {8.0, 16.0, 32.0};
    const double r1 = 9.0 * ctx.grid.dual_spacing();
    std::vector<Vec3> vxi = {Vec3{r1, 0, 0}, Vec3{0, r1, 0}};

    GeneratorSpec v_only;
    v_only.kind = "zero";
    v_only.v_amplitude = 0.5;
    v_only.width_v = 1.3;
    CoefficientSet va = make_test_coefficients(ctx.grid, ctx.gamma0, v_only);
    GeneratorSpec v_zero = v_only;
    v_zero.v_amplitude = 0.0;
    CoefficientSet vb = make_test_coefficients(ctx.grid, ctx.gamma0, v_zero);
    double v_err = 0.0;
    for (const auto& row : recover_V(va, vb, ctx.lambda, vxi, tsweep, {}, ctx.opts.threads))
        v_err = std::max(v_err, row.rel_err);

    GeneratorSpec shared = mag;
    shared.a_amplitude = 0.3;
    shared.v_amplitude = 0.4;
    shared.width_v = 1.3;
    CoefficientSet sa = make_test_coefficients(ctx.grid, ctx.gamma0, shared);
    GeneratorSpec shared_b = shared;
    shared_b.v_amplitude = 0.0;
    CoefficientSet sb = make_test_coefficients(ctx.grid, ctx.gamma0, shared_b);
    double vshared_err = 0.0;
    for (const auto& row : recover_V(sa, sb, ctx.lambda, vxi, tsweep, {}, ctx.opts.threads))
        vshared_err = std::max(vshared_err, row.rel_err);

    CriterionResult r;
    r.id = 10;
    r.name = "end-to-end reconstruction";
    r.passed = max_sample_err <= ctx.tol(0.05) && gauge_leak <= ctx.tol(1e-3) * gauge_scale &&
               v_err <= ctx.tol(0.05) && vshared_err <= ctx.tol(0.08);
    r.detail = fmt("dA max sample err %.3g (tol %.3g); pure-gauge leak %.3g (tol %.3g); "
                   "V-hat err %.3g (tol %.3g), shared-A %.3g (tol %.3g)",
                   max_sample_err, ctx.tol(0.05), gauge_leak, ctx.tol(1e-3) * gauge_scale, v_err,
                   ctx.tol(0.05), vshared_err, ctx.tol(0.08));
    return r;
}

// ---------------------------------------------------------------------------
// C11: shell arithmetic
// ---------------------------------------------------------------------------

CriterionResult c11(Ctx& ctx) {
    auto [lo, hi] = shell_bounds(1.0, 2.0);
    bool bounds_ok = std::abs(lo - 2.0) <= 1e-14 && std::abs(hi - 2.0 * std::sqrt(2.0)) <= 1e-14;
    bool accept_ok = true, reject_lo = false, reject_hi = false;
    try {
        make_frame(Vec3{2.5, 0, 0}, 1.0, 2.0);
    } catch (...) {
        accept_ok = false;
    }
    try {
        make_frame(Vec3{2.0, 0, 0}, 1.0, 2.0);
    } catch (const std::runtime_error&) {
        reject_lo = true;
    }
    try {
        make_frame(Vec3{2.0 * std::sqrt(2.0), 0, 0}, 1.0, 2.0);
    } catch (const std::runtime_error&) {
        reject_hi = true;
    }
    (void)ctx;

    CriterionResult r;
    r.id = 11;
    r.name = "shell arithmetic";
    r.passed = bounds_ok && accept_ok && reject_lo && reject_hi;
    r.detail = fmt("shell (%.12g, %.12g); interior accepted %d, boundaries rejected %d/%d", lo,
                   hi, accept_ok ? 1 : 0, reject_lo ? 1 : 0, reject_hi ? 1 : 0);
    return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts, std::ostream& log) {
    Ctx ctx;
    ctx.opts = opts;
    ctx.grid = make_grid(opts.grid_n, opts.half_width);
    ctx.rng.seed(opts.seed);

    using Runner = CriterionResult (*)(Ctx&);
    const Runner runners[] = {c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11};
    std::vector<CriterionResult> results;
    for (int idx = 0; idx < 11; ++idx) {
        if (opts.only != 0 && opts.only != idx + 1) continue;
        CriterionResult r;
        try {
            r = runners[idx](ctx);
        } catch (const std::exception& e) {
            r.id = idx + 1;
            r.name = "criterion";
            r.passed = false;
            r.detail = std::string("exception: ") + e.what();
        }
        log << (r.passed ? "[PASS] " : "[FAIL] ") << "C" << r.id << " " << r.name << ": "
            << r.detail << "\n";
        log.flush();
        results.push_back(r);
    }
    return results;
}

}  // namespace cgoscat
