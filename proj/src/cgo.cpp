#include "cgoscat/cgo.hpp"

#include <cmath>

#include "cgoscat/cauchy.hpp"
#include "cgoscat/krylov.hpp"

namespace cgoscat {

namespace {

// 2A.(D + rho) u + Vtilde u with a precomputed shifted-basis gradient of u.
ScalarField first_order_term(const ScalarField& u, const VectorField& grad_u,
                             const CoefficientSet& coeffs, const ComplexFrequency& rho) {
    ScalarField out(u.grid);
    const Complex mi(0.0, -1.0);  // D = -i grad
    for (std::size_t s = 0; s < u.size(); ++s) {
        Complex acc = coeffs.Vtilde.samples[s] * u.samples[s];
        for (int c = 0; c < 3; ++c)
            acc += 2.0 * coeffs.A[c].samples[s] *
                   (mi * grad_u[c].samples[s] + rho.rho[c] * u.samples[s]);
        out.samples[s] = acc;
    }
    return out;
}

bool axis_aligned(Vec3 v) {
    for (int a = 0; a < 3; ++a)
        if (std::abs(std::abs(v[a]) - 1.0) < 1e-12) {
            for (int b = 0; b < 3; ++b)
                if (b != a && std::abs(v[b]) > 1e-12) return false;
            return true;
        }
    return false;
}

}  // namespace

ScalarField apply_K_rho(const ScalarField& w, const CoefficientSet& coeffs,
                        const ComplexFrequency& rho) {
    if (!(w.grid == coeffs.A.grid)) throw std::invalid_argument("apply_K_rho: grid mismatch");
    FieldWithGradient gw = apply_G_rho_grad(w, rho);
    return first_order_term(gw.u, gw.grad, coeffs, rho);
}

ScalarField cgo_rhs(const CoefficientSet& coeffs, const ComplexFrequency& rho) {
    ScalarField f(coeffs.A.grid);
    for (std::size_t s = 0; s < f.size(); ++s) {
        Complex acc = coeffs.Vtilde.samples[s];
        for (int c = 0; c < 3; ++c) acc += 2.0 * coeffs.A[c].samples[s] * rho.rho[c];
        f.samples[s] = -acc;
    }
    return f;
}

CgoSolution solve_cgo(const CoefficientSet& coeffs, const ComplexFrequency& rho,
                      const CgoOptions& opts) {
    const Grid& grid = coeffs.A.grid;
    CgoSolution sol;
    sol.rho = rho;
    sol.delta = opts.delta;

    ScalarField f = cgo_rhs(coeffs, rho);
    sol.rhs_norm = l2_norm(f);
    sol.min_symbol_modulus = symbol_diagnostics(grid, rho).min_symbol_modulus;

    ScalarField w(grid);
    if (sol.rhs_norm > 0.0) {
        auto op = [&](const std::vector<Complex>& in, std::vector<Complex>& out) {
            ScalarField win(grid);
            win.samples = in;
            ScalarField kw = apply_K_rho(win, coeffs, rho);
            out = std::move(kw.samples);
            for (std::size_t s = 0; s < out.size(); ++s) out[s] += in[s];
        };
        std::vector<Complex> x(grid.point_count(), Complex(0.0));
        KrylovResult kres = gmres(op, f.samples, x, opts.tol, opts.max_iter, opts.restart);
        sol.iterations = kres.iterations;
        sol.residual = kres.relative_residual;
        sol.residual_history = kres.residual_history;
        if (!kres.converged)
            throw CgoDivergenceError(
                "solve_cgo: Krylov iteration did not converge (|rho| too small or "
                "coefficients too strong)",
                kres.residual_history);
        w.samples = std::move(x);
    }
    sol.v = apply_G_rho(w, rho);

    // Asymptotic split. a_rho = exp(i chi_rho phi#) needs the Cauchy phase of
    // the mollified potential on the (nu1, nu2) plane.
    sol.a = ScalarField(grid);
    for (auto& s : sol.a.samples) s = 1.0;
    double a_sup = 0.0;
    for (int c = 0; c < 3; ++c) a_sup = std::max(a_sup, sup_norm(coeffs.A[c]));
    if (a_sup == 0.0) {
        // Free magnetic part: phi# vanishes and a_rho is identically one.
        sol.asymptotics_built = true;
    } else if (opts.with_asymptotics && axis_aligned(rho.nu1) && axis_aligned(rho.nu2)) {
        MollifierParams mp;
        mp.sigma0 = opts.sigma0;
        mp.h = std::min(rho.h, 1.0);
        auto [sharp, flat] = mollify(coeffs.A, mp);
        PhaseFunction phis = phase_phi(sharp, rho.nu1, rho.nu2);
        const double r0 = opts.cutoff_radius > 0.0 ? opts.cutoff_radius : 0.5 * grid.half_width;
        const double hs = std::pow(std::min(rho.h, 1.0), opts.theta);
        const int n = grid.n_per_axis;
        std::size_t idx = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k, ++idx) {
                    double chi = cutoff_profile(norm(grid.point(i, j, k)) * hs / r0);
                    sol.a.samples[idx] = std::exp(Complex(0.0, 1.0) * chi * phis.phi.samples[idx]);
                }
        sol.asymptotics_built = true;
    }
    sol.r = ScalarField(grid);
    for (std::size_t s = 0; s < sol.r.size(); ++s)
        sol.r.samples[s] = 1.0 - sol.a.samples[s] + sol.v.samples[s];

    WeightSpec ws{opts.delta};
    sol.norm_v = weighted_norm(sol.v, ws);
    sol.norm_r = weighted_norm(sol.r, ws);
    sol.norm_hgrad_r = rho.h * weighted_norm(gradient(sol.r), ws);
    return sol;
}

ScalarField conjugated_source(const CgoSolution& sol, const CoefficientSet& coeffs) {
    VectorField gv = shifted_gradient(sol.v, sol.rho);
    ScalarField out = first_order_term(sol.v, gv, coeffs, sol.rho);
    ScalarField f = cgo_rhs(coeffs, sol.rho);  // = -(2A.rho + Vtilde)
    axpy(-1.0, f, out);
    return out;
}

double conjugated_residual(const CgoSolution& sol, const CoefficientSet& coeffs) {
    ScalarField pv = apply_P_rho(sol.v, sol.rho);
    VectorField gv = shifted_gradient(sol.v, sol.rho);
    ScalarField lower = first_order_term(sol.v, gv, coeffs, sol.rho);
    ScalarField f = cgo_rhs(coeffs, sol.rho);
    double num = 0.0;
    for (std::size_t s = 0; s < pv.size(); ++s)
        num += std::norm(pv.samples[s] + lower.samples[s] - f.samples[s]);
    num = std::sqrt(num * pv.grid.cell_volume());
    double den = l2_norm(f);
    return den > 0.0 ? num / den : num;
}

}  // namespace cgoscat
