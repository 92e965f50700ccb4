#include "cgoscat/recon.hpp"

#include <cmath>
#include <stdexcept>

#include "cgoscat/cauchy.hpp"
#include "cgoscat/parallel.hpp"

namespace cgoscat {

std::pair<double, double> shell_bounds(double lambda, double gamma0) {
    return {2.0 * std::sqrt(lambda), 2.0 * std::sqrt(lambda + 0.25 * gamma0 * gamma0)};
}

ReconFrame make_frame(Vec3 xi, double lambda, double gamma0) {
    if (!(lambda > 0.0) || !(gamma0 > 0.0))
        throw std::invalid_argument("make_frame: lambda and gamma0 must be positive");
    auto [lo, hi] = shell_bounds(lambda, gamma0);
    double r = norm(xi);
    if (!(r > lo && r < hi)) throw std::runtime_error("make_frame: off shell");

    Vec3 xh = normalized(xi);
    int best = 0;
    double best_dot = std::abs(xh[0]);
    for (int a = 1; a < 3; ++a)
        if (std::abs(xh[a]) < best_dot - 1e-15) {
            best = a;
            best_dot = std::abs(xh[a]);
        }
    Vec3 e{};
    e[best] = 1.0;
    Vec3 mu = normalized(e - dot(xh, e) * xh);
    Vec3 nu = normalized(cross(xh, mu));

    ReconFrame f;
    f.xi = xi;
    f.mu = mu;
    f.nu = nu;
    f.lambda = lambda;
    f.gamma0 = gamma0;
    return f;
}

ReconFrame swap_orientation(const ReconFrame& f) {
    ReconFrame g = f;
    g.mu = f.nu;
    g.nu = f.mu;
    return g;
}

ReconFrame rotate_quarter(const ReconFrame& f) {
    ReconFrame g = f;
    g.mu = f.nu;
    g.nu = -f.mu;
    return g;
}

std::pair<ComplexFrequency, ComplexFrequency> rho_pair(double t, const ReconFrame& frame) {
    const double r2 = dot(frame.xi, frame.xi);
    const double tmin2 = 0.25 * r2 - frame.lambda;
    if (!(t > 0.0) || !(t * t > tmin2))
        throw std::invalid_argument("rho_pair: t must exceed sqrt(|xi|^2/4 - lambda)");
    const double s = std::sqrt(t * t + frame.lambda - 0.25 * r2);
    CVec3 rho{}, rhop{};
    for (int c = 0; c < 3; ++c) {
        rho[c] = Complex(0.5 * frame.xi[c] + s * frame.mu[c], t * frame.nu[c]);
        rhop[c] = Complex(-0.5 * frame.xi[c] + s * frame.mu[c], -t * frame.nu[c]);
    }
    return {frequency_from_vector(rho, frame.lambda), frequency_from_vector(rhop, frame.lambda)};
}

namespace {

// sum of f * exp(i sgn xi.x) * conj(g) * dx^3 with g optional.
Complex phase_pairing(const ScalarField& f, const ScalarField* g, Vec3 xi, double sgn) {
    ScalarField ph = plane_wave(f.grid, sgn * xi);
    Complex acc = 0.0;
    if (g) {
        for (std::size_t s = 0; s < f.size(); ++s)
            acc += f.samples[s] * ph.samples[s] * std::conj(g->samples[s]);
    } else {
        for (std::size_t s = 0; s < f.size(); ++s) acc += f.samples[s] * ph.samples[s];
    }
    return acc * f.grid.cell_volume();
}

}  // namespace

Complex pairing_I(double t, const ReconFrame& frame, const CoefficientSet& set_a,
                  const CoefficientSet& set_b, const CgoOptions& opts) {
    auto [rho, rhop] = rho_pair(t, frame);
    CgoOptions o = opts;
    o.with_asymptotics = false;
    CgoSolution sa = solve_cgo(set_a, rho, o);
    CgoSolution sb = solve_cgo(set_b, rhop, o);

    ScalarField src_a = conjugated_source(sa, set_a);  // (2A.(D+rho)+Vt)(1+v)
    ScalarField src_b = conjugated_source(sb, set_b);

    ScalarField one_plus_vb = sb.v;
    for (auto& s : one_plus_vb.samples) s += 1.0;
    ScalarField one_plus_va = sa.v;
    for (auto& s : one_plus_va.samples) s += 1.0;

    // (src_a | e^{-ix.xi}(1+v')) = sum src_a e^{+ix.xi} conj(1+v') dx
    Complex first = phase_pairing(src_a, &one_plus_vb, frame.xi, +1.0);
    // (e^{ix.xi}(1+v) | src_b) = sum (1+v) e^{+ix.xi} conj(src_b) dx
    Complex second = phase_pairing(one_plus_va, &src_b, frame.xi, +1.0);
    return first - second;
}

PairingCurve pairing_curve(const ReconFrame& frame, const CoefficientSet& set_a,
                           const CoefficientSet& set_b, const std::vector<double>& t_values,
                           const CgoOptions& opts) {
    PairingCurve out;
    for (double t : t_values) {
        Complex val = pairing_I(t, frame, set_a, set_b, opts);
        out.t_values.push_back(t);
        out.I_values.push_back(val);
        out.I_over_t.push_back(val / t);
    }
    return out;
}

namespace {

ScalarField transverse_component(const VectorField& A, const VectorField& Aprime,
                                 const ReconFrame& frame) {
    ScalarField w(A.grid);
    for (std::size_t s = 0; s < w.size(); ++s)
        for (int c = 0; c < 3; ++c)
            w.samples[s] += Complex(frame.mu[c], frame.nu[c]) *
                            (A[c].samples[s] - Aprime[c].samples[s]);
    return w;
}

}  // namespace

Complex nft(const VectorField& A, const VectorField& Aprime, const ReconFrame& frame) {
    PhaseFunction Phi = phase_Phi(A, Aprime, frame.mu, frame.nu);
    ScalarField w = transverse_component(A, Aprime, frame);
    for (std::size_t s = 0; s < w.size(); ++s)
        w.samples[s] *= std::exp(Complex(0.0, 1.0) * Phi.phi.samples[s]);
    return phase_pairing(w, nullptr, frame.xi, +1.0);
}

Complex transverse_ft(const VectorField& A, const VectorField& Aprime, const ReconFrame& frame) {
    ScalarField w = transverse_component(A, Aprime, frame);
    return phase_pairing(w, nullptr, frame.xi, +1.0);
}

std::vector<ShellRow> recover_dA(const CoefficientSet& coeffs, double lambda, double gamma0,
                                 const std::vector<Vec3>& shell_samples, int threads) {
    const VectorField zero(coeffs.A.grid);
    const int ns = static_cast<int>(shell_samples.size());
    std::vector<std::array<ShellRow, 3>> rows(ns);

    parallel_for(0, ns, threads, [&](int si) {
        Vec3 xi = shell_samples[si];
        ReconFrame frame = make_frame(xi, lambda, gamma0);
        Complex m1 = nft(coeffs.A, zero, frame);
        Complex m2 = nft(coeffs.A, zero, swap_orientation(frame));
        const Complex iu(0.0, 1.0);
        Complex t_mu = 0.5 * (m1 - iu * m2);
        Complex t_nu = 0.5 * (m2 - iu * m1);
        CVec3 T{};
        for (int c = 0; c < 3; ++c) T[c] = t_mu * frame.mu[c] + t_nu * frame.nu[c];
        CVec3 Tref{};
        for (int c = 0; c < 3; ++c) Tref[c] = fourier_at(coeffs.A[c], -xi);

        const std::array<std::pair<int, int>, 3> pairs = {{{0, 1}, {0, 2}, {1, 2}}};
        for (int c = 0; c < 3; ++c) {
            auto [j, k] = pairs[c];
            ShellRow row;
            row.xi = xi;
            row.component = c;
            row.recovered = -iu * (xi[j] * T[k] - xi[k] * T[j]);
            row.reference = -iu * (xi[j] * Tref[k] - xi[k] * Tref[j]);
            double den = std::abs(row.reference);
            row.rel_err = std::abs(row.recovered - row.reference) / (den > 0.0 ? den : 1.0);
            rows[si][c] = row;
        }
    });

    std::vector<ShellRow> out;
    out.reserve(3 * ns);
    for (const auto& triple : rows)
        for (const auto& row : triple) out.push_back(row);
    return out;
}

std::vector<VRecoveryRow> recover_V(const CoefficientSet& set_a, const CoefficientSet& set_b,
                                    double lambda, const std::vector<Vec3>& shell_samples,
                                    const std::vector<double>& t_sweep, const CgoOptions& opts,
                                    int threads) {
    double a_diff = 0.0, a_scale = 0.0;
    for (int c = 0; c < 3; ++c) {
        for (std::size_t s = 0; s < set_a.A[c].size(); ++s) {
            a_diff = std::max(a_diff, std::abs(set_a.A[c].samples[s] - set_b.A[c].samples[s]));
            a_scale = std::max(a_scale, std::abs(set_a.A[c].samples[s]));
        }
    }
    if (a_diff > 1e-12 * std::max(1.0, a_scale))
        throw std::runtime_error("recover_V: magnetic potentials differ; gauge-reduce first");
    auto is_double = [](double a, double b) { return std::abs(b - 2.0 * a) <= 1e-12 * b; };
    if (t_sweep.size() != 3 || !is_double(t_sweep[0], t_sweep[1]) ||
        !is_double(t_sweep[1], t_sweep[2]))
        throw std::invalid_argument("recover_V: t_sweep must be a doubling triple {t, 2t, 4t}");

    ScalarField vdiff(set_a.V.grid);
    for (std::size_t s = 0; s < vdiff.size(); ++s)
        vdiff.samples[s] = set_a.V.samples[s] - set_b.V.samples[s];

    const int ns = static_cast<int>(shell_samples.size());
    std::vector<VRecoveryRow> rows(ns);
    CgoOptions o = opts;
    o.with_asymptotics = false;

    parallel_for(0, ns, threads, [&](int si) {
        Vec3 xi = shell_samples[si];
        ReconFrame frame = make_frame(xi, lambda, set_a.gamma0);
        std::array<Complex, 3> J{};
        for (int ti = 0; ti < 3; ++ti) {
            auto [rho, rhop] = rho_pair(t_sweep[ti], frame);
            CgoSolution sa = solve_cgo(set_a, rho, o);
            CgoSolution sb = solve_cgo(set_b, rhop, o);
            ScalarField integrand = vdiff;
            for (std::size_t s = 0; s < integrand.size(); ++s)
                integrand.samples[s] *= (1.0 + sa.v.samples[s]) * std::conj(1.0 + sb.v.samples[s]);
            J[ti] = phase_pairing(integrand, nullptr, xi, +1.0);
        }
        Complex r1a = 2.0 * J[1] - J[0];
        Complex r1b = 2.0 * J[2] - J[1];
        Complex r2 = (4.0 * r1b - r1a) / 3.0;

        VRecoveryRow row;
        row.xi = xi;
        row.recovered = r2;
        row.reference = fourier_at(vdiff, -xi);
        double den = std::abs(row.reference);
        row.rel_err = std::abs(row.recovered - row.reference) / (den > 0.0 ? den : 1.0);
        row.extrapolation_residual = std::abs(r1b - r1a);
        rows[si] = row;
    });
    return rows;
}

std::vector<Vec3> default_shell_samples(double lambda, double gamma0, int n_radii) {
    auto [lo, hi] = shell_bounds(lambda, gamma0);
    std::vector<Vec3> out;
    for (int i = 0; i < n_radii; ++i) {
        double r = lo + (hi - lo) * (i + 1) / (n_radii + 1);
        for (int axis = 0; axis < 3; ++axis)
            for (double sgn : {1.0, -1.0}) {
                Vec3 xi{};
                xi[axis] = sgn * r;
                out.push_back(xi);
            }
    }
    return out;
}

}  // namespace cgoscat
