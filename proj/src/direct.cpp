#include "cgoscat/direct.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "cgoscat/fft.hpp"
#include "cgoscat/krylov.hpp"
#include "cgoscat/parallel.hpp"
#include "cgoscat/quadrature.hpp"

namespace cgoscat {

// ---------------------------------------------------------------------------
// Sphere grid
// ---------------------------------------------------------------------------

SphereGrid make_sphere_grid(double lambda, int n_polar, int n_azimuth) {
    if (!(lambda > 0.0)) throw std::invalid_argument("make_sphere_grid: lambda must be positive");
    if (n_polar < 1 || n_azimuth < 2 || (n_azimuth % 2) != 0)
        throw std::invalid_argument("make_sphere_grid: need n_polar >= 1 and even n_azimuth >= 2");
    SphereGrid s;
    s.lambda = lambda;
    s.n_polar = n_polar;
    s.n_azimuth = n_azimuth;
    QuadratureRule polar = gauss_legendre(n_polar);
    const double waz = 2.0 * M_PI / n_azimuth;
    for (int ip = 0; ip < n_polar; ++ip) {
        double ct = polar.nodes[ip];
        double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
        for (int ia = 0; ia < n_azimuth; ++ia) {
            double phi = waz * ia;
            s.directions.push_back({st * std::cos(phi), st * std::sin(phi), ct});
            s.weights.push_back(polar.weights[ip] * waz);
        }
    }
    return s;
}

int SphereGrid::antipode(int q) const {
    int ip = q / n_azimuth, ia = q % n_azimuth;
    int ipm = n_polar - 1 - ip;                  // Gauss-Legendre nodes are symmetric
    int iam = (ia + n_azimuth / 2) % n_azimuth;  // phi -> phi + pi
    return ipm * n_azimuth + iam;
}

// ---------------------------------------------------------------------------
// Outgoing free resolvent
// ---------------------------------------------------------------------------

namespace {

struct ResolventKernel {
    int n = 0;                      // original grid size; padded size is 2n
    std::vector<Complex> spectrum;  // exact transform of the truncated kernel
};

std::mutex kernel_mutex;

// Closed-form spectrum of exp(ik|y|)/(4 pi |y|) truncated at |y| <= T:
//   K_T^(s) = [exp(ikT)(cos(sT) - i (k/s) sin(sT)) - 1] / (k^2 - s^2),
// entire in s (the zero of the numerator cancels s = k). Truncation at the
// padded half-period T = 2L keeps the periodized kernel image-free, and the
// convolution becomes exact for band-limited sources.
Complex truncated_kernel_hat(double s, double k, double T) {
    if (std::abs(s - k) < 1e-6 * k) {
        Complex e = std::exp(Complex(0.0, k * T));
        return (Complex(0.0, T) - Complex(0.0, 1.0) * e * std::sin(k * T) / k) / (2.0 * k);
    }
    Complex e = std::exp(Complex(0.0, k * T));
    Complex num = s == 0.0 ? e * Complex(1.0, -k * T) - 1.0
                           : e * (std::cos(s * T) - Complex(0.0, k / s) * std::sin(s * T)) - 1.0;
    return num / (k * k - s * s);
}

const ResolventKernel& resolvent_kernel(const Grid& g, double lambda) {
    static std::map<std::tuple<int, double, double>, ResolventKernel> cache;
    std::lock_guard<std::mutex> lock(kernel_mutex);
    auto key = std::make_tuple(g.n_per_axis, g.half_width, lambda);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    const int n = g.n_per_axis, m = 2 * n;
    const double k = std::sqrt(lambda);
    const double T = 2.0 * g.half_width;
    const double dual = M_PI / (2.0 * g.half_width);  // padded-box dual spacing
    ResolventKernel ker;
    ker.n = n;
    ker.spectrum.resize(static_cast<std::size_t>(m) * m * m);
    std::size_t idx = 0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int l = 0; l < m; ++l, ++idx) {
                double u = (i < n ? i : i - m) * dual;
                double v = (j < n ? j : j - m) * dual;
                double w = (l < n ? l : l - m) * dual;
                ker.spectrum[idx] = truncated_kernel_hat(std::sqrt(u * u + v * v + w * w), k, T);
            }
    return cache.emplace(key, std::move(ker)).first->second;
}

}  // namespace

ScalarField apply_R0_out(const ScalarField& f, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("apply_R0_out: lambda must be positive");
    const Grid& g = f.grid;
    const int n = g.n_per_axis, m = 2 * n;

    bool all_zero = true;
    for (const auto& v : f.samples)
        if (v != Complex(0.0)) {
            all_zero = false;
            break;
        }
    if (all_zero) return ScalarField(g);

    const ResolventKernel& ker = resolvent_kernel(g, lambda);
    std::vector<Complex> pad(static_cast<std::size_t>(m) * m * m, Complex(0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l)
                pad[(static_cast<std::size_t>(i) * m + j) * m + l] = f.at(i, j, l);
    fftw::forward3d(m, pad.data());
    const double inv = 1.0 / (static_cast<double>(m) * m * m);
    for (std::size_t s = 0; s < pad.size(); ++s) pad[s] *= ker.spectrum[s] * inv;
    fftw::backward3d(m, pad.data());

    ScalarField out(g);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l)
                out.at(i, j, l) = pad[(static_cast<std::size_t>(i) * m + j) * m + l];
    return out;
}

double r0_equation_residual(const ScalarField& u, const ScalarField& f, double lambda,
                            double interior_fraction) {
    const Grid& g = u.grid;
    const int n = g.n_per_axis;
    const double h2 = g.spacing() * g.spacing();
    const double rmax = interior_fraction * g.half_width;
    auto wrap = [n](int i) { return (i % n + n) % n; };
    // 6th-order central second difference per axis.
    auto d2 = [&](const ScalarField& field, int i, int j, int l, int axis) {
        auto at = [&](int o) {
            int ii = i, jj = j, ll = l;
            (axis == 0 ? ii : axis == 1 ? jj : ll) =
                wrap((axis == 0 ? i : axis == 1 ? j : l) + o);
            return field.at(ii, jj, ll);
        };
        return (2.0 * (at(-3) + at(3)) - 27.0 * (at(-2) + at(2)) + 270.0 * (at(-1) + at(1)) -
                490.0 * at(0)) /
               (180.0 * h2);
    };
    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l) {
                if (norm(g.point(i, j, l)) > rmax) continue;
                Complex lap = d2(u, i, j, l, 0) + d2(u, i, j, l, 1) + d2(u, i, j, l, 2);
                num += std::norm(-lap - lambda * u.at(i, j, l) - f.at(i, j, l));
                den += std::norm(f.at(i, j, l));
            }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

// ---------------------------------------------------------------------------
// Herglotz waves
// ---------------------------------------------------------------------------

namespace {

// Accumulates coef * exp(i kvec.x) into out (and kvec-weighted copies into
// grad components when given), using separable per-axis phase tables.
void accumulate_plane_wave(ScalarField& out, VectorField* grad, Complex coef, Vec3 kvec) {
    const Grid& g = out.grid;
    const int n = g.n_per_axis;
    std::vector<Complex> p1(n), p2(n), p3(n);
    for (int i = 0; i < n; ++i) {
        double x = g.coord(i);
        p1[i] = std::polar(1.0, kvec.x * x);
        p2[i] = std::polar(1.0, kvec.y * x);
        p3[i] = std::polar(1.0, kvec.z * x);
    }
    const Complex gx = Complex(0.0, kvec.x), gy = Complex(0.0, kvec.y), gz = Complex(0.0, kvec.z);
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i) {
        Complex ci = coef * p1[i];
        for (int j = 0; j < n; ++j) {
            Complex cij = ci * p2[j];
            for (int k = 0; k < n; ++k, ++idx) {
                Complex val = cij * p3[k];
                out.samples[idx] += val;
                if (grad) {
                    (*grad)[0].samples[idx] += gx * val;
                    (*grad)[1].samples[idx] += gy * val;
                    (*grad)[2].samples[idx] += gz * val;
                }
            }
        }
    }
}

Complex herglotz_prefactor(double lambda) {
    // i sqrt(lambda) / (8 pi^2) from i (2pi)^{-2} dS_lambda / (2 sqrt(lambda)).
    return Complex(0.0, std::sqrt(lambda) / (8.0 * M_PI * M_PI));
}

}  // namespace

ScalarField herglotz(const std::vector<Complex>& g, const SphereGrid& sphere, const Grid& grid) {
    ScalarField out(grid);
    const double k = std::sqrt(sphere.lambda);
    const Complex pref = herglotz_prefactor(sphere.lambda);
    for (int q = 0; q < sphere.size(); ++q) {
        if (g[q] == Complex(0.0)) continue;
        accumulate_plane_wave(out, nullptr, pref * sphere.weights[q] * g[q],
                              k * sphere.directions[q]);
    }
    return out;
}

FieldWithGradient herglotz_with_gradient(const std::vector<Complex>& g, const SphereGrid& sphere,
                                         const Grid& grid) {
    FieldWithGradient out;
    out.u = ScalarField(grid);
    out.grad = VectorField(grid);
    const double k = std::sqrt(sphere.lambda);
    const Complex pref = herglotz_prefactor(sphere.lambda);
    for (int q = 0; q < sphere.size(); ++q) {
        if (g[q] == Complex(0.0)) continue;
        accumulate_plane_wave(out.u, &out.grad, pref * sphere.weights[q] * g[q],
                              k * sphere.directions[q]);
    }
    return out;
}

ScalarField multiply_potential(const CoefficientSet& coeffs, const ScalarField& u,
                               const VectorField& grad_u) {
    ScalarField out(u.grid);
    const Complex mi(0.0, -1.0);
    for (std::size_t s = 0; s < u.size(); ++s) {
        Complex acc = coeffs.Vtilde.samples[s] * u.samples[s];
        for (int c = 0; c < 3; ++c)
            acc += 2.0 * coeffs.A[c].samples[s] * mi * grad_u[c].samples[s];
        out.samples[s] = acc;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Lippmann-Schwinger
// ---------------------------------------------------------------------------

ScatteringSolution solve_scattering(const CoefficientSet& coeffs, double lambda,
                                    const std::vector<Complex>& g, const SphereGrid& sphere,
                                    const ScatterOptions& opts) {
    if (!(lambda > 0.0)) throw std::invalid_argument("solve_scattering: lambda must be positive");
    if (static_cast<int>(g.size()) != sphere.size())
        throw std::invalid_argument("solve_scattering: density size mismatch");
    const Grid& grid = coeffs.A.grid;

    ScatteringSolution sol;
    sol.sphere = sphere;
    sol.density = g;
    sol.lambda = lambda;
    FieldWithGradient inc = herglotz_with_gradient(g, sphere, grid);
    sol.incident = inc.u;
    sol.incident_grad = inc.grad;

    // rhs = -R0 V(x,D) P0 g ; unknown u_sc solves (I + R0 V) u_sc = rhs.
    ScalarField v_inc = multiply_potential(coeffs, inc.u, inc.grad);
    ScalarField rhs = apply_R0_out(v_inc, lambda);
    scale(rhs, -1.0);

    auto op = [&](const std::vector<Complex>& in, std::vector<Complex>& out) {
        ScalarField usc(grid);
        usc.samples = in;
        ScalarField vu = multiply_potential(coeffs, usc, gradient(usc));
        ScalarField r0vu = apply_R0_out(vu, lambda);
        out = std::move(r0vu.samples);
        for (std::size_t s = 0; s < out.size(); ++s) out[s] += in[s];
    };
    // Warm start from the Born term (= the right-hand side itself).
    std::vector<Complex> x = rhs.samples;
    KrylovResult kres = gmres(op, rhs.samples, x, opts.tol, opts.max_iter, opts.restart);
    sol.iterations = kres.iterations;
    sol.residual = kres.relative_residual;
    sol.residual_history = kres.residual_history;
    if (!kres.converged)
        throw std::runtime_error(
            "solve_scattering: Krylov iteration did not converge (coefficients too strong "
            "for this lambda)");

    sol.scattered = ScalarField(grid);
    sol.scattered.samples = std::move(x);
    sol.u = sol.incident;
    for (std::size_t s = 0; s < sol.u.size(); ++s) sol.u.samples[s] += sol.scattered.samples[s];
    return sol;
}

FarFieldResult far_field(const ScatteringSolution& sol, const CoefficientSet& coeffs) {
    const double k = std::sqrt(sol.lambda);
    // V(x,D) u with the incident gradient analytic and the scattered spectral.
    VectorField grad_total = gradient(sol.scattered);
    for (int c = 0; c < 3; ++c) axpy(1.0, sol.incident_grad[c], grad_total[c]);
    ScalarField vu = multiply_potential(coeffs, sol.u, grad_total);

    FarFieldResult out;
    out.data.sphere = sol.sphere;
    out.data.c_lambda = c_lambda_constant();
    const int nq = sol.sphere.size();
    out.sigma_g.resize(nq);
    out.data.outgoing.resize(nq);
    out.data.incoming.resize(nq);
    for (int q = 0; q < nq; ++q) {
        Complex scattered_hat = fourier_at(vu, k * sol.sphere.directions[q]);
        out.sigma_g[q] = sol.density[q] - scattered_hat;
    }
    for (int q = 0; q < nq; ++q) {
        // n = 3: i^{n-1} = -1 on the incoming side.
        out.data.outgoing[q] = c_lambda_constant() * out.sigma_g[q];
        out.data.incoming[q] = -c_lambda_constant() * sol.density[sol.sphere.antipode(q)];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Scattering matrix
// ---------------------------------------------------------------------------

ScatteringMatrixSamples sigma_matrix(const CoefficientSet& coeffs, double lambda,
                                     const SphereGrid& sphere, const ScatterOptions& opts,
                                     int threads) {
    if (sphere.n_polar < 6 || sphere.n_azimuth < 12)
        throw std::invalid_argument("sigma_matrix: sphere grid must be at least 6 x 12");
    const int nq = sphere.size();
    ScatteringMatrixSamples out;
    out.sphere = sphere;
    out.matrix.assign(nq, std::vector<Complex>(nq, Complex(0.0)));

    parallel_for(0, nq, threads, [&](int q) {
        std::vector<Complex> g(nq, Complex(0.0));
        g[q] = 1.0;
        ScatteringSolution sol = solve_scattering(coeffs, lambda, g, sphere, opts);
        FarFieldResult ff = far_field(sol, coeffs);
        for (int p = 0; p < nq; ++p) out.matrix[p][q] = ff.sigma_g[p];
    });
    out.unitarity_defect = unitarity_defect(out);
    return out;
}

double unitarity_defect(const ScatteringMatrixSamples& s) {
    const int nq = s.sphere.size();
    const double k = std::sqrt(s.sphere.lambda);
    Eigen::MatrixXcd b(nq, nq);
    for (int p = 0; p < nq; ++p) {
        // W = diag(lambda w_q / (2 sqrt(lambda))): the dS_lambda/2sqrt(lambda)
        // quadrature weights; B = W^{1/2} S W^{-1/2}.
        double wp = std::sqrt(s.sphere.weights[p] * k * 0.5 * k);  // lambda w / (2k) = k w / 2
        for (int q = 0; q < nq; ++q) {
            double wq = std::sqrt(s.sphere.weights[q] * k * 0.5 * k);
            b(p, q) = s.matrix[p][q] * wp / wq;
        }
    }
    Eigen::MatrixXcd defect = b.adjoint() * b - Eigen::MatrixXcd::Identity(nq, nq);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(defect);
    return svd.singularValues()(0);
}

// ---------------------------------------------------------------------------
// Boundary pairing
// ---------------------------------------------------------------------------

PairingWave herglotz_pairing_wave(const std::vector<Complex>& g, const SphereGrid& sphere,
                                  const Grid& grid) {
    PairingWave w;
    w.u = herglotz(g, sphere, grid);
    w.h0u = ScalarField(grid);  // exact solution of the free equation
    const double cl = c_lambda_constant();
    const int nq = sphere.size();
    w.g_plus.resize(nq);
    w.g_minus.resize(nq);
    for (int q = 0; q < nq; ++q) {
        w.g_plus[q] = cl * g[q];
        w.g_minus[q] = -cl * g[sphere.antipode(q)];  // i^{n-1} = -1 for n = 3
    }
    return w;
}

PairingWave outgoing_pairing_wave(const ScalarField& f, double lambda, const SphereGrid& sphere) {
    PairingWave w;
    w.u = apply_R0_out(f, lambda);
    w.h0u = f;
    const double k = std::sqrt(lambda);
    const double cl = c_lambda_constant();
    const int nq = sphere.size();
    w.g_plus.resize(nq);
    w.g_minus.assign(nq, Complex(0.0));
    for (int q = 0; q < nq; ++q) w.g_plus[q] = cl * fourier_at(f, k * sphere.directions[q]);
    return w;
}

PairingCheck boundary_pairing_check(const PairingWave& u, const PairingWave& v,
                                    const SphereGrid& sphere, double lambda, double radius) {
    const Grid& g = u.u.grid;
    const int n = g.n_per_axis;
    Complex vol = 0.0;
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k, ++idx) {
                if (norm(g.point(i, j, k)) > radius) continue;
                vol += u.u.samples[idx] * std::conj(v.h0u.samples[idx]) -
                       u.h0u.samples[idx] * std::conj(v.u.samples[idx]);
            }
    vol *= g.cell_volume();

    Complex plus = 0.0, minus = 0.0;
    for (int q = 0; q < sphere.size(); ++q) {
        plus += sphere.weights[q] * u.g_plus[q] * std::conj(v.g_plus[q]);
        minus += sphere.weights[q] * u.g_minus[q] * std::conj(v.g_minus[q]);
    }
    Complex sph = Complex(0.0, 2.0 * std::sqrt(lambda)) * (plus - minus);

    PairingCheck out;
    out.volume_side = vol;
    out.sphere_side = sph;
    out.discrepancy = std::abs(vol - sph);
    return out;
}

}  // namespace cgoscat
