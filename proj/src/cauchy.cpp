#include "cgoscat/cauchy.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cgoscat/fft.hpp"

namespace cgoscat {

namespace {

struct AxisPlane {
    int axis_a, axis_b, axis_c;  // gamma1 axis, gamma2 axis, slice axis
    int sign_a, sign_b;
};

// Decomposes an orthonormal plane into signed grid axes (v1 restriction).
AxisPlane resolve_axes(const TransversePlane& plane) {
    auto classify = [](Vec3 g, int& axis, int& sign) {
        for (int a = 0; a < 3; ++a) {
            if (std::abs(std::abs(g[a]) - 1.0) < 1e-12) {
                axis = a;
                sign = g[a] > 0 ? 1 : -1;
                for (int b = 0; b < 3; ++b)
                    if (b != a && std::abs(g[b]) > 1e-12) return false;
                return true;
            }
        }
        return false;
    };
    AxisPlane p{};
    if (!classify(plane.gamma1, p.axis_a, p.sign_a) || !classify(plane.gamma2, p.axis_b, p.sign_b) ||
        p.axis_a == p.axis_b)
        throw std::runtime_error("plane must be axis-aligned");
    p.axis_c = 3 - p.axis_a - p.axis_b;
    return p;
}

}  // namespace

TransversePlane make_plane(Vec3 g1, Vec3 g2) {
    if (std::abs(norm(g1) - 1.0) > 1e-12 || std::abs(norm(g2) - 1.0) > 1e-12 ||
        std::abs(dot(g1, g2)) > 1e-12)
        throw std::invalid_argument("make_plane: vectors must be orthonormal");
    return TransversePlane{g1, g2};
}

PhaseFunction cauchy_transform(const ScalarField& f, const TransversePlane& plane) {
    const AxisPlane ax = resolve_axes(plane);
    const Grid& g = f.grid;
    const int n = g.n_per_axis;
    const int m = 2 * n;  // zero padding factor 2
    const double dx = g.spacing();

    // Spectrum of the truncated kernel K_T = 1/(2 pi z) restricted to
    // |z| <= T with T = 2L (the padded half-period, so the periodized kernel
    // has no overlapping images):
    //   K_T^(xi) = -i (1 - J0(T|xi|)) / (xi_1 + i xi_2),
    // entire at xi = 0. Applying the closed-form spectrum instead of sampled
    // kernel values makes the convolution exact for the band-limited
    // interpolant of f.
    const double T = 2.0 * g.half_width;
    const double dual = M_PI / (2.0 * g.half_width);  // padded-box dual spacing
    std::vector<Complex> kernel(static_cast<std::size_t>(m) * m);
    for (int p = 0; p < m; ++p)
        for (int q = 0; q < m; ++q) {
            int u = p < m / 2 ? p : p - m;
            int v = q < m / 2 ? q : q - m;
            std::size_t idx = static_cast<std::size_t>(p) * m + q;
            if (u == 0 && v == 0) {
                kernel[idx] = 0.0;
                continue;
            }
            double xi1 = u * dual, xi2 = v * dual;
            double r = std::sqrt(xi1 * xi1 + xi2 * xi2);
            Complex zeta(ax.sign_a * xi1, ax.sign_b * xi2);
            kernel[idx] = Complex(0.0, -1.0) * (1.0 - std::cyl_bessel_j(0.0, T * r)) / zeta;
        }

    ScalarField phi(g);
    std::vector<Complex> slice(static_cast<std::size_t>(m) * m);
    auto fidx = [&](int ia, int ib, int ic) {
        int ijk[3];
        ijk[ax.axis_a] = ia;
        ijk[ax.axis_b] = ib;
        ijk[ax.axis_c] = ic;
        return g.index(ijk[0], ijk[1], ijk[2]);
    };
    for (int ic = 0; ic < n; ++ic) {
        std::fill(slice.begin(), slice.end(), Complex(0.0));
        for (int ia = 0; ia < n; ++ia)
            for (int ib = 0; ib < n; ++ib)
                slice[static_cast<std::size_t>(ia) * m + ib] = f.samples[fidx(ia, ib, ic)];
        fftw::forward2d(m, m, slice.data());
        for (std::size_t s = 0; s < slice.size(); ++s) slice[s] *= kernel[s];
        fftw::backward2d(m, m, slice.data());
        const double inv = 1.0 / (static_cast<double>(m) * m);
        for (int ia = 0; ia < n; ++ia)
            for (int ib = 0; ib < n; ++ib)
                phi.samples[fidx(ia, ib, ic)] = slice[static_cast<std::size_t>(ia) * m + ib] * inv;
    }

    PhaseFunction out;
    out.phi = std::move(phi);
    out.plane = plane;

    // Defining-equation residual with 6th-order finite differences. The
    // gradient must be local here: phi carries a 1/z tail in the transverse
    // plane, and a periodic spectral derivative would turn its box-boundary
    // mismatch into global Gibbs noise that says nothing about the solve.
    // Stencil rows that would wrap across the box edge are excluded for the
    // same reason.
    const double inv60h = 1.0 / (60.0 * dx);
    double num = 0.0, den = 0.0;
    for (int ia = 3; ia < n - 3; ++ia)
        for (int ib = 3; ib < n - 3; ++ib)
            for (int ic = 0; ic < n; ++ic) {
                auto d6 = [&](int axis01) {
                    auto at = [&](int off) {
                        int a = ia, b = ib;
                        (axis01 == 0 ? a : b) += off;
                        return out.phi.samples[fidx(a, b, ic)];
                    };
                    return (-at(-3) + 9.0 * at(-2) - 45.0 * at(-1) + 45.0 * at(1) -
                            9.0 * at(2) + at(3)) *
                           inv60h;
                };
                Complex lhs = Complex(ax.sign_a, 0.0) * d6(0) + Complex(0.0, ax.sign_b) * d6(1);
                std::size_t s = fidx(ia, ib, ic);
                num += std::norm(lhs - f.samples[s]);
                den += std::norm(f.samples[s]);
            }
    out.residual = den > 0.0 ? std::sqrt(num / den) : 0.0;
    return out;
}

PhaseFunction phase_phi(const VectorField& A, Vec3 nu1, Vec3 nu2) {
    TransversePlane plane = make_plane(nu1, nu2);
    ScalarField f(A.grid);
    for (std::size_t s = 0; s < f.size(); ++s)
        for (int c = 0; c < 3; ++c)
            f.samples[s] -= Complex(nu1[c], nu2[c]) * A[c].samples[s];
    PhaseFunction out = cauchy_transform(f, plane);
    out.source = "phi[-(nu1+i nu2).A]";
    return out;
}

PhaseFunction phase_Phi(const VectorField& A, const VectorField& Aprime, Vec3 mu, Vec3 nu) {
    if (!(A.grid == Aprime.grid)) throw std::invalid_argument("phase_Phi: grid mismatch");
    TransversePlane plane = make_plane(mu, nu);
    ScalarField f(A.grid);
    for (std::size_t s = 0; s < f.size(); ++s)
        for (int c = 0; c < 3; ++c)
            f.samples[s] -= Complex(mu[c], nu[c]) * (A[c].samples[s] - Aprime[c].samples[s]);
    PhaseFunction out = cauchy_transform(f, plane);
    out.source = "Phi[-(mu+i nu).(A-A')]";
    return out;
}

}  // namespace cgoscat
