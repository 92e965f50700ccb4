#include "cgoscat/faddeev.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "cgoscat/fft.hpp"

namespace cgoscat {

ComplexFrequency make_rho(double h, double lambda, Vec3 nu1, Vec3 nu2) {
    if (!(h > 0.0)) throw std::invalid_argument("make_rho: h must be positive");
    if (!(lambda > 0.0)) throw std::invalid_argument("make_rho: lambda must be positive");
    if (!(h * h * lambda < 1.0))
        throw std::invalid_argument("make_rho: h^2 lambda must be < 1 (|rho| > sqrt(lambda))");
    if (std::abs(norm(nu1) - 1.0) > 1e-12 || std::abs(norm(nu2) - 1.0) > 1e-12 ||
        std::abs(dot(nu1, nu2)) > 1e-12)
        throw std::invalid_argument("make_rho: frame not orthonormal");
    ComplexFrequency out;
    out.h = h;
    out.lambda = lambda;
    out.nu1 = nu1;
    out.nu2 = nu2;
    const double beta = std::sqrt(1.0 - h * h * lambda) / h;
    for (int c = 0; c < 3; ++c) out.rho[c] = Complex(nu1[c] / h, beta * nu2[c]);
    return out;
}

ComplexFrequency frequency_from_vector(const CVec3& rho, double lambda) {
    Vec3 re{rho[0].real(), rho[1].real(), rho[2].real()};
    Vec3 im{rho[0].imag(), rho[1].imag(), rho[2].imag()};
    double nre = norm(re), nim = norm(im);
    if (nre <= 0.0 || nim <= 0.0)
        throw std::invalid_argument("frequency_from_vector: need nonzero real and imaginary parts");
    Complex sq = bdot(rho, rho);
    if (std::abs(sq - lambda) > 1e-10 * std::max(1.0, std::abs(sq)))
        throw std::invalid_argument("frequency_from_vector: rho.rho != lambda");
    ComplexFrequency out;
    out.rho = rho;
    out.lambda = lambda;
    out.h = 1.0 / nre;
    out.nu1 = normalized(re);
    out.nu2 = normalized(im);
    return out;
}

namespace {

struct ShiftedTransform {
    // Per-axis ramps exp(-i b_a x_a) for the half-cell offset b.
    std::vector<Complex> ramp1, ramp2, ramp3;
    Vec3 b;

    ShiftedTransform(const Grid& g, Vec3 nu2) {
        b = (0.5 * g.dual_spacing()) * nu2;
        const int n = g.n_per_axis;
        ramp1.resize(n);
        ramp2.resize(n);
        ramp3.resize(n);
        for (int i = 0; i < n; ++i) {
            double x = g.coord(i);
            ramp1[i] = std::polar(1.0, -b.x * x);
            ramp2[i] = std::polar(1.0, -b.y * x);
            ramp3[i] = std::polar(1.0, -b.z * x);
        }
    }

    void demodulate(ScalarField& f) const { modulate(f, false); }
    void remodulate(ScalarField& f) const { modulate(f, true); }

  private:
    void modulate(ScalarField& f, bool inverse) const {
        const int n = f.grid.n_per_axis;
        std::size_t idx = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Complex pij = ramp1[i] * ramp2[j];
                for (int k = 0; k < n; ++k, ++idx) {
                    Complex ph = pij * ramp3[k];
                    f.samples[idx] *= inverse ? std::conj(ph) : ph;
                }
            }
    }
};

// Applies a multiplier in the shifted basis. symout[i] receives the symbol
// values if requested (diagnostics). mode 0: 1/p (and optional gradient
// outputs), mode 1: p.
void shifted_multiplier(const ScalarField& f, const ComplexFrequency& rho, bool invert,
                        ScalarField* out, VectorField* grad_out, MultiplierDiagnostics* diag) {
    const Grid& g = f.grid;
    const int n = g.n_per_axis;
    ShiftedTransform sh(g, rho.nu2);

    ScalarField work = f;
    sh.demodulate(work);
    fftw::forward3d(n, work.samples.data());

    double min_mod = std::numeric_limits<double>::infinity();
    const double inv_n3 = 1.0 / static_cast<double>(g.point_count());
    ScalarField spec = work;  // multiplier-applied spectrum
    {
        std::size_t idx = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k, ++idx) {
                    Vec3 kk{g.freq(i) + sh.b.x, g.freq(j) + sh.b.y, g.freq(k) + sh.b.z};
                    Complex p = dot(kk, kk) + 2.0 * (rho.rho[0] * kk.x + rho.rho[1] * kk.y +
                                                     rho.rho[2] * kk.z);
                    min_mod = std::min(min_mod, std::abs(p));
                    Complex m = invert ? 1.0 / p : p;
                    spec.samples[idx] = work.samples[idx] * m * inv_n3;
                }
    }
    if (invert && !(min_mod > 1e-6 * rho.magnitude()))
        throw std::runtime_error("characteristic variety hit; choose different grid offset or h");
    if (diag) {
        diag->min_symbol_modulus = min_mod;
        diag->regularization_applied = true;
    }

    if (out) {
        *out = spec;
        fftw::backward3d(n, out->samples.data());
        sh.remodulate(*out);
    }
    if (grad_out) {
        *grad_out = VectorField(g);
        for (int axis = 0; axis < 3; ++axis) {
            ScalarField d = spec;
            std::size_t idx = 0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k, ++idx) {
                        double ka = axis == 0 ? g.freq(i) + sh.b.x
                                              : (axis == 1 ? g.freq(j) + sh.b.y : g.freq(k) + sh.b.z);
                        d.samples[idx] *= Complex(0.0, ka);
                    }
            fftw::backward3d(n, d.samples.data());
            sh.remodulate(d);
            (*grad_out)[axis] = std::move(d);
        }
    }
}

}  // namespace

ScalarField apply_G_rho(const ScalarField& f, const ComplexFrequency& rho,
                        MultiplierDiagnostics* diag) {
    ScalarField out;
    shifted_multiplier(f, rho, true, &out, nullptr, diag);
    return out;
}

FieldWithGradient apply_G_rho_grad(const ScalarField& f, const ComplexFrequency& rho,
                                   MultiplierDiagnostics* diag) {
    FieldWithGradient out;
    shifted_multiplier(f, rho, true, &out.u, &out.grad, diag);
    return out;
}

ScalarField apply_P_rho(const ScalarField& u, const ComplexFrequency& rho) {
    ScalarField out;
    shifted_multiplier(u, rho, false, &out, nullptr, nullptr);
    return out;
}

MultiplierDiagnostics symbol_diagnostics(const Grid& grid, const ComplexFrequency& rho) {
    const int n = grid.n_per_axis;
    Vec3 b = (0.5 * grid.dual_spacing()) * rho.nu2;
    MultiplierDiagnostics diag;
    diag.regularization_applied = true;
    double min_mod = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                Vec3 kk{grid.freq(i) + b.x, grid.freq(j) + b.y, grid.freq(k) + b.z};
                Complex p = dot(kk, kk) +
                            2.0 * (rho.rho[0] * kk.x + rho.rho[1] * kk.y + rho.rho[2] * kk.z);
                min_mod = std::min(min_mod, std::abs(p));
            }
    diag.min_symbol_modulus = min_mod;
    return diag;
}

VectorField shifted_gradient(const ScalarField& f, const ComplexFrequency& rho) {
    const Grid& g = f.grid;
    const int n = g.n_per_axis;
    ShiftedTransform sh(g, rho.nu2);
    ScalarField work = f;
    sh.demodulate(work);
    fftw::forward3d(n, work.samples.data());
    const double inv_n3 = 1.0 / static_cast<double>(g.point_count());
    VectorField out(g);
    for (int axis = 0; axis < 3; ++axis) {
        ScalarField d = work;
        std::size_t idx = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k, ++idx) {
                    double ka = axis == 0 ? g.freq(i) + sh.b.x
                                          : (axis == 1 ? g.freq(j) + sh.b.y : g.freq(k) + sh.b.z);
                    d.samples[idx] *= Complex(0.0, ka) * inv_n3;
                }
        fftw::backward3d(n, d.samples.data());
        sh.remodulate(d);
        out[axis] = std::move(d);
    }
    return out;
}

}  // namespace cgoscat
