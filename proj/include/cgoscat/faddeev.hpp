// Complex frequency vectors rho with rho.rho = lambda and the Faddeev-type
// inverse G_rho of P_rho = -Laplacian + 2 rho.D, realized as a Fourier
// multiplier 1/(k.k + 2 rho.k).
//
// The dual lattice is offset by half a dual spacing along nu2 (the direction
// of Im rho), which bounds |Im(2 rho.k)| away from zero and keeps the symbol
// off its characteristic variety. Operators built here all act in that
// shifted spectral basis, so P_rho inverts G_rho exactly on the lattice.
#pragma once

#include "cgoscat/grid.hpp"

namespace cgoscat {

struct ComplexFrequency {
    CVec3 rho{};
    double h = 0.0;  // semiclassical parameter, h = 1/|Re rho|
    Vec3 nu1{}, nu2{};
    double lambda = 0.0;

    double magnitude() const {
        return std::sqrt(std::norm(rho[0]) + std::norm(rho[1]) + std::norm(rho[2]));
    }
};

// rho = h^-1 (nu1 + i (1 - h^2 lambda)^{1/2} nu2). Requires 0 < h,
// h^2 lambda < 1 strictly, and an orthonormal frame.
ComplexFrequency make_rho(double h, double lambda, Vec3 nu1, Vec3 nu2);

// Normalizes an arbitrary rho with rho.rho = lambda (nonzero real and
// imaginary parts, necessarily orthogonal) into the frame form above.
ComplexFrequency frequency_from_vector(const CVec3& rho, double lambda);

struct MultiplierDiagnostics {
    double min_symbol_modulus = 0.0;
    bool regularization_applied = false;  // half-cell dual offset in use
};

// Solves P_rho u = f spectrally. Throws if the offset lattice still comes
// within 1e-6 |rho| of the characteristic variety.
ScalarField apply_G_rho(const ScalarField& f, const ComplexFrequency& rho,
                        MultiplierDiagnostics* diag = nullptr);

// u = G_rho f together with its gradient, all in the shifted basis.
FieldWithGradient apply_G_rho_grad(const ScalarField& f, const ComplexFrequency& rho,
                                   MultiplierDiagnostics* diag = nullptr);

// P_rho in the same shifted basis (exact inverse of apply_G_rho).
ScalarField apply_P_rho(const ScalarField& u, const ComplexFrequency& rho);

// Shifted-basis gradient, for residual evaluation consistent with G_rho.
VectorField shifted_gradient(const ScalarField& f, const ComplexFrequency& rho);

// Symbol scan without transforms: min |p(k+b)| over the offset dual lattice.
MultiplierDiagnostics symbol_diagnostics(const Grid& grid, const ComplexFrequency& rho);

}  // namespace cgoscat
