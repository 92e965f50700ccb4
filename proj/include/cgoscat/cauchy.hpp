// Constant-coefficient d-bar solver: (gamma1 + i gamma2).grad(phi) = f via the
// Cauchy transform
//   phi(x) = (1/2pi) int (y1 + i y2)^-1 f(x - y1 g1 - y2 g2) dy1 dy2
// evaluated per transverse slice as a zero-padded 2D FFT convolution, plus the
// phase functions phi, phi#, Phi built from magnetic potentials.
#pragma once

#include <string>

#include "cgoscat/grid.hpp"

namespace cgoscat {

struct TransversePlane {
    Vec3 gamma1, gamma2;
};

// Validates |g1| = |g2| = 1 and g1.g2 = 0 (1e-12). The convolution itself
// additionally requires both vectors to be signed grid axes.
TransversePlane make_plane(Vec3 g1, Vec3 g2);

struct PhaseFunction {
    ScalarField phi;
    TransversePlane plane;
    std::string source;
    double residual = 0.0;  // ||(g1+ig2).grad(phi) - f||_2 / ||f||_2, spectral gradient
};

PhaseFunction cauchy_transform(const ScalarField& f, const TransversePlane& plane);

// phi for a magnetic potential: Cauchy transform of -(nu1 + i nu2).A.
PhaseFunction phase_phi(const VectorField& A, Vec3 nu1, Vec3 nu2);

// Phi for a coefficient pair: Cauchy transform of -(mu + i nu).(A - Aprime).
PhaseFunction phase_Phi(const VectorField& A, const VectorField& Aprime, Vec3 mu, Vec3 nu);

}  // namespace cgoscat
