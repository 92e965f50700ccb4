// Coefficient pairs (A, V) for the magnetic Schroedinger operator:
// analytic test generators with exponential decay, Vtilde = A^2 + D.A + V
// assembly, mollification A# = A * chi_delta, the magnetic field components
// dA, and the gauge primitive alpha with grad(alpha) = A for curl-free A.
#pragma once

#include <array>
#include <string>
#include <utility>

#include "cgoscat/grid.hpp"

namespace cgoscat {

struct CoefficientSet {
    VectorField A;       // real-valued samples
    ScalarField V;       // real-valued samples
    double gamma0 = 0.0; // decay rate of the generator class
    ScalarField Vtilde;  // A^2 + D.A + V, complex

    // Generator bookkeeping: smallest C with |A|,|V| <= C exp(-gamma0 <x>)
    // over the grid, and whether boundary values exceed 1e-8 of the peak.
    double decay_constant = 0.0;
    bool boundary_warning = false;
};

struct GeneratorSpec {
    // zero | gaussian (generic bumps) | solenoidal (curl of a Gaussian
    // vector bump, div-free) | gradient (grad of a Gaussian, curl-free)
    std::string kind = "gaussian";
    double a_amplitude = 0.0;
    double v_amplitude = 0.0;
    double width = 1.5;
    double width_v = 1.5;
    Vec3 center{0, 0, 0};
    Vec3 center_v{0, 0, 0};
};

CoefficientSet make_test_coefficients(const Grid& grid, double gamma0, const GeneratorSpec& spec);

// Rebuilds a coefficient set with A and V scaled (Vtilde reassembled).
CoefficientSet scale_coefficients(const CoefficientSet& base, double a_factor, double v_factor);

// Vtilde = sum_j A_j^2 - i sum_j dA_j/dx_j + V, derivatives spectral.
ScalarField assemble_vtilde(const VectorField& A, const ScalarField& V);

// ---------------------------------------------------------------------------
// Mollification
// ---------------------------------------------------------------------------

struct MollifierParams {
    double sigma0 = 0.25;  // in (0, 1/3)
    double h = 1.0;        // semiclassical parameter in (0, 1]

    double delta() const;  // h^sigma0
};

// Radial C_c^infty bump exp(-1/(1-r^2)) on r < 1, zero outside (unnormalized).
double bump_profile(double r);

// Smooth cutoff: 1 on [0, 1/2], 0 on [1, inf), built from the same bump.
double cutoff_profile(double r);

// A# = A * chi_delta by FFT convolution (chi normalized to unit discrete
// mass), A@ = A - A#. Throws if delta() is under the grid spacing.
std::pair<VectorField, VectorField> mollify(const VectorField& A, const MollifierParams& p);

// ---------------------------------------------------------------------------
// Magnetic field and gauge
// ---------------------------------------------------------------------------

// Independent components of dA in the order (1,2), (1,3), (2,3):
// dA_jk = dA_k/dx_j - dA_j/dx_k, spectral derivatives.
std::array<ScalarField, 3> curl(const VectorField& A);

struct GaugeFunction {
    ScalarField alpha;
    double normalization = 0.0;  // constant subtracted to zero the boundary-sphere average
};

// alpha(x) = int_0^1 x.A(tx) dt by 32-point Gauss-Legendre along each ray,
// with A(t x) sampled spectrally (chirp-z dilation). Requires curl(A) ~ 0.
GaugeFunction gauge_primitive(const VectorField& A);

}  // namespace cgoscat
